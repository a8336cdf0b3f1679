"""Exact commutative algebra: multivariate polynomials over Q or F_p,
Groebner bases for submodules of free modules, syzygies, finitely presented
modules over quotient rings, kernels, Tor_1, and toric ideals.

Everything is a "module element": a dict mapping (exponent tuple, position)
to a nonzero coefficient.  Ring elements are module elements in position 0.
Orders are key functions on (exponent tuple, position); the default ring
order is degree-reverse-lexicographic with ties by position.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


# -- coefficient fields --------------------------------------------------------


class FieldQ:
    """The rationals, with Fraction coefficients."""

    char = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def of_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / a

    def div(self, a, b):
        return a / b

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def to_str(self, a):
        return str(a)

    def of_str(self, s):
        return Fraction(s)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, FieldQ)

    def __hash__(self):
        return hash("QQ")


class FieldFp:
    """The prime field F_p, with int coefficients in [0, p)."""

    def __init__(self, p):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError("p must be prime")
        self.p = p
        self.char = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def of_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return (a * pow(b, self.p - 2, self.p)) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def to_str(self, a):
        return str(a % self.p)

    def of_str(self, s):
        if "/" in s:
            num, den = s.split("/")
            return self.div(self.of_int(int(num)), self.of_int(int(den)))
        return self.of_int(int(s))

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, FieldFp) and self.p == other.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = FieldQ()


# -- dense univariate polynomials (for the rational function field) ------------


def _u_trim(c):
    while c and c[-1] == 0:
        c = c[:-1]
    return tuple(c)


def u_add(base, a, b):
    n = max(len(a), len(b))
    return _u_trim([base.add(a[i] if i < len(a) else base.zero(),
                             b[i] if i < len(b) else base.zero())
                    for i in range(n)])


def u_neg(base, a):
    return tuple(base.neg(x) for x in a)


def u_mul(base, a, b):
    if not a or not b:
        return ()
    out = [base.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = base.add(out[i + j], base.mul(x, y))
    return _u_trim(out)


def u_divmod(base, a, b):
    if not b:
        raise ZeroDivisionError
    a = list(a)
    q = [base.zero()] * max(0, len(a) - len(b) + 1)
    inv_lead = base.inv(b[-1])
    while len(a) >= len(b):
        c = base.mul(a[-1], inv_lead)
        d = len(a) - len(b)
        q[d] = c
        for i in range(len(b)):
            a[d + i] = base.sub(a[d + i], base.mul(c, b[i]))
        while a and base.is_zero(a[-1]):
            a.pop()
    return _u_trim(q), _u_trim(a)


def u_gcd(base, a, b):
    a, b = _u_trim(a), _u_trim(b)
    while b:
        _, r = u_divmod(base, a, b)
        a, b = b, r
    if a:
        inv = base.inv(a[-1])
        a = tuple(base.mul(x, inv) for x in a)
    return a


def u_monic(base, a):
    if not a:
        return a
    inv = base.inv(a[-1])
    return tuple(base.mul(x, inv) for x in a)


class FieldRatFunc:
    """Rational functions k(t) over a base field, reduced and monic-denominator.

    ``collector``, when set, receives every univariate polynomial that gets
    inverted (used to assemble the bad locus for the k[t]-flatness leaf).
    """

    def __init__(self, base, name="t"):
        self.base = base
        self.name = name
        self.char = base.char
        self.collector = None

    def _make(self, num, den):
        base = self.base
        num, den = _u_trim(num), _u_trim(den)
        if not den:
            raise ZeroDivisionError
        if not num:
            return ((), (base.one(),))
        g = u_gcd(base, num, den)
        if len(g) > 1 or not base.eq(g[0], base.one()):
            num = u_divmod(base, num, g)[0]
            den = u_divmod(base, den, g)[0]
        lead = den[-1]
        if not base.eq(lead, base.one()):
            inv = base.inv(lead)
            num = tuple(base.mul(x, inv) for x in num)
            den = tuple(base.mul(x, inv) for x in den)
        return (num, den)

    def from_poly(self, coeffs):
        return self._make(coeffs, (self.base.one(),))

    def zero(self):
        return ((), (self.base.one(),))

    def one(self):
        return ((self.base.one(),), (self.base.one(),))

    def of_int(self, n):
        return self._make((self.base.of_int(n),), (self.base.one(),))

    def add(self, a, b):
        base = self.base
        return self._make(u_add(base, u_mul(base, a[0], b[1]),
                                u_mul(base, b[0], a[1])),
                          u_mul(base, a[1], b[1]))

    def sub(self, a, b):
        return self.add(a, (u_neg(self.base, b[0]), b[1]))

    def mul(self, a, b):
        return self._make(u_mul(self.base, a[0], b[0]),
                          u_mul(self.base, a[1], b[1]))

    def neg(self, a):
        return (u_neg(self.base, a[0]), a[1])

    def inv(self, a):
        if not a[0]:
            raise ZeroDivisionError
        if self.collector is not None:
            self.collector.append(a[0])
        return self._make(a[1], a[0])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return not a[0]

    def eq(self, a, b):
        return a == b

    def to_str(self, a):
        return f"({a[0]})/({a[1]})"

    def __eq__(self, other):
        return isinstance(other, FieldRatFunc) and self.base == other.base

    def __hash__(self):
        return hash(("RatFunc", self.base))


# -- monomial orders -----------------------------------------------------------


def degrevlex_key(mono):
    return (sum(mono), tuple(-e for e in reversed(mono)))


def weighted_revlex_key(weights, last):
    """Graded reverse lex for the given positive weights, with the variable
    ``last`` treated as the cheapest (rightmost) one."""
    def key(mono):
        n = len(mono)
        perm = [i for i in range(n) if i != last] + [last]
        w = sum(weights[i] * mono[i] for i in range(n))
        return (w, tuple(-mono[perm[i]] for i in reversed(range(n))))
    return key


def module_key(ring_key):
    def key(term):
        mono, pos = term
        return (ring_key(mono), -pos)
    return key


def block_key(ring_key, cut):
    """Positions below ``cut`` dominate everything at or above it."""
    def key(term):
        mono, pos = term
        return (1 if pos < cut else 0, ring_key(mono), -pos)
    return key


# -- module-element arithmetic ---------------------------------------------------


def m_zero():
    return {}


def m_is_zero(f):
    return not f


def m_add(field, f, g):
    out = dict(f)
    for k, c in g.items():
        s = field.add(out.get(k, field.zero()), c)
        if field.is_zero(s):
            out.pop(k, None)
        else:
            out[k] = s
    return out


def m_neg(field, f):
    return {k: field.neg(c) for k, c in f.items()}

def m_sub(field, f, g):
    return m_add(field, f, m_neg(field, g))


def m_scale(field, c, f):
    if field.is_zero(c):
        return {}
    return {k: field.mul(c, v) for k, v in f.items()}


def m_shift(field, c, mono, f):
    """Multiply by the term c * x^mono."""
    if field.is_zero(c):
        return {}
    out = {}
    for (m, p), v in f.items():
        out[(tuple(a + b for a, b in zip(m, mono)), p)] = field.mul(c, v)
    return out


def m_lt(f, key):
    return max(f, key=key)


def m_sorted_terms(f, key):
    return sorted(f.items(), key=lambda kv: key(kv[0]), reverse=True)


def _divides(m1, m2):
    return all(a <= b for a, b in zip(m1, m2))


def m_reduce(field, f, basis, key):
    """Full normal form of f against the list of module elements ``basis``."""
    f = dict(f)
    out = {}
    lts = [(m_lt(g, key), g) for g in basis if g]
    while f:
        t = m_lt(f, key)
        c = f[t]
        mono, pos = t
        hit = None
        for (lm, lp), g in lts:
            if lp == pos and _divides(lm, mono):
                hit = ((lm, lp), g)
                break
        if hit is None:
            out[t] = c
            del f[t]
            continue
        (lm, lp), g = hit
        shift = tuple(a - b for a, b in zip(mono, lm))
        factor = field.div(c, g[(lm, lp)])
        f = m_sub(field, f, m_shift(field, factor, shift, g))
    return out


def m_monic(field, f, key):
    if not f:
        return f
    c = f[m_lt(f, key)]
    if field.eq(c, field.one()):
        return f
    return m_scale(field, field.inv(c), f)


def buchberger(field, gens, key, ring_mode=False):
    """Reduced Groebner basis of the module generated by ``gens``.

    Deterministic: input is canonically sorted, pairs are processed in a
    fixed order, and the result is interreduced, monic, and sorted.
    """
    basis = []
    for g in sorted((g for g in gens if g),
                    key=lambda g: key(m_lt(g, key))):
        r = m_reduce(field, g, basis, key)
        if r:
            basis.append(m_monic(field, r, key))
    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    while pairs:
        pairs.sort(key=lambda ij: _pair_lcm_key(basis, ij, key))
        i, j = pairs.pop(0)
        gi, gj = basis[i], basis[j]
        (mi, pi) = m_lt(gi, key)
        (mj, pj) = m_lt(gj, key)
        if pi != pj:
            continue
        lcm = tuple(max(a, b) for a, b in zip(mi, mj))
        if ring_mode and all(min(a, b) == 0 for a, b in zip(mi, mj)):
            continue  # product criterion (valid for ideals)
        si = m_shift(field, field.one(), tuple(a - b for a, b in zip(lcm, mi)), gi)
        sj = m_shift(field, field.one(), tuple(a - b for a, b in zip(lcm, mj)), gj)
        s = m_sub(field, si, sj)
        r = m_reduce(field, s, basis, key)
        if r:
            r = m_monic(field, r, key)
            basis.append(r)
            new = len(basis) - 1
            pairs.extend((t, new) for t in range(new))
    # interreduce
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            if not basis[i]:
                continue
            others = [basis[t] for t in range(len(basis)) if t != i and basis[t]]
            r = m_reduce(field, basis[i], others, key)
            if r != basis[i]:
                basis[i] = m_monic(field, r, key) if r else {}
                changed = True
    basis = [g for g in basis if g]
    basis.sort(key=lambda g: key(m_lt(g, key)))
    return basis


def _pair_lcm_key(basis, ij, key):
    i, j = ij
    (mi, pi) = m_lt(basis[i], key)
    (mj, pj) = m_lt(basis[j], key)
    lcm = tuple(max(a, b) for a, b in zip(mi, mj))
    return (key((lcm, pi if pi == pj else 0)), i, j)


def syzygies(field, vecs, rank, nvars, ring_key):
    """Generators of the syzygy module of ``vecs`` (elements of S^rank).

    Computed from a Groebner basis of {v_i (+) e_i} under a block order that
    eliminates the value block."""
    k = len(vecs)
    aug = []
    for i, v in enumerate(vecs):
        g = dict(v)
        g[((0,) * nvars, rank + i)] = field.one()
        aug.append(g)
    key = block_key(ring_key, rank)
    gb = buchberger(field, aug, key)
    out = []
    for g in gb:
        if all(p >= rank for (_, p) in g):
            out.append({(m, p - rank): c for (m, p), c in g.items()})
    return out


def lift_through(field, vecs, rank, nvars, ring_key, target):
    """Coefficients c with target = sum c_i vecs_i, or None.

    Same elimination trick as ``syzygies``; also the membership test."""
    k = len(vecs)
    aug = []
    for i, v in enumerate(vecs):
        g = dict(v)
        g[((0,) * nvars, rank + i)] = field.one()
        aug.append(g)
    key = block_key(ring_key, rank)
    gb = buchberger(field, aug, key)
    r = m_reduce(field, target, gb, key)
    if any(p < rank for (_, p) in r):
        return None
    return {(m, p - rank): field.neg(c) for (m, p), c in r.items()}


# -- polynomial rings and presentations ---------------------------------------


class PolyRing:
    def __init__(self, field, names):
        self.field = field
        self.names = tuple(names)
        self.key = degrevlex_key

    @property
    def nvars(self):
        return len(self.names)

    def mkey(self):
        return module_key(self.key)

    def zero(self):
        return {}

    def one(self):
        return {((0,) * self.nvars, 0): self.field.one()}

    def const(self, c):
        c = self.field.of_int(c) if isinstance(c, int) else c
        if self.field.is_zero(c):
            return {}
        return {((0,) * self.nvars, 0): c}

    def var(self, i):
        if isinstance(i, str):
            i = self.names.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return {(tuple(e), 0): self.field.one()}

    def monomial(self, exps, c=None):
        c = self.field.one() if c is None else c
        if self.field.is_zero(c):
            return {}
        return {(tuple(exps), 0): c}

    def add(self, *ps):
        out = {}
        for p in ps:
            out = m_add(self.field, out, p)
        return out

    def sub(self, a, b):
        return m_sub(self.field, a, b)

    def neg(self, a):
        return m_neg(self.field, a)

    def mul(self, *ps):
        out = self.one()
        for p in ps:
            nxt = {}
            for (m1, _), c1 in out.items():
                for (m2, _), c2 in p.items():
                    k = (tuple(a + b for a, b in zip(m1, m2)), 0)
                    s = self.field.add(nxt.get(k, self.field.zero()),
                                       self.field.mul(c1, c2))
                    if self.field.is_zero(s):
                        nxt.pop(k, None)
                    else:
                        nxt[k] = s
            out = nxt
        return out

    def pow(self, p, n):
        out = self.one()
        for _ in range(n):
            out = self.mul(out, p)
        return out

    def scale(self, c, p):
        c = self.field.of_int(c) if isinstance(c, int) else c
        return m_scale(self.field, c, p)

    def parse(self, s):
        return _parse_poly(self, s)

    def to_str(self, p):
        if not p:
            return "0"
        parts = []
        for (m, _), c in m_sorted_terms(p, self.mkey()):
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(self.names[i])
                elif e > 1:
                    factors.append(f"{self.names[i]}^{e}")
            cs = self.field.to_str(c)
            if factors and cs == "1":
                parts.append("*".join(factors))
            elif factors and cs == "-1":
                parts.append("-" + "*".join(factors))
            elif factors:
                parts.append(cs + "*" + "*".join(factors))
            else:
                parts.append(cs)
        out = parts[0]
        for t in parts[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out


def _parse_poly(ring, s):
    """Tiny recursive-descent parser: names, integers, + - * ^ ( )."""
    tokens = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(s) and s[j].isdigit():
                j += 1
            tokens.append(("int", s[i:j]))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(s) and (s[j].isalnum() or s[j] == "_"):
                j += 1
            tokens.append(("name", s[i:j]))
            i = j
        elif ch in "+-*^()/":
            tokens.append((ch, ch))
            i += 1
        else:
            raise ValueError(f"bad character {ch!r} in polynomial")
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else (None, None)

    def take(kind=None):
        tok = peek()
        if kind and tok[0] != kind:
            raise ValueError(f"expected {kind}, got {tok}")
        pos[0] += 1
        return tok

    def atom():
        kind, val = peek()
        if kind == "int":
            take()
            if peek()[0] == "/":
                take()
                _, den = take("int")
                p = ring.const(ring.field.of_str(f"{val}/{den}"))
            else:
                p = ring.const(int(val))
        elif kind == "name":
            take()
            if val not in ring.names:
                raise ValueError(f"unknown variable {val!r}")
            p = ring.var(val)
        elif kind == "(":
            take()
            p = expr()
            take(")")
        elif kind == "-":
            take()
            return ring.neg(atom())
        else:
            raise ValueError(f"unexpected token {peek()}")
        while peek()[0] == "^":
            take()
            _, e = take("int")
            p = ring.pow(p, int(e))
        return p

    def term():
        p = atom()
        while peek()[0] == "*" or peek()[0] in ("name", "int", "("):
            if peek()[0] == "*":
                take()
            p = ring.mul(p, atom())
        return p

    def expr():
        p = term()
        while peek()[0] in ("+", "-"):
            op, _ = take()
            q = term()
            p = ring.add(p, q) if op == "+" else ring.sub(p, q)
        return p

    out = expr()
    if pos[0] != len(tokens):
        raise ValueError("trailing tokens in polynomial")
    return out


class RingPresentation:
    """A finitely presented algebra: ambient polynomial ring modulo an ideal."""

    def __init__(self, ring: PolyRing, ideal_gens=()):
        self.ring = ring
        self.ideal = [dict(g) for g in ideal_gens if g]
        self._gb = None

    def gb(self):
        if self._gb is None:
            self._gb = buchberger(self.ring.field, self.ideal, self.ring.mkey(),
                                  ring_mode=True)
        return self._gb

    def nf(self, p):
        return m_reduce(self.ring.field, p, self.gb(), self.ring.mkey())

    def is_zero(self, p):
        return not self.nf(p)

    def eq(self, p, q):
        return self.is_zero(self.ring.sub(p, q))

    def quotient(self, extra_gens):
        return RingPresentation(self.ring, self.ideal + [dict(g) for g in extra_gens if g])

    def parse(self, s):
        return self.ring.parse(s)

    def contains_one(self):
        return self.is_zero(self.ring.one())

    def __repr__(self):
        gens = ", ".join(self.ring.to_str(g) for g in self.ideal)
        return f"{self.ring.field}[{', '.join(self.ring.names)}]/({gens})"


class RingMap:
    """Ring homomorphism between presentations, by variable images."""

    def __init__(self, source: RingPresentation, target: RingPresentation,
                 images, check=True):
        self.source = source
        self.target = target
        self.images = [dict(v) for v in images]
        if len(self.images) != source.ring.nvars:
            raise ValueError("need one image per source variable")
        if check:
            for g in source.ideal:
                if not target.is_zero(self.apply(g)):
                    raise ValueError("ring map does not kill the ideal")

    def apply(self, p):
        tring = self.target.ring
        out = tring.zero()
        for (m, _), c in p.items():
            term = m_scale(tring.field, c, tring.one())
            for i, e in enumerate(m):
                for _ in range(e):
                    term = tring.mul(term, self.images[i])
            out = tring.add(out, term)
        return out

    def compose(self, inner):
        return RingMap(inner.source, self.target,
                       [self.apply(v) for v in inner.images], check=False)


class ModulePresentation:
    """coker( R^k --columns--> R^rank ) over a presented ring R."""

    def __init__(self, over: RingPresentation, rank, columns=()):
        self.over = over
        self.rank = rank
        self.columns = [dict(c) for c in columns if c]
        self._gb = None

    def _full_relations(self):
        rels = list(self.columns)
        nv = self.over.ring.nvars
        for g in self.over.ideal:
            for i in range(self.rank):
                rels.append({(m, i): c for (m, _), c in g.items()})
        return rels

    def gb(self):
        if self._gb is None:
            self._gb = buchberger(self.over.ring.field, self._full_relations(),
                                  self.over.ring.mkey())
        return self._gb

    def nf(self, v):
        return m_reduce(self.over.ring.field, v, self.gb(), self.over.ring.mkey())

    def is_zero_elem(self, v):
        return not self.nf(v)

    def eq(self, v, w):
        return self.is_zero_elem(m_sub(self.over.ring.field, v, w))

    def basis_elem(self, i):
        return {((0,) * self.over.ring.nvars, i): self.over.ring.field.one()}

    def dim(self):
        return vector_space_dimension(self.over, self.rank, self.columns)

    def kbasis(self):
        return vector_space_basis(self.over, self.rank, self.columns)

    def __repr__(self):
        return f"ModulePresentation(rank={self.rank}, nrels={len(self.columns)})"


# -- kernels, homology, Tor ----------------------------------------------------


def syzygies_over(over: RingPresentation, cols, rank):
    """Syzygies of the columns over the presented ring (ideal absorbed)."""
    field = over.ring.field
    nv = over.ring.nvars
    extra = []
    for g in over.ideal:
        for i in range(rank):
            extra.append({(m, i): c for (m, _), c in g.items()})
    all_cols = list(cols) + extra
    syz = syzygies(field, all_cols, rank, nv, over.ring.key)
    k = len(cols)
    out = []
    for s in syz:
        proj = {(m, p): c for (m, p), c in s.items() if p < k}
        if proj:
            out.append(proj)
    return _dedupe(field, out, module_key(over.ring.key))


def _dedupe(field, elems, key):
    seen = []
    for e in elems:
        ce = m_monic(field, e, key)
        if ce not in seen:
            seen.append(ce)
    return seen


def kernel_of_matrix(over: RingPresentation, cols, out_rank, out_relations=()):
    """Generators of {x in R^k : sum x_i cols_i lies in the span of
    out_relations} (the ideal is always absorbed)."""
    field = over.ring.field
    nv = over.ring.nvars
    extra = list(out_relations)
    for g in over.ideal:
        for i in range(out_rank):
            extra.append({(m, i): c for (m, _), c in g.items()})
    all_cols = list(cols) + extra
    syz = syzygies(field, all_cols, out_rank, nv, over.ring.key)
    k = len(cols)
    out = []
    for s in syz:
        proj = {(m, p): c for (m, p), c in s.items() if p < k}
        if proj:
            out.append(proj)
    return _dedupe(field, out, module_key(over.ring.key))


def kernel_of_module_map(phi_cols, m: ModulePresentation, n: ModulePresentation):
    """Kernel of the induced map M -> N given by columns phi_cols (images of
    M's basis in R^n.rank).  Returns (K, gens) with K presented and gens the
    inclusion K -> M as columns in R^m.rank."""
    over = m.over
    # well-definedness: each M-relation must map into N's relation span
    field = over.ring.field
    for col in m.columns:
        img = _apply_cols(field, phi_cols, col, over)
        if not n.is_zero_elem(img):
            raise ValueError("matrix does not define a map of presented modules")
    kgens = kernel_of_matrix(over, phi_cols, n.rank, n.columns)
    rels = kernel_of_matrix(over, kgens, m.rank, m.columns)
    return ModulePresentation(over, len(kgens), rels), kgens


def _apply_cols(field, cols, vec, over):
    """Apply the matrix with the given columns to a vector (module element)."""
    out = {}
    for (mono, pos), c in vec.items():
        col = cols[pos]
        out = m_add(field, out, m_shift(field, c, mono, col))
    return out


def homology(over: RingPresentation, a_cols, mid_rank, mid_relations,
             b_cols, out_rank, out_relations):
    """Homology ker(B)/im(A) at the middle of
       R^s --A--> R^mid_rank --B--> R^out_rank
    where the outer terms carry the given relation columns.

    Returns (presentation over ``over``, is_zero).
    """
    kgens = kernel_of_matrix(over, b_cols, out_rank, out_relations)
    denom = list(a_cols) + list(mid_relations)
    mid = ModulePresentation(over, mid_rank, denom)
    is_zero = all(mid.is_zero_elem(k) for k in kgens)
    rels = kernel_of_matrix(over, kgens, mid_rank, denom)
    return ModulePresentation(over, len(kgens), rels), is_zero


def tor1(m: ModulePresentation, j_gens, return_presentation=True):
    """Tor_1^R(M, R/J) for the presented module M and ideal J of R.

    Two syzygy steps: F2 -> F1 -> F0 -> M, tensored with R/J, homology at F1.
    Returns (presentation over R/J, is_zero)."""
    over = m.over
    rq = over.quotient(j_gens)
    d1 = list(m.columns)  # F1 = R^a -> F0 = R^rank
    a = len(d1)
    if a == 0:
        return ModulePresentation(rq, 0, []), True
    d2 = syzygies_over(over, d1, m.rank)
    # over R/J now
    j_relations = []
    for g in j_gens:
        for i in range(m.rank):
            j_relations.append({(mm, i): c for (mm, _), c in g.items()})
    mid_rels = []
    for g in j_gens:
        for i in range(a):
            mid_rels.append({(mm, i): c for (mm, _), c in g.items()})
    return homology(rq, d2, a, mid_rels, d1, m.rank, [])


def tor1_is_zero(m: ModulePresentation, j_gens):
    return tor1(m, j_gens)[1]


def tor1_dim(m: ModulePresentation, j_gens):
    pres, _ = tor1(m, j_gens)
    return pres.dim()


def tor1_via_resolution(n: ModulePresentation, algebra_map: RingMap):
    """Tor_1^R(A, N) for an R-algebra A (given by the ring map R -> A),
    computed by resolving N over R and transporting the complex to A.

    Returns (presentation over A, is_zero)."""
    over = n.over
    d1 = list(n.columns)
    a = len(d1)
    if a == 0:
        target = algebra_map.target
        return ModulePresentation(target, 0, []), True
    d2 = syzygies_over(over, d1, n.rank)
    t_d1 = [_transport_col(algebra_map, col) for col in d1]
    t_d2 = [_transport_col(algebra_map, col) for col in d2]
    return homology(algebra_map.target, t_d2, a, [], t_d1, n.rank, [])


def _transport_col(rmap: RingMap, col):
    field = rmap.target.ring.field
    out = {}
    for (mono, pos), c in col.items():
        p = rmap.apply({(mono, 0): c})
        out = m_add(field, out, {(mm, pos): cc for (mm, _), cc in p.items()})
    return out


def regular_element_test(f, m: ModulePresentation):
    """Whether multiplication by f is injective on M."""
    phi = [_ring_mul_vec(m.over, f, m.basis_elem(i)) for i in range(m.rank)]
    _, kgens = kernel_of_module_map(phi, m, m)
    return all(m.is_zero_elem(g) for g in kgens)


def _ring_mul_vec(over, f, vec):
    field = over.ring.field
    out = {}
    for (m1, _), c1 in f.items():
        for (m2, p), c2 in vec.items():
            k = (tuple(a + b for a, b in zip(m1, m2)), p)
            s = field.add(out.get(k, field.zero()), field.mul(c1, c2))
            if field.is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
    return out


def multiply_into(over, f, vec):
    return _ring_mul_vec(over, f, vec)


# -- vector space structure ----------------------------------------------------


def vector_space_basis(over: RingPresentation, rank, rel_cols, cap=4096):
    """Standard monomials (mono, pos) of the quotient, or None if infinite."""
    mp = ModulePresentation(over, rank, rel_cols)
    gb = mp.gb()
    key = over.ring.mkey()
    leads = [m_lt(g, key) for g in gb]
    nv = over.ring.nvars
    basis = []
    for pos in range(rank):
        pos_leads = [m for (m, p) in leads if p == pos]
        if (0,) * nv in pos_leads:
            continue  # the whole position dies
        # finite iff every variable is capped at this position
        for v in range(nv):
            if not any(all(e == 0 for i, e in enumerate(m) if i != v)
                       and m[v] > 0 for m in pos_leads):
                return None
        stack = [(0,) * nv]
        seen = set()
        while stack:
            mono = stack.pop()
            if mono in seen:
                continue
            if any(_divides(lm, mono) for lm in pos_leads):
                continue
            seen.add(mono)
            if len(seen) > cap:
                return None
            basis.append((mono, pos))
            for v in range(nv):
                nxt = tuple(e + (1 if i == v else 0) for i, e in enumerate(mono))
                stack.append(nxt)
    return sorted(basis, key=key)


def vector_space_dimension(over, rank, rel_cols, cap=4096):
    b = vector_space_basis(over, rank, rel_cols, cap)
    return None if b is None else len(b)


def eliminate_ideal(pres: RingPresentation, keep):
    """Generators of the contraction of the ideal to the kept variables,
    via a block elimination order."""
    ring = pres.ring
    elim = [i for i in range(ring.nvars) if i not in keep]

    def elim_key(mono):
        return (sum(mono[i] for i in elim), degrevlex_key(mono))

    gb = buchberger(ring.field, pres.ideal, module_key(elim_key),
                    ring_mode=True)
    return [g for g in gb
            if all(all(mono[i] == 0 for i in elim) for (mono, _) in g)]


# -- toric ideals ---------------------------------------------------------------


class NotPointed(ValueError):
    pass


def toric_ideal(p_monoid, field=QQ, names=None, allow_units=False):
    """k[P] presented by the kernel of z_i |-> [g_i]: the lattice ideal of the
    relation lattice saturated at every variable.

    For a pointed monoid the saturation is revlex division by each variable
    (the lattice ideal is positively graded); for a group none is needed; in
    the mixed case (reachable only with allow_units, for the chart layer) the
    saturation falls back to Rabinowitsch elimination.

    Returns (RingPresentation, degrees), degrees the ambient element per
    variable.
    """
    group_case = p_monoid.is_group() and p_monoid.generators
    mixed_case = bool(p_monoid.unit_indices()) and not group_case
    if mixed_case and not allow_units:
        raise NotPointed("toric presentation needs a pointed monoid "
                         "(split units off first)")
    gens = p_monoid.generators
    n = len(gens)
    if names is None:
        names = [f"z{i}" for i in range(n)] if n != 2 else ["x", "y"]
        if n == 1:
            names = ["x"]
        if n == 3:
            names = ["z1", "z2", "z3"]
    ring = PolyRing(field, names)
    lattice = p_monoid.relation_lattice()
    binomials = []
    for a in lattice:
        plus = tuple(max(x, 0) for x in a)
        minus = tuple(max(-x, 0) for x in a)
        binomials.append(ring.sub(ring.monomial(plus), ring.monomial(minus)))
    if group_case:
        # every variable is a unit modulo the lattice ideal, so it is
        # already saturated
        current = binomials
    elif mixed_case:
        # saturate at the product of all variables by elimination
        wring = PolyRing(field, list(names) + ["_w"])
        lifted = []
        for g in binomials:
            lifted.append({(mono + (0,), 0): c for (mono, _), c in g.items()})
        prod = wring.var(n)
        for i in range(n):
            prod = wring.mul(prod, wring.var(i))
        lifted.append(wring.sub(wring.one(), prod))
        sat = eliminate_ideal(RingPresentation(wring, lifted), keep=range(n))
        current = [{(mono[:n], 0): c for (mono, _), c in g.items()}
                   for g in sat]
    else:
        # positive weights from the certifying functional make the lattice
        # ideal homogeneous, so saturation per variable is revlex division
        lam = p_monoid._positive_functional()
        rank = p_monoid.ambient.rank
        den = 1
        vals = []
        for g in gens:
            v = sum(l * c for l, c in zip(lam, g[:rank]))
            vals.append(v)
            den = den * v.denominator // gcd(den, v.denominator)
        weights = [int(v * den) for v in vals]
        current = binomials
        for i in range(n):
            key = weighted_revlex_key(weights, i)
            gb = buchberger(field, current, module_key(key), ring_mode=True)
            divided = []
            for g in gb:
                drop = min(m[i] for (m, _) in g)
                if drop:
                    g = {(tuple(e - (drop if t == i else 0)
                                for t, e in enumerate(m)), p): c
                         for (m, p), c in g.items()}
                divided.append(g)
            current = divided
    pres = RingPresentation(ring, buchberger(field, current, ring.mkey(),
                                             ring_mode=True))
    return pres, list(gens)


def monomial_of(p_monoid, element):
    """Exponent vector of a monomial representing the monoid element."""
    ok, mult = p_monoid.member_with_certificate(element)
    if not ok:
        raise ValueError("element is not in the monoid")
    return mult


def monomial_module_presentation(p_monoid, ring_pres, m_module):
    """k[M] as a module over k[P] for an embedded module M.

    For a free ambient monoid the pairwise join relations present the module
    exactly (Taylor relations); otherwise relation pairs are enumerated on a
    bounded window.
    """
    ring = ring_pres.ring
    field = ring.field
    gens = list(m_module.generators)
    cols = []
    amb = m_module.ambient
    free_std = _is_standard_free(p_monoid)
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            (gi, ci), (gj, cj) = gens[i], gens[j]
            if ci != cj:
                continue
            if free_std:
                join = tuple(max(a, b) for a, b in zip(gi, gj))
                ei = tuple(a - b for a, b in zip(join, gi))
                ej = tuple(a - b for a, b in zip(join, gj))
                col = m_add(field, {(ei, i): field.one()},
                            {(ej, j): field.neg(field.one())})
                cols.append(col)
            else:
                for w in p_monoid.elements_up_to(4):
                    d = amb.sub(amb.add(w, gi), gj)
                    ok, mult = p_monoid.member_with_certificate(d) \
                        if p_monoid.is_sharp() else (False, None)
                    if ok:
                        wi = monomial_of(p_monoid, w)
                        col = m_add(field, {(tuple(wi), i): field.one()},
                                    {(tuple(mult), j): field.neg(field.one())})
                        cols.append(col)
    return ModulePresentation(ring_pres, len(gens), cols)


def _is_standard_free(p_monoid):
    amb = p_monoid.ambient
    if amb.torsion:
        return False
    std = [tuple(1 if j == i else 0 for j in range(amb.rank))
           for i in range(amb.rank)]
    return sorted(p_monoid.generators) == sorted(std)
