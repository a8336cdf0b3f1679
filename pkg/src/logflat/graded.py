"""Graded rings and modules: homogeneous and semiprime ideals, the
monoid-ideal correspondence, and the graded-flatness decision procedures.

The dispatcher covers the shapes the criteria are proved for:

* monoid algebras k[P] of pointed fine monoids (per-prime Tor vanishing),
* chart towers A (x)_{Z[Q]} Z[P] with monomial spawning variables, recursing
  through the quotients B_e (the nodal ring k[x,y]/(xy) is the basic case),
* group algebras A[G] (reduction to the degree-zero part),
* trivial gradings (plain flatness over a field or over k[t]).

Base flatness over k[t] is decided exactly: the torsion of a finitely
presented module is supported on the vanishing locus of the product of every
leading coefficient inverted while running the module Groebner basis over
k(t), so torsion-freeness reduces to one kernel computation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .abgrp import FgAbGroup, GroupHom
from .monoid import FineMonoid, MonoidIdeal
from . import polyalg as pa
from .polyalg import (
    FieldRatFunc,
    ModulePresentation,
    PolyRing,
    RingPresentation,
    buchberger,
    module_key,
    tor1,
    regular_element_test,
    toric_ideal,
    vector_space_dimension,
)


class NotHomogeneous(ValueError):
    pass


class UnsupportedIdealClass(ValueError):
    pass


class UnsupportedShape(ValueError):
    pass


class GradedRing:
    """A presented ring with a degree map from variables to an abelian group."""

    def __init__(self, group: FgAbGroup, pres: RingPresentation, degrees,
                 check=True):
        self.group = group
        self.pres = pres
        self.degrees = tuple(group.reduce(d) for d in degrees)
        if len(self.degrees) != pres.ring.nvars:
            raise ValueError("need one degree per variable")
        if check:
            for g in pres.ideal:
                if not self.is_homogeneous_poly(g):
                    raise NotHomogeneous("ideal generator is not homogeneous")

    def degree_of_monomial(self, mono):
        d = self.group.zero()
        for e, dg in zip(mono, self.degrees):
            if e:
                d = self.group.add(d, self.group.scale(e, dg))
        return d

    def homogeneous_components(self, p):
        comps = {}
        for (mono, pos), c in p.items():
            d = self.degree_of_monomial(mono)
            comps.setdefault(d, {})[(mono, pos)] = c
        return comps

    def is_homogeneous_poly(self, p):
        return len(self.homogeneous_components(p)) <= 1

    def monomial_of_degree(self, d):
        """A standard monomial of the given degree, for group-algebra-like
        rings where every degree is populated (used by the shift machinery)."""
        d = self.group.reduce(d)
        # greedy integer solve over the degree vectors
        from .abgrp import IntMatrix, solve_integer
        cols = [list(v) for v in self.degrees] + \
               [list(c) for c in self.group.relation_columns()]
        m = IntMatrix.from_columns(cols, nrows=self.group.dim)
        sol = solve_integer(m, d)
        if sol is None:
            return None
        exps = list(sol[:len(self.degrees)])
        if any(e < 0 for e in exps):
            # shift along inverse-pair relations when available
            exps = self._make_nonneg(exps)
            if exps is None:
                return None
        return tuple(exps)

    def _make_nonneg(self, exps):
        pairs = getattr(self, "inverse_pairs", ())
        exps = list(exps)
        for i, j in pairs:
            # u_i u_j = 1: adding (1,1) to (e_i, e_j) leaves the class fixed
            while exps[i] < 0 or exps[j] < 0:
                exps[i] += 1
                exps[j] += 1
        return tuple(exps) if all(e >= 0 for e in exps) else None


@dataclass
class HomogeneousIdeal:
    owner: GradedRing
    generators: list

    def __post_init__(self):
        self.generators = [dict(g) for g in self.generators if g]


def homogeneous_components(gr: GradedRing, p):
    return gr.homogeneous_components(p)


def is_homogeneous_ideal(gr: GradedRing, gens):
    """Each component of each generator must lie in the ideal they generate."""
    ideal = RingPresentation(gr.pres.ring, list(gr.pres.ideal) + [dict(g) for g in gens])
    for g in gens:
        for comp in gr.homogeneous_components(g).values():
            if not ideal.is_zero(comp):
                return False
    return True


# -- monoid algebras -----------------------------------------------------------


class MonoidAlgebra:
    """k[P] for a pointed fine monoid, with its ambient-group grading."""

    def __init__(self, monoid: FineMonoid, field=pa.QQ, names=None):
        self.monoid = monoid
        pres, degs = toric_ideal(monoid, field, names)
        self.graded = GradedRing(monoid.ambient, pres, degs)

    @property
    def pres(self):
        return self.graded.pres

    def monomial_of_element(self, p):
        return pa.monomial_of(self.monoid, p)

    def to_ring_ideal(self, ideal: MonoidIdeal) -> HomogeneousIdeal:
        ring = self.pres.ring
        gens = [ring.monomial(self.monomial_of_element(g))
                for g in ideal.generators]
        return HomogeneousIdeal(self.graded, gens)

    def to_monoid_ideal(self, j) -> MonoidIdeal:
        gens = j.generators if isinstance(j, HomogeneousIdeal) else list(j)
        if not is_homogeneous_ideal(self.graded, gens):
            raise NotHomogeneous("ideal is not homogeneous")
        out = []
        for g in gens:
            for (mono, _), _c in self.pres.nf(g).items():
                elt = self.monoid.ambient.zero()
                for e, gen in zip(mono, self.monoid.generators):
                    elt = self.monoid.ambient.add(
                        elt, self.monoid.ambient.scale(e, gen))
                out.append(elt)
        return MonoidIdeal(self.monoid, out)

    def is_semiprime(self, j) -> bool:
        """Semiprime homogeneous ideals of k[P] are exactly k[I] for prime I."""
        gens = j.generators if isinstance(j, HomogeneousIdeal) else list(j)
        for g in gens:
            if len(self.pres.nf(g)) > 1:
                raise UnsupportedIdealClass("only monomial ideals are supported")
        ideal = self.to_monoid_ideal(gens)
        return any(ideal == p for p in self.monoid.prime_ideals())

    def is_prime(self, j) -> bool:
        gens = j.generators if isinstance(j, HomogeneousIdeal) else list(j)
        semi = self.is_semiprime(gens)
        span, _ = _monoid_span(self.monoid)
        if span.is_torsion_free():
            return semi
        if not semi:
            return False
        if not gens and self.monoid.is_group():
            # k[G] is a domain iff G is torsion-free
            return span.is_torsion_free()
        raise UnsupportedIdealClass("primeness undecided for this shape")


def _monoid_span(p: FineMonoid):
    from .monoid import _span_group
    return _span_group(p)


# -- graded flatness: shapes and dispatcher ------------------------------------


@dataclass
class KPShape:
    """B = k[P], graded by the ambient group of the pointed fine monoid P."""

    algebra: MonoidAlgebra


@dataclass
class ChartShape:
    """B = A (x)_{Z[Q]} Z[P] with monomial spawning variables ``evars``.

    * ``pres``: the presented ring (A-variables then monoid variables),
    * ``avars``: indices of the A-variables,
    * ``evars``: indices of the spawning-set variables, quotiented recursively,
    * ``base``: 'field' or ('kt', t_index) describing A itself.
    """

    pres: RingPresentation
    grading: GradedRing
    avars: tuple
    evars: tuple
    base: object


@dataclass
class GroupAlgebraShape:
    ring: GradedRing
    inverse_pairs: tuple  # (i, j) with u_i u_j = 1


@dataclass
class TrivialShape:
    pres: RingPresentation
    base: object  # 'field' or ('kt', t_index)


def graded_flat(m: ModulePresentation, shape):
    """Graded-flatness verdict with a certificate tree."""
    if isinstance(shape, KPShape):
        return _flat_kp(m, shape)
    if isinstance(shape, ChartShape):
        return _flat_chart(m, shape)
    if isinstance(shape, GroupAlgebraShape):
        return _flat_group_algebra(m, shape)
    if isinstance(shape, TrivialShape):
        ok, cert = _flat_over_base(m, shape.pres, shape.base)
        return ok, {"criterion": "trivial grading", "base": cert, "verdict": ok}
    raise UnsupportedShape(f"no graded-flatness procedure for {shape!r}")


def _flat_kp(m: ModulePresentation, shape: KPShape):
    alg = shape.algebra
    entries = []
    verdict = True
    for prime in alg.monoid.prime_ideals():
        j = alg.to_ring_ideal(prime)
        zero = pa.tor1_is_zero(m, j.generators)
        entries.append({"prime": [list(g) for g in prime.generators],
                        "tor1_zero": zero})
        verdict = verdict and zero
    return verdict, {"criterion": "kP per-prime Tor", "primes": entries,
                     "verdict": verdict}


def _flat_chart(m: ModulePresentation, shape: ChartShape):
    base_ok, base_cert = _flat_over_base(m, shape.pres, shape.base,
                                         avars=shape.avars)
    cert = {"criterion": "chart tower", "base": base_cert, "spawning": []}
    verdict = base_ok
    ring = shape.pres.ring
    for e in shape.evars:
        ze = ring.var(e)
        tz = pa.tor1_is_zero(m, [ze])
        sub_pres = shape.pres.quotient([ze])
        sub_m = ModulePresentation(sub_pres, m.rank, m.columns)
        sub_shape = ChartShape(sub_pres, shape.grading, shape.avars,
                               tuple(v for v in shape.evars if v != e),
                               shape.base)
        sub_ok, sub_cert = _flat_chart(sub_m, sub_shape)
        cert["spawning"].append({"variable": ring.names[e],
                                 "tor1_zero": tz,
                                 "quotient": sub_cert})
        verdict = verdict and tz and sub_ok
    cert["verdict"] = verdict
    return verdict, cert


def _flat_over_base(m: ModulePresentation, pres: RingPresentation, base,
                    avars=()):
    """Flatness of M over the image of the base ring A.

    The contraction of the ideal to the A-variables is computed by
    elimination; supported leaves are fields (always flat), the zero ring,
    and k[t] (torsion-freeness via the k(t)-trace kernel test).
    """
    if base == "field" or not avars:
        return True, {"base": "field", "flat": True}
    contraction = _eliminate(pres, keep=avars)
    ring = pres.ring
    base_names = [ring.names[i] for i in avars]
    base_ring = PolyRing(ring.field, base_names)
    reindex = {v: i for i, v in enumerate(avars)}
    base_ideal = []
    for g in contraction:
        base_ideal.append({(tuple(mono[v] for v in avars), 0): c
                           for (mono, _), c in g.items()})
    base_pres = RingPresentation(base_ring, base_ideal)
    if base_pres.contains_one():
        return True, {"base": "zero ring", "flat": True}
    dim = vector_space_dimension(base_pres, 1, [])
    if dim == 1:
        return True, {"base": "residue field", "flat": True}
    if isinstance(base, tuple) and base[0] == "kt" and not base_ideal:
        ok, fstar = flat_over_kt(m, base[1])
        return ok, {"base": "k[t]", "flat": ok, "bad_locus": fstar}
    raise UnsupportedShape("base ring is neither a field nor k[t]")


def _eliminate(pres: RingPresentation, keep):
    """Generators of the contraction of the ideal to the kept variables."""
    return pa.eliminate_ideal(pres, keep)


def flat_over_kt(m: ModulePresentation, t_index):
    """Exact flatness of a finitely presented module over the subring k[t].

    Runs the module Groebner basis over k(t), collecting every inverted
    leading coefficient; the torsion is supported on the product f*, so the
    module is flat over k[t] iff multiplication by f* is injective.
    """
    ring = m.over.ring
    base = ring.field
    rf = FieldRatFunc(base)
    collected = []
    rf.collector = collected
    other = [i for i in range(ring.nvars) if i != t_index]
    new_ring = PolyRing(rf, [ring.names[i] for i in other])

    def transport(col):
        out = {}
        for (mono, pos), c in col.items():
            t_exp = mono[t_index]
            coeff_poly = tuple([base.zero()] * t_exp + [c])
            key = (tuple(mono[i] for i in other), pos)
            cur = out.get(key, rf.zero())
            out[key] = rf.add(cur, rf.from_poly(coeff_poly))
        return {k: v for k, v in out.items() if not rf.is_zero(v)}

    rels = [transport(c) for c in m.columns]
    for g in m.over.ideal:
        for i in range(m.rank):
            rels.append(transport({(mono, i): c for (mono, _), c in g.items()}))
    buchberger(rf, [r for r in rels if r], module_key(pa.degrevlex_key))
    fstar_u = (base.one(),)
    for p in collected:
        fstar_u = pa.u_mul(base, fstar_u, pa.u_monic(base, p))
    if len(fstar_u) <= 1:
        return True, "1"
    fstar = {}
    for e, c in enumerate(fstar_u):
        if not base.is_zero(c):
            mono = [0] * ring.nvars
            mono[t_index] = e
            fstar[(tuple(mono), 0)] = c
    ok = regular_element_test(fstar, m)
    return ok, ring.to_str(fstar)


# -- the nodal ring and its criteria panel --------------------------------------


def nodal_ring(field=pa.QQ):
    """B = k[x,y]/(xy) graded by Z with |x| = 1, |y| = -1, as a chart shape."""
    ring = PolyRing(field, ["x", "y"])
    pres = RingPresentation(ring, [ring.parse("x*y")])
    z = FgAbGroup.free(1)
    grading = GradedRing(z, pres, [(1,), (-1,)])
    shape = ChartShape(pres, grading, avars=(), evars=(0, 1), base="field")
    return pres, grading, shape


def quotient_module(m: ModulePresentation, extra_ring_gens):
    """M (x)_B B/(extra): same columns over the quotient presentation."""
    sub = m.over.quotient(extra_ring_gens)
    return ModulePresentation(sub, m.rank, m.columns)


def nodal_criteria_panel(m: ModulePresentation, shape=None):
    """All ten equivalent conditions for modules over k[x,y]/(xy), evaluated
    independently.  Returns a dict of booleans."""
    pres = m.over
    ring = pres.ring
    x, y = ring.var("x"), ring.var("y")
    if shape is None:
        z = FgAbGroup.free(1)
        grading = GradedRing(z, pres, [(1,), (-1,)])
        shape = ChartShape(pres, grading, avars=(), evars=(0, 1), base="field")
    panel = {}
    panel["graded_flat"], _ = graded_flat(m, shape)
    panel["tor_maximal_ideal"] = pa.tor1_is_zero(m, [x, y])
    panel["clutching_injective"] = _nodal_map_injective(m, x, y)
    mx = quotient_module(m, [x])
    my = quotient_module(m, [y])
    tor_x = pa.tor1_is_zero(m, [x])
    tor_y = pa.tor1_is_zero(m, [y])
    y_reg = regular_element_test(y, mx)
    x_reg = regular_element_test(x, my)
    gf_x = pa.tor1_is_zero(mx, [y])
    gf_y = pa.tor1_is_zero(my, [x])
    panel["tor_both_sides_regular"] = tor_x and y_reg and tor_y and x_reg
    panel["tor_both_sides_graded"] = tor_x and gf_x and tor_y and gf_y
    panel["tor_x_y_regular"] = tor_x and y_reg
    panel["tor_x_graded"] = tor_x and gf_x
    panel["tor_y_x_regular"] = tor_y and x_reg
    panel["tor_y_graded"] = tor_y and gf_y
    panel["localized"] = _localized_tor_vanishes(m, x, y)
    return panel


def _nodal_map_injective(m: ModulePresentation, x, y):
    """Injectivity of M/yM (+) M/xM -> M, (a, b) |-> xa + yb."""
    pres = m.over
    field = pres.ring.field
    r = m.rank
    # domain: rank 2r with relations from M in both blocks plus y (resp. x)
    cols = []
    for c in m.columns:
        cols.append(dict(c))
        cols.append({(mono, pos + r): v for (mono, pos), v in c.items()})
    for i in range(r):
        cols.append(pa._ring_mul_vec(pres, y, {(_zero_mono(pres), i): field.one()}))
        cols.append(pa._ring_mul_vec(pres, x, {(_zero_mono(pres), i + r): field.one()}))
    domain = ModulePresentation(pres, 2 * r, cols)
    phi = []
    for i in range(r):
        phi.append(pa._ring_mul_vec(pres, x, {(_zero_mono(pres), i): field.one()}))
    for i in range(r):
        phi.append(pa._ring_mul_vec(pres, y, {(_zero_mono(pres), i): field.one()}))
    _, kgens = pa.kernel_of_module_map(phi, domain, m)
    return all(domain.is_zero_elem(g) for g in kgens)


def _zero_mono(pres):
    return (0,) * pres.ring.nvars


def _localized_tor_vanishes(m: ModulePresentation, x, y):
    """The Tor_1(M, B/m) condition after localizing at m = (x, y): the Tor
    module is m-torsion, so it localizes to zero iff its annihilator is not
    contained in m."""
    pres_tor, zero = tor1(m, [x, y])
    if zero:
        return True
    ann = _annihilator(pres_tor)
    ring = pres_tor.over.ring
    probe = RingPresentation(ring, list(pres_tor.over.ideal) + ann +
                             [ring.var("x"), ring.var("y")])
    return probe.contains_one()


def _annihilator(m: ModulePresentation):
    """Generators of Ann(M) for a presented module."""
    over = m.over
    out = None
    for i in range(m.rank):
        # (relations : e_i) = {f : f e_i in span}
        quot = pa.kernel_of_matrix(over, [m.basis_elem(i)], m.rank, m.columns)
        gens = [{(mono, 0): c for (mono, p), c in g.items()} for g in quot]
        if out is None:
            out = gens
        else:
            out = _ideal_intersection(over, out, gens)
    return out or [over.ring.one()]


def _ideal_intersection(over: RingPresentation, gens1, gens2):
    """I cap J as the kernel of R -> R/I (+) R/J."""
    field = over.ring.field
    cols = []
    col = {}
    col[(_zero_mono(over), 0)] = field.one()
    col[(_zero_mono(over), 1)] = field.one()
    rels = [{(mono, 0): c for (mono, _), c in g.items()} for g in gens1]
    rels += [{(mono, 1): c for (mono, _), c in g.items()} for g in gens2]
    ker = pa.kernel_of_matrix(over, [col], 2, rels)
    return [{(mono, 0): c for (mono, p), c in g.items()} for g in ker]


# -- group algebras --------------------------------------------------------------


def group_algebra(field, g: FgAbGroup):
    """(GradedRing, shape) for k[G]: inverse pairs for free generators,
    torsion relations for the rest."""
    names = []
    degrees = []
    relations = []
    inverse_pairs = []
    idx = 0
    gens = g.generators()
    for i in range(g.rank):
        names += [f"u{i}", f"v{i}"]
        degrees += [gens[i], g.neg(gens[i])]
        inverse_pairs.append((idx, idx + 1))
        idx += 2
    for j, d in enumerate(g.torsion):
        names.append(f"w{j}")
        degrees.append(gens[g.rank + j])
        idx += 1
    ring = PolyRing(field, names)
    for i, j in inverse_pairs:
        relations.append(ring.sub(ring.mul(ring.var(i), ring.var(j)), ring.one()))
    pos = 2 * g.rank
    for j, d in enumerate(g.torsion):
        relations.append(ring.sub(ring.pow(ring.var(pos + j), d), ring.one()))
    pres = RingPresentation(ring, relations)
    gr = GradedRing(g, pres, degrees)
    gr.inverse_pairs = tuple(inverse_pairs)
    return gr, GroupAlgebraShape(gr, tuple(inverse_pairs))


@dataclass
class GradedModule:
    """Free module with degree shifts and homogeneous relation columns."""

    over: GradedRing
    shifts: tuple
    columns: list

    def __post_init__(self):
        self.shifts = tuple(self.over.group.reduce(s) for s in self.shifts)
        self.columns = [dict(c) for c in self.columns if c]
        for col in self.columns:
            degs = set()
            for (mono, pos), _ in col.items():
                d = self.over.group.add(self.over.degree_of_monomial(mono),
                                        self.shifts[pos])
                degs.add(d)
            if len(degs) > 1:
                raise NotHomogeneous("relation column is not homogeneous")

    def presentation(self):
        return ModulePresentation(self.over.pres, len(self.shifts), self.columns)


def degree_zero_part(gm: GradedModule):
    """The equivalence Mod(G, A[G]) -> Mod(A) at A = k: extract the
    coefficient matrix of the relations."""
    gr = gm.over
    field = gr.pres.ring.field
    base_ring = PolyRing(field, [])
    base = RingPresentation(base_ring, [])
    cols = []
    for col in gm.columns:
        nf_entries = {}
        for (mono, pos), c in col.items():
            entry = gr.pres.nf({(mono, 0): c})
            for (m2, _), c2 in entry.items():
                k = pos
                nf_entries[k] = field.add(nf_entries.get(k, field.zero()), c2)
        out = {((), p): c for p, c in nf_entries.items() if not field.is_zero(c)}
        if out:
            cols.append(out)
    return ModulePresentation(base, len(gm.shifts), cols)


def extend_scalars_group_algebra(base_mod: ModulePresentation, gr: GradedRing,
                                 shifts=None):
    """k-module back to a graded k[G]-module (degree-zero relations)."""
    if shifts is None:
        shifts = tuple(gr.group.zero() for _ in range(base_mod.rank))
    cols = []
    for col in base_mod.columns:
        out = {}
        for (_, pos), c in col.items():
            mono = gr.monomial_of_degree(gr.group.neg(shifts[pos]))
            if mono is None:
                raise UnsupportedShape("degree not realizable by a monomial")
            out[(mono, pos)] = c
        cols.append(out)
    return GradedModule(gr, shifts, cols)


def _flat_group_algebra(m, shape: GroupAlgebraShape):
    """Over (G, A[G]) with A = k a field, graded flatness is flatness over k,
    which always holds; the substance is the certified reduction to M_0."""
    if isinstance(m, GradedModule):
        m0 = degree_zero_part(m)
        back = extend_scalars_group_algebra(m0, shape.ring, m.shifts)
        ok = graded_modules_isomorphic(m, back)
        return True, {"criterion": "group algebra reduction",
                      "degree_zero_rank": m0.rank,
                      "roundtrip_certified": ok,
                      "verdict": True}
    return True, {"criterion": "group algebra reduction",
                  "verdict": True,
                  "note": "every module is flat over the base field"}


def graded_modules_isomorphic(gm1: GradedModule, gm2: GradedModule):
    """Certify the canonical identity-on-basis map is an isomorphism (the
    relation spans agree after normal forms)."""
    if gm1.shifts != gm2.shifts:
        return False
    p1, p2 = gm1.presentation(), gm2.presentation()
    return all(p2.is_zero_elem(c) for c in p1.columns) and \
        all(p1.is_zero_elem(c) for c in p2.columns)


def regrade(gr: GradedRing, gamma: GroupHom):
    """Regrade along an injective group hom (verdicts are invariant)."""
    if not gamma.is_injective():
        raise ValueError("regrading must be injective")
    out = GradedRing(gamma.target, gr.pres,
                     [gamma.apply(d) for d in gr.degrees])
    if hasattr(gr, "inverse_pairs"):
        out.inverse_pairs = gr.inverse_pairs
    return out


# -- the fallback finitely-generated-homogeneous-ideal test ----------------------


def graded_flat_on_ideal_family(m: ModulePresentation, ideals):
    """Exactness of 0 -> I -> A -> A/I -> 0 after tensoring, for each listed
    finitely generated homogeneous ideal: Tor_1(M, A/I) = 0.

    Complete only relative to the supplied family; used for cross-checks."""
    results = []
    for gens in ideals:
        results.append(pa.tor1_is_zero(m, list(gens)))
    return all(results), results


# -- filtrations by shifted semiprime quotients ----------------------------------


def monomial_filtration(alg: MonoidAlgebra, m: ModulePresentation, cap=64):
    """A filtration of a monomial module with successive quotients
    (k[P]/k[I_i]){g_i}, I_i prime; returns [(prime MonoidIdeal, shift)].

    The step submodule is generated by a homogeneous element with maximal
    annihilator among the window candidates."""
    pres = m.over
    ring = pres.ring
    current = [dict(c) for c in m.columns]
    layers = []
    for _ in range(cap):
        if vector_space_dimension(pres, m.rank, current) == 0:
            return layers
        cands = _filtration_candidates(alg, m.rank, current)
        if not cands:
            raise UnsupportedShape("no homogeneous candidate found")
        best = max(cands, key=lambda c: (len(c[1].generators), c[0]))
        (mono, pos), ann_ideal = best[0], best[1]
        layers.append((ann_ideal, (mono, pos)))
        current = current + [{(mono, pos): ring.field.one()}]
    raise UnsupportedShape("filtration did not terminate within the cap")


def _filtration_candidates(alg: MonoidAlgebra, rank, cols, window=4):
    pres = alg.pres
    ring = pres.ring
    mp = ModulePresentation(pres, rank, cols)
    out = []
    monos = _window_monomials(ring.nvars, window)
    for pos in range(rank):
        for mono in monos:
            elem = {(mono, pos): ring.field.one()}
            if mp.is_zero_elem(elem):
                continue
            ann = _monomial_annihilator(alg, mp, mono, pos, window)
            if ann is None:
                continue
            out.append(((mono, pos), ann))
    # keep only candidates whose annihilator is a prime monoid ideal
    out = [c for c in out if c[1].is_prime()]
    return out


def _window_monomials(nvars, window):
    monos = [(0,) * nvars]
    frontier = list(monos)
    for _ in range(window):
        nxt = []
        for m in frontier:
            for v in range(nvars):
                mm = tuple(e + (1 if i == v else 0) for i, e in enumerate(m))
                if mm not in monos:
                    monos.append(mm)
                    nxt.append(mm)
        frontier = nxt
    return monos


def _monomial_annihilator(alg: MonoidAlgebra, mp: ModulePresentation,
                          mono, pos, window):
    """Ann of a monomial class as a MonoidIdeal, from window monomials."""
    ring = mp.over.ring
    gens = []
    for w in _window_monomials(ring.nvars, window):
        if all(e == 0 for e in w):
            continue
        prod = tuple(a + b for a, b in zip(w, mono))
        if mp.is_zero_elem({(prod, pos): ring.field.one()}):
            gens.append(w)
    minimal = [w for w in gens
               if not any(w != v and all(a >= b for a, b in zip(w, v))
                          for v in gens)]
    elems = []
    for w in minimal:
        elt = alg.monoid.ambient.zero()
        for e, g in zip(w, alg.monoid.generators):
            elt = alg.monoid.ambient.add(elt, alg.monoid.ambient.scale(e, g))
        elems.append(elt)
    return MonoidIdeal(alg.monoid, elems)
