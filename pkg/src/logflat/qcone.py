"""Exact rational linear feasibility by Fourier-Motzkin elimination.

Small systems only (the monoid layer keeps generator counts in single
digits).  Constraints are pairs (coeffs, rhs) meaning  sum coeffs*x >= rhs,
with Fraction arithmetic throughout.
"""

from __future__ import annotations

from fractions import Fraction


def _norm(con):
    coeffs, rhs = con
    return tuple(Fraction(c) for c in coeffs), Fraction(rhs)


def feasible_point(constraints, nvars):
    """A rational point satisfying all constraints, or None."""
    cons = [_norm(c) for c in constraints]
    return _solve(cons, nvars)


def _solve(cons, nvars):
    cons = list(dict.fromkeys(cons))
    if nvars == 0:
        for coeffs, rhs in cons:
            if rhs > 0:
                return None
        return ()
    k = nvars - 1
    pos, neg, rest = [], [], []
    for coeffs, rhs in cons:
        a = coeffs[k]
        if a > 0:
            pos.append((coeffs, rhs))
        elif a < 0:
            neg.append((coeffs, rhs))
        else:
            rest.append((coeffs[:k], rhs))
    projected = list(rest)
    for pc, pr in pos:
        for nc, nr in neg:
            a, b = pc[k], -nc[k]
            # b*(pc >= pr) + a*(nc >= nr), variable k cancels
            coeffs = tuple(b * pc[i] + a * nc[i] for i in range(k))
            projected.append((coeffs, b * pr + a * nr))
    inner = _solve(projected, k)
    if inner is None:
        return None
    lo, hi = None, None
    for coeffs, rhs in pos:
        bound = (rhs - sum(c * x for c, x in zip(coeffs[:k], inner))) / coeffs[k]
        lo = bound if lo is None or bound > lo else lo
    for coeffs, rhs in neg:
        bound = (rhs - sum(c * x for c, x in zip(coeffs[:k], inner))) / coeffs[k]
        hi = bound if hi is None or bound < hi else hi
    if lo is None and hi is None:
        val = Fraction(0)
    elif lo is None:
        val = hi
    elif hi is None:
        val = lo
    else:
        val = (lo + hi) / 2
    return tuple(inner) + (val,)


def positive_functional(vectors, dim):
    """lambda with lambda . v >= 1 for every v, or None (0 in the convex hull)."""
    cons = [(v, 1) for v in vectors]
    return feasible_point(cons, dim)


def face_functional(zero_vectors, positive_vectors, dim):
    """lambda vanishing on the first family, >= 1 on the second, or None."""
    cons = []
    for v in zero_vectors:
        cons.append((v, 0))
        cons.append((tuple(-x for x in v), 0))
    for v in positive_vectors:
        cons.append((v, 1))
    return feasible_point(cons, dim)


def nonneg_combination_hits(basis_cols, i, n):
    """Whether some c has (B c)_j >= 0 for all j and (B c)_i >= 1, for the
    n-row matrix B given by columns.  Rational feasibility suffices: the
    column span is a lattice, so solutions scale to integer ones."""
    k = len(basis_cols)
    if k == 0:
        return False
    rows = [tuple(Fraction(col[j]) for col in basis_cols) for j in range(n)]
    cons = [(rows[j], 0) for j in range(n)]
    cons.append((rows[i], 1))
    return feasible_point(cons, k) is not None
