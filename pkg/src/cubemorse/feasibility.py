"""Exact rational feasibility for small homogeneous sign systems.

Only a handful of variables and constraints ever occur (sign chambers of at
most ten functionals in four unknowns), so plain Fourier-Motzkin elimination
with back substitution is both exact and fast enough.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Row = tuple[Fraction, ...]


def _as_row(r: Sequence) -> Row:
    return tuple(Fraction(x) for x in r)


def nullspace(rows: Sequence[Sequence], dim: int) -> list[Row]:
    """Basis of {x : r.x = 0 for every row}, via reduced row echelon form."""
    m = [list(_as_row(r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(dim):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * dim
        x[f] = Fraction(1)
        for i, c in enumerate(pivots):
            x[c] = -m[i][f]
        basis.append(tuple(x))
    return basis


def _pick(lo: Fraction | None, hi: Fraction | None) -> Fraction | None:
    """A simple value in [lo, hi]: the integer nearest zero if one fits, else the midpoint."""
    if lo is not None and hi is not None and lo > hi:
        return None
    candidates = [Fraction(0)]
    if lo is not None:
        candidates.append(Fraction(math.ceil(lo)))
    if hi is not None:
        candidates.append(Fraction(math.floor(hi)))
    for c in sorted(candidates, key=lambda c: (abs(c), c)):
        if (lo is None or c >= lo) and (hi is None or c <= hi):
            return c
    return (lo + hi) / 2


def solve_inequalities(system: list[tuple[Row, Fraction]], dim: int) -> Row | None:
    """A point with a.x >= b for every (a, b), or None if there is none."""
    if dim == 0:
        return () if all(b <= 0 for _, b in system) else None
    k = dim - 1
    lower, upper, rest = [], [], []
    for a, b in system:
        if a[k] > 0:
            lower.append((a, b))
        elif a[k] < 0:
            upper.append((a, b))
        else:
            rest.append((a[:k], b))
    # combine every lower bound on x_k with every upper bound
    for al, bl in lower:
        for au, bu in upper:
            cl, cu = al[k], -au[k]
            a = tuple(cu * x + cl * y for x, y in zip(al[:k], au[:k]))
            rest.append((a, cu * bl + cl * bu))
    rest = _dedupe(rest)
    head = solve_inequalities(rest, k)
    if head is None:
        return None

    def bound(a, b):
        return (b - sum(x * y for x, y in zip(a[:k], head))) / a[k]

    lo = max((bound(a, b) for a, b in lower), default=None)
    hi = min((bound(a, b) for a, b in upper), default=None)
    value = _pick(lo, hi)
    if value is None:
        return None
    return head + (value,)


def _dedupe(system):
    seen = {}
    for a, b in system:
        if all(x == 0 for x in a):
            seen.setdefault(("trivial", b), (a, b))
            continue
        # scale to a canonical first nonzero entry of magnitude one
        s = abs(next(x for x in a if x != 0))
        key = (tuple(x / s for x in a),)
        prev = seen.get(key)
        if prev is None or b / s > prev[1] / (abs(next(x for x in prev[0] if x != 0))):
            seen[key] = (a, b)
    return list(seen.values())


def feasible_point(equalities: Sequence[Sequence], positives: Sequence[Sequence],
                   dim: int) -> Row | None:
    """Rational x with e.x = 0 for every equality row and p.x > 0 for every positive row.

    The system is homogeneous, so strict inequalities are normalised to
    p.x >= 1 without loss of generality.
    """
    basis = nullspace(equalities, dim)
    if not basis:
        return None if positives else tuple(Fraction(0) for _ in range(dim))
    # substitute x = sum y_j basis_j
    reduced = [(tuple(sum(Fraction(pi) * bj[i] for i, pi in enumerate(p)) for bj in basis),
                Fraction(1)) for p in positives]
    y = solve_inequalities(reduced, len(basis))
    if y is None:
        return None
    return tuple(sum(yj * bj[i] for yj, bj in zip(y, basis)) for i in range(dim))
