"""Extreme rays of small rational polyhedral cones given by inequalities."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd
from typing import Sequence

from .ambient import Inequality


def _nullspace_vector(rows: Sequence[Sequence[int]], dim: int):
    """Return a generator of the one-dimensional kernel of ``rows``, or None."""
    m = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(dim):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(dim) if c not in pivots]
    if len(free) != 1:
        return None
    f = free[0]
    v = [Fraction(0)] * dim
    v[f] = Fraction(1)
    for i, c in enumerate(pivots):
        v[c] = -m[i][f]
    return v


def primitive(v: Sequence) -> tuple:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def extreme_rays(inequalities: Sequence[Inequality], dim: int) -> list[tuple]:
    """Primitive generators of the extreme rays of ``{x : q(x) >= 0}``.

    Brute force over (dim-1)-subsets of tight constraints; fine for the
    rank <= 3 cones used here.  Assumes the cone is pointed.
    """
    rays = set()
    rows = [q.coeffs for q in inequalities]
    for subset in itertools.combinations(rows, dim - 1):
        v = _nullspace_vector(subset, dim)
        if v is None:
            continue
        for cand in (v, [-x for x in v]):
            if all(sum(a * b for a, b in zip(r, cand)) >= 0 for r in rows):
                rays.add(primitive(cand))
    rays.discard(tuple([0] * dim))
    return sorted(rays, reverse=True)
