"""Exact rank of integer vectors by fraction-free sparse elimination.

Rows are dicts ``{column: int}``.  Each new row is reduced against the
current echelon basis by integer cross-multiplication (no division except by
the row gcd), so entries stay integral and small for the 0/±1 matrices that
arise from monomial products.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping


def _normalize(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {c: v // g for c, v in row.items()}
    lead = min(row)
    if row[lead] < 0:
        row = {c: -v for c, v in row.items()}
    return row


def integral_row(row: Mapping[int, object]) -> dict:
    """Clear denominators of a rational sparse row."""
    den = 1
    for v in row.values():
        d = Fraction(v).denominator
        den = den * d // gcd(den, d)
    return {c: int(Fraction(v) * den) for c, v in row.items() if v != 0}


class EchelonBasis:
    """Incrementally maintained row-echelon basis over the integers."""

    def __init__(self):
        self.pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: Mapping[int, object]) -> bool:
        """Insert a row; return True when it increased the rank."""
        cur = integral_row(row)
        while cur:
            lead = min(cur)
            piv = self.pivots.get(lead)
            if piv is None:
                self.pivots[lead] = _normalize(cur)
                return True
            a, b = piv[lead], cur[lead]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {c: fa * v for c, v in cur.items()}
            for c, v in piv.items():
                w = new.get(c, 0) - fb * v
                if w:
                    new[c] = w
                else:
                    new.pop(c, None)
            cur = _normalize(new) if new else new
        return False


def rank(rows: Iterable[Mapping[int, object]], stop_at: int | None = None) -> int:
    basis = EchelonBasis()
    for r in rows:
        basis.add(r)
        if stop_at is not None and basis.rank >= stop_at:
            break
    return basis.rank
