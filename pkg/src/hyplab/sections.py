"""Monomial section spaces over the Cox rings of the ambients.

Global sections of a class ``D`` are spanned by the Cox monomials of
multidegree ``D``.  Evaluation at a point is evaluation of the monomials at
chosen Cox coordinates; the value is only defined up to a common nonzero
factor, which never changes which sections vanish.

Section-dominating checks are done at one point per torus orbit.  Every
space and every multiplication map here is equivariant for the torus, and
scaling the coordinates of a point by a torus element multiplies each
monomial by a nonzero scalar, i.e. it acts by an invertible diagonal matrix
on both source and target.  Ranks are therefore constant along orbits, and
the ambients (the resolution, for P(1,1,1,n)) have finitely many orbits,
one per allowed vanishing pattern of the Cox variables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .ambient import AmbientThreefold, DivisorClass, Kind, triple
from .errors import EmptyCollection, InvalidPoint, PreconditionFailed
from .linalg import EchelonBasis


@dataclass(frozen=True)
class CoxPresentation:
    names: tuple
    degrees: tuple  # one Picard coefficient tuple per variable
    forbidden: tuple  # primitive collections: variable sets that never vanish together
    grading: tuple  # linear form positive on every variable degree

    @property
    def vanishing_patterns(self) -> tuple:
        """All variable subsets allowed to vanish together, empty set first."""
        cached = self.__dict__.get("_patterns")
        if cached is None:
            n = len(self.names)
            out = []
            for size in range(n + 1):
                for combo in itertools.combinations(range(n), size):
                    s = frozenset(combo)
                    if not any(f <= s for f in self.forbidden):
                        out.append(s)
            cached = tuple(out)
            object.__setattr__(self, "_patterns", cached)
        return cached

    def pattern_names(self, pattern) -> tuple:
        return tuple(self.names[i] for i in sorted(pattern))

    def representative(self, pattern) -> tuple:
        """Point with the pattern's coordinates 0 and all others 1."""
        return tuple(Fraction(0) if i in pattern else Fraction(1) for i in range(len(self.names)))

    def pattern_of(self, point: Sequence) -> frozenset:
        if len(point) != len(self.names):
            raise InvalidPoint(f"point needs {len(self.names)} coordinates, got {len(point)}")
        zeros = frozenset(i for i, x in enumerate(point) if x == 0)
        if any(f <= zeros for f in self.forbidden):
            raise InvalidPoint(
                f"coordinates {self.pattern_names(zeros)} cannot vanish together"
            )
        return zeros


def _cox(names, degrees, forbidden, grading):
    idx = {n: i for i, n in enumerate(names)}
    return CoxPresentation(
        names=tuple(names),
        degrees=tuple(tuple(d) for d in degrees),
        forbidden=tuple(frozenset(idx[v] for v in f) for f in forbidden),
        grading=tuple(grading),
    )


@lru_cache(maxsize=None)
def cox_presentation(A: AmbientThreefold) -> CoxPresentation:
    k = A.kind
    if k is Kind.P1P1P1:
        return _cox(
            ["x0", "x1", "y0", "y1", "z0", "z1"],
            [(1, 0, 0), (1, 0, 0), (0, 1, 0), (0, 1, 0), (0, 0, 1), (0, 0, 1)],
            [("x0", "x1"), ("y0", "y1"), ("z0", "z1")],
            (1, 1, 1),
        )
    if k is Kind.P2xP1:
        return _cox(
            ["x", "y", "z", "s", "t"],
            [(1, 0), (1, 0), (1, 0), (0, 1), (0, 1)],
            [("x", "y", "z"), ("s", "t")],
            (1, 1),
        )
    if k is Kind.FexP1:
        e = A.param["e"]
        return _cox(
            ["t0", "t1", "x0", "x1", "s0", "s1"],
            [(0, 1, 0), (0, 1, 0), (1, 0, 0), (1, e, 0), (0, 0, 1), (0, 0, 1)],
            [("t0", "t1"), ("x0", "x1"), ("s0", "s1")],
            (1, 1, 1),
        )
    if k is Kind.BlP3:
        return _cox(
            ["x1", "x2", "x3", "x4", "x5"],
            [(1, -1), (1, -1), (1, -1), (1, 0), (0, 1)],
            [("x1", "x2", "x3"), ("x4", "x5")],
            (2, 1),
        )
    n = A.param["n"]
    # u cuts out the exceptional divisor E = H - nF, v is the weight-n coordinate
    return _cox(
        ["x", "y", "z", "u", "v"],
        [(0, 1), (0, 1), (0, 1), (1, -n), (1, 0)],
        [("x", "y", "z"), ("u", "v")],
        (n + 1, 1),
    )


@dataclass(frozen=True)
class SectionSpace:
    ambient_id: str
    divisor: DivisorClass
    basis: tuple
    index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {m: i for i, m in enumerate(self.basis)})

    def __len__(self):
        return len(self.basis)

    @property
    def h0(self) -> int:
        return len(self.basis)


def _solver(cox: CoxPresentation):
    """Pick variables whose degrees form a unimodular basis if possible."""
    r = len(cox.degrees[0])
    nvars = len(cox.degrees)
    best = None
    for combo in itertools.combinations(range(nvars - 1, -1, -1), r):
        mat = [[Fraction(cox.degrees[v][row]) for v in combo] for row in range(r)]
        det, inv = _det_inv(mat)
        if det == 0:
            continue
        if abs(det) == 1:
            return combo, inv
        if best is None:
            best = (combo, inv)
    return best


def _det_inv(mat):
    n = len(mat)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            return 0, None
        if p != c:
            aug[c], aug[p] = aug[p], aug[c]
            det = -det
        det *= aug[c][c]
        piv = aug[c][c]
        aug[c] = [v / piv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return det, [row[n:] for row in aug]


def _enumerate(cox: CoxPresentation, target: tuple) -> list:
    r = len(target)
    nvars = len(cox.names)
    dep, inv = _solver(cox)
    free = [v for v in range(nvars) if v not in dep]
    w = cox.grading
    wdeg = [sum(a * b for a, b in zip(w, d)) for d in cox.degrees]
    total_w = sum(a * b for a, b in zip(w, target))
    out = []
    if total_w < 0:
        return out
    exps = [0] * nvars

    def finish(rem):
        sol = [sum(inv[i][j] * rem[j] for j in range(r)) for i in range(r)]
        for v, s in zip(dep, sol):
            if s.denominator != 1 or s < 0:
                return
            exps[v] = int(s)
        out.append(tuple(exps))

    def rec(pos, rem, rem_w):
        if pos == len(free):
            finish(rem)
            return
        v = free[pos]
        d = cox.degrees[v]
        for k in range(rem_w // wdeg[v] + 1):
            exps[v] = k
            rec(pos + 1, [t - k * x for t, x in zip(rem, d)], rem_w - k * wdeg[v])
        exps[v] = 0

    rec(0, list(target), total_w)
    return out


@lru_cache(maxsize=4096)
def _basis_cached(A: AmbientThreefold, coeffs: tuple) -> tuple:
    monos = _enumerate(cox_presentation(A), coeffs)
    return tuple(sorted(set(monos), key=lambda m: (sum(m), m), reverse=True))


def monomial_basis(A: AmbientThreefold, D: DivisorClass) -> SectionSpace:
    """Cox monomials of multidegree ``D`` in graded lexicographic order."""
    A.own(D)
    return SectionSpace(A.id, D, _basis_cached(A, tuple(int(x) for x in D.coeffs)))


def multidegree(A: AmbientThreefold, mono: Sequence[int]) -> tuple:
    cox = cox_presentation(A)
    r = A.picard_rank
    return tuple(sum(e * cox.degrees[v][i] for v, e in enumerate(mono)) for i in range(r))


def _values(space: SectionSpace, point: Sequence) -> list:
    vals = []
    for m in space.basis:
        v = Fraction(1)
        for x, e in zip(point, m):
            if e:
                v *= Fraction(x) ** e
                if v == 0:
                    break
        vals.append(v)
    return vals


def _kernel_rows(values: Sequence) -> list[dict]:
    """Sparse spanning set of the kernel of evaluation, independent rows."""
    nonzero = [i for i, v in enumerate(values) if v != 0]
    rows = [{i: Fraction(1)} for i, v in enumerate(values) if v == 0]
    if nonzero:
        j = nonzero[0]
        for i in nonzero[1:]:
            rows.append({i: Fraction(1), j: -values[i] / values[j]})
    return rows


def vanishing_subspace(A: AmbientThreefold, D: DivisorClass, point: Sequence) -> list[tuple]:
    """Sections of ``D`` vanishing at ``point`` as coordinate vectors.

    ``point`` gives one rational coordinate per Cox variable.
    """
    cox = cox_presentation(A)
    cox.pattern_of(point)
    space = monomial_basis(A, D)
    out = []
    for row in _kernel_rows(_values(space, point)):
        vec = [Fraction(0)] * len(space)
        for c, v in row.items():
            vec[c] = v
        out.append(tuple(vec))
    return out


def _generated_at(space: SectionSpace, pattern) -> bool:
    return any(all(m[i] == 0 for i in pattern) for m in space.basis)


def is_globally_generated(A: AmbientThreefold, D: DivisorClass) -> bool:
    space = monomial_basis(A, D)
    if not space.basis:
        return False
    return all(_generated_at(space, p) for p in cox_presentation(A).vanishing_patterns)


@dataclass(frozen=True)
class StratumRank:
    pattern: tuple  # names of the vanishing Cox variables
    required_rank: int
    achieved_rank: int
    products: int  # distinct product vectors fed to the rank computation
    columns: int
    matrix: tuple | None = None


@dataclass(frozen=True)
class SDReport:
    verdict: bool
    per_stratum: tuple
    failing_stratum: tuple | None
    reason: str

    def to_dict(self, verbose: bool = False) -> dict:
        strata = []
        for s in self.per_stratum:
            d = {
                "pattern": list(s.pattern),
                "required_rank": s.required_rank,
                "achieved_rank": s.achieved_rank,
                "rows": s.products,
                "cols": s.columns,
            }
            if verbose and s.matrix is not None:
                d["matrix"] = [[[c, str(v)] for c, v in sorted(row.items())] for row in s.matrix]
            strata.append(d)
        return {
            "verdict": self.verdict,
            "failing_stratum": list(self.failing_stratum) if self.failing_stratum is not None else None,
            "reason": self.reason,
            "per_stratum": strata,
        }


def _product_rows(E_space, L_space, rest_space, point):
    vals = _values(L_space, point)
    seen = set()
    rows = []
    for krow in _kernel_rows(vals):
        for m in rest_space.basis:
            prod = {}
            for j, c in krow.items():
                mono = tuple(a + b for a, b in zip(L_space.basis[j], m))
                col = E_space.index[mono]
                prod[col] = prod.get(col, 0) + c
            prod = {k: v for k, v in prod.items() if v != 0}
            if not prod:
                continue
            key = frozenset(prod.items())
            if key not in seen:
                seen.add(key)
                rows.append(prod)
    return rows


def stratum_rank(A: AmbientThreefold, E: DivisorClass, L_list: Sequence[DivisorClass], point, keep_matrix=False) -> StratumRank:
    """Required and achieved rank of the multiplication map at one point."""
    cox = cox_presentation(A)
    pattern = cox.pattern_of(point)
    E_space = monomial_basis(A, E)
    E_vals = _values(E_space, point)
    required = len(E_space) - (1 if any(v != 0 for v in E_vals) else 0)
    rows = []
    for L in L_list:
        rows.extend(_product_rows(E_space, monomial_basis(A, L), monomial_basis(A, E - L), point))
    basis = EchelonBasis()
    for r in rows:
        basis.add(r)
        if basis.rank >= required:
            break
    return StratumRank(
        pattern=cox.pattern_names(pattern),
        required_rank=required,
        achieved_rank=basis.rank,
        products=len(rows),
        columns=len(E_space),
        matrix=tuple(rows) if keep_matrix else None,
    )


def is_section_dominating(
    A: AmbientThreefold,
    E: DivisorClass,
    L_list: Sequence[DivisorClass],
    *,
    strict: bool = False,
    verbose: bool = False,
) -> SDReport:
    """Check that ``L_list`` is a section-dominating collection for ``E``.

    Hypothesis failures (a trivial or non globally generated ``L``, or
    ``E - L`` not globally generated) make the verdict false and are named
    in ``reason``; with ``strict=True`` they raise ``PreconditionFailed``.
    Ranks are reported for every stratum either way.
    """
    L_list = list(L_list)
    if not L_list:
        raise EmptyCollection("need at least one line bundle")
    A.own(E, *L_list)
    problems = []
    if E.is_zero() or not is_globally_generated(A, E):
        problems.append(f"E={list(E.coeffs)} is not a nontrivial globally generated class")
    for L in L_list:
        if L.is_zero():
            problems.append(f"L={list(L.coeffs)} is trivial")
        elif not is_globally_generated(A, L):
            problems.append(f"L={list(L.coeffs)} is not globally generated")
        if not is_globally_generated(A, E - L):
            problems.append(f"E-L={list((E - L).coeffs)} is not globally generated")
    if problems and strict:
        raise PreconditionFailed(problems[0], "; ".join(problems))

    cox = cox_presentation(A)
    per = []
    failing = None
    for pattern in cox.vanishing_patterns:
        s = stratum_rank(A, E, L_list, cox.representative(pattern), keep_matrix=verbose)
        per.append(s)
        if failing is None and s.achieved_rank != s.required_rank:
            failing = s.pattern
    ok_ranks = failing is None
    if problems:
        reason = "; ".join(problems)
    elif ok_ranks:
        reason = "surjective at every torus-orbit representative"
    else:
        reason = f"rank deficit at stratum where {', '.join(failing) or 'no coordinate'} vanish"
    return SDReport(
        verdict=ok_ranks and not problems,
        per_stratum=tuple(per),
        failing_stratum=failing,
        reason=reason,
    )


def lm_degree_bound(A: AmbientThreefold, L: DivisorClass, D: DivisorClass, C: DivisorClass):
    """Lower bound ``-deg L|_C`` for a rank-one quotient of ``M_L`` on ``C``."""
    return -triple(A, L, D, C)
