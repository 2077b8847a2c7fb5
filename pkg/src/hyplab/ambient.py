"""Exact lattice data for the five ambient threefolds.

Each ambient carries its Picard basis, the symmetric trilinear intersection
form on that basis, the canonical class, a reference ample class used for
curve degrees, the Noether-Lefschetz hypotheses under which curve classes on
a very general surface are restrictions of ambient classes, and the cone of
curve classes that the genus bounds quantify over.

Curve classes on a surface ``X`` of class ``D`` are written as ambient
divisor classes ``C``; the curve is ``C|_X`` and every degree is the triple
product ``(H, D, C)``.
"""

from __future__ import annotations

import enum
import itertools
import json
from functools import cached_property
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import InvalidParam, MismatchedAmbient, NonIntegralGenus


class Kind(str, enum.Enum):
    P1P1P1 = "P1P1P1"
    P2xP1 = "P2xP1"
    FexP1 = "FexP1"
    BlP3 = "BlP3"
    P111n = "P111n"


#: command-line spellings of each kind
ALIASES = {
    "p1p1p1": Kind.P1P1P1,
    "p2p1": Kind.P2xP1,
    "p2xp1": Kind.P2xP1,
    "fep1": Kind.FexP1,
    "fexp1": Kind.FexP1,
    "blp3": Kind.BlP3,
    "p111n": Kind.P111n,
}


def parse_kind(name) -> Kind:
    if isinstance(name, Kind):
        return name
    try:
        return Kind(name)
    except ValueError:
        pass
    try:
        return ALIASES[str(name).lower()]
    except KeyError:
        raise InvalidParam(f"unknown ambient kind {name!r}") from None


@dataclass(frozen=True)
class DivisorClass:
    """Integer combination of the Picard basis of one ambient.

    Coefficients are duck-typed so that the same arithmetic runs on sympy
    symbols in the identity tests; everything user-facing passes ints.
    """

    ambient_id: str
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    def _check(self, other: "DivisorClass"):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        if other.ambient_id != self.ambient_id:
            raise MismatchedAmbient(f"{self.ambient_id} vs {other.ambient_id}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return DivisorClass(self.ambient_id, (x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return DivisorClass(self.ambient_id, (x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return DivisorClass(self.ambient_id, (-x for x in self.coeffs))

    def __mul__(self, k):
        if isinstance(k, DivisorClass):
            return NotImplemented
        return DivisorClass(self.ambient_id, (k * x for x in self.coeffs))

    __rmul__ = __mul__

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coeffs)

    def __repr__(self):
        return f"DivisorClass({self.ambient_id}, {list(self.coeffs)})"


class Inequality(NamedTuple):
    """The half-space ``sum(coeffs[i] * x[i]) + const >= 0``."""

    coeffs: tuple
    const: int = 0

    def holds(self, x: Sequence) -> bool:
        return sum(c * v for c, v in zip(self.coeffs, x)) + self.const >= 0

    def to_dict(self):
        return {"coeffs": list(self.coeffs), "const": self.const}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(int(c) for c in d["coeffs"]), int(d.get("const", 0)))


def _nonneg(rank: int) -> tuple:
    return tuple(Inequality(tuple(int(i == j) for j in range(rank))) for i in range(rank))


def _symmetric_tensor(rank: int, entries: Mapping[tuple, int]):
    t = [[[0] * rank for _ in range(rank)] for _ in range(rank)]
    for idx, v in entries.items():
        for i, j, k in set(itertools.permutations(idx)):
            t[i][j][k] = v
    return tuple(tuple(tuple(row) for row in plane) for plane in t)


@dataclass(frozen=True)
class AmbientThreefold:
    kind: Kind
    params: tuple  # sorted (name, value) pairs
    basis_labels: tuple
    tensor: tuple
    canonical_coeffs: tuple
    reference_coeffs: tuple
    nl_predicate: tuple
    curve_cone: tuple

    @cached_property
    def picard_rank(self) -> int:
        return len(self.basis_labels)

    @property
    def param(self) -> dict:
        return dict(self.params)

    @cached_property
    def id(self) -> str:
        if not self.params:
            return self.kind.value
        inner = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.kind.value}({inner})"

    def divisor(self, *coeffs) -> DivisorClass:
        if len(coeffs) == 1 and not isinstance(coeffs[0], int) and hasattr(coeffs[0], "__iter__"):
            coeffs = tuple(coeffs[0])
        if len(coeffs) != self.picard_rank:
            raise InvalidParam(
                f"{self.id} has Picard rank {self.picard_rank}, got {len(coeffs)} coefficients"
            )
        return DivisorClass(self.id, coeffs)

    def basis(self, label: str) -> DivisorClass:
        i = self.basis_labels.index(label)
        return self.divisor(*(int(j == i) for j in range(self.picard_rank)))

    def zero(self) -> DivisorClass:
        return self.divisor(*([0] * self.picard_rank))

    @property
    def canonical(self) -> DivisorClass:
        return DivisorClass(self.id, self.canonical_coeffs)

    @property
    def reference_ample(self) -> DivisorClass:
        return DivisorClass(self.id, self.reference_coeffs)

    def own(self, *classes: DivisorClass):
        for c in classes:
            if not isinstance(c, DivisorClass):
                raise TypeError(f"expected DivisorClass, got {type(c).__name__}")
            if c.ambient_id != self.id:
                raise MismatchedAmbient(f"class on {c.ambient_id} used with {self.id}")
            if len(c.coeffs) != self.picard_rank:
                raise InvalidParam(f"class {c} has wrong length for {self.id}")

    def trilinear(self, x: Sequence, y: Sequence, z: Sequence):
        """Evaluate the intersection form on raw coefficient sequences."""
        total = 0
        for i, j, k, v in self._nonzero:
            total += v * x[i] * y[j] * z[k]
        return total

    @property
    def _nonzero(self):
        cached = self.__dict__.get("_nz")
        if cached is None:
            n = self.picard_rank
            cached = [
                (i, j, k, self.tensor[i][j][k])
                for i in range(n)
                for j in range(n)
                for k in range(n)
                if self.tensor[i][j][k] != 0
            ]
            object.__setattr__(self, "_nz", cached)
        return cached

    def nl_holds(self, D: DivisorClass) -> bool:
        return all(q.holds(D.coeffs) for q in self.nl_predicate)

    def in_curve_cone(self, C: DivisorClass) -> bool:
        return all(q.holds(C.coeffs) for q in self.curve_cone)

    # serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "params": dict(self.params),
            "basis": list(self.basis_labels),
            "tensor": [[list(row) for row in plane] for plane in self.tensor],
            "canonical": list(self.canonical_coeffs),
            "reference_ample": list(self.reference_coeffs),
            "nl_predicate": [q.to_dict() for q in self.nl_predicate],
            "curve_cone": [q.to_dict() for q in self.curve_cone],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: Mapping) -> "AmbientThreefold":
        kind = parse_kind(d["kind"])
        basis = tuple(d["basis"])
        n = len(basis)
        raw = d["tensor"]
        if len(raw) != n or any(len(p) != n or any(len(r) != n for r in p) for p in raw):
            raise InvalidParam("tensor shape does not match basis")
        tensor = tuple(tuple(tuple(int(v) for v in row) for row in plane) for plane in raw)
        for i, j, k in itertools.product(range(n), repeat=3):
            for p in itertools.permutations((i, j, k)):
                if tensor[p[0]][p[1]][p[2]] != tensor[i][j][k]:
                    raise InvalidParam("intersection tensor is not symmetric")
        canonical = tuple(int(v) for v in d["canonical"])
        reference = tuple(int(v) for v in d["reference_ample"])
        if len(canonical) != n or len(reference) != n:
            raise InvalidParam("canonical/reference class length does not match basis")
        return cls(
            kind=kind,
            params=tuple(sorted((str(k), int(v)) for k, v in dict(d.get("params", {})).items())),
            basis_labels=basis,
            tensor=tensor,
            canonical_coeffs=canonical,
            reference_coeffs=reference,
            nl_predicate=tuple(Inequality.from_dict(q) for q in d.get("nl_predicate", [])),
            curve_cone=tuple(Inequality.from_dict(q) for q in d.get("curve_cone", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "AmbientThreefold":
        return cls.from_dict(json.loads(text))


# Tensor entries below were obtained from oracles.derive_tensor and frozen;
# tests/test_oracles.py re-derives them from the degree/adjunction identities.
def _frozen_tensor(kind: Kind, p: Mapping[str, int]):
    if kind is Kind.P1P1P1:
        return 3, {(0, 1, 2): 1}
    if kind is Kind.P2xP1:
        return 2, {(0, 0, 1): 1}
    if kind is Kind.FexP1:
        return 3, {(0, 0, 2): -p["e"], (0, 1, 2): 1}
    if kind is Kind.BlP3:
        return 2, {(0, 0, 0): 1, (1, 1, 1): 1}
    n = p["n"]
    return 2, {(0, 0, 0): n * n, (0, 0, 1): n, (0, 1, 1): 1}


def make_ambient(kind, params: Mapping[str, int] | None = None, **kw) -> AmbientThreefold:
    """Build one of the five ambients.

    ``FexP1`` needs ``e >= 1`` and ``P111n`` needs ``n >= 1``; for ``P111n``
    the returned lattice is the resolution with basis ``(H, F)``, where
    ``H`` is the pullback of ``O(n)`` and ``nF = H - E``.
    """
    kind = parse_kind(kind)
    p = dict(params or {})
    p.update(kw)
    if kind is Kind.FexP1:
        if "e" not in p:
            raise InvalidParam("FexP1 needs parameter e")
        e = int(p["e"])
        if e <= 0:
            raise InvalidParam(f"FexP1 needs e >= 1 (e = 0 is P1P1P1), got e={e}")
        p = {"e": e}
    elif kind is Kind.P111n:
        if "n" not in p:
            raise InvalidParam("P111n needs parameter n")
        n = int(p["n"])
        if n <= 0:
            raise InvalidParam(f"P111n needs n >= 1, got n={n}")
        p = {"n": n}
    else:
        if p:
            raise InvalidParam(f"{kind.value} takes no parameters, got {sorted(p)}")
        p = {}

    rank, entries = _frozen_tensor(kind, p)
    tensor = _symmetric_tensor(rank, entries)
    if kind is Kind.P1P1P1:
        labels = ("H1", "H2", "H3")
        canonical, reference = (-2, -2, -2), (1, 1, 1)
        nl = tuple(Inequality(q.coeffs, -2) for q in _nonneg(3))
        cone = _nonneg(3)
    elif kind is Kind.P2xP1:
        labels = ("H1", "H2")
        canonical, reference = (-3, -2), (1, 1)
        nl = (Inequality((1, 0), -3), Inequality((0, 1), -2))
        cone = _nonneg(2)
    elif kind is Kind.FexP1:
        e = p["e"]
        labels = ("E", "F", "H")
        canonical, reference = (-2, -(e + 2), -2), (1, e + 1, 1)
        nl = (Inequality((1, 0, 0), -2), Inequality((0, 1, 0), -(e + 2)), Inequality((0, 0, 1), -2))
        cone = _nonneg(3)
    elif kind is Kind.BlP3:
        # coefficients (h, x) stand for hH + xE, so aH - bE is (a, -b)
        labels = ("H", "E")
        canonical, reference = (-4, 2), (2, -1)
        nl = (Inequality((1, 0), -4), Inequality((0, -1), -2))
        cone = (Inequality((1, 1)), Inequality((0, -1)))
    else:
        n = p["n"]
        labels = ("H", "F")
        canonical, reference = (-2, n - 3), (0, 1)
        nl = ()
        cone = (Inequality((1, 0)), Inequality((-1, 0)), Inequality((0, 1)))
    return AmbientThreefold(
        kind=kind,
        params=tuple(sorted(p.items())),
        basis_labels=labels,
        tensor=tensor,
        canonical_coeffs=canonical,
        reference_coeffs=reference,
        nl_predicate=nl,
        curve_cone=cone,
    )


def triple(A: AmbientThreefold, D1: DivisorClass, D2: DivisorClass, D3: DivisorClass):
    A.own(D1, D2, D3)
    return A.trilinear(D1.coeffs, D2.coeffs, D3.coeffs)


def adjoint_canonical(A: AmbientThreefold, D: DivisorClass) -> DivisorClass:
    """``K_A + D``, the ambient class restricting to ``K_X``."""
    A.own(D)
    return A.canonical + D


def curve_degree(A: AmbientThreefold, D: DivisorClass, C: DivisorClass, Href: DivisorClass | None = None):
    return triple(A, A.reference_ample if Href is None else Href, D, C)


def complete_intersection_genus(A: AmbientThreefold, D1: DivisorClass, D2: DivisorClass) -> int:
    """Arithmetic genus of the curve ``D1 ∩ D2`` by adjunction."""
    two_g_minus_2 = triple(A, A.canonical + D1 + D2, D1, D2)
    if two_g_minus_2 % 2:
        raise NonIntegralGenus(f"2g-2 = {two_g_minus_2} is odd for {D1} ∩ {D2}")
    return two_g_minus_2 // 2 + 1


def restrict_to_X(A: AmbientThreefold, C: DivisorClass) -> DivisorClass:
    """Canonical representative of ``C|_X`` in the ``P111n`` model.

    On ``P111n`` the surface misses ``E``, so ``H|_X = nF|_X``; classes are
    returned as multiples of ``F``.  Other ambients return ``C`` unchanged.
    """
    A.own(C)
    if A.kind is not Kind.P111n:
        return C
    n = A.param["n"]
    return A.divisor(0, C[1] + n * C[0])


def load_ambient(path) -> AmbientThreefold:
    with open(path) as fh:
        return AmbientThreefold.from_json(fh.read())


def standard_ambients(e_values: Iterable[int] = (1, 2, 3), n_values: Iterable[int] = (1, 2, 3)):
    yield make_ambient(Kind.P1P1P1)
    yield make_ambient(Kind.P2xP1)
    for e in e_values:
        yield make_ambient(Kind.FexP1, e=e)
    yield make_ambient(Kind.BlP3)
    for n in n_values:
        yield make_ambient(Kind.P111n, n=n)
