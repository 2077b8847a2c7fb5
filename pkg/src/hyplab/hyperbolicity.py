"""Genus bounds, special curves, classification and certified epsilon.

For a curve ``C`` on a very general surface ``X`` of class ``D`` meeting the
open orbit, and a section-dominating collection ``L_1..L_u``,

    2g - 2 = K_X.C + deg N  >=  (K_A + D).D.C - max_i L_i.D.C,

because some ``M_{L_i}`` maps generically onto the rank-one normal sheaf and
a rank-one quotient of ``M_L`` on ``C`` has degree at least ``-L.C``.

Each hyperbolic class gets a :class:`Plan`: the bundles ``S`` whose
non-torsion case is bounded (plainly, or through the scroll refinement), the
special curves a curve must be if every bundle in ``S`` has torsion image,
and the curves ``X`` cuts out of the complement of the open orbit.  The
certified genus bound of a class is the minimum over ``S``; epsilon is the
minimum of that bound over degree on the extreme rays of the curve cone,
capped by the special curves' exact genera.  A minimum of linear forms over
a positive linear form attains its infimum on a polyhedral cone at an
extreme ray, so the rays suffice.
"""

from __future__ import annotations

import concurrent.futures
import enum
import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .ambient import (
    AmbientThreefold,
    DivisorClass,
    Kind,
    complete_intersection_genus,
    curve_degree,
    restrict_to_X,
    triple,
)
from .cone import extreme_rays
from .errors import (
    EmptyCollection,
    FamilyNotApplicable,
    InvalidParam,
    InvariantViolation,
    NotHyperbolicInput,
)
from .oracles import plane_curve_genus, surface, surface_curve_genus


def _coeffs(c):
    return None if c is None else list(c.coeffs)


def _summary(certs):
    # the weakest bundle certificate per ray plus every exclusion
    by_ray = {}
    rest = []
    for c in certs:
        if c.bound_kind is BoundKind.SpecialCurveExclusion:
            rest.append(c)
            continue
        key = c.curve.coeffs
        if key not in by_ray or c.genus_bound < by_ray[key].genus_bound:
            by_ray[key] = c
    return tuple(by_ray.values()) + tuple(rest)


class BoundKind(str, enum.Enum):
    CorMain = "CorMain"
    ScrollRefined = "ScrollRefined"
    SpecialCurveExclusion = "SpecialCurveExclusion"


class WitnessKind(str, enum.Enum):
    BirationalToRational = "BirationalToRational"
    EllipticFiberFamily = "EllipticFiberFamily"
    DegeneratingGenus2Family = "DegeneratingGenus2Family"
    BitangentPreimage = "BitangentPreimage"
    ConeRuling = "ConeRuling"
    ExceptionalPlaneSection = "ExceptionalPlaneSection"
    SingularQuarticFamily = "SingularQuarticFamily"
    ProductRuling = "ProductRuling"
    QuarticK3 = "QuarticK3"


class Status(str, enum.Enum):
    Hyperbolic = "Hyperbolic"
    NotHyperbolic = "NotHyperbolic"
    Open = "Open"
    Invalid = "Invalid"


@dataclass(frozen=True)
class SpecialCurve:
    """A curve the bundle bounds do not reach, with its exact genus."""

    name: str
    description: str
    genus: int
    curve: DivisorClass | None  # ambient class whose restriction to X it is

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "genus": self.genus,
            "curve": _coeffs(self.curve),
        }


@dataclass(frozen=True)
class BoundCertificate:
    line_bundle: DivisorClass | None
    bound_kind: BoundKind
    normal_degree_bound: int | None
    genus_bound: int  # lower bound for 2g - 2
    excluded_families: tuple = ()
    curve: DivisorClass | None = None

    def to_dict(self) -> dict:
        return {
            "line_bundle": _coeffs(self.line_bundle),
            "bound_kind": self.bound_kind.value,
            "normal_degree_bound": self.normal_degree_bound,
            "genus_bound": self.genus_bound,
            "excluded_families": [s.to_dict() for s in self.excluded_families],
            "curve": _coeffs(self.curve),
        }


@dataclass(frozen=True)
class WitnessFamily:
    kind: WitnessKind
    description: str
    genus_attained: int
    generic_genus: int | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "description": self.description,
            "genus_attained": self.genus_attained,
            "generic_genus": self.generic_genus,
        }


@dataclass(frozen=True)
class Verdict:
    ambient: AmbientThreefold
    divisor: DivisorClass
    status: Status
    epsilon: Fraction | None = None
    certificates: tuple = ()
    witness: WitnessFamily | None = None
    reason: str = ""
    attaining_ray: DivisorClass | None = None
    bundle_index: int | None = None

    def to_dict(self, verbose: bool = False) -> dict:
        out = {
            "ambient": self.ambient.kind.value,
            "params": self.ambient.param,
            "class": list(self.divisor.coeffs),
            "status": self.status.value,
        }
        if self.epsilon is not None:
            out["epsilon"] = {
                "num": self.epsilon.numerator,
                "den": self.epsilon.denominator,
                "certified": True,
            }
            out["attaining_ray"] = _coeffs(self.attaining_ray)
            out["bundle_index"] = self.bundle_index
        if self.status is Status.Hyperbolic:
            certs = self.certificates if verbose else _summary(self.certificates)
            out["certificates"] = [c.to_dict() for c in certs]
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class Plan:
    bundles: tuple  # ((DivisorClass, BoundKind), ...)
    special_curves: tuple = ()  # reached when every bundle has torsion image
    boundary_curves: tuple = ()  # X meets the complement of the open orbit here
    note: str = ""

    @property
    def all_special(self) -> tuple:
        return self.special_curves + self.boundary_curves


# ---------------------------------------------------------------------------
# bounds


def cor_main_bound(A: AmbientThreefold, D: DivisorClass, C: DivisorClass, L_list: Sequence[DivisorClass]) -> BoundCertificate:
    L_list = list(L_list)
    if not L_list:
        raise EmptyCollection("cor_main_bound needs at least one line bundle")
    A.own(D, C, *L_list)
    degs = [triple(A, L, D, C) for L in L_list]
    worst = max(range(len(L_list)), key=lambda i: degs[i])
    normal = -degs[worst]
    return BoundCertificate(
        line_bundle=L_list[worst],
        bound_kind=BoundKind.CorMain,
        normal_degree_bound=normal,
        genus_bound=triple(A, A.canonical + D, D, C) + normal,
        curve=C,
    )


def scroll_refined_bound_p2p1(a, b, c, d):
    """Lower bound for 2g-2 on P2xP1 when M_{H1} maps onto the normal sheaf.

    The scroll swept by the quotient has class alpha*H1 + beta*H2 with
    beta >= d, so deg N >= d - H1.C.
    """
    return d + (a - 4) * (b * c + a * d) + (b - 2) * a * c


def scroll_refined_bound_p3(m, k):
    """Same scroll argument for a degree-m surface in P^3, curve ~ kH|_X.

    The scroll has degree s >= k (it contains C and is not X, which has no
    lines), and deg N >= s - deg C, so 2g-2 >= (m-4)mk + k - mk.
    """
    return (m - 5) * m * k + k


def _bundle_bound(A, D, L, kind, C):
    if kind is BoundKind.CorMain:
        # (K + D - L).D.C on raw coefficients; callers validated the classes
        kdl = [k + d - l for k, d, l in zip(A.canonical_coeffs, D.coeffs, L.coeffs)]
        return A.trilinear(kdl, D.coeffs, C.coeffs)
    if A.kind is Kind.P2xP1:
        a, b = D.coeffs
        c, d = C.coeffs
        return scroll_refined_bound_p2p1(a, b, c, d)
    m = D.coeffs[0]
    k = restrict_to_X(A, C).coeffs[1] if A.kind is Kind.P111n else C.coeffs[0]
    return scroll_refined_bound_p3(m, k)


def certified_genus_bound(A: AmbientThreefold, D: DivisorClass, C: DivisorClass, plan: Plan | None = None):
    """Minimum over the plan's bundles of the bound on 2g-2, and its index."""
    plan = plan or plan_for(A, D)
    best = None
    for i, (L, kind) in enumerate(plan.bundles):
        v = _bundle_bound(A, D, L, kind, C)
        if best is None or v < best[0]:
            best = (v, i)
    return best


# ---------------------------------------------------------------------------
# special curves


def _p1p1p1_ramification(A, D):
    a = D.coeffs
    twos = [i for i in range(3) if a[i] == 2]
    if not twos:
        raise FamilyNotApplicable("ramification needs some a_i = 2 (double cover of P1xP1)")
    i = twos[0]
    j, k = [x for x in range(3) if x != i]
    g = surface_curve_genus(surface("P1xP1"), (2 * a[j], 2 * a[k]))
    cls = [0, 0, 0]
    cls[j], cls[k] = a[j], a[k]
    return SpecialCurve(
        "ramification",
        f"ramification of the double cover of P1xP1 by projecting off factor {i + 1}; "
        f"a ({2 * a[j]},{2 * a[k]}) curve",
        g,
        A.divisor(*cls),
    )


def special_curve(A: AmbientThreefold, D: DivisorClass, family: str) -> SpecialCurve:
    A.own(D)
    k = A.kind
    x = D.coeffs
    if family == "ramification":
        if k is Kind.P1P1P1:
            return _p1p1p1_ramification(A, D)
        if k is Kind.P2xP1:
            a, b = x
            if b != 2:
                raise FamilyNotApplicable("P2xP1 ramification needs b = 2")
            return SpecialCurve(
                "ramification",
                f"ramification of X -> P2, isomorphic to a plane curve of degree {2 * a}",
                plane_curve_genus(2 * a),
                A.divisor(a, 0),
            )
        if k is Kind.FexP1:
            e = A.param["e"]
            a1, a2, a3 = x
            if a3 == 2:
                return SpecialCurve(
                    "ramification",
                    f"ramification of X -> F_e, a curve of class {2 * a1}E+{2 * a2}F on F_{e}",
                    surface_curve_genus(surface("Fe", e), (2 * a1, 2 * a2)),
                    A.divisor(a1, a2, 0),
                )
            if a1 == 2:
                return SpecialCurve(
                    "ramification",
                    f"ramification of X -> P1xP1, a ({2 * (a2 - e)},{2 * a3}) curve",
                    surface_curve_genus(surface("P1xP1"), (2 * (a2 - e), 2 * a3)),
                    A.divisor(0, a2 - e, a3),
                )
            raise FamilyNotApplicable("FexP1 ramification needs a3 = 2 or a1 = 2")
        if k is Kind.P111n:
            m = x[0]
            n = A.param["n"]
            if m != 2 or x[1] != 0:
                raise FamilyNotApplicable("P111n ramification needs D = 2H")
            return SpecialCurve(
                "ramification",
                f"ramification of the double cover of P2, a plane curve of degree {2 * n}",
                plane_curve_genus(2 * n),
                A.divisor(0, n),
            )
        raise FamilyNotApplicable(f"no ramification family on {A.id}")
    if family == "boundary_section":
        if k is Kind.FexP1:
            e = A.param["e"]
            a1, a2, a3 = x
            return SpecialCurve(
                "boundary_section",
                f"X ∩ (E x P1), a ({a2 - e * a1},{a3}) curve on P1xP1",
                surface_curve_genus(surface("P1xP1"), (a2 - e * a1, a3)),
                A.divisor(1, 0, 0),
            )
        if k is Kind.BlP3:
            b = -x[1]
            return SpecialCurve(
                "boundary_section",
                f"X ∩ E, a plane curve of degree {b}",
                complete_intersection_genus(A, D, A.basis("E")),
                A.basis("E"),
            )
        raise FamilyNotApplicable(f"{A.id} has no boundary divisor meeting X")
    if k is Kind.BlP3 and family in ("branch_curve", "residual_curve"):
        a, b = x[0], -x[1]
        if a != b + 2:
            raise FamilyNotApplicable("projection from the point is a double cover only when a = b + 2")
        if family == "branch_curve":
            return SpecialCurve(
                "branch_curve",
                f"points whose line to the blown-up point is tangent; a plane curve of degree {2 * b + 2}",
                plane_curve_genus(2 * b + 2),
                A.divisor(b + 1, -(b + 1)),
            )
        return SpecialCurve(
            "residual_curve",
            "residual points of lines meeting X to order b+1 at the blown-up point; isomorphic to X ∩ E",
            plane_curve_genus(b),
            # preimage of the plane curve X ∩ E under the double cover, minus X ∩ E
            A.divisor(b, -(b + 1)),
        )
    raise FamilyNotApplicable(f"unknown family {family!r} for {A.id}")


def special_curve_genus(A: AmbientThreefold, D: DivisorClass, family: str) -> int:
    return special_curve(A, D, family).genus


# ---------------------------------------------------------------------------
# classification


def _double_cover_line_genus(branch_degree: int, tangencies: int = 0) -> int:
    # Riemann-Hurwitz for the preimage of a line; tangencies remove two branch points each
    branch = branch_degree - 2 * tangencies
    return max(0, branch // 2 - 1)


def _w(kind, text, attained, generic=None):
    return WitnessFamily(WitnessKind(kind), text, attained, generic)


def _classify_p1p1p1(A, D):
    a = sorted(D.coeffs)
    if a[0] <= 0:
        return Status.Invalid, None, None, "every coefficient must be positive"
    P1 = surface("P1xP1")
    if a[0] == 1:
        return Status.NotHyperbolic, None, _w(
            "BirationalToRational", "projection to the other two factors is birational", 0
        ), "a coefficient equals 1: X is rational"
    if a[0] == 2 and a[1] == 2:
        return Status.NotHyperbolic, None, _w(
            "EllipticFiberFamily",
            "fibres of the remaining projection are (2,2) curves",
            1,
            surface_curve_genus(P1, (2, 2)),
        ), "two coefficients equal 2: elliptic fibration"
    if a[0] == 2 and a[1] == 3:
        return Status.NotHyperbolic, None, _w(
            "DegeneratingGenus2Family",
            "one-parameter family of (2,3) curves; singular members have geometric genus <= 1",
            1,
            surface_curve_genus(P1, (2, 3)),
        ), "coefficients (2,3,*): genus-2 family must degenerate"
    H = [A.basis(l) for l in A.basis_labels]
    if a[0] >= 3:
        return Status.Hyperbolic, Plan(tuple((h, BoundKind.CorMain) for h in H)), None, "all coefficients >= 3"
    i = D.coeffs.index(2)
    plan = Plan(
        tuple((H[j], BoundKind.CorMain) for j in range(3) if j != i),
        special_curves=(_p1p1p1_ramification(A, D),),
        note=f"torsion case for the other two bundles forces the ramification curve of factor {i + 1}",
    )
    return Status.Hyperbolic, plan, None, "one coefficient 2, the others >= 4"


def _classify_p2xp1(A, D):
    a, b = D.coeffs
    if a <= 0 or b < 0:
        return Status.Invalid, None, None, "need a >= 1 and b >= 0"
    if b == 0:
        return Status.NotHyperbolic, None, _w(
            "ProductRuling", "X = (plane curve) x P1 is ruled by lines", 0
        ), "b = 0: product with P1"
    if b == 1:
        return Status.NotHyperbolic, None, _w(
            "BirationalToRational", "X is birational to P2", 0
        ), "b = 1: X is rational"
    if a <= 2:
        return Status.NotHyperbolic, None, _w(
            "BirationalToRational",
            f"fibres over P1 are plane curves of degree {a}, so X is rational",
            0,
            plane_curve_genus(a),
        ), "a <= 2: rational fibres"
    if a == 3:
        return Status.NotHyperbolic, None, _w(
            "EllipticFiberFamily", "fibres over P1 are plane cubics", 1, plane_curve_genus(3)
        ), "a = 3: elliptic fibres"
    if (a, b) == (4, 2):
        return Status.NotHyperbolic, None, _w(
            "BitangentPreimage",
            "double cover of P2 branched along an octic; bitangent lines pull back to genus 1 curves",
            _double_cover_line_genus(8, tangencies=2),
            _double_cover_line_genus(8),
        ), "(a,b) = (4,2): bitangent preimages"
    H1, H2 = A.basis("H1"), A.basis("H2")
    if b == 2:
        plan = Plan(
            ((H1, BoundKind.CorMain),),
            special_curves=(special_curve(A, D, "ramification"),),
            note="torsion case for M_H1 forces the ramification curve of X -> P2",
        )
        return Status.Hyperbolic, plan, None, "b = 2, a >= 5"
    first = BoundKind.ScrollRefined if a == 4 else BoundKind.CorMain
    return Status.Hyperbolic, Plan(((H1, first), (H2, BoundKind.CorMain))), None, "a >= 4, b >= 3"


def _classify_fexp1(A, D):
    e = A.param["e"]
    a1, a2, a3 = D.coeffs
    a2p = a2 - e * a1
    if a1 <= 0 or a3 <= 0 or a2p < 0:
        return Status.Invalid, None, None, "need a1, a3 >= 1 and a2 - e*a1 >= 0"
    P1 = surface("P1xP1")
    if a1 == 1 or a3 == 1:
        return Status.NotHyperbolic, None, _w(
            "BirationalToRational", "a projection of X is birational, so X is rational", 0
        ), "a1 or a3 equals 1"
    if a2p <= 1:
        return Status.NotHyperbolic, None, _w(
            "ExceptionalPlaneSection", f"X ∩ (E x P1) is a ({a2p},{a3}) curve, a union of rational curves", 0
        ), "a2 - e*a1 <= 1"
    if a3 == 2 and a1 == 2:
        return Status.NotHyperbolic, None, _w(
            "EllipticFiberFamily", "slices over fibres F are (2,2) curves", 1, surface_curve_genus(P1, (2, 2))
        ), "a1 = a3 = 2"
    if a3 == 2 and a2p == 2:
        return Status.NotHyperbolic, None, _w(
            "ExceptionalPlaneSection",
            "X ∩ (E x P1) is a (2,2) curve of genus 1",
            surface_curve_genus(P1, (2, 2)),
            surface_curve_genus(P1, (2, 2)),
        ), "a3 = 2 and a2 - e*a1 = 2"
    if (a1, a3) in ((2, 3), (3, 2)):
        return Status.NotHyperbolic, None, _w(
            "DegeneratingGenus2Family",
            "slices over fibres F are (2,3) curves; singular members have geometric genus <= 1",
            1,
            surface_curve_genus(P1, (a1, a3)),
        ), "(a1,a3) in {(2,3),(3,2)}"
    if e == 1 and a1 == 2 and a2p == 2:
        return Status.NotHyperbolic, None, _w(
            "SingularQuarticFamily",
            "slices over P1 are 2E+4F curves on F_1: plane quartics singular at the blown-up point",
            1,
            surface_curve_genus(surface("Fe", 1), (2, 4)),
        ), "e = 1, a1 = 2, a2 - a1 = 2"

    L1, L2, L3 = A.divisor(1, e, 0), A.basis("F"), A.basis("H")
    boundary = (special_curve(A, D, "boundary_section"),)
    cm = BoundKind.CorMain
    if a1 >= 3 and a3 >= 3:
        return Status.Hyperbolic, Plan(((L1, cm), (L2, cm), (L3, cm)), boundary_curves=boundary), None, (
            "a2 - e*a1 >= 2, a1 >= 3, a3 >= 3"
        )
    if a3 == 2:
        plan = Plan(
            ((L1, cm), (L2, cm)),
            special_curves=(special_curve(A, D, "ramification"),),
            boundary_curves=boundary,
            note="torsion case for M_{E+eF} and M_F forces the ramification curve of X -> F_e",
        )
        return Status.Hyperbolic, plan, None, "a3 = 2, a1 >= 4, a2 - e*a1 >= 3"
    plan = Plan(
        ((L2, cm), (L3, cm)),
        special_curves=(special_curve(A, D, "ramification"),),
        boundary_curves=boundary,
        note="torsion case for M_F and M_H forces the ramification curve of X -> P1xP1",
    )
    return Status.Hyperbolic, plan, None, "a1 = 2, a3 >= 4, a2 - e*a1 >= 2 + [e = 1]"


def _classify_blp3(A, D):
    a, b = D.coeffs[0], -D.coeffs[1]
    if (a, b) == (0, -1):
        return Status.NotHyperbolic, None, _w(
            "BirationalToRational", "X = E is a plane", 0
        ), "X is the exceptional divisor"
    if b < 0 or a < b or a == 0:
        return Status.Invalid, None, None, "need a >= b >= 0 and a >= 1 (or X = E)"
    if a == b:
        return Status.NotHyperbolic, None, _w(
            "ConeRuling", "the image in P3 is a cone, covered by lines", 0
        ), "a = b: cone"
    if a == b + 1:
        return Status.NotHyperbolic, None, _w(
            "BirationalToRational", "projection from the blown-up point is birational onto P2", 0
        ), "a = b + 1: X is rational"
    if 1 <= b <= 3:
        g = complete_intersection_genus(A, D, A.basis("E"))
        return Status.NotHyperbolic, None, _w(
            "ExceptionalPlaneSection", f"X ∩ E is a plane curve of degree {b}", g, plane_curve_genus(b)
        ), "1 <= b <= 3: low-genus curve in E"
    H, HE = A.basis("H"), A.divisor(1, -1)
    if b == 0:
        if a <= 3:
            return Status.NotHyperbolic, None, _w(
                "BirationalToRational", f"a surface of degree {a} in P3 is rational", 0
            ), "b = 0, a <= 3"
        if a == 4:
            return Status.NotHyperbolic, None, _w(
                "QuarticK3", "a quartic K3 surface contains rational curves", 0
            ), "b = 0, a = 4"
        kind = BoundKind.ScrollRefined if a == 5 else BoundKind.CorMain
        return Status.Hyperbolic, Plan(((H, kind),), note="X misses E; the P3 argument applies"), None, "b = 0, a >= 5"
    boundary = (special_curve(A, D, "boundary_section"),)
    if a >= b + 3:
        plan = Plan(((H, BoundKind.CorMain), (HE, BoundKind.CorMain)), boundary_curves=boundary)
        return Status.Hyperbolic, plan, None, "a >= b + 3, b >= 4"
    plan = Plan(
        ((HE, BoundKind.CorMain),),
        special_curves=(special_curve(A, D, "residual_curve"), special_curve(A, D, "branch_curve")),
        boundary_curves=boundary,
        note="torsion case for M_{H-E} forces the residual or the branch curve",
    )
    return Status.Hyperbolic, plan, None, "a = b + 2 >= 6"


def _classify_p111n(A, D):
    n = A.param["n"]
    m, f = D.coeffs
    if f != 0:
        return Status.Invalid, None, None, "surfaces are taken in classes mH"
    if m <= 0:
        return Status.Invalid, None, None, "need m >= 1"
    if m == 1:
        return Status.NotHyperbolic, None, _w(
            "BirationalToRational", "a section of O(n) is isomorphic to P2", 0
        ), "m = 1"
    H, F = A.basis("H"), A.basis("F")
    if n == 1:
        if m <= 3:
            return Status.NotHyperbolic, None, _w(
                "BirationalToRational", f"a surface of degree {m} in P3 is rational", 0
            ), "n = 1, m <= 3"
        if m == 4:
            return Status.NotHyperbolic, None, _w(
                "QuarticK3", "a quartic K3 surface contains rational curves", 0
            ), "n = 1, m = 4"
        kind = BoundKind.ScrollRefined if m == 5 else BoundKind.CorMain
        return Status.Hyperbolic, Plan(((H, kind),), note="P(1,1,1,1) = P3"), None, "n = 1, m >= 5"
    if m == 2:
        if n <= 4:
            return Status.NotHyperbolic, None, _w(
                "BitangentPreimage",
                f"double cover of P2 branched along a curve of degree {2 * n}; "
                "bitangent lines pull back to curves of genus <= 1",
                _double_cover_line_genus(2 * n, tangencies=2),
                _double_cover_line_genus(2 * n),
            ), "m = 2, n <= 4"
        plan = Plan(
            ((F, BoundKind.CorMain),),
            special_curves=(special_curve(A, D, "ramification"),),
            note="if no copy of M_F maps to the free part, C is the ramification curve",
        )
        return Status.Hyperbolic, plan, None, "m = 2, n >= 5"
    if n * (m - 2) - 3 >= 1:
        return Status.Hyperbolic, Plan(((H, BoundKind.CorMain),)), None, "n(m-2) - 3 >= 1"
    return Status.Open, None, None, "m = 3, n in {2, 3}: the available bounds do not decide"


_CLASSIFIERS = {
    Kind.P1P1P1: _classify_p1p1p1,
    Kind.P2xP1: _classify_p2xp1,
    Kind.FexP1: _classify_fexp1,
    Kind.BlP3: _classify_blp3,
    Kind.P111n: _classify_p111n,
}


def _decide(A, D):
    A.own(D)
    return _CLASSIFIERS[A.kind](A, D)


def plan_for(A: AmbientThreefold, D: DivisorClass) -> Plan:
    status, plan, _, _ = _decide(A, D)
    if status is not Status.Hyperbolic:
        raise NotHyperbolicInput(f"{A.id} {list(D.coeffs)} is {status.value}")
    return plan


def _epsilon(A, D, plan, Href=None):
    rays = [A.divisor(*r) for r in extreme_rays(A.curve_cone, A.picard_rank)]
    best = None
    certs = []
    for r in rays:
        deg = curve_degree(A, D, r, Href)
        if deg <= 0:
            raise InvalidParam(f"degree class is not positive on the ray {list(r.coeffs)}")
        for i, (L, kind) in enumerate(plan.bundles):
            bound = _bundle_bound(A, D, L, kind, r)
            certs.append(
                BoundCertificate(
                    line_bundle=L,
                    bound_kind=kind,
                    normal_degree_bound=bound - triple(A, A.canonical + D, D, r),
                    genus_bound=bound,
                    curve=r,
                )
            )
            q = Fraction(bound, deg)
            if best is None or q < best[0]:
                best = (q, r, i)
    for s in plan.all_special:
        normal = None
        if s.curve is not None:
            normal = 2 * s.genus - 2 - triple(A, A.canonical + D, D, s.curve)
        certs.append(
            BoundCertificate(
                line_bundle=None,
                bound_kind=BoundKind.SpecialCurveExclusion,
                normal_degree_bound=normal,
                genus_bound=2 * s.genus - 2,
                excluded_families=(s,),
                curve=s.curve,
            )
        )
        if s.genus <= 1:
            raise InvariantViolation(f"special curve {s.name} has genus {s.genus}")
        if s.curve is None:
            continue
        deg = curve_degree(A, D, s.curve, Href)
        if deg <= 0:
            raise InvariantViolation(f"special curve {s.name} has degree {deg}")
        q = Fraction(2 * s.genus - 2, deg)
        if q < best[0]:
            best = (q, s.curve, None)
    if best[0] <= 0:
        raise InvariantViolation(f"{A.id} {list(D.coeffs)}: certified epsilon {best[0]} is not positive")
    return best, tuple(certs)


def classify(A: AmbientThreefold, D: DivisorClass, Href: DivisorClass | None = None) -> Verdict:
    status, plan, witness, reason = _decide(A, D)
    if status is not Status.Hyperbolic:
        return Verdict(A, D, status, witness=witness, reason=reason)
    (eps, ray, idx), certs = _epsilon(A, D, plan, Href)
    if plan.note:
        reason = f"{reason}; {plan.note}"
    return Verdict(A, D, status, eps, certs, None, reason, ray, idx)


def best_epsilon(A: AmbientThreefold, D: DivisorClass, Href: DivisorClass | None = None):
    """Certified epsilon with the ray (or special curve) and bundle attaining it."""
    plan = plan_for(A, D)
    (eps, ray, idx), _ = _epsilon(A, D, plan, Href)
    return eps, ray, idx


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("HYPLAB_THREADS", "1")))
    except ValueError:
        return 1


def _classify_coeffs(args):
    A, coeffs = args
    return classify(A, A.divisor(*coeffs))


def survey(A: AmbientThreefold, coefficient_box: Sequence[Iterable[int]], workers: int | None = None) -> list[Verdict]:
    """Classify every class in a box, in lexicographic order of coefficients."""
    ranges = [list(r) for r in coefficient_box]
    if len(ranges) != A.picard_rank:
        raise InvalidParam(f"box needs {A.picard_rank} ranges")
    points = list(itertools.product(*ranges))
    workers = workers or _workers()
    if workers > 1 and len(points) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_classify_coeffs, [(A, p) for p in points], chunksize=16))
    return [classify(A, A.divisor(*p)) for p in points]
