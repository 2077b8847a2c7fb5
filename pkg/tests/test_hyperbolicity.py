import itertools
from fractions import Fraction

import pytest

from hyplab.ambient import make_ambient, triple
from hyplab.errors import EmptyCollection, FamilyNotApplicable, NotHyperbolicInput
from hyplab.hyperbolicity import (
    BoundKind,
    Status,
    WitnessKind,
    best_epsilon,
    certified_genus_bound,
    classify,
    cor_main_bound,
    plan_for,
    scroll_refined_bound_p2p1,
    scroll_refined_bound_p3,
    special_curve,
    special_curve_genus,
    survey,
)
from hyplab.oracles import exhaustive_epsilon_check

P3 = make_ambient("P1P1P1")
P21 = make_ambient("P2xP1")
BL = make_ambient("BlP3")


def test_cor_main_p1p1p1():
    for a in [(3, 4, 5), (2, 6, 7)]:
        for c in [(1, 0, 0), (2, 3, 1), (0, 0, 0)]:
            cert = cor_main_bound(P3, P3.divisor(*a), P3.divisor(*c), [P3.basis("H1")])
            a1, a2, a3 = a
            c1, c2, c3 = c
            expected = (a1 - 3) * (a2 * c3 + a3 * c2) + (a2 - 2) * (a1 * c3 + a3 * c1) + (a3 - 2) * (a1 * c2 + a2 * c1)
            assert cert.genus_bound == expected
            D, C = P3.divisor(*a), P3.divisor(*c)
            assert cert.genus_bound == triple(P3, P3.canonical + D, D, C) + cert.normal_degree_bound
    zero = cor_main_bound(P3, P3.divisor(3, 3, 3), P3.zero(), [P3.basis("H2")])
    assert zero.genus_bound == 0 == zero.normal_degree_bound


def test_cor_main_picks_worst():
    cert = cor_main_bound(P3, P3.divisor(3, 3, 3), P3.divisor(1, 0, 0), [P3.basis(h) for h in ("H1", "H2", "H3")])
    assert cert.line_bundle in (P3.basis("H2"), P3.basis("H3"))
    with pytest.raises(EmptyCollection):
        cor_main_bound(P3, P3.divisor(3, 3, 3), P3.divisor(1, 0, 0), [])


def test_scroll_bounds():
    for c, d in itertools.product(range(4), repeat=2):
        assert scroll_refined_bound_p2p1(4, 3, c, d) == d + 4 * c
    assert scroll_refined_bound_p2p1(4, 5, 0, 0) == 0
    assert scroll_refined_bound_p2p1(5, 2, 1, 1) == 8
    assert scroll_refined_bound_p3(5, 3) == 3
    assert scroll_refined_bound_p3(6, 1) == 7


def test_special_genera():
    for a2, a3 in itertools.product(range(4, 9), repeat=2):
        assert special_curve_genus(P3, P3.divisor(2, a2, a3), "ramification") == (2 * a2 - 1) * (2 * a3 - 1)
    assert special_curve_genus(BL, BL.divisor(6, -4), "branch_curve") == 36
    assert special_curve_genus(BL, BL.divisor(6, -4), "residual_curve") == 3
    assert special_curve_genus(BL, BL.divisor(9, -4), "boundary_section") == 3
    for a in range(5, 9):
        assert special_curve_genus(P21, P21.divisor(a, 2), "ramification") == (2 * a - 1) * (2 * a - 2) // 2


def test_special_not_applicable():
    with pytest.raises(FamilyNotApplicable):
        special_curve_genus(P3, P3.divisor(3, 4, 5), "ramification")
    with pytest.raises(FamilyNotApplicable):
        special_curve_genus(BL, BL.divisor(9, -4), "branch_curve")
    with pytest.raises(FamilyNotApplicable):
        special_curve_genus(P21, P21.divisor(5, 2), "boundary_section")
    with pytest.raises(FamilyNotApplicable):
        special_curve_genus(P21, P21.divisor(5, 2), "nonsense")


def test_residual_curve_class():
    # its class is b(H-E) - E on X, and adjunction there reproduces the plane-curve genus
    for b in range(4, 9):
        D = BL.divisor(b + 2, -b)
        s = special_curve(BL, D, "residual_curve")
        two_g = triple(BL, BL.canonical + D + s.curve, D, s.curve)
        assert two_g == 2 * s.genus - 2
        assert triple(BL, BL.divisor(1, -1), D, s.curve) == b


@pytest.mark.parametrize(
    "A,coeffs,status,witness",
    [
        (P3, (3, 3, 3), Status.Hyperbolic, None),
        (P3, (2, 3, 7), Status.NotHyperbolic, WitnessKind.DegeneratingGenus2Family),
        (P3, (2, 2, 9), Status.NotHyperbolic, WitnessKind.EllipticFiberFamily),
        (P3, (1, 8, 8), Status.NotHyperbolic, WitnessKind.BirationalToRational),
        (P3, (0, 8, 8), Status.Invalid, None),
        (P21, (4, 2), Status.NotHyperbolic, WitnessKind.BitangentPreimage),
        (P21, (5, 0), Status.NotHyperbolic, WitnessKind.ProductRuling),
        (P21, (3, 5), Status.NotHyperbolic, WitnessKind.EllipticFiberFamily),
        (BL, (6, -4), Status.Hyperbolic, None),
        (BL, (5, -5), Status.NotHyperbolic, WitnessKind.ConeRuling),
        (BL, (7, -3), Status.NotHyperbolic, WitnessKind.ExceptionalPlaneSection),
        (BL, (4, 0), Status.NotHyperbolic, WitnessKind.QuarticK3),
        (BL, (0, 1), Status.NotHyperbolic, WitnessKind.BirationalToRational),
        (BL, (3, -5), Status.Invalid, None),
        (make_ambient("P111n", n=3), (3, 0), Status.Open, None),
        (make_ambient("P111n", n=2), (3, 0), Status.Open, None),
        (make_ambient("P111n", n=4), (3, 0), Status.Hyperbolic, None),
        (make_ambient("P111n", n=4), (2, 0), Status.NotHyperbolic, WitnessKind.BitangentPreimage),
        (make_ambient("FexP1", e=1), (2, 4, 5), Status.NotHyperbolic, WitnessKind.SingularQuarticFamily),
        (make_ambient("FexP1", e=2), (2, 6, 5), Status.Hyperbolic, None),
        (make_ambient("FexP1", e=1), (2, 5, 5), Status.Hyperbolic, None),
    ],
    ids=lambda x: getattr(x, "id", str(x)),
)
def test_classify_examples(A, coeffs, status, witness):
    v = classify(A, A.divisor(*coeffs))
    assert v.status is status
    assert (v.witness.kind if v.witness else None) is witness
    assert (v.epsilon is not None) == (status is Status.Hyperbolic)
    if v.epsilon is not None:
        assert v.epsilon > 0


def test_witness_soundness():
    claims = {
        WitnessKind.DegeneratingGenus2Family: 2,
        WitnessKind.EllipticFiberFamily: 1,
    }
    boxes = [
        (P3, [range(1, 7)] * 3),
        (P21, [range(0, 8), range(0, 6)]),
        (BL, [range(0, 10), [-b for b in range(-1, 8)]]),
        (make_ambient("FexP1", e=1), [range(1, 6), range(0, 11), range(1, 6)]),
        (make_ambient("FexP1", e=2), [range(1, 6), range(0, 16), range(1, 6)]),
    ]
    for A, box in boxes:
        for v in survey(A, box):
            if v.status is not Status.NotHyperbolic:
                continue
            assert v.witness.genus_attained <= 1
            if v.witness.kind in claims:
                assert v.witness.generic_genus == claims[v.witness.kind]


def test_permutation_invariance():
    for a in itertools.product(range(1, 7), repeat=3):
        verdicts = {classify(P3, P3.divisor(*p)).status for p in itertools.permutations(a)}
        eps = {classify(P3, P3.divisor(*p)).epsilon for p in itertools.permutations(a)}
        assert len(verdicts) == 1 and len(eps) == 1


def test_best_epsilon_examples():
    eps, ray, idx = best_epsilon(P3, P3.divisor(3, 3, 3))
    assert eps >= Fraction(1, 2)
    eps, _, _ = best_epsilon(BL, BL.divisor(7, -4))
    assert eps >= Fraction(1, 7)
    with pytest.raises(NotHyperbolicInput):
        best_epsilon(P3, P3.divisor(2, 2, 2))


def test_written_chains_are_weaker():
    # the certified value is never below the constant the written argument gives
    for a in itertools.product(range(3, 7), repeat=3):
        assert best_epsilon(P3, P3.divisor(*a))[0] >= Fraction(min(a), 2 * max(a))
    for a, b in [(7, 4), (8, 4), (9, 5), (10, 6)]:
        assert best_epsilon(BL, BL.divisor(a, -b))[0] >= Fraction(3 * (b - 2), 2 * a)


def test_special_curve_exclusions_listed():
    v = classify(P3, P3.divisor(2, 4, 5))
    kinds = [c.bound_kind for c in v.certificates]
    assert BoundKind.SpecialCurveExclusion in kinds
    excl = [c for c in v.certificates if c.bound_kind is BoundKind.SpecialCurveExclusion]
    assert excl[0].excluded_families[0].genus == 7 * 9


def test_certified_bound_minimum():
    D = P21.divisor(4, 3)
    plan = plan_for(P21, D)
    assert plan.bundles[0][1] is BoundKind.ScrollRefined
    value, idx = certified_genus_bound(P21, D, P21.divisor(1, 0), plan)
    # scroll bound 4, H2 bound (a-3)(bc+ad) + (b-3)ac = 3
    assert scroll_refined_bound_p2p1(4, 3, 1, 0) == 4
    assert (value, idx) == (3, 1)


def test_epsilon_sound_small_grid():
    for A, coeffs in [(P3, (2, 4, 4)), (P21, (5, 2)), (P21, (4, 3)), (BL, (6, -4)), (BL, (5, 0))]:
        D = A.divisor(*coeffs)
        eps = best_epsilon(A, D)[0]
        assert exhaustive_epsilon_check(A, D, eps, 120)[0]
        ok, viol = exhaustive_epsilon_check(A, D, eps * Fraction(11, 10) + Fraction(1, 1000), 120)
        assert not ok, "epsilon should be tight on its attaining ray or special curve"


def test_survey_shape():
    rows = survey(P21, [range(1, 7), range(1, 5)])
    assert len(rows) == 24
    assert [v.divisor.coeffs for v in rows] == list(itertools.product(range(1, 7), range(1, 5)))
    assert survey(P21, [range(1, 1), range(1, 5)]) == []


def test_survey_parallel_matches(monkeypatch):
    monkeypatch.setenv("HYPLAB_THREADS", "2")
    par = survey(P3, [range(2, 5)] * 3)
    monkeypatch.setenv("HYPLAB_THREADS", "1")
    seq = survey(P3, [range(2, 5)] * 3)
    assert [v.to_dict() for v in par] == [v.to_dict() for v in seq]


def test_href_alternative():
    F = make_ambient("FexP1", e=1)
    D = F.divisor(3, 6, 3)
    base = classify(F, D).epsilon
    other = classify(F, D, Href=F.divisor(1, 3, 2)).epsilon
    assert base > 0 and other > 0 and base != other
