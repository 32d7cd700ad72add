"""Simultaneous approximation of (1, f, f^2) and the ratio limits."""

import random
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from padelab.germs import (
    eval_germ,
    expand_at_infinity,
    germ_from_pairs,
    germ_from_points,
    germ_squared,
)
from padelab.hermite import (
    HermiteTriple,
    RationalDependenceError,
    conjecture_trends,
    hermite_approximants,
    hp_for_germ,
    hp_type1,
    square_series_mismatch,
)
from padelab.poly import Poly
from padelab.precision import working
from padelab.series import LaurentSeriesAtInfinity

from exact_oracles import fraction_nullspace, ratio_pair_coeffs


ALPHA = Fraction(1, 3)
PAIR = [(Fraction(-1), Fraction(1))]


def reference_germ(alpha=ALPHA):
    return germ_from_pairs([("-1", "1")], [alpha])


def reference_series(n, digits=60):
    g = reference_germ()
    sf = expand_at_infinity(g, 3 * n + 1, digits=digits)
    sf2 = expand_at_infinity(germ_squared(g), 3 * n + 1, digits=digits)
    return sf, sf2


def exact_triple_rows(n):
    c = ratio_pair_coeffs(PAIR, [ALPHA], 3 * n + 1)
    c2 = ratio_pair_coeffs(PAIR, [2 * ALPHA], 3 * n + 1)
    rows = []
    for m in range(n, -(2 * n + 2), -1):
        row = [Fraction(0)] * (3 * n + 3)
        if 0 <= m <= n:
            row[m] = Fraction(1)
        for j in range(n + 1):
            k = j - m
            if 0 <= k <= 3 * n + 1:
                row[n + 1 + j] = c[k]
                row[2 * n + 2 + j] = c2[k]
        rows.append(row)
    return rows


def test_order_one_matches_exact_rational_oracle():
    n = 1
    exact = fraction_nullspace(exact_triple_rows(n))
    x = Fraction(5, 2)
    q0 = sum(exact[j] * x ** j for j in range(n + 1))
    q1 = sum(exact[n + 1 + j] * x ** j for j in range(n + 1))
    q2 = sum(exact[2 * n + 2 + j] * x ** j for j in range(n + 1))
    with working(60):
        sf, sf2 = reference_series(n)
        t = hp_type1(sf, sf2, n)
        z = mpf(5) / 2
        want0 = mpf(q0.numerator) / q0.denominator / (
            mpf(q2.numerator) / q2.denominator)
        want1 = mpf(q1.numerator) / q1.denominator / (
            mpf(q2.numerator) / q2.denominator)
        assert abs(t.ratio0(z) - want0) <= mpf("1e-45") * max(1, abs(want0))
        assert abs(t.ratio1(z) - want1) <= mpf("1e-45") * max(1, abs(want1))


def test_system_shape_and_consumed_indices():
    n = 3
    with working(60):
        sf, sf2 = reference_series(n)
        rows = exact_triple_rows(n)
        assert len(rows) == 3 * n + 2
        assert len(rows[0]) == 3 * n + 3
        t = hp_type1(sf, sf2, n)
        assert t.consumed == (0, 3 * n + 1)
        assert t.certificate.hi == n
        assert t.certificate.lo == -(2 * n + 1)
        # the solve must refuse series truncated one short of the need
        with pytest.raises(ValueError):
            hp_type1(sf.truncate(3 * n), sf2, n)
        with pytest.raises(ValueError):
            hp_type1(sf, sf2.truncate(3 * n), n)


def test_certificate_meets_escalation_policy():
    t = hp_for_germ(reference_germ(), 4)
    p = 60 + 12 * 4
    assert t.certificate.digits == 2 * p
    assert t.certificate.residual <= mpf(10) ** (-mpf(p) / 3)
    assert t.report.nullity == 1
    assert t.q2.effective_degree() == t.n


def test_half_integer_exponent_is_rejected_as_dependence():
    g = reference_germ(Fraction(1, 2))
    with pytest.raises(RationalDependenceError) as info:
        hp_for_germ(g, 2)
    assert info.value.nullity >= 2


def test_ratios_independent_of_normalization():
    n = 5
    with working(120):
        sf, sf2 = reference_series(n, digits=120)
        a = hp_type1(sf, sf2, n)
        b = hp_type1(sf, sf2, n, free_col=0)
        rnd = random.Random(20240821)
        for _ in range(20):
            z = mp.mpc(rnd.randint(-300, 300), rnd.randint(120, 350)) / 100
            for ra, rb in ((a.ratio0(z), b.ratio0(z)),
                           (a.ratio1(z), b.ratio1(z))):
                assert abs(ra - rb) <= mpf("1e-60") * max(1, abs(ra))


def test_scaling_leaves_ratios_unchanged():
    n = 2
    with working(60):
        sf, sf2 = reference_series(n)
        t = hp_type1(sf, sf2, n)
        s = t.scaled(mp.mpc("0.37", "1.9"))
        z = mp.mpc(1, 1)
        assert abs(t.ratio0(z) - s.ratio0(z)) <= mpf("1e-50")
        assert abs(t.ratio1(z) - s.ratio1(z)) <= mpf("1e-50")
        ha = hermite_approximants(t)
        hb = hermite_approximants(s)
        assert abs(ha.h0(z) - hb.h0(z)) <= mpf("1e-50")
        assert abs(ha.h1(z) - hb.h1(z)) <= mpf("1e-50")


def test_sign_conventions():
    with working(60):
        one = Poly([mpf(1)])
        t = HermiteTriple(one, one, one, 0, None)
        neg = hermite_approximants(t, "theorem1")
        pos = hermite_approximants(t, "definition")
        assert neg.h0(5) == -1 and neg.h1(5) == -1
        assert pos.h0(5) == 1 and pos.h1(5) == 1
        with pytest.raises(ValueError):
            hermite_approximants(t, "upside-down")
        zero = Poly([mpf(0)])
        with pytest.raises(ValueError):
            hermite_approximants(HermiteTriple(one, one, zero, 0, None))


def test_theorem_convention_negates_raw_ratios():
    n = 3
    with working(60):
        sf, sf2 = reference_series(n)
        t = hp_type1(sf, sf2, n)
        h = hermite_approximants(t, "theorem1")
        z = mp.mpc(0, 2)
        assert abs(h.h0(z) + t.ratio0(z)) <= mpf("1e-48")
        assert abs(h.h1(z) + t.ratio1(z)) <= mpf("1e-48")


def test_square_series_guard_sees_branch_errors():
    n = 2
    with working(60):
        sf, sf2 = reference_series(n)
        assert square_series_mismatch(sf, sf2) <= mpf("1e-50")
        wrong = LaurentSeriesAtInfinity(
            [sf2[0], -sf2[1]] + [sf2[k] for k in range(2, sf2.order + 1)])
        assert square_series_mismatch(sf, wrong) > mpf("0.5")


def test_ratio_trends_toward_both_branch_limits():
    g = reference_germ()
    pts = [mp.mpc(0, 2), mp.mpc(1, 2), mp.mpc(-2, 1)]
    rep = conjecture_trends(g, [4, 8, 12], pts)
    assert rep.target_kind == "second-branch"
    m0 = rep.max_errors_f2()
    m1 = rep.max_errors_const_f()
    assert m0[0] > m0[1] > m0[2]
    assert m1[0] > m1[1] > m1[2]
    # convergence is fastest far from the cut rays; the bound at the
    # point closest to them is looser
    assert rep.errors_f2[2][0] < mpf("0.01")
    assert m0[2] < mpf("0.05")
    assert abs(rep.expected_constant + 1) <= mpf("1e-50")
    assert abs(rep.fitted_constant + 1) <= mpf("0.05")


def test_trend_targets_match_direct_germ_values():
    g = reference_germ()
    g2 = germ_squared(g)
    z = mp.mpc(0, 2)
    with working(60):
        direct = eval_germ(g, z) ** 2
        squared = eval_germ(g2, z)
        assert abs(direct - squared) <= mpf("1e-50")


def test_mixed_exponents_fall_back_to_reference_order_targets():
    g = germ_from_pairs(
        [("-5/2", "-13/10"), ("-4/5", "4/5"), ("13/10", "5/2")],
        ["1/3", "-1/3", "1/3"])
    rep = conjecture_trends(g, [3, 5], [mp.mpc(0, 3)], reference_margin=7)
    assert rep.target_kind == "reference-order"
    assert rep.reference_n == 12
    assert rep.fitted_constant is None
    assert len(rep.errors_f2) == 2
    assert len(rep.errors_const_f) == 2
    # stabilization: distance to the reference shrinks with the order
    assert rep.max_errors_f2()[1] < rep.max_errors_f2()[0]


def test_bounded_cut_germs_use_the_germ_itself_as_target():
    g = germ_from_points(
        [("-6/5", "4/5"), ("9/10", "3/2"), ("1/2", "-6/5")],
        ["1/3", "1/3", "-2/3"])
    rep = conjecture_trends(g, [3, 5], [mp.mpc(0, 3)])
    assert rep.target_kind == "infinity-germ"
    assert rep.reference_n is None
    assert rep.fitted_constant is not None
    assert len(rep.errors_f2) == 2


def test_trend_input_validation():
    g = reference_germ()
    with pytest.raises(ValueError):
        conjecture_trends(g, [8, 4], [mp.mpc(0, 2)])
    with pytest.raises(ValueError):
        conjecture_trends(g, [4, 8], [mpf(2)])
    with pytest.raises(ValueError):
        conjecture_trends(g, [4, 8], [])
