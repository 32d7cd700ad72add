"""Germ construction, expansion, evaluation and boundary data.

The expansion oracles here are independent of the implementation: they
build the Laurent coefficients from exact-rational binomial series
(1 - t u)^alpha = sum_m C(alpha, m) (-t)^m u^m convolved in Fraction
arithmetic, while the library uses a power-sum recurrence.
"""

import json
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from padelab.germs import (
    as_exact,
    boundary_values,
    consistency_residual,
    constant_germ,
    eval_germ,
    expand_at_infinity,
    expand_at_point,
    germ_from_pairs,
    germ_from_points,
    germ_from_record,
    germ_squared,
    germ_to_record,
    log_ratio_germ,
    second_branch,
)
from padelab.precision import working

from exact_oracles import binom, binom_series, convolve, ratio_pair_coeffs


def one_pair(alpha="1/3"):
    return germ_from_pairs([("-1", "1")], [alpha])


def three_pair(alternating=False):
    expos = ["1/3", "-1/3", "1/3"] if alternating else ["1/3", "1/3", "1/3"]
    return germ_from_pairs(
        [("-5/2", "-13/10"), ("-4/5", "4/5"), ("13/10", "5/2")], expos)


def complex_triple():
    return germ_from_points(
        [("-6/5", "4/5"), ("9/10", "3/2"), ("1/2", "-6/5")],
        ["1/3", "1/3", "-2/3"])


def shifted_sqrt_inverse(anchored=False):
    """(2 z^2 - 5 z + 2)^(-1/2), branch ~ 2^(-1/2)/z at infinity or the
    positive branch at the origin."""
    if anchored:
        return germ_from_points(["1/2", "2"], ["-1/2", "-1/2"],
                                weight_sqrt="1/2",
                                anchor_point=0, anchor_value=1,
                                anchor_value_sqrt="1/2")
    return germ_from_points(["1/2", "2"], ["-1/2", "-1/2"], weight_sqrt="1/2")


def test_one_pair_expansion_matches_binomial_oracle():
    with working(60):
        g = one_pair()
        s = expand_at_infinity(g, 25)
        oracle = ratio_pair_coeffs([(Fraction(-1), Fraction(1))],
                                   [Fraction(1, 3)], 25)
        assert oracle[0] == 1
        assert oracle[1] == Fraction(2, 3)
        assert oracle[2] == Fraction(2, 9)
        for k in range(26):
            want = mpf(oracle[k].numerator) / oracle[k].denominator
            assert abs(s[k] - want) <= mpf("1e-55")


def test_three_pair_expansion_matches_binomial_oracle():
    pairs = [(Fraction(-5, 2), Fraction(-13, 10)),
             (Fraction(-4, 5), Fraction(4, 5)),
             (Fraction(13, 10), Fraction(5, 2))]
    expos = [Fraction(1, 3), Fraction(-1, 3), Fraction(1, 3)]
    oracle = ratio_pair_coeffs(pairs, expos, 30)
    with working(120):
        s = expand_at_infinity(three_pair(alternating=True), 30)
        scale = max(mpf(1), max(abs(c) for c in s.c))
        for k in range(31):
            want = mpf(oracle[k].numerator) / oracle[k].denominator
            assert abs(s[k] - want) <= scale * mpf("1e-110")


def test_bare_product_expansion_matches_binomial_oracle():
    # prod (z - a_j)^(b_j) with exponent sum zero, complex points
    with working(60):
        g = complex_triple()
        s = expand_at_infinity(g, 20)
        a = [(Fraction(-6, 5), Fraction(4, 5)),
             (Fraction(9, 10), Fraction(3, 2)),
             (Fraction(1, 2), Fraction(-6, 5))]
        # exact complex-rational convolution, Fractions on both components
        def cmul(x, y):
            return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])

        def series(alpha, t, order):
            out = [(Fraction(1), Fraction(0))]
            for m in range(1, order + 1):
                c = binom(alpha, m)
                tm = (Fraction(1), Fraction(0))
                for _ in range(m):
                    tm = cmul(tm, (-t[0], -t[1]))
                out.append((c * tm[0], c * tm[1]))
            return out

        acc = [(Fraction(1), Fraction(0))] + [(Fraction(0), Fraction(0))] * 20
        for aj, bj in zip(a, [Fraction(1, 3), Fraction(1, 3), Fraction(-2, 3)]):
            ser = series(bj, aj, 20)
            nxt = []
            for m in range(21):
                re = Fraction(0)
                im = Fraction(0)
                for j in range(m + 1):
                    p = cmul(acc[j], ser[m - j])
                    re += p[0]
                    im += p[1]
                nxt.append((re, im))
            acc = nxt
        for k in range(21):
            want = mp.mpc(mpf(acc[k][0].numerator) / acc[k][0].denominator,
                          mpf(acc[k][1].numerator) / acc[k][1].denominator)
            assert abs(s[k] - want) <= mpf("1e-52")


def test_log_ratio_series_closed_form():
    with working(60):
        a, b = Fraction(1, 2), Fraction(-1, 3)
        s = expand_at_infinity(log_ratio_germ(a, b), 12)
        assert s[0] == 0
        for k in range(1, 13):
            want = (b ** k - a ** k) / k
            wantm = mpf(want.numerator) / want.denominator
            assert abs(s[k] - wantm) <= mpf("1e-55")


def test_series_square_matches_squared_germ():
    with working(60):
        g = one_pair()
        s = expand_at_infinity(g, 30)
        s2 = expand_at_infinity(germ_squared(g), 30)
        prod = s * s
        for k in range(31):
            assert abs(prod[k] - s2[k]) <= mpf("1e-52")


def test_decaying_weighted_product_series():
    with working(60):
        g = shifted_sqrt_inverse()
        s = expand_at_infinity(g, 15)
        # oracle: 2^(-1/2) * u * (1 - u/2)^(-1/2) (1 - 2u)^(-1/2)
        inner = convolve(binom_series(Fraction(-1, 2), Fraction(1, 2), 14),
                         binom_series(Fraction(-1, 2), Fraction(2), 14))
        w = mp.sqrt(mpf(1) / 2)
        assert abs(s[0]) == 0
        for k in range(1, 16):
            c = inner[k - 1]
            want = w * mpf(c.numerator) / c.denominator
            assert abs(s[k] - want) <= mpf("1e-54") * max(1, abs(want))
        full = g + constant_germ(1)
        sf = expand_at_infinity(full, 5)
        assert abs(sf[0] - 1) <= mpf("1e-58")
        assert abs(sf[1] - w) <= mpf("1e-58")


def test_expansion_rejects_fractional_growth():
    g = germ_from_points(["1/2"], ["1/3"])
    with working(60):
        with pytest.raises(ValueError):
            expand_at_infinity(g, 5)


def test_taylor_at_anchor_matches_derivative_formulas():
    with working(60):
        g = shifted_sqrt_inverse(anchored=True)
        t = expand_at_point(g, 0, 6)
        r2 = mp.sqrt(mpf(2))
        # p = 2z^2 - 5z + 2, f = p^(-1/2): hand derivatives at 0
        assert abs(t.d[0] - 1 / r2) <= mpf("1e-58")
        assert abs(t.d[1] - mpf(5) / (4 * r2)) <= mpf("1e-57")
        assert abs(t.d[2] - mpf(59) / (32 * r2)) <= mpf("1e-56")


def test_taylor_first_coefficient_matches_finite_difference():
    with working(120):
        g = shifted_sqrt_inverse(anchored=True)
        t = expand_at_point(g, 0, 2)
        h = mpf("1e-40")

        def f(x):
            return 1 / mp.sqrt(2 * x * x - 5 * x + 2)

        fd = (f(h) - f(-h)) / (2 * h)
        assert abs(fd - t.d[1]) <= mpf("1e-30") * abs(t.d[1])


def test_taylor_off_anchor_agrees_with_evaluation():
    with working(60):
        g = one_pair()
        t = expand_at_point(g, 3, 40)
        assert abs(t.d[0] - mp.cbrt(2)) <= mpf("1e-55")
        z = mpf("3.2")
        direct = eval_germ(g, z)
        assert abs(t.eval(z) - direct) <= mpf("1e-35")


def test_constant_and_normalization_coefficients():
    with working(60):
        t = expand_at_point(constant_germ("7/2"), mpf("0.3"), 4)
        assert t.d[0] == mpf(7) / 2
        assert all(c == 0 for c in t.d[1:])
        for g in (one_pair(), three_pair()):
            s = expand_at_infinity(g, 3)
            assert abs(s[0] - 1) <= mpf("1e-58")


def test_eval_reference_points():
    with working(60):
        g = one_pair()
        assert abs(eval_germ(g, 3) - mp.cbrt(2)) <= mpf("1e-58")
        far = eval_germ(g, mpf("1e6"))
        assert abs(far - 1) <= mpf("1e-5")
        assert abs(far - 1) >= mpf("1e-8")


def test_eval_conjugate_symmetry_for_real_data():
    with working(60):
        for g in (three_pair(alternating=True), shifted_sqrt_inverse()):
            for z in (mp.mpc(1, 1), mp.mpc(-3, "0.7"), mp.mpc("0.9", -2)):
                left = eval_germ(g, mp.conj(z))
                right = mp.conj(eval_germ(g, z))
                assert abs(left - right) <= mpf("1e-55") * max(1, abs(right))


def test_partial_sums_converge_to_eval_at_radius_ten():
    with working(60):
        g = one_pair()
        s = expand_at_infinity(g, 40)
        z = 10 * mp.expjpi(mpf(1) / 7)
        assert abs(s.eval(z) - eval_germ(g, z)) <= mpf("1e-38")
        h = complex_triple()
        sh = expand_at_infinity(h, 60)
        zh = mp.mpc(0, 10)
        assert abs(sh.eval(zh) - eval_germ(h, zh)) <= mpf("1e-40")


def test_eval_refuses_cuts_and_anchored_germs():
    with working(60):
        g = one_pair()
        with pytest.raises(ValueError):
            eval_germ(g, mpf("0.3"))
        with pytest.raises(ValueError):
            eval_germ(g, 1)
        bare = complex_triple()
        with pytest.raises(ValueError):
            eval_germ(bare, mp.mpc("-0.6", "0.4"))  # midpoint of an origin cut
        with pytest.raises(ValueError):
            eval_germ(shifted_sqrt_inverse(anchored=True), 5)


def test_continuity_across_gaps_between_cuts():
    with working(60):
        g = three_pair()
        eps = mpf("1e-30")
        for x in (mpf(1), mpf("-1.05"), mpf(4)):
            above = eval_germ(g, mp.mpc(x, eps))
            below = eval_germ(g, mp.mpc(x, -eps))
            assert abs(above - below) <= mpf("1e-25")


def test_boundary_values_reference_point():
    with working(60):
        g = one_pair()
        bv = boundary_values(g, 0)
        assert abs(bv.upper - mp.expjpi(mpf(-1) / 3)) <= mpf("1e-57")
        assert abs(bv.lower - mp.conj(bv.upper)) == 0
        assert abs(bv.jump + 1j * mp.sqrt(3)) <= mpf("1e-57")
        assert abs(bv.total - 1) <= mpf("1e-57")


def test_boundary_values_match_upper_limit_of_eval():
    with working(60):
        g = three_pair(alternating=True)
        for x in (mpf("-2.1"), mpf("0.37"), mpf("1.9")):
            bv = boundary_values(g, x)
            near = eval_germ(g, mp.mpc(x, mpf("1e-30")))
            assert abs(bv.upper - near) <= mpf("1e-25")


def test_boundary_jump_sign_constant_per_segment():
    with working(60):
        for alternating in (False, True):
            g = three_pair(alternating=alternating)
            for lo, hi in g.cut_system().mp_segments():
                signs = set()
                for i in range(1, 6):
                    x = lo + (hi - lo) * mpf(i) / 6
                    bv = boundary_values(g, x)
                    assert abs(mp.re(bv.jump)) <= mpf("1e-55")
                    signs.add(mp.sign(mp.im(bv.jump)))
                assert len(signs) == 1


def test_boundary_values_require_interior_point():
    with working(60):
        g = three_pair()
        for x in (mpf(0 - 1), mpf(1.0), mpf(3)):
            with pytest.raises(ValueError):
                boundary_values(g, x)


def test_second_branch_against_principal_formula():
    with working(60):
        g = one_pair()
        sb = second_branch(g)
        assert abs(sb(0) - 1) <= mpf("1e-58")
        for z in (mp.mpc(0, 2), mp.mpc("0.3", "0.4"), mp.mpc(-1, -1), mpf("0.9")):
            want = ((1 + z) / (1 - z)) ** (mpf(1) / 3)
            assert abs(sb(z) - want) <= mpf("1e-55") * max(1, abs(want))
        assert abs(sb.const + 1) <= mpf("1e-58")
        xs = [mpf(i) / 10 for i in range(-9, 10)]
        for x in xs:
            assert mp.im(sb(x)) == 0
            assert sb(x) > 0


def test_second_branch_multi_pair_real_on_cuts():
    with working(60):
        g = three_pair()
        sb = second_branch(g)
        assert sb.const is None
        for lo, hi in g.cut_system().mp_segments():
            for i in range(1, 5):
                x = lo + (hi - lo) * mpf(i) / 5
                v = sb(x)
                assert mp.im(v) == 0
                assert v > 0


def test_second_branch_rejects_half_integer_exponent():
    g = germ_from_pairs([("-1", "1")], ["1/2"])
    with pytest.raises(ValueError):
        second_branch(g)


def test_expansion_identity_residual():
    with working(60):
        for g in (one_pair(), three_pair(alternating=True),
                  complex_triple(), shifted_sqrt_inverse()):
            assert consistency_residual(g, order=40) <= mpf("1e-50")


def test_expansion_is_precision_faithful():
    # decimal parameters are carried exactly, so recomputing the same
    # germ at much higher precision must refine, not perturb, the
    # coefficients
    g = germ_from_pairs([("-4/5", "4/5")], ["1/3"])
    oracle = ratio_pair_coeffs([(Fraction(-4, 5), Fraction(4, 5))],
                               [Fraction(1, 3)], 25)
    with working(60):
        s60 = expand_at_infinity(g, 25)
    with working(300):
        s300 = expand_at_infinity(g, 25)
        for k in range(26):
            want = mpf(oracle[k].numerator) / oracle[k].denominator
            assert abs(s300[k] - want) <= mpf("1e-290")
            assert abs(s300[k] - s60[k]) <= mpf("1e-55")


def test_record_roundtrip_is_exact():
    with working(60):
        for g in (three_pair(alternating=True), complex_triple(),
                  shifted_sqrt_inverse(anchored=True),
                  log_ratio_germ("1/2", "-1/3") + constant_germ(2)):
            rec = germ_to_record(g)
            json.dumps(rec)  # plain data, serializable
            back = germ_from_record(rec)
            if g.anchor.at_infinity:
                a = expand_at_infinity(g, 12)
                b = expand_at_infinity(back, 12)
            else:
                a = expand_at_point(g, 0, 12)
                b = expand_at_point(back, 0, 12)
            for x, y in zip(a.c if hasattr(a, "c") else a.d,
                            b.c if hasattr(b, "c") else b.d):
                assert x == y


def test_constructor_validation():
    with pytest.raises(ValueError):
        germ_from_pairs([("-1", "1")], [2])
    with pytest.raises(ValueError):
        germ_from_pairs([("-1", "1"), (0, 2)], ["1/3", "1/4"])
    with pytest.raises(ValueError):
        germ_from_pairs([(1, -1)], ["1/3"])
    with pytest.raises(ValueError):
        germ_from_points([1, 1], ["1/3", "-1/3"])
    with pytest.raises(ValueError):
        germ_from_points([1], ["1/3"], anchor_point=0)
    assert as_exact("0.8").re == Fraction(4, 5)
