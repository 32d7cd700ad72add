"""Type I simultaneous approximation for the triple (1, f, f^2).

Polynomials (q0, q1, q2) of degree <= n are sought with

    q0(z) + q1(z) f(z) + q2(z) f(z)^2 = O(1/z^(2n+2)),  z -> oo,

a homogeneous system of 3n+2 conditions on 3n+3 unknowns that consumes
exactly the coefficients c_0..c_{3n+1} of the two input series.  The
ratio pair (-q0/q2, -q1/q2) approximates (f^2, const*f) away from the
branch-cut set.  Both sign conventions for the ratios circulate, so the
accessor takes a flag; the trend measurements below work with the raw
un-negated ratios, which is how the limit constants are usually quoted.
"""

from collections import namedtuple

from mpmath import mp

from .linsolve import nullspace_vector
from .pade import SeriesCertificate
from .poly import Poly
from .precision import (
    MAX_PRECISION_RETRIES,
    SOLVER_BASE_DIGITS,
    SOLVER_DIGITS_PER_ORDER,
    PrecisionExhausted,
    maybe_working,
    solver_digits,
    working,
)

__all__ = [
    "HermiteTriple",
    "HermiteApproximants",
    "RationalDependenceError",
    "TrendReport",
    "hp_type1",
    "hermite_approximants",
    "hp_for_germ",
    "square_series_mismatch",
    "conjecture_trends",
]


class RationalDependenceError(ValueError):
    """The functions 1, f, f^2 admit a polynomial linear relation.

    Raised when the solve keeps a null space of dimension above one
    after the pivot threshold is re-tested at doubled precision; the
    classic trigger is a pair exponent of +-1/2, which makes f^2
    rational.
    """

    def __init__(self, message, nullity, digits):
        super().__init__(message)
        self.nullity = nullity
        self.digits = digits


class HermiteTriple:
    """Polynomials (q0, q1, q2) annihilating z^n .. z^(-(2n+1))."""

    def __init__(self, q0, q1, q2, n, certificate, report=None):
        self.q0 = q0
        self.q1 = q1
        self.q2 = q2
        self.n = n
        self.certificate = certificate
        self.report = report
        # coefficient indices of the input series entering the system
        self.consumed = (0, 3 * n + 1)

    @property
    def polys(self):
        return (self.q0, self.q1, self.q2)

    def scaled(self, factor):
        return HermiteTriple(factor * self.q0, factor * self.q1,
                             factor * self.q2, self.n, self.certificate,
                             self.report)

    def ratio0(self, z):
        """q0/q2 without the convention sign."""
        den = self.q2(z)
        if den == 0:
            raise ZeroDivisionError("zero of q2")
        return self.q0(z) / den

    def ratio1(self, z):
        """q1/q2 without the convention sign."""
        den = self.q2(z)
        if den == 0:
            raise ZeroDivisionError("zero of q2")
        return self.q1(z) / den

    def __repr__(self):
        return "HermiteTriple(n=%d)" % self.n


class HermiteApproximants:
    """Ratio pair (h0, h1) = s*(q0/q2, q1/q2) under a sign convention.

    The convention "theorem1" takes s = -1 for both ratios and is the
    one in which the convergence statements under test are written;
    "definition" keeps the raw ratios.
    """

    def __init__(self, num0, num1, den, convention):
        self.num0 = num0
        self.num1 = num1
        self.den = den
        self.convention = convention

    def h0(self, z):
        d = self.den(z)
        if d == 0:
            raise ZeroDivisionError("zero of the common denominator")
        return self.num0(z) / d

    def h1(self, z):
        d = self.den(z)
        if d == 0:
            raise ZeroDivisionError("zero of the common denominator")
        return self.num1(z) / d

    def __repr__(self):
        return "HermiteApproximants(%s)" % self.convention


def _triple_rows(sf, sf2, n):
    """Rows annihilating z^n .. z^(-(2n+1)); unknowns q0, q1, q2 blocks."""
    rows = []
    for m in range(n, -(2 * n + 2), -1):
        row = [mp.mpf(0)] * (3 * n + 3)
        if 0 <= m <= n:
            row[m] = mp.mpf(1)
        for j in range(n + 1):
            k = j - m
            if 0 <= k <= sf.order:
                row[n + 1 + j] = sf[k]
            if 0 <= k <= sf2.order:
                row[2 * n + 2 + j] = sf2[k]
        rows.append(row)
    return rows


def _triple_certificate(sf, sf2, q0, q1, q2, n):
    """Recombination residual over z^n .. z^(-(2n+1)) at 2P digits."""
    digits = 2 * mp.dps
    with working(digits):
        worst = mp.mpf(0)
        floor = mp.mpf(10) ** (-mp.dps)
        for m in range(n, -(2 * n + 2), -1):
            acc = mp.mpf(0)
            scale = mp.mpf(0)
            if 0 <= m <= n:
                acc += q0[m]
                scale += abs(q0[m])
            for j in range(n + 1):
                k = j - m
                if 0 <= k <= sf.order:
                    term = q1[j] * sf[k]
                    acc += term
                    scale += abs(term)
                if 0 <= k <= sf2.order:
                    term = q2[j] * sf2[k]
                    acc += term
                    scale += abs(term)
            worst = max(worst, abs(acc) / max(scale, floor))
    return SeriesCertificate(n, -(2 * n + 1), worst, digits)


def hp_type1(sf, sf2, n, digits=None, free_col=None):
    """Solve the (3n+2) x (3n+3) system for the triple of order n.

    ``sf2`` must carry the coefficients of f^2; the caller owns that
    identity (see :func:`square_series_mismatch` for the cross-check).
    A nullity above one is re-tested by eliminating the same rows at
    doubled arithmetic precision while keeping the pivot threshold of
    the data; if it persists, the input is rejected as rationally
    dependent rather than folded into a smaller solve, since for this
    system extra null directions signal a structural relation instead
    of a degenerate table block.  Callers that can rebuild the series
    at higher precision should do so before trusting the rejection
    (see :func:`hp_for_germ`).
    """
    need = 3 * n + 1
    if sf.order < need or sf2.order < need:
        raise ValueError("order-%d solve needs coefficients through %d"
                         % (n, need))
    with maybe_working(digits):
        rows = _triple_rows(sf, sf2, n)
        res = nullspace_vector(rows)
        if res.nullity > 1:
            data_threshold = mp.mpf(10) ** (-mp.dps + 10)
            with working(2 * mp.dps):
                res = nullspace_vector(rows, threshold=data_threshold)
            if res.nullity > 1:
                raise RationalDependenceError(
                    "null space stays %d-dimensional under doubled "
                    "arithmetic precision; 1, f, f^2 look rationally "
                    "dependent" % res.nullity,
                    nullity=res.nullity, digits=mp.dps)
        if free_col is not None:
            res = nullspace_vector(rows, skip_col=free_col)
        q0 = Poly(res.vector[: n + 1])
        q1 = Poly(res.vector[n + 1: 2 * n + 2])
        q2 = Poly(res.vector[2 * n + 2:])
        scale = max(q0.max_abs(), q1.max_abs(), q2.max_abs())
        lead = q2[n]
        if abs(lead) > mp.mpf(10) ** (-mp.dps + 10) * scale:
            inv = 1 / lead
            q0, q1, q2 = inv * q0, inv * q1, inv * q2
        cert = _triple_certificate(sf, sf2, q0, q1, q2, n)
        return HermiteTriple(q0, q1, q2, n, cert, report=res)


def hermite_approximants(t, sign_convention="theorem1"):
    """Ratio pair of a triple under the selected sign convention."""
    scale = max(t.q0.max_abs(), t.q1.max_abs(), t.q2.max_abs(), mp.mpf(1))
    if t.q2.max_abs() <= mp.mpf(10) ** (-mp.dps + 10) * scale:
        raise ValueError("q2 vanishes at working precision")
    if sign_convention == "theorem1":
        sign = mp.mpf(-1)
    elif sign_convention == "definition":
        sign = mp.mpf(1)
    else:
        raise ValueError("unknown sign convention %r" % (sign_convention,))
    return HermiteApproximants(sign * t.q0, sign * t.q1, t.q2,
                               sign_convention)


def square_series_mismatch(sf, sf2, order=None):
    """Relative disagreement between sf*sf and sf2 through the order.

    Used as a guard before a triple solve: a visible mismatch means the
    two series describe different branches or normalizations, which the
    solver itself would not notice.
    """
    prod = sf * sf
    if order is None:
        order = min(prod.order, sf2.order)
    worst = mp.mpf(0)
    floor = mp.mpf(10) ** (-mp.dps)
    for k in range(order + 1):
        scale = max(abs(prod[k]), abs(sf2[k]), floor)
        worst = max(worst, abs(prod[k] - sf2[k]) / scale)
    return worst


def hp_for_germ(g, n, digits=None, slope=None, base=SOLVER_BASE_DIGITS,
                retries=MAX_PRECISION_RETRIES):
    """Solve the triple system for a germ under escalating precision.

    The f^2 series comes from an independent expansion of the squared
    germ and is cross-checked against the series square; disagreement
    above 10^(-P/2) aborts, because it indicates a branch bug upstream
    that more precision cannot repair.  The certificate is accepted at
    10^(-P/3), else the budget above the base is doubled, at most
    ``retries`` times.
    """
    from .germs import expand_at_infinity, germ_squared

    p = int(digits) if digits is not None else solver_digits(
        n, base, slope if slope is not None else SOLVER_DIGITS_PER_ORDER)
    g2 = germ_squared(g)
    last = None
    dependence = None
    for _ in range(retries + 1):
        sf = expand_at_infinity(g, 3 * n + 1, digits=p)
        sf2 = expand_at_infinity(g2, 3 * n + 1, digits=p)
        with working(p):
            mismatch = square_series_mismatch(sf, sf2)
            if mismatch > mp.mpf(10) ** (-p / 2):
                raise ValueError(
                    "squared-germ series disagrees with the series square "
                    "(relative %s); branch or normalization bug upstream"
                    % mp.nstr(mismatch, 5))
        try:
            triple = hp_type1(sf, sf2, n, digits=p)
        except RationalDependenceError as exc:
            # a true relation survives any rebuild; a near-relation in
            # low-precision data should dissolve, so rebuild and retry
            dependence = exc
            p = base + 2 * (p - base)
            continue
        dependence = None
        if triple.certificate.residual <= mp.mpf(10) ** (-p / 3):
            return triple
        last = triple
        p = base + 2 * (p - base)
    if dependence is not None:
        raise dependence
    raise PrecisionExhausted(
        "triple residual %s still above tolerance after escalation"
        % mp.nstr(last.certificate.residual, 5),
        residual=last.certificate.residual, digits=p)


class TrendReport:
    """Per-order error sequences for the two ratio limits.

    ``errors_f2[i][j]`` is the deviation of q0/q2 from its target at
    order n_list[i], point j, and ``errors_const_f`` the same for
    q1/q2.  The targets depend on what is computable for the germ,
    recorded in ``target_kind``:

    * "second-branch": real pair germ with one shared exponent.  The
      branch-cut set of the limit runs through infinity, so the limit
      is not the input germ but the branch B real and positive on the
      pair interiors; targets are B^2 and C*B with C fitted by least
      squares at the largest order.
    * "reference-order": real pair germ with mixed exponents.  No
      closed form for the limit branch is available, so both ratios
      are compared against the ratios of a triple at a higher
      reference order (``reference_n``); the sequences then measure
      stabilization rather than distance to a known limit.
    * "infinity-germ": remaining germs, whose branch-cut set stays
      bounded; the limit is the continuation of the germ itself and
      the targets are eval of the squared germ and C*eval(f).
    """

    def __init__(self, n_list, points, errors_f2, errors_const_f,
                 fitted_constant, expected_constant, target_kind,
                 reference_n=None):
        self.n_list = list(n_list)
        self.points = list(points)
        self.errors_f2 = errors_f2
        self.errors_const_f = errors_const_f
        self.fitted_constant = fitted_constant
        self.expected_constant = expected_constant
        self.target_kind = target_kind
        self.reference_n = reference_n

    def max_errors_f2(self):
        return [max(row) for row in self.errors_f2]

    def max_errors_const_f(self):
        if self.errors_const_f is None:
            return None
        return [max(row) for row in self.errors_const_f]

    def __repr__(self):
        return "TrendReport(n=%s, %d points, %s)" % (
            self.n_list, len(self.points), self.target_kind)


def conjecture_trends(g, n_list, test_points, digits=None, slope=None,
                      base=SOLVER_BASE_DIGITS, retries=MAX_PRECISION_RETRIES,
                      reference_margin=10):
    """Measure the two ratio limits of the triple along increasing orders.

    For each order in the list a triple is solved and the maximum
    deviation of its ratios from the conjectured limits over the test
    points is recorded; see :class:`TrendReport` for how the limit
    targets are chosen per germ shape.  Test points must avoid the
    real axis, where the limits live on the cut set and the ratios
    oscillate.
    """
    from .germs import eval_germ, germ_squared, second_branch

    ns = list(n_list)
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("orders must be strictly increasing")
    pts = [mp.mpmathify(z) for z in test_points]
    if not pts:
        raise ValueError("at least one test point required")
    for z in pts:
        if mp.im(z) == 0:
            raise ValueError("test points must lie off the real axis")

    try:
        branch = second_branch(g)
    except ValueError:
        branch = None
    prod = g.single_product
    real_pairs = prod is not None and prod.is_real_pair_form()

    g2 = germ_squared(g)
    triples = [hp_for_germ(g, n, digits=digits, slope=slope, base=base,
                           retries=retries) for n in ns]
    reference = None
    reference_n = None
    if branch is None and real_pairs:
        reference_n = ns[-1] + reference_margin
        reference = hp_for_germ(g, reference_n, digits=digits, slope=slope,
                                base=base, retries=retries)

    eval_digits = int(digits) if digits is not None else solver_digits(
        ns[-1], base, slope if slope is not None else SOLVER_DIGITS_PER_ORDER)
    with working(eval_digits):
        fitted = None
        expected = None
        fvals = None
        if branch is not None:
            kind = "second-branch"
            target_f2 = [branch(z) ** 2 for z in pts]
            fvals = [branch(z) for z in pts]
            expected = branch.expected_constant()
        elif reference is not None:
            kind = "reference-order"
            target_f2 = [reference.ratio0(z) for z in pts]
            target_f1 = [reference.ratio1(z) for z in pts]
        else:
            kind = "infinity-germ"
            target_f2 = [eval_germ(g2, z) for z in pts]
            fvals = [eval_germ(g, z) for z in pts]

        errors_f2 = [[abs(t.ratio0(z) - w) for z, w in zip(pts, target_f2)]
                     for t in triples]

        if fvals is not None:
            top = triples[-1]
            num = mp.mpf(0)
            den = mp.mpf(0)
            for z, b in zip(pts, fvals):
                num += top.ratio1(z) * mp.conj(b)
                den += abs(b) ** 2
            fitted = num / den
            target_f1 = [fitted * b for b in fvals]
        errors_const_f = [[abs(t.ratio1(z) - w)
                           for z, w in zip(pts, target_f1)]
                          for t in triples]

    return TrendReport(ns, pts, errors_f2, errors_const_f, fitted, expected,
                       kind, reference_n=reference_n)
