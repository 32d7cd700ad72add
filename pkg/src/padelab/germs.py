"""Germs of multivalued analytic functions.

A germ is a finite sum of closed-form terms: power products
prod_j (z - a_j)^(b_j), logarithms of ratios log((z-a)/(z-b)), and
constants.  Branch points, exponents and scalar factors are stored as
exact rationals (pairs of rationals for complex data), so the same germ
can be expanded or evaluated at any working precision without first
rounding its defining data.

Branch conventions.  A power product built from ratio pairs
((z-lo)/(z-hi))^alpha takes the principal branch of each ratio factor;
its cuts are exactly the segments joining lo to hi.  A power product
given by bare points takes the branch that behaves like
weight * z^sigma * (1 + O(1/z)) at infinity, continued to the plane cut
along the segments from the origin to each branch point.  Evaluation
refuses points on a cut rather than silently picking a side.
"""

from collections import namedtuple
from fractions import Fraction

from mpmath import mp

from .poly import Poly
from .precision import maybe_working
from .series import LaurentSeriesAtInfinity, TaylorSeriesAtPoint, poly_times_series

__all__ = [
    "ExactComplex",
    "Germ",
    "CutSystem",
    "SecondBranch",
    "BoundaryValues",
    "as_exact",
    "germ_from_pairs",
    "germ_from_points",
    "log_ratio_germ",
    "constant_germ",
    "germ_squared",
    "expand_at_infinity",
    "expand_at_point",
    "eval_germ",
    "boundary_values",
    "second_branch",
    "consistency_residual",
    "germ_to_record",
    "germ_from_record",
]


def _frac(x):
    """Exact rational from int, Fraction, or string ('4/5', '0.8', '-1.3').

    Floats are converted to their exact binary value; pass strings or
    Fractions when a decimal literal is meant exactly.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str, float)):
        return Fraction(x)
    raise TypeError("cannot convert %r to an exact rational" % (x,))


def _frac_to_mp(fr):
    return mp.mpf(fr.numerator) / fr.denominator


class ExactComplex:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @property
    def is_real(self):
        return self.im == 0

    def to_mp(self):
        """mpf (real case) or mpc at the ambient working precision."""
        if self.im == 0:
            return _frac_to_mp(self.re)
        return mp.mpc(_frac_to_mp(self.re), _frac_to_mp(self.im))

    def conjugate(self):
        return ExactComplex(self.re, -self.im)

    def key(self):
        return (self.re, self.im)

    def __eq__(self, other):
        if not isinstance(other, ExactComplex):
            try:
                other = as_exact(other)
            except TypeError:
                return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.im == 0:
            return "ExactComplex(%s)" % self.re
        return "ExactComplex(%s, %s)" % (self.re, self.im)


def as_exact(x):
    """Coerce to ExactComplex.  Accepts ExactComplex, rationals, strings,
    ints, floats, complex, and (re, im) tuples."""
    if isinstance(x, ExactComplex):
        return x
    if isinstance(x, complex):
        return ExactComplex(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, tuple) and len(x) == 2:
        return ExactComplex(_frac(x[0]), _frac(x[1]))
    return ExactComplex(_frac(x))


def _is_integer(e):
    return e.is_real and e.re.denominator == 1


class PowerProduct:
    """Term prod_j (z - a_j)^(b_j), optionally scaled.

    The scalar factor is weight * sqrt(weight_sqrt); the square root
    covers leading coefficients like 2^(-1/2) that are not rational.
    ``ratio_pairs`` remembers a construction from ratio factors
    ((z-lo)/(z-hi))^alpha, which pins the cuts to the pair segments.
    """

    __slots__ = ("points", "exponents", "weight", "weight_sqrt", "ratio_pairs")

    def __init__(self, points, exponents, weight=1, weight_sqrt=None, ratio_pairs=None):
        if len(points) != len(exponents):
            raise ValueError("one exponent per branch point required")
        self.points = [as_exact(a) for a in points]
        self.exponents = [as_exact(b) for b in exponents]
        self.weight = as_exact(weight)
        self.weight_sqrt = None if weight_sqrt is None else _frac(weight_sqrt)
        self.ratio_pairs = ratio_pairs
        seen = set()
        for a in self.points:
            if a.key() in seen:
                raise ValueError("branch points must be pairwise distinct")
            seen.add(a.key())

    @property
    def exponent_sum(self):
        re = sum((b.re for b in self.exponents), Fraction(0))
        im = sum((b.im for b in self.exponents), Fraction(0))
        return ExactComplex(re, im)

    def weight_mp(self):
        w = self.weight.to_mp()
        if self.weight_sqrt is not None:
            w = w * mp.sqrt(_frac_to_mp(self.weight_sqrt))
        return w

    def is_real_pair_form(self):
        return self.ratio_pairs is not None and all(
            lo.is_real and hi.is_real and al.is_real for lo, hi, al in self.ratio_pairs
        )


class LogRatio:
    """Term weight * log((z - a)/(z - b)), principal branch, cut on [a, b]."""

    __slots__ = ("a", "b", "weight")

    def __init__(self, a, b, weight=1):
        self.a = as_exact(a)
        self.b = as_exact(b)
        self.weight = as_exact(weight)
        if self.a == self.b:
            raise ValueError("log ratio needs two distinct points")


class ConstantTerm:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = as_exact(value)


class Anchor:
    """Branch choice: value of the germ at a point (None point = infinity)."""

    __slots__ = ("point", "value", "value_sqrt")

    def __init__(self, point=None, value=None, value_sqrt=None):
        self.point = None if point is None else as_exact(point)
        self.value = None if value is None else as_exact(value)
        self.value_sqrt = None if value_sqrt is None else _frac(value_sqrt)

    @property
    def at_infinity(self):
        return self.point is None

    def value_mp(self):
        if self.value is None:
            return None
        v = self.value.to_mp()
        if self.value_sqrt is not None:
            v = v * mp.sqrt(_frac_to_mp(self.value_sqrt))
        return v


class Germ:
    """Finite sum of PowerProduct, LogRatio and ConstantTerm terms."""

    __slots__ = ("terms", "anchor")

    def __init__(self, terms, anchor=None):
        self.terms = list(terms)
        self.anchor = anchor if anchor is not None else Anchor()

    def branch_points(self):
        pts = []
        seen = set()
        for t in self.terms:
            if isinstance(t, PowerProduct):
                cand = t.points
            elif isinstance(t, LogRatio):
                cand = (t.a, t.b)
            else:
                cand = ()
            for a in cand:
                if a.key() not in seen:
                    seen.add(a.key())
                    pts.append(a)
        return pts

    def max_branch_radius(self):
        """max |a_j| over all branch points, at ambient precision."""
        r = mp.mpf(0)
        for a in self.branch_points():
            r = max(r, abs(a.to_mp()))
        return r

    @property
    def single_product(self):
        if len(self.terms) == 1 and isinstance(self.terms[0], PowerProduct):
            return self.terms[0]
        return None

    def common_exponent(self):
        """The shared pair exponent of a ratio-pair product, or None."""
        t = self.single_product
        if t is None or t.ratio_pairs is None:
            return None
        alphas = {al.key() for _, _, al in t.ratio_pairs}
        if len(alphas) != 1:
            return None
        return t.ratio_pairs[0][2]

    def cut_system(self):
        t = self.single_product
        if t is None or not t.is_real_pair_form():
            raise ValueError("cut system is defined for real ratio-pair germs")
        return CutSystem([(lo.re, hi.re) for lo, hi, _ in t.ratio_pairs])

    def __add__(self, other):
        if not isinstance(other, Germ):
            return NotImplemented
        if not (self.anchor.at_infinity and other.anchor.at_infinity):
            raise ValueError("only germs anchored at infinity can be summed")
        return Germ(self.terms + other.terms)


class CutSystem:
    """Disjoint closed real segments, ordered left to right."""

    __slots__ = ("segments",)

    def __init__(self, segments):
        segs = [(_frac(lo), _frac(hi)) for lo, hi in segments]
        segs.sort(key=lambda s: s[0])
        for lo, hi in segs:
            if not lo < hi:
                raise ValueError("segment endpoints must satisfy lo < hi")
        for (_, hi), (lo2, _) in zip(segs, segs[1:]):
            if not hi < lo2:
                raise ValueError("segments must be pairwise disjoint")
        self.segments = segs

    @property
    def q(self):
        return len(self.segments)

    @property
    def endpoints(self):
        return [e for seg in self.segments for e in seg]

    def segment_index(self, x):
        """Index of the segment with x strictly inside, else None."""
        for k, (lo, hi) in enumerate(self.segments):
            if lo < x < hi:
                return k
        return None

    def contains_interior(self, x):
        return self.segment_index(x) is not None

    def gaps(self):
        """Bounded open intervals of the real line between the segments."""
        return [
            (hi, lo2)
            for (_, hi), (lo2, _) in zip(self.segments, self.segments[1:])
        ]

    def mp_segments(self):
        return [(_frac_to_mp(lo), _frac_to_mp(hi)) for lo, hi in self.segments]


def germ_from_pairs(pairs, exponents, weight=1):
    """Product of ratio factors prod_p ((z - lo_p)/(z - hi_p))^(alpha_p).

    The branch equals weight at infinity; cuts are the segments [lo, hi].
    Real pairs must be disjoint and are sorted left to right.
    """
    if len(pairs) != len(exponents):
        raise ValueError("one exponent per pair required")
    rp = []
    for (lo, hi), al in zip(pairs, exponents):
        lo, hi, al = as_exact(lo), as_exact(hi), as_exact(al)
        if _is_integer(al):
            raise ValueError("pair exponents must not be integers")
        rp.append((lo, hi, al))
    if all(lo.is_real and hi.is_real for lo, hi, _ in rp):
        for lo, hi, _ in rp:
            if not lo.re < hi.re:
                raise ValueError("real pairs must be ordered lo < hi")
        rp.sort(key=lambda p: p[0].re)
        for (_, hi, _), (lo2, _, _) in zip(rp, rp[1:]):
            if not hi.re < lo2.re:
                raise ValueError("real pair segments must be disjoint")
    points = []
    expos = []
    for lo, hi, al in rp:
        points.extend([lo, hi])
        expos.extend([al, ExactComplex(-al.re, -al.im)])
    weight = as_exact(weight)
    term = PowerProduct(points, expos, weight=weight, ratio_pairs=rp)
    anchor_val = weight if weight == ExactComplex(1) else None
    return Germ([term], Anchor(value=anchor_val))


def germ_from_points(points, exponents, weight=1, weight_sqrt=None,
                     anchor_point=None, anchor_value=None, anchor_value_sqrt=None):
    """Product prod_j (z - a_j)^(b_j) scaled by weight * sqrt(weight_sqrt).

    Without an anchor point the branch is the one behaving like
    weight * sqrt(weight_sqrt) * z^sigma at infinity.  A finite anchor
    point with an explicit value selects a branch there instead; such a
    germ supports Taylor expansion at the anchor but not evaluation.
    """
    expos = [as_exact(b) for b in exponents]
    for b in expos:
        if _is_integer(b):
            raise ValueError("exponents must not be integers")
    term = PowerProduct(points, expos, weight=weight, weight_sqrt=weight_sqrt)
    anchor = Anchor(anchor_point, anchor_value, anchor_value_sqrt)
    if not anchor.at_infinity and anchor.value is None:
        raise ValueError("a finite anchor point needs an explicit value")
    return Germ([term], anchor)


def log_ratio_germ(a, b, weight=1):
    """Germ of weight * log((z - a)/(z - b)); vanishes at infinity."""
    return Germ([LogRatio(a, b, weight)])


def constant_germ(value):
    return Germ([ConstantTerm(value)])


def germ_squared(g):
    """Square of a single-product germ (exponents doubled, scalar squared)."""
    t = g.single_product
    if t is None:
        raise ValueError("squaring is implemented for single-product germs")
    expos = [ExactComplex(2 * b.re, 2 * b.im) for b in t.exponents]
    w2re = t.weight.re * t.weight.re - t.weight.im * t.weight.im
    w2im = 2 * t.weight.re * t.weight.im
    if t.weight_sqrt is not None:
        w2re, w2im = w2re * t.weight_sqrt, w2im * t.weight_sqrt
    rp = None
    if t.ratio_pairs is not None:
        rp = [(lo, hi, ExactComplex(2 * al.re, 2 * al.im)) for lo, hi, al in t.ratio_pairs]
    term = PowerProduct(t.points, expos, weight=ExactComplex(w2re, w2im), ratio_pairs=rp)
    return Germ([term], Anchor())


# ---------------------------------------------------------------------------
# expansions


def _product_series_at_infinity(term, order):
    """Coefficients c_0..c_order of the z^sigma-normalized branch at infinity."""
    sigma = term.exponent_sum
    if not (sigma.im == 0 and sigma.re.denominator == 1):
        raise ValueError("exponent sum must be an integer for a Laurent "
                         "expansion at infinity")
    shift = -int(sigma.re)
    if shift < 0:
        raise ValueError("germ grows at infinity; no decaying expansion")
    coeffs = [mp.mpf(0)] * (order + 1)
    inner_order = order - shift
    if inner_order < 0:
        return coeffs
    pts = [a.to_mp() for a in term.points]
    expos = [b.to_mp() for b in term.exponents]
    # power sums S_k = sum_j b_j a_j^k drive log(prod (1 - a_j/z)^(b_j))
    powers = list(pts)
    s = []
    for _ in range(inner_order):
        s.append(sum(b * p for b, p in zip(expos, powers)))
        powers = [p * a for p, a in zip(powers, pts)]
    inner = [mp.mpf(1)]
    for m in range(1, inner_order + 1):
        acc = mp.mpf(0)
        for k in range(1, m + 1):
            acc += s[k - 1] * inner[m - k]
        inner.append(-acc / m)
    w = term.weight_mp()
    for m, c in enumerate(inner):
        coeffs[m + shift] = w * c
    return coeffs


def expand_at_infinity(g, order, digits=None):
    """Laurent coefficients c_0..c_order of the germ at infinity."""
    if not g.anchor.at_infinity:
        raise ValueError("germ is anchored at a finite point, not at infinity")
    with maybe_working(digits):
        coeffs = [mp.mpf(0)] * (order + 1)
        for t in g.terms:
            if isinstance(t, PowerProduct):
                part = _product_series_at_infinity(t, order)
                for k in range(order + 1):
                    coeffs[k] += part[k]
            elif isinstance(t, LogRatio):
                a, b, w = t.a.to_mp(), t.b.to_mp(), t.weight.to_mp()
                pa, pb = mp.mpf(1), mp.mpf(1)
                for k in range(1, order + 1):
                    pa, pb = pa * a, pb * b
                    coeffs[k] += w * (pb - pa) / k
            else:
                coeffs[0] += t.value.to_mp()
        declared = g.anchor.value_mp()
        if declared is not None:
            scale = max(abs(declared), mp.mpf(1))
            if abs(coeffs[0] - declared) > scale * mp.mpf(10) ** (-mp.dps + 10):
                raise ValueError("leading coefficient disagrees with the "
                                 "declared value at infinity")
        return LaurentSeriesAtInfinity(coeffs)


def _eval_power_product(term, z):
    if term.ratio_pairs is not None:
        val = term.weight_mp()
        for lo, hi, al in term.ratio_pairs:
            num = z - lo.to_mp()
            den = z - hi.to_mp()
            if num == 0 or den == 0:
                raise ValueError("evaluation at a branch point")
            r = num / den
            if mp.im(r) == 0 and mp.re(r) < 0:
                raise ValueError("point lies on a cut segment")
            val *= r ** al.to_mp()
        return val
    sigma = term.exponent_sum
    if not (sigma.im == 0 and sigma.re.denominator == 1):
        raise ValueError("branch at infinity undefined: non-integer exponent sum")
    if z == 0:
        raise ValueError("origin lies on the reference cuts of a bare product")
    val = term.weight_mp() * mp.power(z, int(sigma.re))
    for a, b in zip(term.points, term.exponents):
        base = 1 - a.to_mp() / z
        if base == 0:
            raise ValueError("evaluation at a branch point")
        if mp.im(base) == 0 and mp.re(base) < 0:
            raise ValueError("point lies on a cut segment (origin to branch point)")
        val *= base ** b.to_mp()
    return val


def eval_germ(g, z, digits=None):
    """Value of the germ's branch at z, off the cuts.

    Defined for germs anchored at infinity; see the module docstring for
    where each term shape places its cuts.
    """
    if not g.anchor.at_infinity:
        raise ValueError("evaluation is defined for germs anchored at infinity")
    with maybe_working(digits):
        z = mp.mpmathify(z)
        total = mp.mpf(0)
        for t in g.terms:
            if isinstance(t, PowerProduct):
                total += _eval_power_product(t, z)
            elif isinstance(t, LogRatio):
                num = z - t.a.to_mp()
                den = z - t.b.to_mp()
                if num == 0 or den == 0:
                    raise ValueError("evaluation at a branch point")
                r = num / den
                if mp.im(r) == 0 and mp.re(r) < 0:
                    raise ValueError("point lies on a cut segment")
                total += t.weight.to_mp() * mp.log(r)
            else:
                total += t.value.to_mp()
        return total


def _principal_product_value(term, z0):
    """Principal-argument value prod_j (z0 - a_j)^(b_j) times the scalar."""
    val = term.weight_mp()
    for a, b in zip(term.points, term.exponents):
        base = z0 - a.to_mp()
        if base == 0:
            raise ValueError("expansion point is a branch point")
        val *= base ** b.to_mp()
    return val


def expand_at_point(g, z0, order, digits=None, value=None):
    """Taylor coefficients d_0..d_order of a branch of the germ at z0.

    The branch is chosen by, in order of preference: the explicit
    ``value`` argument, the germ's anchor when it sits at z0, the
    branch-at-infinity continuation when z0 is off the cuts, and as a
    last resort principal arguments per factor.  An explicit value is
    only meaningful for a single-term germ.
    """
    with maybe_working(digits):
        z0 = mp.mpmathify(z0)
        for a in g.branch_points():
            if z0 == a.to_mp():
                raise ValueError("expansion point coincides with a branch point")
        if value is not None and len(g.terms) != 1:
            raise ValueError("an explicit value only selects a branch for a "
                             "single-term germ")
        anchored_here = (not g.anchor.at_infinity
                         and g.anchor.point.to_mp() == z0)
        if not g.anchor.at_infinity and not anchored_here and value is None:
            raise ValueError("germ is anchored elsewhere; supply a value to "
                             "choose a branch at this point")
        coeffs = [mp.mpf(0)] * (order + 1)
        for t in g.terms:
            if isinstance(t, PowerProduct):
                if value is not None:
                    d0 = mp.mpmathify(value)
                elif anchored_here:
                    d0 = g.anchor.value_mp()
                else:
                    try:
                        d0 = _eval_power_product(t, z0)
                    except ValueError:
                        d0 = _principal_product_value(t, z0)
                # log-derivative coefficients of the factor product at z0
                gk = []
                invs = [(a.to_mp() - z0) for a in t.points]
                invs = [1 / d for d in invs]
                expos = [b.to_mp() for b in t.exponents]
                powers = list(invs)
                for _ in range(order):
                    gk.append(-sum(b * p for b, p in zip(expos, powers)))
                    powers = [p * d for p, d in zip(powers, invs)]
                d = [d0]
                for m in range(order):
                    acc = mp.mpf(0)
                    for k in range(m + 1):
                        acc += gk[k] * d[m - k]
                    d.append(acc / (m + 1))
                for k in range(order + 1):
                    coeffs[k] += d[k]
            elif isinstance(t, LogRatio):
                a, b, w = t.a.to_mp(), t.b.to_mp(), t.weight.to_mp()
                if value is not None:
                    coeffs[0] += mp.mpmathify(value)
                else:
                    r = (z0 - a) / (z0 - b)
                    if mp.im(r) == 0 and mp.re(r) < 0:
                        raise ValueError("expansion point lies on the cut")
                    coeffs[0] += w * mp.log(r)
                ia, ib = 1 / (a - z0), 1 / (b - z0)
                pa, pb = ia, ib
                for k in range(order):
                    coeffs[k + 1] += w * (pb - pa) / (k + 1)
                    pa, pb = pa * ia, pb * ib
            else:
                coeffs[0] += t.value.to_mp()
        return TaylorSeriesAtPoint(z0, coeffs)


# ---------------------------------------------------------------------------
# boundary data on real cuts

BoundaryValues = namedtuple("BoundaryValues", "upper lower jump total")
BoundaryValues.__doc__ += """

Limits of the germ on a cut segment from above (upper) and below
(lower), their difference (jump) and their sum (total).
"""


def boundary_values(g, x, digits=None):
    """Boundary data of a real ratio-pair germ at a point inside a cut.

    The upper value carries the phase exp(i*pi*s) where s sums the
    signed exponents of the factors whose branch point lies to the
    right of x; the lower value is its conjugate.
    """
    t = g.single_product
    if t is None or not t.is_real_pair_form():
        raise ValueError("boundary values are defined for real ratio-pair germs")
    if not t.weight.is_real:
        raise ValueError("boundary symmetry needs a real scalar factor")
    cuts = g.cut_system()
    with maybe_working(digits):
        xm = mp.mpf(x)
        seg = None
        for k, (lo, hi) in enumerate(cuts.mp_segments()):
            if lo < xm < hi:
                seg = k
        if seg is None:
            raise ValueError("point is not interior to any cut segment")
        modulus = mp.mpf(0)
        phase = Fraction(0)
        for a, b in zip(t.points, t.exponents):
            am = a.to_mp()
            modulus += b.to_mp() * mp.log(abs(xm - am))
            if am > xm:
                phase += b.re
        upper = t.weight_mp() * mp.exp(modulus) * mp.expjpi(_frac_to_mp(phase))
        lower = mp.conj(upper)
        return BoundaryValues(upper, lower, upper - lower, upper + lower)


# ---------------------------------------------------------------------------
# the second branch of a common-exponent germ


class SecondBranch:
    """The branch holomorphic off the closure of R \\ E for a germ with a
    single shared pair exponent alpha.

    Writing R(z) = prod_p (z - lo_p)/(z - hi_p), the value is
    |R|^alpha * exp(i*alpha*(theta - pi)) with theta = arg R folded into
    [0, 2*pi).  On the interior of the cuts R is negative, theta = pi,
    and the branch is real there.  For one pair the phase fold is exact
    everywhere off the two outer rays; for several pairs realness on the
    cuts is what the construction guarantees.
    """

    def __init__(self, pairs, alpha):
        self.pairs = pairs
        self.alpha = alpha

    @property
    def q(self):
        return len(self.pairs)

    def expected_constant(self, digits=None):
        """Scaling constant of the approximant limit; known for one pair."""
        if self.q != 1:
            return None
        with maybe_working(digits):
            return -2 * mp.cos(_frac_to_mp(self.alpha) * mp.pi)

    @property
    def const(self):
        return self.expected_constant()

    def __call__(self, z, digits=None):
        with maybe_working(digits):
            z = mp.mpmathify(z)
            r = mp.mpf(1)
            for lo, hi in self.pairs:
                num = z - _frac_to_mp(lo)
                den = z - _frac_to_mp(hi)
                if num == 0 or den == 0:
                    raise ValueError("evaluation at a branch point")
                r *= num / den
            al = _frac_to_mp(self.alpha)
            if mp.im(r) == 0:
                rr = mp.re(r)
                if rr < 0:
                    return mp.exp(al * mp.log(-rr))
                # one-sided limit on the excluded set, approached from above
                return mp.exp(al * mp.log(rr)) * mp.expjpi(-al)
            theta = mp.arg(r)
            if theta < 0:
                theta += 2 * mp.pi
            return mp.exp(al * mp.log(abs(r))) * mp.exp(1j * al * (theta - mp.pi))


def second_branch(g):
    """Second branch of a real ratio-pair germ with one shared exponent."""
    t = g.single_product
    if t is None or not t.is_real_pair_form():
        raise ValueError("second branch needs a real ratio-pair germ")
    al = g.common_exponent()
    if al is None:
        raise ValueError("second branch needs a single shared pair exponent")
    alpha = al.re
    if alpha.denominator == 2:
        raise ValueError("exponent +-1/2 makes the function, its square and 1 "
                         "rationally dependent; no second branch is attached")
    return SecondBranch([(lo.re, hi.re) for lo, hi, _ in t.ratio_pairs], alpha)


# ---------------------------------------------------------------------------
# self-consistency of the expansion


def consistency_residual(g, order=40, digits=None):
    """Residual of the identity A f' = B f on the expansion at infinity.

    A(z) = prod (z - a_j) and B = A * sum_j b_j/(z - a_j) are exact
    polynomials for a single-product germ, so the convolution of either
    side against the computed Laurent coefficients must cancel.  Returns
    the largest mismatched coefficient relative to the size of the two
    sides.
    """
    t = g.single_product
    if t is None:
        raise ValueError("consistency check applies to single-product germs")
    with maybe_working(digits):
        s = expand_at_infinity(g, order)
        pts = [a.to_mp() for a in t.points]
        expos = [b.to_mp() for b in t.exponents]
        apoly = Poly.from_roots(pts)
        bpoly = Poly([mp.mpf(0)])
        for j, bj in enumerate(expos):
            others = [a for i, a in enumerate(pts) if i != j]
            bpoly = bpoly + bj * Poly.from_roots(others)
        deriv = [mp.mpf(0)] * (order + 2)
        for k in range(1, order + 1):
            deriv[k + 1] = -k * s[k]
        lhs = poly_times_series(apoly, LaurentSeriesAtInfinity(deriv))
        rhs = poly_times_series(bpoly, LaurentSeriesAtInfinity(list(s.c)))
        diff = lhs - rhs
        scale = max(lhs.max_abs_window(), rhs.max_abs_window(), mp.mpf(1))
        return diff.max_abs_window() / scale


# ---------------------------------------------------------------------------
# structured records (used by configuration files)


def _frac_str(fr):
    return str(fr)


def _exact_to_record(x):
    if x.is_real:
        return _frac_str(x.re)
    return [_frac_str(x.re), _frac_str(x.im)]


def _exact_from_record(rec):
    if isinstance(rec, list):
        return ExactComplex(Fraction(rec[0]), Fraction(rec[1]))
    return ExactComplex(Fraction(rec))


def germ_to_record(g):
    """Plain-data description of a germ, rationals as strings."""
    terms = []
    for t in g.terms:
        if isinstance(t, PowerProduct):
            if t.ratio_pairs is not None:
                terms.append({
                    "kind": "ratio_product",
                    "pairs": [[_exact_to_record(lo), _exact_to_record(hi)]
                              for lo, hi, _ in t.ratio_pairs],
                    "exponents": [_exact_to_record(al) for _, _, al in t.ratio_pairs],
                    "weight": _exact_to_record(t.weight),
                })
            else:
                rec = {
                    "kind": "power_product",
                    "points": [_exact_to_record(a) for a in t.points],
                    "exponents": [_exact_to_record(b) for b in t.exponents],
                    "weight": _exact_to_record(t.weight),
                }
                if t.weight_sqrt is not None:
                    rec["weight_sqrt"] = _frac_str(t.weight_sqrt)
                terms.append(rec)
        elif isinstance(t, LogRatio):
            terms.append({
                "kind": "log_ratio",
                "a": _exact_to_record(t.a),
                "b": _exact_to_record(t.b),
                "weight": _exact_to_record(t.weight),
            })
        else:
            terms.append({"kind": "constant", "value": _exact_to_record(t.value)})
    rec = {"terms": terms}
    anchor = g.anchor
    if not (anchor.point is None and anchor.value is None):
        arec = {}
        if anchor.point is not None:
            arec["point"] = _exact_to_record(anchor.point)
        if anchor.value is not None:
            arec["value"] = _exact_to_record(anchor.value)
        if anchor.value_sqrt is not None:
            arec["value_sqrt"] = _frac_str(anchor.value_sqrt)
        rec["anchor"] = arec
    return rec


def germ_from_record(rec):
    terms = []
    for trec in rec["terms"]:
        kind = trec["kind"]
        if kind == "ratio_product":
            pairs = [(_exact_from_record(lo), _exact_from_record(hi))
                     for lo, hi in trec["pairs"]]
            expos = [_exact_from_record(al) for al in trec["exponents"]]
            rp = [(lo, hi, al) for (lo, hi), al in zip(pairs, expos)]
            points = []
            plist = []
            for lo, hi, al in rp:
                points.extend([lo, hi])
                plist.extend([al, ExactComplex(-al.re, -al.im)])
            terms.append(PowerProduct(points, plist,
                                      weight=_exact_from_record(trec.get("weight", "1")),
                                      ratio_pairs=rp))
        elif kind == "power_product":
            terms.append(PowerProduct(
                [_exact_from_record(a) for a in trec["points"]],
                [_exact_from_record(b) for b in trec["exponents"]],
                weight=_exact_from_record(trec.get("weight", "1")),
                weight_sqrt=(Fraction(trec["weight_sqrt"])
                             if "weight_sqrt" in trec else None)))
        elif kind == "log_ratio":
            terms.append(LogRatio(_exact_from_record(trec["a"]),
                                  _exact_from_record(trec["b"]),
                                  weight=_exact_from_record(trec.get("weight", "1"))))
        elif kind == "constant":
            terms.append(ConstantTerm(_exact_from_record(trec["value"])))
        else:
            raise ValueError("unknown germ term kind %r" % kind)
    anchor = Anchor()
    if "anchor" in rec:
        arec = rec["anchor"]
        anchor = Anchor(
            _exact_from_record(arec["point"]) if "point" in arec else None,
            _exact_from_record(arec["value"]) if "value" in arec else None,
            Fraction(arec["value_sqrt"]) if "value_sqrt" in arec else None)
    return Germ(terms, anchor)
