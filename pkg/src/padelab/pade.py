"""Diagonal Pade approximants, m-point interpolation variants, continued
fractions of Jacobi type, and the Jacobi-polynomial oracle.

The classical solve finds (p0, p1), deg <= n, with p0 + p1*f vanishing
through z^(-n) at infinity; the approximant is -p0/p1.  The m-point
solve finds (p, q) with q*f_j - p vanishing to prescribed orders at a
set of nodes; the approximant is p/q.  Both reduce to a null-space
computation on a (2n+1) x (2n+2) coefficient matrix, followed by a
recombination check at doubled precision that certifies the claimed
vanishing orders against the input coefficients.
"""

import math
from collections import namedtuple

from mpmath import mp

from .linsolve import nullspace_vector
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
from .series import LaurentSeriesAtInfinity

__all__ = [
    "INFINITY",
    "PadePair",
    "MultipointSpec",
    "MultipointResult",
    "JFraction",
    "SeriesCertificate",
    "NodeCertificate",
    "pade_polynomials",
    "pade_for_germ",
    "multipoint_pade",
    "two_point_pade",
    "jfraction_coeffs",
    "jn_eval",
    "jacobi_oracle",
]

INFINITY = mp.inf

SeriesCertificate = namedtuple("SeriesCertificate", "hi lo residual digits")
SeriesCertificate.__doc__ += """

Largest relative size of the combination's coefficients over the power
window z^hi .. z^lo that the construction claims to annihilate,
recomputed at `digits` working digits.
"""

NodeCertificate = namedtuple("NodeCertificate", "node claim residual digits")


def _is_inf(node):
    return node == mp.inf


class PadePair:
    """Polynomials (p0, p1) of a diagonal approximant -p0/p1."""

    def __init__(self, p0, p1, n, certificate, effective_n=None, report=None):
        self.p0 = p0
        self.p1 = p1
        self.n = n
        self.effective_n = n if effective_n is None else effective_n
        self.certificate = certificate
        self.report = report

    @property
    def degenerate(self):
        return self.effective_n != self.n

    def value(self, z):
        den = self.p1(z)
        if den == 0:
            raise ZeroDivisionError("evaluation at a pole of the approximant")
        return -self.p0(z) / den

    def __repr__(self):
        tag = " degenerate" if self.degenerate else ""
        return "PadePair(n=%d%s)" % (self.n, tag)


def _classical_rows(s, n):
    """Rows annihilating z^n .. z^(-n) of p0 + p1*f; unknowns p0 then p1."""
    rows = []
    for m in range(n, -n - 1, -1):
        row = [mp.mpf(0)] * (2 * n + 2)
        if 0 <= m <= n:
            row[m] = mp.mpf(1)
        for j in range(n + 1):
            k = j - m
            if 0 <= k <= s.order:
                row[n + 1 + j] = s[k]
        rows.append(row)
    return rows


def _classical_certificate(s, p0, p1, n):
    """Recombination residual of p0 + p1*f over z^n .. z^(-n) at 2P digits."""
    digits = 2 * mp.dps
    with working(digits):
        worst = mp.mpf(0)
        floor = mp.mpf(10) ** (-mp.dps)
        for m in range(n, -n - 1, -1):
            acc = mp.mpf(0)
            scale = mp.mpf(0)
            if 0 <= m <= n:
                acc += p0[m]
                scale += abs(p0[m])
            for j in range(n + 1):
                k = j - m
                if 0 <= k <= s.order:
                    term = p1[j] * s[k]
                    acc += term
                    scale += abs(term)
            worst = max(worst, abs(acc) / max(scale, floor))
    return SeriesCertificate(n, -n, worst, digits)


def pade_polynomials(s, n, digits=None, free_col=None):
    """Diagonal approximant polynomials of order n from c_0..c_{2n}.

    A nullity above one means a degenerate block of the table; the
    order is stepped down until the null space is one-dimensional, and
    the result records both the requested and the effective order.
    """
    if s.order < 2 * n:
        raise ValueError("series truncated at %d; order-%d solve needs 2n = %d"
                         % (s.order, n, 2 * n))
    with maybe_working(digits):
        for eff in range(n, -1, -1):
            skip = free_col if free_col is not None and free_col < 2 * eff + 2 else None
            res = nullspace_vector(_classical_rows(s, eff), skip_col=skip)
            if res.nullity != 1:
                continue
            p0 = Poly(res.vector[: eff + 1])
            p1 = Poly(res.vector[eff + 1:])
            if p1.effective_degree() < 0:
                continue
            lead = p1[eff]
            if abs(lead) > mp.mpf(10) ** (-mp.dps + 10) * p1.max_abs():
                inv = 1 / lead
                p0 = inv * p0
                p1 = inv * p1
            cert = _classical_certificate(s, p0, p1, eff)
            return PadePair(p0, p1, n, cert, effective_n=eff, report=res)
        raise ValueError("no one-dimensional null space at any order <= %d" % n)


def pade_for_germ(g, n, digits=None, slope=None, base=SOLVER_BASE_DIGITS,
                  retries=MAX_PRECISION_RETRIES, free_col=None):
    """Solve for a germ under the escalating precision policy.

    Starts at base + slope*n digits (or an explicit starting budget),
    verifies the recombination certificate against 10^(-P/3), and on
    failure doubles the slope part of the budget, at most `retries`
    times.
    """
    from .germs import expand_at_infinity

    p = int(digits) if digits is not None else solver_digits(
        n, base, slope if slope is not None else SOLVER_DIGITS_PER_ORDER)
    last = None
    for _ in range(retries + 1):
        s = expand_at_infinity(g, 2 * n, digits=p)
        pair = pade_polynomials(s, n, digits=p, free_col=free_col)
        if pair.certificate.residual <= mp.mpf(10) ** (-p / 3):
            return pair
        last = pair
        p = base + 2 * (p - base)
    raise PrecisionExhausted(
        "residual %s still above tolerance after escalation"
        % mp.nstr(last.certificate.residual, 5),
        residual=last.certificate.residual, digits=p)


class MultipointSpec:
    """Interpolation data: nodes, multiplicities and the germ series.

    Each node is a finite point with a TaylorSeriesAtPoint centered
    there, or INFINITY with a LaurentSeriesAtInfinity.  Multiplicities
    must sum to 2n+1 for an order-n solve.
    """

    def __init__(self, nodes, multiplicities, series):
        if not (len(nodes) == len(multiplicities) == len(series)):
            raise ValueError("nodes, multiplicities and series must align")
        self.nodes = list(nodes)
        self.multiplicities = [int(m) for m in multiplicities]
        self.series = list(series)
        for m in self.multiplicities:
            if m < 0:
                raise ValueError("multiplicities must be nonnegative")
        for node, ser in zip(self.nodes, self.series):
            if _is_inf(node):
                if not isinstance(ser, LaurentSeriesAtInfinity):
                    raise ValueError("the infinite node needs a series at infinity")
            else:
                if getattr(ser, "z0", None) is None:
                    raise ValueError("finite nodes need a Taylor series")
                if ser.z0 != mp.mpmathify(node):
                    raise ValueError("series center differs from its node")


class MultipointResult:
    """Numerator p and denominator q of an interpolating approximant p/q."""

    def __init__(self, p, q, n, certificates, report=None):
        self.p = p
        self.q = q
        self.n = n
        self.certificates = certificates
        self.report = report

    def value(self, z):
        den = self.q(z)
        if den == 0:
            raise ZeroDivisionError("evaluation at a pole of the approximant")
        return self.p(z) / den

    def __repr__(self):
        return "MultipointResult(n=%d, nodes=%d)" % (self.n, len(self.certificates))


def _infinite_node_rows(s, n, mult):
    """Annihilate z^n .. z^(n-mult+1) of q*f - p; unknowns q then p."""
    rows = []
    for m in range(n, n - mult, -1):
        row = [mp.mpf(0)] * (2 * n + 2)
        for j in range(n + 1):
            k = j - m
            if 0 <= k <= s.order:
                row[j] = s[k]
        if 0 <= m <= n:
            row[n + 1 + m] = mp.mpf(-1)
        rows.append(row)
    return rows


def _finite_node_rows(t, ser, n, mult):
    """Annihilate (z-t)^0 .. (z-t)^(mult-1) of q*f_t - p."""
    tm = mp.mpmathify(t)
    # recentering matrix: z^k = sum_u C(k,u) t^(k-u) (z-t)^u
    recenter = [[mp.mpf(0)] * (n + 1) for _ in range(n + 1)]
    for k in range(n + 1):
        for u in range(k + 1):
            recenter[k][u] = mp.mpf(math.comb(k, u)) * tm ** (k - u)
    rows = []
    for m in range(mult):
        row = [mp.mpf(0)] * (2 * n + 2)
        for k in range(n + 1):
            acc = mp.mpf(0)
            for u in range(min(m, k) + 1):
                acc += recenter[k][u] * ser.d[m - u]
            row[k] = acc
            if m <= k:
                row[n + 1 + k] = -recenter[k][m]
        rows.append(row)
    return rows


def _multipoint_certificates(spec, p, q, n):
    digits = 2 * mp.dps
    certs = []
    with working(digits):
        floor = mp.mpf(10) ** (-mp.dps)
        for node, mult, ser in zip(spec.nodes, spec.multiplicities, spec.series):
            if mult == 0:
                continue
            worst = mp.mpf(0)
            if _is_inf(node):
                for m in range(n, n - mult, -1):
                    acc = mp.mpf(0)
                    scale = mp.mpf(0)
                    for j in range(n + 1):
                        k = j - m
                        if 0 <= k <= ser.order:
                            term = q[j] * ser[k]
                            acc += term
                            scale += abs(term)
                    if 0 <= m <= n:
                        acc -= p[m]
                        scale += abs(p[m])
                    worst = max(worst, abs(acc) / max(scale, floor))
                certs.append(NodeCertificate(mp.inf, (n, n - mult + 1),
                                             worst, digits))
            else:
                tm = mp.mpmathify(node)
                qt = _recentered(q, tm, mult)
                pt = _recentered(p, tm, mult)
                for m in range(mult):
                    acc = mp.mpf(0)
                    scale = mp.mpf(0)
                    for u in range(m + 1):
                        term = qt[u] * ser.d[m - u]
                        acc += term
                        scale += abs(term)
                    acc -= pt[m]
                    scale += abs(pt[m])
                    worst = max(worst, abs(acc) / max(scale, floor))
                certs.append(NodeCertificate(node, (0, mult - 1), worst, digits))
    return certs


def _recentered(poly, t, count):
    """First `count` Taylor coefficients of the polynomial at t."""
    out = []
    for u in range(count):
        acc = mp.mpf(0)
        for k in range(u, poly.degree + 1):
            acc += poly[k] * mp.mpf(math.comb(k, u)) * t ** (k - u)
        out.append(acc)
    return out


def multipoint_pade(spec, n, digits=None):
    """Interpolating approximant p/q of order n for the given node data."""
    if sum(spec.multiplicities) != 2 * n + 1:
        raise ValueError("multiplicities must sum to 2n+1 = %d" % (2 * n + 1))
    with maybe_working(digits):
        rows = []
        for node, mult, ser in zip(spec.nodes, spec.multiplicities, spec.series):
            if mult == 0:
                continue
            if _is_inf(node):
                if ser.order < mult - 1:
                    raise ValueError("series at infinity too short for its node")
                rows.extend(_infinite_node_rows(ser, n, mult))
            else:
                if ser.order < mult - 1:
                    raise ValueError("Taylor series too short for its node")
                rows.extend(_finite_node_rows(node, ser, n, mult))
        threshold = mp.mpf(10) ** (-mp.dps + 10)
        for free_col in (None, n, 0):
            res = nullspace_vector(rows, skip_col=free_col)
            q = Poly(res.vector[: n + 1])
            p = Poly(res.vector[n + 1:])
            if res.nullity >= 1 and q.max_abs() > threshold * max(
                    p.max_abs(), mp.mpf(1)):
                break
        else:
            raise ValueError("denominator vanishes under every normalization")
        certs = _multipoint_certificates(spec, p, q, n)
        return MultipointResult(p, q, n, certs, report=res)


def two_point_pade(taylor0, sinf, n, digits=None, convention="balanced"):
    """Approximant matching a germ at the origin and a germ at infinity.

    The balanced convention imposes n vanishing orders at the origin and
    n+1 at infinity; the shifted convention swaps the split (n+1 at the
    origin, n at infinity).
    """
    if convention == "balanced":
        mults = (n, n + 1)
    elif convention == "shifted":
        mults = (n + 1, n)
    else:
        raise ValueError("unknown convention %r" % (convention,))
    spec = MultipointSpec([mp.mpf(0), INFINITY], mults, [taylor0, sinf])
    return multipoint_pade(spec, n, digits=digits)


class JFraction:
    """Continued-fraction data c0 + A1/(z - B1 - A2/(z - B2 - ...)).

    ``terminated`` marks that some partial numerator vanished at working
    precision, which is how a rational function announces itself; the
    stored depth is then the last level with a nonzero A.
    """

    def __init__(self, c0, a, b, terminated, requested):
        self.c0 = c0
        self.a = list(a)
        self.b = list(b)
        self.terminated = terminated
        self.requested = requested

    @property
    def depth(self):
        return len(self.a)

    def __repr__(self):
        tag = ", terminated" if self.terminated else ""
        return "JFraction(depth=%d%s)" % (self.depth, tag)


def jfraction_coeffs(s, depth, digits=None):
    """Partial numerators and denominators by functional division.

    Each level writes the current tail g = A/z * (series in 1/z),
    inverts the series, reads B from the linear coefficient and hands
    the negated remainder to the next level.  Consumes c_1..c_{2*depth}.
    """
    if s.order < 2 * depth:
        raise ValueError("series truncated at %d; depth-%d extraction needs %d"
                         % (s.order, depth, 2 * depth))
    with maybe_working(digits):
        tail = [s[k] for k in range(1, s.order + 1)]
        scale = max([abs(x) for x in tail] + [mp.mpf(1)])
        cutoff = scale * mp.mpf(10) ** (-mp.dps // 2)
        a, b = [], []
        for _ in range(depth):
            if not tail or abs(tail[0]) <= cutoff:
                return JFraction(s[0], a, b, True, depth)
            ak = tail[0]
            inv = LaurentSeriesAtInfinity(tail).reciprocal().scale(ak)
            a.append(ak)
            b.append(-inv[1])
            tail = [-inv[k] for k in range(2, inv.order + 1)]
        return JFraction(s[0], a, b, False, depth)


def jn_eval(jf, depth, z, digits=None):
    """Value of the depth-level truncated fraction at z."""
    if depth > jf.depth:
        raise ValueError("fraction computed to depth %d only" % jf.depth)
    with maybe_working(digits):
        z = mp.mpmathify(z)
        acc = mp.mpf(0)
        for k in range(depth - 1, -1, -1):
            den = z - jf.b[k] - acc
            if den == 0:
                raise ZeroDivisionError("pole of the truncated fraction")
            acc = jf.a[k] / den
        return jf.c0 + acc


def jacobi_oracle(n, alpha, digits=None):
    """Jacobi polynomial with parameters (-alpha, alpha), by recurrence.

    Independent of every solver here, which is the point: denominators
    of the diagonal approximants for the reference two-point germ can be
    checked against it.
    """
    with maybe_working(digits):
        al = mp.mpmathify(alpha)
        if not 0 < abs(al) < mp.mpf(1) / 2:
            raise ValueError("parameter must lie in (-1/2, 1/2) and be nonzero")
        p_prev = Poly([mp.mpf(1)])
        if n == 0:
            return p_prev
        x = Poly([mp.mpf(0), mp.mpf(1)])
        p_cur = Poly([-al, mp.mpf(1)])
        for k in range(2, n + 1):
            # k(k-1) P_k = (2k-1)(k-1) x P_{k-1} - (k-1-al)(k-1+al) P_{k-2}
            t1 = (mp.mpf(2 * k - 1) * (k - 1)) * (x * p_cur)
            t2 = ((k - 1 - al) * (k - 1 + al)) * p_prev
            p_next = (mp.mpf(1) / (k * (k - 1))) * (t1 - t2)
            p_prev, p_cur = p_cur, p_next
        return p_cur
