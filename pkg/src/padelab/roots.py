"""Zero sets of polynomials and what the experiments do with them.

The finder runs simultaneous Newton-type iteration (Aberth) with a
deterministic start, so rerunning an experiment reproduces its zero
list bit for bit.  On top of the raw roots sit normalized counting
measures, a windowed Kolmogorov statistic against reference densities,
and the spurious zero-pole matching used to separate Froissart
artifacts from genuine cut approximations.
"""

import bisect
from collections import namedtuple

from mpmath import mp

from .poly import Poly
from .precision import maybe_working

__all__ = [
    "RootRecord",
    "ZeroSet",
    "EmpiricalMeasure",
    "find_roots",
    "companion_roots",
    "counting_measure",
    "is_effectively_real",
    "kolmogorov_distance",
    "distribution_report",
    "froissart_pairs",
    "froissart_triplets",
    "segment_distance",
]

REAL_BAND = mp.mpf("1e-8")

RootRecord = namedtuple("RootRecord", "value residual correction converged")

DistributionReport = namedtuple(
    "DistributionReport",
    "distance window mass_below_m mass_above_m mass_below_ref mass_above_ref "
    "nonreal_mass")


class ZeroSet:
    """Roots of one polynomial with per-root certificates."""

    def __init__(self, records, degree):
        self.records = list(records)
        self.degree = degree

    @property
    def roots(self):
        return [r.value for r in self.records]

    @property
    def converged(self):
        return all(r.converged for r in self.records)

    def real_roots(self, band=REAL_BAND):
        return [r.value for r in self.records
                if is_effectively_real(r.value, band)]

    def nonreal_roots(self, band=REAL_BAND):
        return [r.value for r in self.records
                if not is_effectively_real(r.value, band)]

    def max_residual(self):
        if not self.records:
            return mp.mpf(0)
        return max(r.residual for r in self.records)

    def __len__(self):
        return len(self.records)

    def __repr__(self):
        tag = "" if self.converged else ", partial"
        return "ZeroSet(%d roots%s)" % (len(self.records), tag)


def is_effectively_real(z, band=REAL_BAND):
    """Scale-aware realness test: |Im z| below band * (1 + |z|)."""
    return abs(mp.im(z)) < band * (1 + abs(z))


def _monic_coeffs(p):
    deg = p.effective_degree()
    if deg < 1:
        raise ValueError("root finding needs degree at least 1")
    lead = p[deg]
    return [p[k] / lead for k in range(deg + 1)], deg


def find_roots(p, digits=None, max_sweeps=500):
    """All roots of p by synchronous simultaneous iteration.

    Starts on the circle of the Cauchy bound with a fixed angular
    offset, which makes the output deterministic.  Stops when the
    largest correction of a sweep falls under 10^(-P/2); roots whose
    final correction stayed above that are flagged and the set is
    returned partial rather than raising.
    """
    with maybe_working(digits):
        c, deg = _monic_coeffs(p)
        tol = mp.mpf(10) ** (-mp.dps // 2)
        if deg == 1:
            z = -c[0]
            return ZeroSet([RootRecord(z, abs(p(z)), mp.mpf(0), True)], 1)
        radius = 1 + max(abs(c[k]) for k in range(deg))
        z = [radius * mp.expj(2 * mp.pi * k / deg + mp.mpf("0.31"))
             for k in range(deg)]
        dp = [c[k] * k for k in range(1, deg + 1)]

        def val(x):
            acc = mp.mpf(1)
            for k in range(deg - 1, -1, -1):
                acc = acc * x + c[k]
            return acc

        def dval(x):
            acc = mp.mpf(0)
            for k in range(deg - 1, -1, -1):
                acc = acc * x + dp[k]
            return acc

        corrections = [mp.mpf(1)] * deg
        for _ in range(max_sweeps):
            new = list(z)
            worst = mp.mpf(0)
            for k in range(deg):
                pk = val(z[k])
                dk = dval(z[k])
                if dk == 0:
                    # stationary point hit exactly; nudge off it
                    new[k] = z[k] + tol * (1 + abs(z[k]))
                    worst = max(worst, abs(new[k] - z[k]))
                    continue
                newton = pk / dk
                rep = mp.mpf(0)
                for j in range(deg):
                    if j != k:
                        diff = z[k] - z[j]
                        if diff == 0:
                            diff = tol * (1 + abs(z[k]))
                        rep += 1 / diff
                den = 1 - newton * rep
                w = newton if den == 0 else newton / den
                new[k] = z[k] - w
                corrections[k] = abs(w)
                worst = max(worst, abs(w))
            z = new
            if worst < tol:
                break
        records = []
        for k in range(deg):
            records.append(RootRecord(z[k], abs(val(z[k])), corrections[k],
                                      corrections[k] < tol))
        records.sort(key=lambda r: (mp.re(r.value), mp.im(r.value)))
        return ZeroSet(records, deg)


def companion_roots(p, digits=None):
    """Eigenvalues of the companion matrix; low-degree cross-check only."""
    with maybe_working(digits):
        c, deg = _monic_coeffs(p)
        if deg > 8:
            raise ValueError("companion oracle is restricted to degree <= 8")
        a = mp.zeros(deg, deg)
        for k in range(deg):
            a[k, deg - 1] = -c[k]
        for k in range(1, deg):
            a[k, k - 1] = mp.mpf(1)
        return sorted(mp.eig(a, left=False, right=False),
                      key=lambda w: (mp.re(w), mp.im(w)))


class EmpiricalMeasure:
    """Finite point masses; weights positive, mass need not be 1."""

    def __init__(self, points, weights):
        self.points = [mp.mpmathify(x) for x in points]
        self.weights = [mp.mpf(w) for w in weights]
        if len(self.points) != len(self.weights):
            raise ValueError("points and weights must align")
        for w in self.weights:
            if w <= 0:
                raise ValueError("weights must be positive")
        self._cdf_cache = None

    @property
    def mass(self):
        return sum(self.weights, mp.mpf(0))

    def real_restriction(self, band=REAL_BAND):
        """(measure on the real line, mass dropped as non-real)."""
        pts, wts, lost = [], [], mp.mpf(0)
        for x, w in zip(self.points, self.weights):
            if is_effectively_real(x, band):
                pts.append(mp.re(x))
                wts.append(w)
            else:
                lost += w
        return EmpiricalMeasure(pts, wts), lost

    def cdf(self, x):
        if self._cdf_cache is None:
            pairs = sorted(zip([mp.re(t) for t in self.points], self.weights),
                           key=lambda t: t[0])
            keys = [k for k, _ in pairs]
            acc = mp.mpf(0)
            prefix = []
            for _, w in pairs:
                acc += w
                prefix.append(acc)
            self._cdf_cache = (keys, prefix)
        keys, prefix = self._cdf_cache
        i = bisect.bisect_right(keys, x)
        return prefix[i - 1] if i else mp.mpf(0)

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return "EmpiricalMeasure(%d points, mass=%s)" % (
            len(self.points), mp.nstr(self.mass, 6))


def counting_measure(zs, normalize_by=None):
    """(1/n) sum of point masses at the roots; n defaults to the count."""
    pts = zs.roots if isinstance(zs, ZeroSet) else list(zs)
    n = normalize_by if normalize_by is not None else len(pts)
    if not pts:
        return EmpiricalMeasure([], [])
    if n <= 0:
        raise ValueError("normalization must be positive")
    w = mp.mpf(1) / n
    return EmpiricalMeasure(pts, [w] * len(pts))


def _ref_cdf(ref):
    if hasattr(ref, "cdf"):
        return ref.cdf
    raise TypeError("reference must expose a cdf(x) method")


def distribution_report(m, ref, window=None, grid=512):
    """Windowed sup distance between CDFs plus the excluded masses.

    The comparison runs over [-window, window] when a window is given
    (required for references with unbounded support): both CDFs still
    count mass below the window, so a mass imbalance at the left edge
    shows up in the statistic, and the out-of-window masses on each
    side are reported alongside.  Non-real support of m is dropped
    from the comparison and reported as ``nonreal_mass``.
    """
    if abs(ref.mass - 1) > mp.mpf("1e-8"):
        raise ValueError("reference measure must have unit mass")
    real_m, nonreal = (m.real_restriction() if isinstance(m, EmpiricalMeasure)
                       else (m, mp.mpf(0)))
    cdf = _ref_cdf(ref)
    if window is None:
        lo = min([mp.re(x) for x in real_m.points], default=mp.mpf(-1))
        hi = max([mp.re(x) for x in real_m.points], default=mp.mpf(1))
        pad = mp.mpf("0.5") * (1 + hi - lo)
        lo, hi = lo - pad, hi + pad
    else:
        lo, hi = -mp.mpf(window), mp.mpf(window)
    xs = set()
    for x in real_m.points:
        xr = mp.re(x)
        if lo <= xr <= hi:
            xs.add(xr)
    for k in range(grid + 1):
        xs.add(lo + (hi - lo) * k / grid)
    eps = (hi - lo) * mp.mpf(10) ** (-mp.dps + 5)
    worst = mp.mpf(0)
    for x in sorted(xs):
        # step functions: compare both one-sided limits, shifting the
        # reference too so coincident atoms do not register as distance
        worst = max(worst, abs(real_m.cdf(x) - cdf(x)),
                    abs(real_m.cdf(x - eps) - cdf(x - eps)))
    below_m = real_m.cdf(lo - eps)
    above_m = real_m.mass - real_m.cdf(hi)
    below_ref = cdf(lo)
    above_ref = 1 - cdf(hi)
    return DistributionReport(worst, window, below_m, above_m, below_ref,
                              above_ref, nonreal)


def kolmogorov_distance(m, ref, window=None, grid=512):
    """Sup of |CDF_m - CDF_ref|, windowed when the reference needs it."""
    return distribution_report(m, ref, window=window, grid=grid).distance


def segment_distance(z, segments):
    """Distance from z to a union of real segments (endpoints may be inf)."""
    best = mp.inf
    zr, zi = mp.re(z), mp.im(z)
    for lo, hi in segments:
        lo = mp.mpf(lo) if lo != -mp.inf else -mp.inf
        hi = mp.mpf(hi) if hi != mp.inf else mp.inf
        if zr < lo:
            dx = lo - zr
        elif zr > hi:
            dx = zr - hi
        else:
            dx = mp.mpf(0)
        d = mp.hypot(dx, zi)
        if d < best:
            best = d
    return best


def _far_from(z, exclusion):
    if exclusion is None:
        return True
    segments, margin = exclusion
    return segment_distance(z, segments) > margin


def froissart_pairs(zeros, poles, radius, exclusion=None):
    """Greedy matching of spurious zero-pole doublets.

    Candidates are zero-pole pairs closer than ``radius`` to each other
    and farther than the exclusion margin from the declared limit set
    (``exclusion`` is a (segments, margin) pair or None).  Matching is
    greedy by distance and disjoint; swapping the two roles returns the
    same pairs with members exchanged.
    """
    radius = mp.mpf(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    zs = zeros.roots if isinstance(zeros, ZeroSet) else list(zeros)
    ps = poles.roots if isinstance(poles, ZeroSet) else list(poles)
    candidates = []
    for i, a in enumerate(zs):
        if not _far_from(a, exclusion):
            continue
        for j, b in enumerate(ps):
            if not _far_from(b, exclusion):
                continue
            d = abs(a - b)
            if d < radius:
                candidates.append((d, i, j))
    candidates.sort(key=lambda t: (t[0], t[1], t[2]))
    used_i, used_j, out = set(), set(), []
    for d, i, j in candidates:
        if i in used_i or j in used_j:
            continue
        used_i.add(i)
        used_j.add(j)
        out.append((zs[i], ps[j], d))
    return out


def froissart_triplets(set0, set1, set2, radius, exclusion=None):
    """Near-coincident zero triples across the three polynomial indices."""
    radius = mp.mpf(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    lists = []
    for s in (set0, set1, set2):
        lists.append(s.roots if isinstance(s, ZeroSet) else list(s))
    a0, a1, a2 = lists
    candidates = []
    for i, z0 in enumerate(a0):
        if not _far_from(z0, exclusion):
            continue
        for j, z1 in enumerate(a1):
            d01 = abs(z0 - z1)
            if d01 >= radius or not _far_from(z1, exclusion):
                continue
            for k, z2 in enumerate(a2):
                d02 = abs(z0 - z2)
                d12 = abs(z1 - z2)
                if d02 >= radius or d12 >= radius:
                    continue
                if not _far_from(z2, exclusion):
                    continue
                candidates.append((max(d01, d02, d12), i, j, k))
    candidates.sort(key=lambda t: (t[0], t[1], t[2], t[3]))
    used = [set(), set(), set()]
    out = []
    for d, i, j, k in candidates:
        if i in used[0] or j in used[1] or k in used[2]:
            continue
        used[0].add(i)
        used[1].add(j)
        used[2].add(k)
        out.append((a0[i], a1[j], a2[k], d))
    return out
