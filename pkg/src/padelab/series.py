"""Truncated series types used by the approximant solvers.

LaurentSeriesAtInfinity holds c[0..N] for sum_k c[k] * z**(-k); the truncation
order N is the index of the last coefficient that is actually known.  Products
of two truncated series are only trustworthy through the smaller truncation,
and multiplying by a polynomial extends the top power upward while losing
nothing at the bottom; TwoSidedExpansion records the resulting window
explicitly so order checks cannot silently read garbage coefficients.
"""

from mpmath import mp, mpmathify, fabs

__all__ = [
    "LaurentSeriesAtInfinity",
    "TaylorSeriesAtPoint",
    "TwoSidedExpansion",
    "poly_times_series",
]


class LaurentSeriesAtInfinity:
    """sum_{k=0}^{N} c[k] z**(-k), with nothing claimed beyond z**(-N)."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = [mpmathify(x) for x in coeffs]
        if not self.c:
            raise ValueError("need at least the constant coefficient")

    @property
    def order(self):
        """Largest k for which c[k] is known."""
        return len(self.c) - 1

    def __getitem__(self, k):
        if not 0 <= k <= self.order:
            raise IndexError(f"coefficient z^-{k} outside truncation {self.order}")
        return self.c[k]

    def truncate(self, n):
        if n > self.order:
            raise ValueError(f"cannot extend truncation {self.order} to {n}")
        return LaurentSeriesAtInfinity(self.c[: n + 1])

    def __add__(self, other):
        n = min(self.order, other.order)
        return LaurentSeriesAtInfinity(
            [self.c[k] + other.c[k] for k in range(n + 1)]
        )

    def __sub__(self, other):
        n = min(self.order, other.order)
        return LaurentSeriesAtInfinity(
            [self.c[k] - other.c[k] for k in range(n + 1)]
        )

    def scale(self, w):
        w = mpmathify(w)
        return LaurentSeriesAtInfinity([w * x for x in self.c])

    def __mul__(self, other):
        """Cauchy product, truncated at the smaller of the two orders."""
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = mpmathify(0)
            for j in range(k + 1):
                acc += self.c[j] * other.c[k - j]
            out.append(acc)
        return LaurentSeriesAtInfinity(out)

    def reciprocal(self):
        """1/series, truncated at the same order; needs c[0] != 0."""
        if self.c[0] == 0:
            raise ZeroDivisionError("reciprocal needs a nonzero leading coefficient")
        inv0 = 1 / self.c[0]
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = mpmathify(0)
            for j in range(1, k + 1):
                acc += self.c[j] * out[k - j]
            out.append(-inv0 * acc)
        return LaurentSeriesAtInfinity(out)

    def eval(self, z, terms=None):
        """Partial sum at z; converges for |z| beyond the singularity radius."""
        z = mpmathify(z)
        n = self.order if terms is None else min(terms, self.order)
        u = 1 / z
        acc = mpmathify(0)
        for k in range(n, -1, -1):
            acc = acc * u + self.c[k]
        return acc

    def max_abs(self):
        return max(fabs(x) for x in self.c)

    def __repr__(self):
        show = ", ".join(mp.nstr(x, 8) for x in self.c[:5])
        return f"LaurentSeriesAtInfinity(N={self.order}; [{show}, ...])"


class TaylorSeriesAtPoint:
    """sum_{k=0}^{N} d[k] (z - z0)**k around a finite point z0."""

    __slots__ = ("z0", "d")

    def __init__(self, z0, coeffs):
        self.z0 = mpmathify(z0)
        self.d = [mpmathify(x) for x in coeffs]
        if not self.d:
            raise ValueError("need at least the constant coefficient")

    @property
    def order(self):
        return len(self.d) - 1

    def __getitem__(self, k):
        if not 0 <= k <= self.order:
            raise IndexError(f"coefficient (z-z0)^{k} outside truncation {self.order}")
        return self.d[k]

    def eval(self, z):
        w = mpmathify(z) - self.z0
        acc = mpmathify(0)
        for a in reversed(self.d):
            acc = acc * w + a
        return acc

    def __repr__(self):
        show = ", ".join(mp.nstr(x, 8) for x in self.d[:5])
        return f"TaylorSeriesAtPoint(z0={mp.nstr(self.z0, 8)}; [{show}, ...])"


class TwoSidedExpansion:
    """Coefficients for powers z**top down to z**bottom, nothing outside."""

    __slots__ = ("top", "coeffs")

    def __init__(self, top, coeffs):
        self.top = int(top)
        self.coeffs = [mpmathify(x) for x in coeffs]

    @property
    def bottom(self):
        return self.top - len(self.coeffs) + 1

    def coeff(self, power):
        if not self.bottom <= power <= self.top:
            raise IndexError(
                f"power z^{power} outside window [{self.bottom}, {self.top}]"
            )
        return self.coeffs[self.top - power]

    def window(self, hi, lo):
        """Coefficients for powers hi down to lo (inclusive)."""
        return [self.coeff(p) for p in range(hi, lo - 1, -1)]

    def __add__(self, other):
        top = max(self.top, other.top)
        bottom = max(self.bottom, other.bottom)
        if bottom > top:
            raise ValueError("expansions have no common power window")
        out = []
        for p in range(top, bottom - 1, -1):
            acc = mpmathify(0)
            if self.bottom <= p <= self.top:
                acc += self.coeff(p)
            if other.bottom <= p <= other.top:
                acc += other.coeff(p)
            out.append(acc)
        return TwoSidedExpansion(top, out)

    def scale(self, factor):
        return TwoSidedExpansion(self.top, [factor * x for x in self.coeffs])

    def __sub__(self, other):
        return self + other.scale(-1)

    def max_abs_window(self, hi=None, lo=None):
        if hi is None:
            hi = self.top
        if lo is None:
            lo = self.bottom
        return max(fabs(x) for x in self.window(hi, lo))

    def __repr__(self):
        return f"TwoSidedExpansion(powers z^{self.top} .. z^{self.bottom})"


def poly_times_series(q, s):
    """Product of a polynomial and a series at infinity.

    Returns a TwoSidedExpansion with powers z**deg(q) down to
    z**(deg(q) - N) where N is the series truncation; coefficients below
    that would need series terms beyond the truncation.
    """
    d = q.degree
    N = s.order
    out = []
    for power in range(d, d - N - 1, -1):
        acc = mpmathify(0)
        # z^j from q, z^-k from s, j - k = power
        jlo = max(0, power)
        for j in range(jlo, d + 1):
            k = j - power
            if k > N:
                break
            acc += q[j] * s.c[k]
        out.append(acc)
    return TwoSidedExpansion(d, out)
