"""Dense polynomials over mpmath complex numbers.

Coefficients are stored ascending (c[k] multiplies z**k).  Construction strips
exact trailing zeros only; tolerance-based degree decisions are made by
`effective_degree`, since what counts as zero depends on the caller's working
precision.
"""

from mpmath import mp, mpmathify, fabs

__all__ = ["Poly"]


def _to_mp(x):
    return mpmathify(x)


class Poly:
    """Polynomial with mpf/mpc coefficients, ascending powers."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        c = [_to_mp(x) for x in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c:
            c = [mpmathify(0)]
        self.c = c

    @classmethod
    def from_roots(cls, roots, lead=1):
        p = cls([lead])
        for r in roots:
            p = p * cls([-_to_mp(r), 1])
        return p

    @property
    def degree(self):
        return len(self.c) - 1

    def effective_degree(self, rel_threshold=None):
        """Degree after trimming trailing coefficients below a relative threshold.

        The default threshold is 10**(-dps + 5) relative to the largest
        coefficient magnitude.
        """
        if rel_threshold is None:
            rel_threshold = mp.mpf(10) ** (-mp.dps + 5)
        top = max(fabs(x) for x in self.c)
        if top == 0:
            return 0
        d = len(self.c) - 1
        while d > 0 and fabs(self.c[d]) <= rel_threshold * top:
            d -= 1
        return d

    def __len__(self):
        return len(self.c)

    def __getitem__(self, k):
        return self.c[k] if 0 <= k < len(self.c) else mpmathify(0)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.c == other.c

    def __add__(self, other):
        other = other if isinstance(other, Poly) else Poly([other])
        n = max(len(self.c), len(other.c))
        return Poly([self[k] + other[k] for k in range(n)])

    def __sub__(self, other):
        other = other if isinstance(other, Poly) else Poly([other])
        n = max(len(self.c), len(other.c))
        return Poly([self[k] - other[k] for k in range(n)])

    def __neg__(self):
        return Poly([-x for x in self.c])

    def __mul__(self, other):
        if not isinstance(other, Poly):
            w = _to_mp(other)
            return Poly([w * x for x in self.c])
        # schoolbook product; degrees stay small enough that this is fine
        out = [mpmathify(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __call__(self, z):
        z = _to_mp(z)
        acc = mpmathify(0)
        for a in reversed(self.c):
            acc = acc * z + a
        return acc

    def deriv(self):
        if len(self.c) == 1:
            return Poly([0])
        return Poly([k * a for k, a in enumerate(self.c)][1:])

    def monic(self):
        lead = self.c[-1]
        if lead == 0:
            raise ZeroDivisionError("zero polynomial has no monic form")
        return Poly([a / lead for a in self.c])

    def max_abs(self):
        return max(fabs(x) for x in self.c)

    def is_real(self, rel_threshold=None):
        """True when every coefficient is real up to a relative threshold."""
        if rel_threshold is None:
            rel_threshold = mp.mpf(10) ** (-mp.dps + 5)
        top = self.max_abs()
        if top == 0:
            return True
        return all(fabs(mp.im(x)) <= rel_threshold * top for x in self.c)

    def real_part(self):
        return Poly([mp.re(x) for x in self.c])

    def conj(self):
        return Poly([mp.conj(x) for x in self.c])

    def __repr__(self):
        show = ", ".join(mp.nstr(x, 8) for x in self.c[:6])
        if len(self.c) > 6:
            show += ", ..."
        return f"Poly(deg={self.degree}; [{show}])"
