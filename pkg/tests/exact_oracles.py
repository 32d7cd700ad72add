"""Exact-rational oracles shared by the test modules.

Everything here runs in Fraction arithmetic, independent of mpmath and
of the library's own algorithms: binomial-series expansions for germ
coefficients and a plain Gaussian null-space solve for the approximant
systems.
"""

from fractions import Fraction


def binom(alpha, k):
    """Generalized binomial coefficient C(alpha, k), exact."""
    out = Fraction(1)
    for i in range(k):
        out *= alpha - i
        out /= i + 1
    return out


def binom_series(alpha, t, order):
    """Fraction coefficients of (1 - t*u)**alpha up to u**order."""
    return [binom(alpha, m) * (-t) ** m for m in range(order + 1)]


def convolve(a, b):
    order = min(len(a), len(b)) - 1
    out = []
    for m in range(order + 1):
        out.append(sum(a[j] * b[m - j] for j in range(m + 1)))
    return out


def ratio_pair_coeffs(pairs, exponents, order):
    """Exact coefficients at infinity of prod ((z-lo)/(z-hi))**alpha."""
    acc = [Fraction(1)] + [Fraction(0)] * order
    for (lo, hi), al in zip(pairs, exponents):
        acc = convolve(acc, binom_series(al, lo, order))
        acc = convolve(acc, binom_series(-al, hi, order))
    return acc


def fraction_nullspace(rows):
    """A null vector of an M x (M+1) Fraction system, exact.

    Eliminates with the first nonzero pivot per column; the last
    unpivoted variable is set to one.
    """
    rows = [list(r) for r in rows]
    ncols = len(rows[0])
    pivots = []  # (row, col)
    prow = 0
    for col in range(ncols):
        sel = None
        for i in range(prow, len(rows)):
            if rows[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[prow], rows[sel] = rows[sel], rows[prow]
        piv = rows[prow][col]
        for i in range(len(rows)):
            if i != prow and rows[i][col] != 0:
                f = rows[i][col] / piv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[prow])]
        pivots.append((prow, col))
        prow += 1
    pivot_cols = {c for _, c in pivots}
    free = max(c for c in range(ncols) if c not in pivot_cols)
    x = [Fraction(0)] * ncols
    x[free] = Fraction(1)
    for r, c in reversed(pivots):
        acc = sum(rows[r][j] * x[j] for j in range(ncols) if j != c)
        x[c] = -acc / rows[r][c]
    return x
