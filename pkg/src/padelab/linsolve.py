"""Null-space extraction for rectangular coefficient systems.

The approximant constructions all reduce to a homogeneous linear system
with one more unknown than equations.  The solver here does dense
Gaussian elimination with complete pivoting on row-equilibrated data,
leaves one column free, sets its variable to one and back-substitutes.
Rank deficiencies are reported, not patched: a nullity above one is a
meaningful statement about the input (degenerate table block, or a
rationally dependent function system) that callers must see.
"""

from collections import namedtuple

from mpmath import mp

from .precision import maybe_working

NullspaceResult = namedtuple(
    "NullspaceResult", "vector rank nullity free_col min_pivot")
NullspaceResult.__doc__ += """

vector: a null vector with the free column's variable set to 1.
rank / nullity: pivot count and ncols - rank at the pivot threshold.
free_col: the column whose variable was normalized to 1.
min_pivot: smallest pivot magnitude accepted (after row equilibration).
"""


def nullspace_vector(rows, skip_col=None, digits=None, threshold=None):
    """One vector of the (approximate) null space of a dense system.

    rows: list of equally long coefficient rows (mpf/mpc).  skip_col, if
    given, is excluded from pivoting so that its variable stays free and
    becomes the normalization; otherwise the highest-index unpivoted
    column is used.  threshold is the absolute pivot cutoff applied
    after each row is scaled to unit max-norm; it defaults to
    10**(-P+10) at the working precision P.
    """
    with maybe_working(digits):
        if not rows:
            raise ValueError("empty system")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged system")
        if skip_col is not None and not 0 <= skip_col < ncols:
            raise ValueError("skip_col outside the system")
        if threshold is None:
            threshold = mp.mpf(10) ** (-mp.dps + 10)

        work = []
        for r in rows:
            m = max(abs(x) for x in r)
            if m == 0:
                continue  # an all-zero row constrains nothing
            inv = 1 / m
            work.append([x * inv for x in r])

        nrows = len(work)
        pivot_cols = []
        pivot_rows = []
        in_pivot = [False] * ncols
        min_pivot = mp.inf
        step = 0
        while step < nrows:
            best = mp.mpf(0)
            bi = bj = -1
            for i in range(step, nrows):
                row = work[i]
                for j in range(ncols):
                    if in_pivot[j] or j == skip_col:
                        continue
                    a = abs(row[j])
                    if a > best:
                        best, bi, bj = a, i, j
            if bi < 0 or best <= threshold:
                break
            min_pivot = min(min_pivot, best)
            work[step], work[bi] = work[bi], work[step]
            piv = work[step][bj]
            in_pivot[bj] = True
            pivot_cols.append(bj)
            pivot_rows.append(work[step])
            for i in range(step + 1, nrows):
                f = work[i][bj] / piv
                if f != 0:
                    ri = work[i]
                    rs = work[step]
                    for j in range(ncols):
                        ri[j] -= f * rs[j]
                    ri[bj] = mp.mpf(0)
            step += 1

        rank = step
        nullity = ncols - rank
        if skip_col is not None:
            free = skip_col
        else:
            free = max(j for j in range(ncols) if not in_pivot[j])

        x = [mp.mpf(0)] * ncols
        x[free] = mp.mpf(1)
        for k in range(rank - 1, -1, -1):
            row = pivot_rows[k]
            pc = pivot_cols[k]
            acc = mp.mpf(0)
            for j in range(ncols):
                if j != pc and x[j] != 0:
                    acc += row[j] * x[j]
            x[pc] = -acc / row[pc]
        if min_pivot == mp.inf:
            min_pivot = mp.mpf(0)
        return NullspaceResult(x, rank, nullity, free, min_pivot)
