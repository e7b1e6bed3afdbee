"""
Sparse AD Library: direct linear solvers.

`lu_factor` performs right-looking Gaussian elimination with partial pivoting
on per-row sparse dictionaries, inserting fill-in as it appears, and returns
L and U combined in one row-major `CsrMatrix` plus the row permutation.
`dense_solve` is the numpy reference solver used as a test oracle, and
`scipy_solve` hands the matrix to SuperLU for callers who prefer it.

Unknown ordering matters for fill-in: models number their globally coupled
unknowns last so the Jacobian has arrowhead shape and natural ordering stays
cheap. No reordering is attempted here.
 """

__version__ = "0.1.0"
__status__ = "Development"

__all__ = ['LuFactors', 'lu_factor', 'lu_solve', 'sparse_solve', 'dense_solve',
           'scipy_solve', 'LINEAR_SOLVERS', 'PIVOT_TOLERANCE']

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.sparse.linalg

from sparse_ad_library.errors import DimensionError, SingularMatrixError
from sparse_ad_library.structure import CsrMatrix

# Init the logger.
log = logging.getLogger(__name__)

# A pivot smaller than this fraction of its row's largest original entry is singular.
PIVOT_TOLERANCE = 1e-14


@dataclass(frozen=True)
class LuFactors:
    """
    Result of `lu_factor`: P·A = L·U.

    ### Parameters:

        **lu**: CsrMatrix
            Row k holds the multipliers of L left of the diagonal (unit diagonal
            implied) and the entries of U from the diagonal on.

        **perm**: tuple of int
            perm[k] is the row of A that ended up in position k.

        **diag_ptr**: tuple of int
            Offset of the diagonal entry of U inside `lu.vals` for every row.
    """
    lu: CsrMatrix
    perm: Tuple[int, ...]
    diag_ptr: Tuple[int, ...]

    @property
    def n(self):
        return self.lu.n_rows

    def lower(self):
        """ Dense unit lower-triangular L (numpy). """
        a = np.eye(self.n)
        for k in range(self.n):
            for p in range(self.lu.row_ptr[k], self.diag_ptr[k]):
                a[k, self.lu.col_idx[p]] = self.lu.vals[p]
        return a

    def upper(self):
        """ Dense upper-triangular U (numpy). """
        a = np.zeros((self.n, self.n))
        for k in range(self.n):
            for p in range(self.diag_ptr[k], self.lu.row_ptr[k + 1]):
                a[k, self.lu.col_idx[p]] = self.lu.vals[p]
        return a

    def permutation_matrix(self):
        p = np.zeros((self.n, self.n))
        p[np.arange(self.n), list(self.perm)] = 1.0
        return p


def lu_factor(a: CsrMatrix, pivot_tolerance: float = PIVOT_TOLERANCE) -> LuFactors:
    """
    Sparse LU factorization with partial pivoting.

    At step k the pivot is the entry of largest magnitude in column k among the
    rows not yet eliminated (ties go to the lowest row index).

    ### Raises:

        **DimensionError** for a non-square matrix.

        **SingularMatrixError** when column k has no usable pivot; `step` is k.
    """
    if a.n_rows != a.n_cols:
        raise DimensionError(f"LU needs a square matrix, got {a.n_rows}x{a.n_cols}")
    n = a.n_rows

    rows = []
    scale = []
    col_rows = [set() for _ in range(n)]
    for i in range(n):
        cols, vals = a.row(i)
        rows.append(dict(zip(cols, vals)))
        scale.append(max((abs(v) for v in vals), default=0.0))
        for j in cols:
            col_rows[j].add(i)

    lower = [{} for _ in range(n)]
    perm = []

    for k in range(n):
        best, best_abs = None, -1.0
        for i in col_rows[k]:
            v = abs(rows[i][k])
            if v > best_abs or (v == best_abs and i < best):
                best, best_abs = i, v
        if best is None or best_abs == 0.0 or best_abs < pivot_tolerance * scale[best]:
            raise SingularMatrixError(k, f"Matrix is singular at pivot step {k} "
                                         f"(largest candidate pivot {max(best_abs, 0.0):.3e})")

        pivot_row = rows[best]
        for j in pivot_row:
            col_rows[j].discard(best)
        perm.append(best)

        pivot = pivot_row[k]
        updates = [(j, v) for j, v in pivot_row.items() if j != k]
        for i in list(col_rows[k]):
            row = rows[i]
            factor = row.pop(k) / pivot
            lower[i][k] = factor
            for j, v in updates:
                if j in row:
                    row[j] -= factor * v
                else:
                    row[j] = -factor * v
                    col_rows[j].add(i)
        col_rows[k].clear()

    row_ptr, col_idx, vals, diag_ptr = [0], [], [], []
    for k, p in enumerate(perm):
        for j, v in sorted(lower[p].items()):
            col_idx.append(j)
            vals.append(v)
        diag_ptr.append(len(col_idx))
        for j, v in sorted(rows[p].items()):
            col_idx.append(j)
            vals.append(v)
        row_ptr.append(len(col_idx))

    fill = len(vals) - a.nnz
    log.debug(f"LU of {n}x{n} matrix: {a.nnz} entries, {len(vals)} in factors (fill-in {fill})")
    return LuFactors(CsrMatrix(n, n, row_ptr, col_idx, vals), tuple(perm), tuple(diag_ptr))


def lu_solve(f: LuFactors, b) -> list:
    """
    Solve A·x = b with the factors of A (forward then back substitution).

    ### Raises:

        **DimensionError** if len(b) != n.
    """
    n = f.n
    if len(b) != n:
        raise DimensionError(f"Right-hand side has {len(b)} entries, factors are {n}x{n}")
    row_ptr, col_idx, vals, diag_ptr = f.lu.row_ptr, f.lu.col_idx, f.lu.vals, f.diag_ptr

    y = [0.0] * n
    for k in range(n):
        s = float(b[f.perm[k]])
        for p in range(row_ptr[k], diag_ptr[k]):
            s -= vals[p] * y[col_idx[p]]
        y[k] = s

    x = [0.0] * n
    for k in range(n - 1, -1, -1):
        s = y[k]
        d = diag_ptr[k]
        for p in range(d + 1, row_ptr[k + 1]):
            s -= vals[p] * x[col_idx[p]]
        x[k] = s / vals[d]
    return x


def sparse_solve(a: CsrMatrix, b) -> list:
    """ Factor and solve in one call. """
    return lu_solve(lu_factor(a), b)


def scipy_solve(a: CsrMatrix, b) -> list:
    """ Solve with SuperLU through `scipy.sparse.linalg.splu`. """
    if len(b) != a.n_rows:
        raise DimensionError(f"Right-hand side has {len(b)} entries, matrix has {a.n_rows} rows")
    try:
        lu = scipy.sparse.linalg.splu(a.to_scipy().tocsc())
    except RuntimeError as err:
        raise SingularMatrixError(-1, f"SuperLU factorization failed: {err}") from err
    return lu.solve(np.asarray(b, dtype=float)).tolist()


def dense_solve(a, b):
    """
    Reference solver: dense Gaussian elimination with partial pivoting.

    ### Parameters:

        **a**: array_like, shape (n, n)

        **b**: array_like, shape (n,)

    ### Returns:

        numpy.ndarray of shape (n,)
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"Dense solve needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if b.shape != (n,):
        raise DimensionError(f"Right-hand side has shape {b.shape}, expected ({n},)")

    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0.0:
            raise SingularMatrixError(k)
        if p != k:
            a[[k, p]] = a[[p, k]]
            b[[k, p]] = b[[p, k]]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(factors, a[k, k:])
        b[k + 1:] -= factors * b[k]

    x = np.zeros(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x


# Backends selectable by name from solver configurations.
LINEAR_SOLVERS = {
    'lu': sparse_solve,
    'scipy': scipy_solve,
}
