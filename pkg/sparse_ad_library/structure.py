"""
Sparse AD Library: sparsity patterns, CSR assembly and dependency graphs.

A residual vector of `ADScalar` values is already a compressed-row Jacobian:
row i holds the dependency map of residual i and the residual value is the
row's companion right-hand side. This module turns such vectors into
`SparsityPattern` and `CsrMatrix` objects, builds the bipartite
equation/variable `DependencyGraph`, and prints both in Matlab syntax for
post-processing.

Structural zeros (stored entries whose current value is 0.0) are kept: the
pattern must not change between Newton iterations.
 """

__version__ = "0.1.0"
__status__ = "Development"

__all__ = ['SparsityPattern', 'CsrMatrix', 'DependencyGraph', 'extract_pattern',
           'assemble_csr', 'to_dependency_graph', 'print_matlab', 'format_value',
           'structurally_singular']

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.sparse

from sparse_ad_library.ad_scalar import ADScalar, _is_real
from sparse_ad_library.errors import DimensionError, PatternIndexError


# ==============================================================================
# --- Types
# ==============================================================================

@dataclass(frozen=True)
class SparsityPattern:
    """
    Per-row sorted column indices of the structural nonzeros.

    ### Parameters:

        **n_rows**: int

        **n_cols**: int

        **rows**: tuple of tuple of int
            Strictly ascending column indices for every equation.
    """
    n_rows: int
    n_cols: int
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(j) for j in r) for r in self.rows)
        object.__setattr__(self, 'rows', rows)
        if len(rows) != self.n_rows:
            raise DimensionError(f"Pattern declares {self.n_rows} rows but has {len(rows)}")
        for i, r in enumerate(rows):
            for a, b in zip(r, r[1:]):
                if a >= b:
                    raise ValueError(f"Row {i} indices are not strictly ascending: {r}")
            if r and (r[0] < 0 or r[-1] >= self.n_cols):
                raise PatternIndexError(i, r[-1] if r[-1] >= self.n_cols else r[0], self.n_cols)

    @property
    def nnz(self):
        return sum(len(r) for r in self.rows)

    @property
    def density(self):
        """ Fraction of structurally nonzero entries. """
        size = self.n_rows * self.n_cols
        return self.nnz / size if size else 0.0

    def to_dense(self):
        """ 0/1 incidence matrix as a numpy integer array. """
        a = np.zeros((self.n_rows, self.n_cols), dtype=int)
        for i, r in enumerate(self.rows):
            a[i, list(r)] = 1
        return a


@dataclass
class CsrMatrix:
    """
    Compressed-sparse-row matrix with an optional companion right-hand side
    (the residual values when assembled from a residual vector).
    """
    n_rows: int
    n_cols: int
    row_ptr: list
    col_idx: list
    vals: list
    rhs: Optional[list] = field(default=None)

    def __post_init__(self):
        if len(self.row_ptr) != self.n_rows + 1:
            raise DimensionError(f"row_ptr must have {self.n_rows + 1} entries, has {len(self.row_ptr)}")
        if self.row_ptr[0] != 0 or self.row_ptr[-1] != len(self.col_idx) or len(self.col_idx) != len(self.vals):
            raise DimensionError("row_ptr[last], len(col_idx) and len(vals) must agree")
        for i in range(self.n_rows):
            start, end = self.row_ptr[i], self.row_ptr[i + 1]
            if end < start:
                raise ValueError(f"row_ptr decreases at row {i}")
            cols = self.col_idx[start:end]
            for a, b in zip(cols, cols[1:]):
                if a >= b:
                    raise ValueError(f"Row {i} column indices are not strictly ascending")
            if cols and (cols[0] < 0 or cols[-1] >= self.n_cols):
                raise PatternIndexError(i, cols[-1], self.n_cols)
        if self.rhs is not None and len(self.rhs) != self.n_rows:
            raise DimensionError(f"rhs must have {self.n_rows} entries, has {len(self.rhs)}")

    @property
    def nnz(self):
        return len(self.vals)

    @property
    def shape(self):
        return self.n_rows, self.n_cols

    def row(self, i):
        """ (columns, values) of row `i`. """
        start, end = self.row_ptr[i], self.row_ptr[i + 1]
        return self.col_idx[start:end], self.vals[start:end]

    def pattern(self):
        return SparsityPattern(self.n_rows, self.n_cols,
                               tuple(tuple(self.row(i)[0]) for i in range(self.n_rows)))

    def matvec(self, x):
        """ A @ x as a list of floats. """
        if len(x) != self.n_cols:
            raise DimensionError(f"Vector has {len(x)} entries, matrix has {self.n_cols} columns")
        out = []
        col_idx, vals = self.col_idx, self.vals
        for i in range(self.n_rows):
            acc = 0.0
            for p in range(self.row_ptr[i], self.row_ptr[i + 1]):
                acc += vals[p] * x[col_idx[p]]
            out.append(acc)
        return out

    def to_dense(self):
        a = np.zeros((self.n_rows, self.n_cols))
        for i in range(self.n_rows):
            cols, vals = self.row(i)
            a[i, cols] = vals
        return a

    def to_scipy(self):
        """ Equivalent `scipy.sparse.csr_matrix`; explicit zeros are kept. """
        return scipy.sparse.csr_matrix(
            (np.asarray(self.vals, dtype=float), np.asarray(self.col_idx, dtype=np.int64),
             np.asarray(self.row_ptr, dtype=np.int64)),
            shape=(self.n_rows, self.n_cols))

    @classmethod
    def from_scipy(cls, a, rhs=None):
        a = scipy.sparse.csr_matrix(a)
        a.sort_indices()
        return cls(a.shape[0], a.shape[1], a.indptr.tolist(), a.indices.tolist(),
                   a.data.astype(float).tolist(), rhs)

    @classmethod
    def from_dense(cls, a, rhs=None):
        """ Build from a dense array, storing only the nonzero entries. """
        a = np.atleast_2d(np.asarray(a, dtype=float))
        row_ptr, col_idx, vals = [0], [], []
        for i in range(a.shape[0]):
            cols = np.flatnonzero(a[i])
            col_idx.extend(cols.tolist())
            vals.extend(a[i, cols].tolist())
            row_ptr.append(len(col_idx))
        return cls(a.shape[0], a.shape[1], row_ptr, col_idx, vals,
                   None if rhs is None else [float(v) for v in rhs])


@dataclass(frozen=True)
class DependencyGraph:
    """
    Bipartite graph with one vertex per equation and one per variable;
    equation i is connected to variable j iff J_ij is structurally nonzero.
    """
    n_equations: int
    n_variables: int
    edges: Tuple[Tuple[int, int], ...]

    def equation_neighbors(self, i):
        return tuple(j for (e, j) in self.edges if e == i)

    def variable_neighbors(self, j):
        return tuple(e for (e, v) in self.edges if v == j)

    def degrees(self):
        """ (equation degrees, variable degrees) as lists. """
        eq = [0] * self.n_equations
        var = [0] * self.n_variables
        for i, j in self.edges:
            eq[i] += 1
            var[j] += 1
        return eq, var


# ==============================================================================
# --- Operations
# ==============================================================================

def _row_items(row, scalar, n_cols):
    """ Sorted (key, derivative) pairs of one residual, checked against n_cols. """
    if isinstance(scalar, ADScalar):
        items = sorted(scalar._deps.items())
    elif _is_real(scalar):
        items = []
    else:
        raise TypeError(f"Residual {row} is a {type(scalar).__name__}, expected ADScalar or real")
    if items and (items[-1][0] >= n_cols):
        raise PatternIndexError(row, items[-1][0], n_cols)
    return items


def extract_pattern(residuals: Sequence, n_cols: int) -> SparsityPattern:
    """
    Sparsity pattern of an evaluated residual vector: row i is the sorted key
    set of residuals[i]. Plain real residuals give empty rows.

    ### Raises:

        **PatternIndexError** if a residual depends on a variable >= n_cols.
    """
    rows = tuple(tuple(k for k, _ in _row_items(i, r, n_cols)) for i, r in enumerate(residuals))
    return SparsityPattern(len(rows), n_cols, rows)


def assemble_csr(residuals: Sequence, n_cols: int) -> CsrMatrix:
    """
    Jacobian of an evaluated residual vector in CSR form. Row i holds the
    derivatives of residuals[i] in ascending variable order and rhs[i] is its
    value.
    """
    row_ptr, col_idx, vals, rhs = [0], [], [], []
    for i, r in enumerate(residuals):
        for k, d in _row_items(i, r, n_cols):
            col_idx.append(k)
            vals.append(d)
        row_ptr.append(len(col_idx))
        rhs.append(r.value if isinstance(r, ADScalar) else float(r))
    return CsrMatrix(len(rhs), n_cols, row_ptr, col_idx, vals, rhs)


def to_dependency_graph(pattern: SparsityPattern) -> DependencyGraph:
    edges = tuple((i, j) for i, r in enumerate(pattern.rows) for j in r)
    return DependencyGraph(pattern.n_rows, pattern.n_cols, edges)


def structurally_singular(pattern: SparsityPattern):
    """
    Equations without any dependency and variables no equation depends on.
    Either makes every Jacobian with this pattern singular.

    ### Returns:

        (empty_rows, empty_cols): two sorted lists of indices.
    """
    used = set()
    empty_rows = []
    for i, r in enumerate(pattern.rows):
        if not r:
            empty_rows.append(i)
        used.update(r)
    empty_cols = [j for j in range(pattern.n_cols) if j not in used]
    return empty_rows, empty_cols


def format_value(v, precision=None):
    """
    Matlab-style number: integers without a decimal point, other values in
    shortest round-trip form (or `precision` significant digits).
    """
    v = float(v)
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Inf" if v > 0 else "-Inf"
    if v == 0.0:
        return "0"
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    if precision is not None:
        return f"{v:.{precision}g}"
    return repr(v)


def print_matlab(obj, name=None, precision=None):
    """
    Matlab text of a pattern (0/1 entries, default name "A") or of a CSR
    matrix (its values, default name "J").

    ### Parameters:

        **obj**: SparsityPattern | CsrMatrix

        **name**: str, optional
            Matlab variable name.

        **precision**: int, optional
            Significant digits for non-integer values; shortest round-trip if omitted.

    ### Returns:

        str such as ``"A = [1 1 0;\\n 1 1 1;\\n 1 1 1];"``
    """
    if isinstance(obj, SparsityPattern):
        name = name or "A"
        dense = obj.to_dense()
        rows = [" ".join(str(int(v)) for v in row) for row in dense]
    elif isinstance(obj, CsrMatrix):
        name = name or "J"
        dense = obj.to_dense()
        rows = [" ".join(format_value(v, precision) for v in row) for row in dense]
    else:
        raise TypeError(f"Cannot print {type(obj).__name__} in Matlab format")
    return f"{name} = [" + ";\n ".join(rows) + "];"
