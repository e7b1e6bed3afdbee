"""
MatrixMarket coordinate export and import for patterns and Jacobians.

Files are written as ``%%MatrixMarket matrix coordinate real general`` with
1-based indices (handled by `scipy.io`). A pattern is written with value 1 for
every structural nonzero; a Jacobian keeps its stored entries, structural
zeros included.
"""

__all__ = ['write_matrix_market', 'read_matrix_market', 'read_pattern']

import logging
import os

import scipy.io
import scipy.sparse

from sparse_ad_library.structure import CsrMatrix, SparsityPattern

# Init the logger.
log = logging.getLogger(__name__)


def write_matrix_market(obj, target, comment=None):
    """
    Write a `SparsityPattern` or `CsrMatrix` to `target` (path or binary file).
    """
    if isinstance(obj, SparsityPattern):
        row_ptr, col_idx = [0], []
        for r in obj.rows:
            col_idx.extend(r)
            row_ptr.append(len(col_idx))
        matrix = CsrMatrix(obj.n_rows, obj.n_cols, row_ptr, col_idx, [1.0] * len(col_idx))
        comment = "sparsity pattern" if comment is None else comment
    elif isinstance(obj, CsrMatrix):
        matrix = obj
        comment = "jacobian" if comment is None else comment
    else:
        raise TypeError(f"Cannot export {type(obj).__name__} as MatrixMarket")

    log.debug(f"Writing {matrix.n_rows}x{matrix.n_cols} MatrixMarket file with {matrix.nnz} entries")
    coo = matrix.to_scipy().tocoo()
    if isinstance(target, (str, os.PathLike)):
        # Opened here so scipy does not append ".mtx" to the given name.
        with open(target, 'wb') as out:
            scipy.io.mmwrite(out, coo, comment=comment, field='real', symmetry='general')
    else:
        scipy.io.mmwrite(target, coo, comment=comment, field='real', symmetry='general')


def read_matrix_market(source):
    """ Read a coordinate MatrixMarket file into a `CsrMatrix` (no rhs). """
    return CsrMatrix.from_scipy(scipy.sparse.csr_matrix(scipy.io.mmread(source)))


def read_pattern(source):
    """ Read a MatrixMarket file and keep only its structure. """
    return read_matrix_market(source).pattern()
