"""
Sparse AD Library for Python.

Forward-mode automatic differentiation with sparse dependency maps: one
evaluation of a residual function with `ADScalar` arguments yields the
residual values, the Jacobian sparsity pattern and the Jacobian entries. On
top of that sit a sparse LU solver, a Newton solver, a fixed-step BDF1 DAE
integrator, the Lorenz and microgrid models and the `sad` benchmark CLI.

Workflow:
1) Write the residual function once with ordinary arithmetic and the functions of `math_functions`,
2) Register the unknowns with `register_variables()` and evaluate,
3) Turn the residual vector into a pattern or CSR Jacobian with `extract_pattern()` / `assemble_csr()`,
4) Solve with `newton_solve()` or integrate a DAE with `dae_integrate()`.
 """

__version__ = "0.1.0"
__status__ = "Development"

from sparse_ad_library.ad_scalar import (ADScalar, make_parameter, make_seeded, make_variable,
                                         register_variables, sum_scalars, values_of)
from sparse_ad_library.dae_integrator import (DaeConfig, DaeSimulationThread, Trajectory,
                                              consistent_init, dae_integrate, evaluate_dae)
from sparse_ad_library.dense_scalar import DenseADScalar, register_dense_variables
from sparse_ad_library.errors import (AdDomainError, ConfigError, ConvergenceError, DimensionError,
                                      InitializationError, IntegrationError, PatternIndexError,
                                      SadError, SingularMatrixError)
from sparse_ad_library.linalg import dense_solve, lu_factor, lu_solve
from sparse_ad_library.newton_solver import NewtonConfig, NewtonStats, fd_jacobian, newton_solve
from sparse_ad_library.structure import (CsrMatrix, DependencyGraph, SparsityPattern, assemble_csr,
                                         extract_pattern, print_matlab, to_dependency_graph)
from sparse_ad_library.trajectory_processor import TrajectoryProcessor
