"""Integral transform for the Klein-Gordon equation in de Sitter spacetime."""

from .errors import (
    BoundaryUnsupported,
    CFLViolation,
    DepthExceeded,
    DomainError,
    DskgError,
    InvalidParams,
    NonConvergence,
    RealnessError,
    StepFailure,
)
from .hypergeom import euler_integral_oracle, gauss_2f1, gauss_2f1_dz, hypergeom_ode_residual
from .kernels import (
    Mass,
    KernelPoint,
    aux,
    aux_derivatives,
    kernel_E,
    kernel_E_r,
    kernel_E_rr,
    kernel_E_t,
    kernel_E_tt,
    kernel_K0,
    kernel_K0_boundary,
    kernel_K0_symmetric,
    kernel_K1,
    phi,
)
from .quadrature import QuadratureConfig, adaptive_quad
from .transform import SampledField, transform_full, transform_phi0, transform_phi1, transform_source
from .wave_oracles import GridProblem1D, ModeProblem, dalembert_v, fd_direct_solver, mode_v, ode_oracle

__version__ = "0.1.0"
