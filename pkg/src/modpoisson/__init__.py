"""Modified Poisson integrals on a half space.

Evaluation of the classical and modified half-space Dirichlet and Neumann
integrals, their Gegenbauer kernel machinery, spherical-harmonic asymptotic
expansions, and a numerical certification suite for the identities, growth
orders, and sharpness constructions the solution theory rests on.
"""

from . import gegenbauer
from .data import (
    BoundaryData,
    Support,
    bump,
    bump_train,
    constant,
    exp_decay,
    make_data,
    poly_growth,
    shell_bump,
)
from .errors import (
    AccuracyError,
    ConstructionError,
    DivergenceError,
    DomainError,
    ModPoissonError,
    SingularityError,
)
from .expansions import (
    AsymptoticExpansion,
    HarmonicFamilyTerm,
    addition_separation,
    asymptotic_expansion,
    coefficient_Y0,
    coefficient_Y1,
    divergence_demo,
    exp_data_neumann_coefficient,
    gamma_addition,
    harmonic_term,
    zonal_harmonic,
)
from .geometry import (
    AngleTriple,
    BoundaryPoint,
    HalfSpacePoint,
    big_theta,
    reflect_across_first_axis,
    theta_prime,
)
from .kernels import (
    KernelParams,
    kernel_K,
    kernel_KM_direct,
    kernel_KM_integral,
    kernel_KM_second,
    kernel_bound_first,
)
from .quadrature import (
    QuadratureSpec,
    alpha_n,
    cutoff_w,
    dirichlet_D,
    dirichlet_DM,
    integral_F,
    integral_F_second,
    neumann_N,
    neumann_NM,
    solution_u,
    solution_v,
)
from .sharpness import (
    RegionSpec,
    SharpnessConstants,
    compute_constants,
    data_balls_super_extension,
    data_half_balls,
    region_contains,
    sign_check_km_cone,
    sign_check_phi,
)
from .verification import (
    CheckReport,
    check_boundary,
    check_harmonicity,
    check_kernel_identity,
    check_neumann_representation,
    fd_laplacian,
    growth_sweep,
)

__version__ = "0.1.0"
