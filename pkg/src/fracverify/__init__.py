"""Numerical verification of fractional-calculus identities on the circle and the line."""
from .frac_div_circle import (
    CommutatorResult,
    RegularizedKernel,
    commutator_G,
    commutator_G_quadrature,
    div_extended_pair,
    div_product_quadrature,
    div_s_product,
    kernel_Ks,
)
from .frac_line import (
    OffDiagonalField,
    SampledLineFunction,
    TestFunction,
    check_div_grad_identity,
    fourier_pairing,
    frac_divergence_pair,
    frac_gradient,
    fraclap_line_pv,
    gagliardo_seminorm_line,
    leibniz_defect_integral,
    offdiag_norm,
)
from .hopf import (
    ConformalityReport,
    HopfCoefficients,
    conformality_report,
    hopf_coefficients,
    hopf_hminus3_norm,
    is_stationary,
)
from .kernels import circle_kernel, half_kernel, riesz_constant
from .noether import (
    NoetherCurrent,
    SphereConstraintError,
    SphereValuedCircleFunction,
    VerificationReport,
    lambda_field,
    noether_divergence_residual,
    omega_field,
    sphere_representation_residual,
    stationarity_functional_A,
    wedge_el_residual,
)
from .pohozaev import (
    ChebyshevSolution,
    ConvergenceError,
    EigenrelationError,
    Nonlinearity,
    boundary_limits,
    chebyshev_solve,
    circle_pohozaev_residuals,
    exterior_asymptotics,
    pohozaev_dilation_residual,
    pohozaev_translation_residual,
    validate_eigenrelation,
)
from .spectral_circle import (
    BandwidthError,
    CircleFunction,
    DiskFunction,
    analyze,
    fractional_laplacian_circle,
    gagliardo_seminorm_quadrature,
    hilbert_transform,
    poisson_extend,
    pv_fraclap_circle,
    seminorm,
    synthesize,
)

__all__ = [
    "BandwidthError",
    "ChebyshevSolution",
    "CircleFunction",
    "CommutatorResult",
    "ConformalityReport",
    "ConvergenceError",
    "DiskFunction",
    "EigenrelationError",
    "HopfCoefficients",
    "NoetherCurrent",
    "Nonlinearity",
    "OffDiagonalField",
    "RegularizedKernel",
    "SampledLineFunction",
    "SphereConstraintError",
    "SphereValuedCircleFunction",
    "TestFunction",
    "VerificationReport",
    "analyze",
    "boundary_limits",
    "chebyshev_solve",
    "check_div_grad_identity",
    "circle_kernel",
    "circle_pohozaev_residuals",
    "commutator_G",
    "commutator_G_quadrature",
    "conformality_report",
    "div_extended_pair",
    "div_product_quadrature",
    "div_s_product",
    "exterior_asymptotics",
    "fourier_pairing",
    "frac_divergence_pair",
    "frac_gradient",
    "fraclap_line_pv",
    "fractional_laplacian_circle",
    "gagliardo_seminorm_line",
    "gagliardo_seminorm_quadrature",
    "half_kernel",
    "hilbert_transform",
    "hopf_coefficients",
    "hopf_hminus3_norm",
    "is_stationary",
    "kernel_Ks",
    "lambda_field",
    "leibniz_defect_integral",
    "noether_divergence_residual",
    "offdiag_norm",
    "omega_field",
    "pohozaev_dilation_residual",
    "pohozaev_translation_residual",
    "poisson_extend",
    "pv_fraclap_circle",
    "riesz_constant",
    "seminorm",
    "sphere_representation_residual",
    "stationarity_functional_A",
    "synthesize",
    "validate_eigenrelation",
    "wedge_el_residual",
]
__version__ = "0.1.0"
