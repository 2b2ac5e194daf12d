"""magtrace: spectral densities and trace-formula coefficients of magnetic Laplacians.

The package evaluates the smoothed spectral density Y_N(phi) of
Bochner-Schrodinger operators at the zero energy level, the Landau-level
closed forms of its expansion coefficients, distributional sin-pairings with
their epsilon-regularized definitions, Demailly-type Weyl limits, linearized
flows, and a gauge-covariant lattice discretization on the 2-torus used to
validate everything against brute-force eigenvalues.
"""

from .density import DensityValue, density_curve, smoothed_density
from .fitting import ExpansionFit, RichardsonResult, fit_expansion, richardson
from .flow import DetIdentity, FlowMatrix, det_identity, flow_matrix, periods, sphere_flow_matrix
from .geometry import (
    ManifoldQuadrature,
    MagneticFrequencies,
    PointMagneticData,
    integrate_f0,
    landau_level,
    local_density_f0,
    magnetic_frequencies,
    quadrature_from_csv,
    quadrature_to_csv,
    sphere_quadrature,
    torus_quadrature,
)
from .lattice import (
    LandauReport,
    LatticeOperator,
    build_operator,
    landau_report,
    lowest_eigenvalues,
    operator_to_csv,
    regauge,
)
from .pairings import (
    ExtrapolationError,
    PairingSpec,
    RegularizedPairing,
    half_power_pairing,
    hessian_nodes_from_magnetic,
    khuat_duy_c0,
    pairing_integral,
    regularized_pairing,
    sin_sum,
)
from .probes import TestFunction, evaluate, evaluate_derivative, fourier_transform, parse_probe
from .spectra import (
    ModelSystem,
    SpectralLine,
    leading_coefficient,
    model_quadrature,
    parse_model,
    spectrum,
    subleading_coefficient,
)
from .weyl import BandSet, CountingResult, band_set, counting_function, demailly_limit

__version__ = "0.1.0"
