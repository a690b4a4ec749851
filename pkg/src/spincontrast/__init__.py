"""spincontrast: quantum vs classical-outcome-model contrast for a single spin-1/2.

The direction-integrated squared expectation value of spin measurements is
capped at 4*pi/3 for any qubit state, while +/-1-valued outcome models with
point-independent responses saturate 4*pi.  This package computes both sides,
verifies the supporting identities, and reports the joint verdict through a
CLI and an HTTP API.
"""

__version__ = "0.1.0"

from .classical import (
    DeterministicModel,
    Estimate,
    FiniteOutcomeModel,
    FiniteProbabilitySpace,
    KSSignModel,
    SphereSampleSpace,
    check_distribution_rule,
    check_expectation_lemma,
    check_spectrum_support,
    deterministic_model,
    hv_expectation,
    ks_model,
)
from .contrast import (
    MODEL_CONTRAST_BOUND,
    QUANTUM_CONTRAST_BOUND,
    BlochSphereCheck,
    ContrastReport,
    bloch_sphere_check,
    hv_contrast,
    inconsistency_report,
    quantum_contrast,
)
from .errors import BlochViolationError, NumericFailureError, SpectrumViolationError
from .qubit import (
    IDENTITY,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    Interval,
    Spectrum,
    bloch_vector,
    born_probability,
    direction_operator,
    expectation,
    pauli,
    purity,
    spectral_decomposition,
    state_from_bloch,
)
from .sphere import (
    RNG_ALGORITHM,
    SPHERE_AREA,
    Direction,
    SampleStream,
    SphericalGrid,
    integrate,
    orthogonality_table,
    product_gauss_grid,
    sample_directions,
    sample_unit_vectors,
)

__all__ = [
    "__version__",
    "BlochSphereCheck",
    "BlochViolationError",
    "ContrastReport",
    "DeterministicModel",
    "Direction",
    "Estimate",
    "FiniteOutcomeModel",
    "FiniteProbabilitySpace",
    "IDENTITY",
    "Interval",
    "KSSignModel",
    "MODEL_CONTRAST_BOUND",
    "NumericFailureError",
    "QUANTUM_CONTRAST_BOUND",
    "RNG_ALGORITHM",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SPHERE_AREA",
    "SampleStream",
    "Spectrum",
    "SpectrumViolationError",
    "SphereSampleSpace",
    "SphericalGrid",
    "bloch_sphere_check",
    "bloch_vector",
    "born_probability",
    "check_distribution_rule",
    "check_expectation_lemma",
    "check_spectrum_support",
    "deterministic_model",
    "direction_operator",
    "expectation",
    "hv_contrast",
    "hv_expectation",
    "inconsistency_report",
    "integrate",
    "ks_model",
    "orthogonality_table",
    "pauli",
    "product_gauss_grid",
    "purity",
    "quantum_contrast",
    "sample_directions",
    "sample_unit_vectors",
    "spectral_decomposition",
    "state_from_bloch",
]
