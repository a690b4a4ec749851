"""Direction-integrated squared expectation values and the combined verdict.

For a state with Bloch vector T, the integral of Tr[psi (n . sigma)]^2 over
all directions equals (4*pi/3) * |T|^2, hence is capped at 4*pi/3.  A model
whose response is +/-1-valued and independent of the sample point instead
saturates the model-side cap of 4*pi.  This module computes both sides for
concrete states and models, checks the caps, and assembles a report stating
whether the two saturation claims collide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import (
    Budget,
    DistributionRuleCheck,
    Estimate,
    HVModel,
    SpectrumSupportCheck,
    check_distribution_rule,
    check_spectrum_support,
)
from .errors import NumericFailureError
from .qubit import bloch_vector, expectation, require_density
from .sphere import SPHERE_AREA, SampleStream, SphericalGrid, integrate, sample_directions

#: Largest possible direction-integrated squared expectation for a quantum state.
QUANTUM_CONTRAST_BOUND = SPHERE_AREA / 3.0

#: Largest possible value for any +/-1-valued outcome model: the sphere area.
MODEL_CONTRAST_BOUND = SPHERE_AREA

_FLAG_SATISFIED = "satisfied"
_FLAG_VIOLATED = "violated"
_FLAG_ASSUMED = "assumed"


def quantum_contrast(psi, grid: SphericalGrid) -> float:
    """Integral of the squared quantum expectation over all directions.

    Equals (4*pi/3) * |T|^2 for Bloch vector T; the grid is exact for this
    degree-2 integrand, so quadrature and closed form agree to rounding.
    """
    rho = require_density(psi)
    return integrate(lambda n: expectation(rho, n) ** 2, grid)


def hv_contrast(model: HVModel, grid: SphericalGrid, budget: Budget = "exact") -> Estimate:
    """Integral of the squared model expectation over all directions.

    Sampled expectations use an independent substream per grid node; their
    standard errors propagate through the quadrature sum in quadrature
    (first-order in the per-node error).
    """
    total = 0.0
    variance = 0.0
    samples_total = 0
    for index, (n, weight) in enumerate(zip(grid.directions, grid.weights)):
        est = model.expectation(n, budget, stream_index=index)
        total += weight * est.value**2
        variance += (weight * 2.0 * abs(est.value) * est.std_error) ** 2
        samples_total += est.n_samples or 0
    std_error = math.sqrt(variance)
    if total > MODEL_CONTRAST_BOUND + max(4.0 * std_error, 1e-9):
        raise NumericFailureError(
            f"model contrast {total!r} exceeds the sphere-area cap {MODEL_CONTRAST_BOUND!r}"
        )
    return Estimate(total, std_error, samples_total or None)


@dataclass(frozen=True)
class BlochSphereCheck:
    """Whether the Bloch vector sits inside the unit ball, and on its surface."""

    norm_sq: float
    within_ball: bool
    saturated: bool


def bloch_sphere_check(psi) -> BlochSphereCheck:
    """Report |T|^2, the ball constraint, and surface saturation (pure state)."""
    t = bloch_vector(require_density(psi))
    norm_sq = float(t @ t)
    return BlochSphereCheck(
        norm_sq=norm_sq,
        within_ball=norm_sq <= 1.0 + 1e-12,
        saturated=abs(norm_sq - 1.0) <= 1e-10,
    )


@dataclass(frozen=True)
class ContrastReport:
    """Both sides of the contrast computation plus per-proposition findings."""

    quantum_value: float
    quantum_bound: float
    hv_value: float
    hv_std_error: float
    hv_bound: float
    bloch_norm_sq: float
    state_pure: bool
    gap_ratio: float | None
    proposition_flags: dict[str, str]
    distribution_checks: tuple[DistributionRuleCheck, ...]
    spectrum_check: SpectrumSupportCheck
    contradiction: bool
    verdict: str
    warnings: tuple[str, ...]


def inconsistency_report(
    psi,
    model: HVModel,
    grid: SphericalGrid,
    budget: Budget = "exact",
    probe_directions: int = 5,
    probe_seed: int = 1_000,
    spectrum_budget: int = 10_000,
) -> ContrastReport:
    """Compute both contrast values, run the proposition checks, and give a verdict.

    The contradiction flag is set when the quantum side attains 4*pi/3 (pure
    state) while the model side attains 4*pi (dispersion-free response): the
    two caps cannot describe the same expectation values.  Mixed states are
    allowed but flagged, since the collision is stated for pure states.
    """
    rho = require_density(psi)
    bloch = bloch_sphere_check(rho)
    quantum_value = quantum_contrast(rho, grid)
    hv = hv_contrast(model, grid, budget)

    probes = sample_directions(SampleStream(probe_seed, probe_directions))
    distribution_checks = tuple(
        check_distribution_rule(model, rho, n, budget) for n in probes
    )
    spectrum = check_spectrum_support(model, spectrum_budget, seed=probe_seed)

    flags = {
        "born_rule": _FLAG_ASSUMED,
        "outcome_functions_exist": _FLAG_SATISFIED if spectrum.passed else _FLAG_VIOLATED,
        "distribution_rule": (
            _FLAG_SATISFIED if all(c.passed for c in distribution_checks) else _FLAG_VIOLATED
        ),
        "bloch_sphere": _FLAG_SATISFIED if bloch.within_ball else _FLAG_VIOLATED,
    }

    warnings: list[str] = []
    if not bloch.saturated:
        warnings.append(
            f"state is not pure (bloch norm^2 = {bloch.norm_sq:.12g}); "
            "the joint contradiction is stated for pure states"
        )

    quantum_saturated = abs(quantum_value - QUANTUM_CONTRAST_BOUND) <= 1e-9
    hv_tolerance = max(4.0 * hv.std_error, 1e-9)
    hv_saturated = hv.value >= MODEL_CONTRAST_BOUND - hv_tolerance
    contradiction = quantum_saturated and hv_saturated

    gap_ratio = hv.value / quantum_value if quantum_value > 1e-12 else None
    if contradiction:
        verdict = f"propositions jointly inconsistent; gap ratio {gap_ratio:.3f}"
    elif abs(hv.value - quantum_value) <= hv_tolerance:
        verdict = (
            "outcome model agrees with the quantum value within sampling error; "
            f"gap ratio {gap_ratio:.3f}"
        )
    else:
        verdict = f"quantum value {quantum_value:.9f}, outcome-model value {hv.value:.9f}"
        if gap_ratio is not None:
            verdict += f"; gap ratio {gap_ratio:.3f}"

    return ContrastReport(
        quantum_value=quantum_value,
        quantum_bound=QUANTUM_CONTRAST_BOUND,
        hv_value=hv.value,
        hv_std_error=hv.std_error,
        hv_bound=MODEL_CONTRAST_BOUND,
        bloch_norm_sq=bloch.norm_sq,
        state_pure=bloch.saturated,
        gap_ratio=gap_ratio,
        proposition_flags=flags,
        distribution_checks=distribution_checks,
        spectrum_check=spectrum,
        contradiction=contradiction,
        verdict=verdict,
        warnings=tuple(warnings),
    )
