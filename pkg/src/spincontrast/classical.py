"""Classical outcome models for spin measurements, and their conformance checks.

A model is a classical probability space together with a +/-1-valued response
function per measurement direction.  Three families are provided:

* ``KSSignModel`` -- hidden variables uniform on the unit sphere, outcome
  sign((m + lam) . n).  Reproduces the quantum statistics of the pure state
  with Bloch vector m: the +1 preimage has measure (1 + m.n)/2, so every
  expectation equals m.n.
* ``DeterministicModel`` -- the outcome depends only on the measured
  direction, never on the sample point, so every expectation is exactly +/-1.
* ``FiniteOutcomeModel`` -- tabulated outcomes on a finite probability space.

The check functions compare a model's statistics against the quantum ones:
preimage measures against Born probabilities, outcome values against the
observable's spectrum, and the two equivalent ways of writing a finite-space
expectation (grouped by outcome vs summed point by point).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Union

import numpy as np

from .errors import NumericFailureError, SpectrumViolationError
from .qubit import (
    EIGENVALUE_MATCH_TOL,
    born_probability,
    direction_operator,
    require_density,
    require_hermitian,
    spectral_decomposition,
)
from .sphere import Direction, SampleStream, sample_directions, sample_unit_vectors

DEFAULT_SEED = 42

#: A sampling budget: a positive sample count, or "exact" for weighted sums.
Budget = Union[int, str]


@dataclass(frozen=True)
class Estimate:
    """A value with a standard-error estimate; exact results carry zero error."""

    value: float
    std_error: float = 0.0
    n_samples: int | None = None


@dataclass(frozen=True)
class FiniteProbabilitySpace:
    """Finitely many sample points with nonnegative weights summing to one."""

    points: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self) -> None:
        weights = np.asarray(self.weights, dtype=float)
        if weights.ndim != 1 or weights.size != len(self.points):
            raise ValueError("weights must be a 1-d array matching the point list")
        if weights.size == 0:
            raise ValueError("a probability space needs at least one point")
        if float(weights.min()) < 0.0:
            raise ValueError("weights must be nonnegative")
        if abs(float(weights.sum()) - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {float(weights.sum())!r}")
        weights = weights.copy()
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_weights(cls, weights) -> "FiniteProbabilitySpace":
        weights = np.asarray(weights, dtype=float)
        return cls(tuple(f"w{i}" for i in range(weights.size)), weights)


@dataclass(frozen=True)
class SphereSampleSpace:
    """Hidden variables drawn uniformly from the unit sphere, seeded."""

    seed: int

    def unit_vectors(self, count: int, stream_index: int = 0) -> np.ndarray:
        return sample_unit_vectors(SampleStream(self.seed, count), stream_index)


def _require_sample_count(budget: Budget) -> int:
    if budget == "exact":
        raise ValueError("this model samples its hidden variables; pass a sample count")
    count = int(budget)
    if count < 1:
        raise ValueError(f"sample count must be at least 1, got {budget!r}")
    return count


def _mean_estimate(outcomes: np.ndarray) -> Estimate:
    n = int(outcomes.size)
    mean = float(outcomes.mean())
    sem = float(outcomes.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return Estimate(mean, sem, n)


def _validate_outcomes(values: np.ndarray, context: str) -> np.ndarray:
    if not np.isfinite(values).all():
        raise NumericFailureError(f"{context} produced a non-finite outcome")
    off = np.minimum(np.abs(values - 1.0), np.abs(values + 1.0))
    if float(off.max(initial=0.0)) > EIGENVALUE_MATCH_TOL:
        bad = float(values[np.argmax(off)])
        raise SpectrumViolationError(
            f"{context} produced outcome {bad!r} outside the spectrum {{+1, -1}}"
        )
    return values


@dataclass(frozen=True)
class KSSignModel:
    """Sphere-valued hidden variables with outcome sign((m + lam) . n).

    The tie set (m + lam) . n == 0 has measure zero and maps to +1.
    """

    bloch: np.ndarray
    space: SphereSampleSpace
    label: str = "ks-sign"

    def raw_outcomes(self, n: Direction, count: int, stream_index: int = 0) -> np.ndarray:
        lam = self.space.unit_vectors(count, stream_index)
        s = lam @ n.unit_vector + float(self.bloch @ n.unit_vector)
        return np.where(s >= 0.0, 1.0, -1.0)

    def expectation(self, n: Direction, budget: Budget, stream_index: int = 0) -> Estimate:
        count = _require_sample_count(budget)
        return _mean_estimate(self.raw_outcomes(n, count, stream_index))

    def preimage_probability(self, n: Direction, budget: Budget, stream_index: int = 0) -> Estimate:
        count = _require_sample_count(budget)
        hits = self.raw_outcomes(n, count, stream_index) > 0.0
        p = float(hits.mean())
        return Estimate(p, math.sqrt(p * (1.0 - p) / count), count)


@dataclass(frozen=True)
class DeterministicModel:
    """Direction-only response: f_n(omega) = assign(n) for every sample point.

    The underlying probability space is immaterial; expectations are exact.
    """

    assign: Callable[[Direction], float]
    label: str = "deterministic"

    def outcome(self, n: Direction) -> float:
        value = np.asarray([float(self.assign(n))])
        _validate_outcomes(value, "deterministic assignment")
        return 1.0 if value[0] > 0.0 else -1.0

    def raw_outcomes(self, n: Direction, count: int, stream_index: int = 0) -> np.ndarray:
        return np.full(max(1, count), float(self.assign(n)))

    def expectation(self, n: Direction, budget: Budget = "exact", stream_index: int = 0) -> Estimate:
        return Estimate(self.outcome(n), 0.0, None)

    def preimage_probability(self, n: Direction, budget: Budget = "exact", stream_index: int = 0) -> Estimate:
        return Estimate(1.0 if self.outcome(n) > 0.0 else 0.0, 0.0, None)


@dataclass(frozen=True)
class FiniteOutcomeModel:
    """Tabulated +/-1 outcomes on a finite probability space.

    ``outcomes[i, j]`` is the response of point i to tabulated direction j.
    Arbitrary directions are matched to the nearest tabulated one, making the
    response a piecewise-constant measurable function on the whole sphere.
    """

    space: FiniteProbabilitySpace
    directions: tuple[Direction, ...]
    outcomes: np.ndarray
    label: str = "finite-table"
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        outcomes = np.asarray(self.outcomes, dtype=float)
        expected = (len(self.space.points), len(self.directions))
        if outcomes.shape != expected:
            raise ValueError(f"outcomes must have shape {expected}, got {outcomes.shape}")
        outcomes = outcomes.copy()
        outcomes.setflags(write=False)
        object.__setattr__(self, "outcomes", outcomes)
        vectors = np.array([d.unit_vector for d in self.directions])
        vectors.setflags(write=False)
        object.__setattr__(self, "_direction_vectors", vectors)

    def _column(self, n: Direction) -> np.ndarray:
        index = int(np.argmax(self._direction_vectors @ n.unit_vector))
        return self.outcomes[:, index]

    def raw_outcomes(self, n: Direction, count: int, stream_index: int = 0) -> np.ndarray:
        # Finite spaces are audited point by point; the budget is ignored.
        return self._column(n)

    def expectation(self, n: Direction, budget: Budget = "exact", stream_index: int = 0) -> Estimate:
        column = _validate_outcomes(self._column(n), f"model {self.label!r}")
        if budget == "exact":
            return Estimate(float(self.space.weights @ column), 0.0, None)
        count = _require_sample_count(budget)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((self.seed, stream_index))))
        draws = rng.choice(column, size=count, p=self.space.weights)
        return _mean_estimate(draws)

    def preimage_probability(self, n: Direction, budget: Budget = "exact", stream_index: int = 0) -> Estimate:
        column = _validate_outcomes(self._column(n), f"model {self.label!r}")
        return Estimate(float(self.space.weights @ (column > 0.0)), 0.0, None)


#: Any of the concrete model families above.
HVModel = Union[KSSignModel, DeterministicModel, FiniteOutcomeModel]


def ks_model(m, seed: int = DEFAULT_SEED) -> KSSignModel:
    """Sign model for the pure state with unit Bloch vector m."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {m.shape}")
    if abs(float(np.linalg.norm(m)) - 1.0) > 1e-9:
        raise ValueError("the sign model is defined for pure states: |m| must be 1")
    m = m.copy()
    m.setflags(write=False)
    return KSSignModel(m, SphereSampleSpace(seed))


def deterministic_model(assign) -> DeterministicModel:
    """Dispersion-free model from a callable or mapping Direction -> +/-1."""
    if isinstance(assign, Mapping):
        table = dict(assign)

        def lookup(n: Direction) -> float:
            try:
                return float(table[n])
            except KeyError:
                raise ValueError(f"assignment is not defined at direction {n}") from None

        return DeterministicModel(lookup)
    if not callable(assign):
        raise ValueError("assign must be a callable or a mapping over directions")
    return DeterministicModel(assign)


def hv_expectation(model: HVModel, n: Direction, budget: Budget = "exact") -> Estimate:
    """Model expectation along n: exact weighted sum, or empirical mean with
    a standard-error estimate when the budget is a sample count."""
    return model.expectation(n, budget)


@dataclass(frozen=True)
class DistributionRuleCheck:
    """Comparison of a model's +1 preimage measure against the Born probability."""

    model_label: str
    direction: Direction
    model_probability: float
    born_probability: float
    deviation: float
    tolerance: float
    n_samples: int | None
    passed: bool


def check_distribution_rule(model: HVModel, psi, n: Direction, budget: Budget = "exact") -> DistributionRuleCheck:
    """Check mu(f_n^{-1}({+1})) against Tr[psi P_+] for the spin along n.

    Sampled models are held to 4*sqrt(p(1-p)/N); exact models to 1e-12.
    Failures are reported, not raised.
    """
    rho = require_density(psi)
    estimate = model.preimage_probability(n, budget)
    p_born = born_probability(rho, direction_operator(n), (1.0,))
    if estimate.n_samples:
        tolerance = 4.0 * math.sqrt(max(p_born * (1.0 - p_born), 0.0) / estimate.n_samples)
        tolerance = max(tolerance, 1e-12)
    else:
        tolerance = 1e-12
    deviation = abs(estimate.value - p_born)
    return DistributionRuleCheck(
        model_label=model.label,
        direction=n,
        model_probability=estimate.value,
        born_probability=p_born,
        deviation=deviation,
        tolerance=tolerance,
        n_samples=estimate.n_samples,
        passed=deviation <= tolerance,
    )


@dataclass(frozen=True)
class SpectrumSupportCheck:
    """Audit that every evaluated outcome lies in the spectrum {+1, -1}."""

    model_label: str
    outcomes_checked: int
    violations: int
    passed: bool


def check_spectrum_support(
    model: HVModel,
    budget: int,
    n_directions: int = 100,
    seed: int = DEFAULT_SEED,
) -> SpectrumSupportCheck:
    """Evaluate raw outcomes over random directions and count spectrum violations.

    The budget is split across ``n_directions`` probe directions.  Unlike the
    expectation path, out-of-spectrum values are counted rather than raised,
    so adversarial models can be audited.
    """
    if budget < 1:
        raise ValueError(f"budget must be positive, got {budget}")
    probes = sample_directions(SampleStream(seed, min(n_directions, budget)))
    per_direction = max(1, budget // len(probes))
    checked = 0
    violations = 0
    for index, n in enumerate(probes):
        outcomes = np.asarray(model.raw_outcomes(n, per_direction, stream_index=index), dtype=float)
        checked += int(outcomes.size)
        off = np.minimum(np.abs(outcomes - 1.0), np.abs(outcomes + 1.0))
        bad = (~np.isfinite(outcomes)) | (off > EIGENVALUE_MATCH_TOL)
        violations += int(bad.sum())
    return SpectrumSupportCheck(model.label, checked, violations, violations == 0)


@dataclass(frozen=True)
class ExpectationLemmaCheck:
    """Finite-space expectation computed two equivalent ways, plus the trace.

    ``partition_sum`` groups sample points by outcome value before summing;
    ``point_sum`` sums weight * outcome point by point.  The two are exact
    rearrangements of each other.  When the preimage measures also match the
    Born probabilities, both must agree with Tr[psi a].
    """

    partition_sum: float
    point_sum: float
    rearrangement_gap: float
    rearrangement_ok: bool
    preimage_measures: tuple[tuple[float, float], ...]
    trace_value: float
    distribution_matches: bool
    trace_gap: float | None
    trace_ok: bool | None


def check_expectation_lemma(
    space: FiniteProbabilitySpace,
    outcomes,
    psi,
    observable,
    rearrangement_tol: float = 1e-12,
    born_tol: float = 1e-9,
) -> ExpectationLemmaCheck:
    """Verify the grouped-vs-pointwise expectation identity on a finite space.

    Outcomes must lie in the observable's spectrum (within the eigenvalue
    matching tolerance); each is snapped to its eigenvalue so the two sums
    are floating-point rearrangements of identical products.
    """
    rho = require_density(psi)
    a = require_hermitian(observable)
    spec = spectral_decomposition(a)
    values = np.asarray(outcomes, dtype=float)
    if values.shape != (len(space.points),):
        raise ValueError("outcomes must provide one value per sample point")

    eigenvalues = np.array(spec.eigenvalues)
    distances = np.abs(values[:, None] - eigenvalues[None, :])
    nearest = np.argmin(distances, axis=1)
    if float(distances[np.arange(values.size), nearest].max()) > EIGENVALUE_MATCH_TOL:
        raise SpectrumViolationError(
            f"an outcome lies outside the spectrum {spec.eigenvalues}"
        )
    snapped = eigenvalues[nearest]

    # Preimages of distinct eigenvalues are disjoint by construction of nearest.
    measures = []
    partition_sum = 0.0
    for k, y in enumerate(spec.eigenvalues):
        measure = float(space.weights[nearest == k].sum())
        measures.append((float(y), measure))
        partition_sum += measure * float(y)
    point_sum = float(np.dot(space.weights, snapped))
    gap = abs(partition_sum - point_sum)

    trace_value = float(np.trace(rho @ a).real)
    born = [born_probability(rho, a, (y,)) for y, _ in measures]
    distribution_matches = all(
        abs(measure - p) <= born_tol for (_, measure), p in zip(measures, born)
    )
    if distribution_matches:
        trace_tol = born_tol * sum(abs(y) for y, _ in measures) + 1e-12
        trace_gap = abs(partition_sum - trace_value)
        trace_ok = trace_gap <= trace_tol
    else:
        trace_gap = None
        trace_ok = None

    return ExpectationLemmaCheck(
        partition_sum=partition_sum,
        point_sum=point_sum,
        rearrangement_gap=gap,
        rearrangement_ok=gap <= rearrangement_tol,
        preimage_measures=tuple(measures),
        trace_value=trace_value,
        distribution_matches=distribution_matches,
        trace_gap=trace_gap,
        trace_ok=trace_ok,
    )
