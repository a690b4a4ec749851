"""Geometry, quadrature and random sampling on the sphere of measurement directions.

The direction sphere carries the measure sin(theta) dtheta dphi, total mass
4*pi.  Deterministic integration uses a Gauss-Legendre x uniform-azimuth
product grid, which is exact for the low-degree polynomial integrands that
show up in the contrast computations.  Random directions come from a seeded
counter-based generator so every run is bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NumericFailureError

TWO_PI = 2.0 * math.pi

#: Surface area of the unit sphere; the total quadrature weight.
SPHERE_AREA = 4.0 * math.pi

#: Name of the generator behind all sampling, recorded in report metadata.
RNG_ALGORITHM = "pcg64"


@dataclass(frozen=True)
class Direction:
    """A point on the unit sphere held as spherical angles.

    theta is the polar angle in [0, pi], phi the azimuth in [0, 2*pi).
    """

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta!r}")
        if not (0.0 <= self.phi < TWO_PI):
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi!r}")

    @property
    def unit_vector(self) -> np.ndarray:
        """Cartesian image (sin t cos p, sin t sin p, cos t); unit norm."""
        s = math.sin(self.theta)
        return np.array([s * math.cos(self.phi), s * math.sin(self.phi), math.cos(self.theta)])

    @classmethod
    def from_vector(cls, v) -> "Direction":
        v = np.asarray(v, dtype=float)
        if v.shape != (3,):
            raise ValueError(f"expected a 3-vector, got shape {v.shape}")
        norm = float(np.linalg.norm(v))
        if norm == 0.0 or not math.isfinite(norm):
            raise ValueError("cannot build a direction from a zero or non-finite vector")
        theta = math.acos(min(1.0, max(-1.0, v[2] / norm)))
        phi = math.atan2(v[1], v[0]) % TWO_PI
        return cls(theta, phi)


@dataclass(frozen=True)
class SphericalGrid:
    """Quadrature nodes and weights over the full sphere.

    Weights are in steradians; they are all positive and sum to 4*pi.
    ``unit_vectors[i]`` is the Cartesian image of ``directions[i]``.
    """

    n_polar: int
    n_azimuthal: int
    directions: tuple[Direction, ...]
    weights: np.ndarray
    unit_vectors: np.ndarray

    def __len__(self) -> int:
        return len(self.directions)


def product_gauss_grid(n_polar: int = 8, n_azimuthal: int = 16) -> SphericalGrid:
    """Gauss-Legendre nodes in cos(theta) crossed with a uniform azimuthal rule.

    Integrates spherical polynomials of total degree up to
    min(2*n_polar - 1, n_azimuthal - 1) exactly.
    """
    if n_polar < 2:
        raise ValueError(f"n_polar must be at least 2, got {n_polar}")
    if n_azimuthal < 5:
        raise ValueError(f"n_azimuthal must be at least 5, got {n_azimuthal}")

    cos_nodes, polar_weights = np.polynomial.legendre.leggauss(n_polar)
    phis = TWO_PI * np.arange(n_azimuthal) / n_azimuthal
    phi_weight = TWO_PI / n_azimuthal

    directions: list[Direction] = []
    weights: list[float] = []
    for cos_theta, polar_weight in zip(cos_nodes, polar_weights):
        theta = math.acos(min(1.0, max(-1.0, float(cos_theta))))
        for phi in phis:
            directions.append(Direction(theta, float(phi)))
            weights.append(float(polar_weight) * phi_weight)

    weight_array = np.array(weights)
    vectors = np.array([d.unit_vector for d in directions])
    weight_array.setflags(write=False)
    vectors.setflags(write=False)
    return SphericalGrid(n_polar, n_azimuthal, tuple(directions), weight_array, vectors)


def integrate(f: Callable[[Direction], float], grid: SphericalGrid) -> float:
    """Weighted sum of f over the grid nodes, accumulated in fixed node order."""
    total = 0.0
    for direction, weight in zip(grid.directions, grid.weights):
        value = float(f(direction))
        if not math.isfinite(value):
            raise NumericFailureError(
                f"integrand returned {value!r} at node theta={direction.theta:.12g}, "
                f"phi={direction.phi:.12g}"
            )
        total += weight * value
    return total


def orthogonality_table(grid: SphericalGrid) -> np.ndarray:
    """3x3 matrix of integrated products of Cartesian components.

    Entry (a, b) is the integral of n_a * n_b over the sphere, which equals
    (4*pi/3) * identity for any grid exact at degree 2.
    """
    table = np.empty((3, 3))
    for a in range(3):
        for b in range(3):
            table[a, b] = integrate(lambda d: d.unit_vector[a] * d.unit_vector[b], grid)
    return table


@dataclass(frozen=True)
class SampleStream:
    """Seeded, replayable source of uniformly distributed directions."""

    seed: int
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"count must be positive, got {self.count}")


def _generator(seed: int, stream_index: int = 0) -> np.random.Generator:
    # Substreams derived from (seed, index) stay deterministic and independent.
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, stream_index))))


def _draw_angles(stream: SampleStream, stream_index: int) -> tuple[np.ndarray, np.ndarray]:
    rng = _generator(stream.seed, stream_index)
    z = rng.uniform(-1.0, 1.0, stream.count)
    phi = rng.uniform(0.0, TWO_PI, stream.count) % TWO_PI
    return z, phi


def sample_unit_vectors(stream: SampleStream, stream_index: int = 0) -> np.ndarray:
    """(count, 3) array of i.i.d. uniform directions, identical for identical inputs.

    cos(theta) is uniform on [-1, 1] and phi uniform on [0, 2*pi), which is
    the area-uniform distribution on the sphere.
    """
    z, phi = _draw_angles(stream, stream_index)
    s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.column_stack((s * np.cos(phi), s * np.sin(phi), z))


def sample_directions(stream: SampleStream, stream_index: int = 0) -> list[Direction]:
    """Direction objects for exactly the same draws as sample_unit_vectors."""
    z, phi = _draw_angles(stream, stream_index)
    thetas = np.arccos(np.clip(z, -1.0, 1.0))
    return [Direction(float(t), float(p)) for t, p in zip(thetas, phi)]
