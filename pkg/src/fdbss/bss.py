"""Two-source linear BSS harness: mixing, whitening, rotation sweeps.

After whitening, separating two sources reduces to finding one rotation
angle; ``landscape`` evaluates an estimator's independence measure on a grid
of candidate angles and records where it is smallest.  Angles are compared
modulo pi/2 because whitened solutions are equivalent under permutation and
sign flips of the two components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .density import BandwidthSelector, as_sample_matrix
from .errors import DegenerateComponentError, InvalidInputError, LandscapeError, UnsupportedError
from .estimators import EstimatorConfig, fit

QUARTER_TURN = math.pi / 2.0


def mix(sources, a) -> np.ndarray:
    """Apply a full-rank square mixing matrix: observations = A @ sources."""
    s = as_sample_matrix(sources)
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[1] != s.shape[0]:
        raise InvalidInputError(f"mixing matrix shape {a.shape} does not match {s.shape[0]} sources")
    if abs(np.linalg.det(a)) <= 1e-12:
        raise InvalidInputError("mixing matrix is rank deficient")
    return a @ s


@dataclass(frozen=True)
class WhitenResult:
    white: np.ndarray
    transform: np.ndarray


def whiten(observations) -> WhitenResult:
    """Center rows and map the sample covariance to the identity.

    Uses the symmetric inverse square root of the covariance (eigendecomposition
    of the population-divisor covariance), which has no rotation component of
    its own: white = C^(-1/2) (x - mean).
    """
    x = as_sample_matrix(observations, min_samples=2)
    centered = x - x.mean(axis=1, keepdims=True)
    cov = centered @ centered.T / x.shape[1]
    w, u = np.linalg.eigh(cov)
    if w.min() <= 1e-12 * max(w.max(), 1.0):
        raise DegenerateComponentError("singular covariance; components are linearly dependent")
    transform = u @ np.diag(w ** -0.5) @ u.T
    return WhitenResult(white=transform @ centered, transform=transform)


def rotation2(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotate2(white, theta: float) -> np.ndarray:
    """Rotate a 2 x N matrix by [[cos, -sin], [sin, cos]]."""
    x = as_sample_matrix(white)
    if x.shape[0] != 2:
        raise UnsupportedError("rotate2 needs exactly 2 rows")
    return rotation2(theta) @ x


def angle_error(estimated: float, truth: float) -> float:
    """Distance between angles modulo the quarter turn equivalence class."""
    d = (estimated - truth) % QUARTER_TURN
    return min(d, QUARTER_TURN - d)


def true_unmixing_angle(q) -> float:
    """Separating angle implied by a (near-)orthogonal residual mixing Q.

    Q is the whitening transform composed with the mixing matrix; its nearest
    orthogonal matrix (polar factor) is a rotation or reflection by phi, and
    rotating by -phi restores a signed permutation of the sources.  Returned
    in [0, pi/2).
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (2, 2):
        raise InvalidInputError("expected a 2 x 2 matrix")
    u, _, vt = np.linalg.svd(q)
    o = u @ vt
    return float((-math.atan2(o[1, 0], o[0, 0])) % QUARTER_TURN)


@dataclass(frozen=True)
class Landscape:
    """Independence-measure values over a grid of rotation angles."""

    thetas: np.ndarray
    values: np.ndarray
    argmin_theta: float
    argmin_index: int


def landscape(white, config: EstimatorConfig, grid_size: int = 100,
              freeze_basis: bool = False, freeze_bandwidth: bool = False) -> Landscape:
    """Sweep the estimator over grid_size equispaced angles in [0, pi/2).

    Each angle gets its own deterministic basis seed derived from
    (config.seed, index) unless ``freeze_basis`` keeps the seed fixed;
    ``freeze_bandwidth`` selects the bandwidth once from the unrotated input
    instead of per rotated candidate.  Estimator failures propagate with the
    offending angle attached.
    """
    x = as_sample_matrix(white, min_samples=2)
    if x.shape[0] != 2:
        raise UnsupportedError("landscape needs exactly 2 rows")
    if grid_size < 8:
        raise InvalidInputError("grid_size must be >= 8")
    if freeze_bandwidth:
        sigma = float(np.mean([config.bandwidth.select(row) for row in x]))
        config = replace(config, bandwidth=BandwidthSelector.fixed(sigma))
    thetas = QUARTER_TURN * np.arange(grid_size) / grid_size
    values = np.empty(grid_size)
    for k, theta in enumerate(thetas):
        seed = config.seed if freeze_basis else ((config.seed * 1_000_003 + k) % 2**63)
        cfg = replace(config, seed=seed)
        try:
            values[k] = fit(rotate2(x, theta), cfg).value
        except Exception as exc:
            raise LandscapeError(theta, exc) from exc
    idx = int(np.argmin(values))
    return Landscape(thetas=thetas, values=values,
                     argmin_theta=float(thetas[idx]), argmin_index=idx)
