"""Sample statistics, normalization, KDE evaluation and bandwidth selection.

Sample matrices are n x N float arrays: rows are components, columns are
realizations.  Standard deviations use the population (N) divisor throughout,
matching the whitening algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateComponentError, GridTooCoarseError, InvalidInputError
from .kernels import SQRT_2PI


def as_sample_matrix(samples, min_samples: int = 1) -> np.ndarray:
    """Validate and return an n x N sample matrix of finite floats."""
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2:
        raise InvalidInputError("sample matrix must be 2-D (rows = components)")
    if x.shape[1] < min_samples:
        raise InvalidInputError(f"need at least {min_samples} samples, got {x.shape[1]}")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("sample matrix must be finite")
    return x


def normalize(samples) -> np.ndarray:
    """Center each row to mean 0 and scale to population standard deviation 1."""
    x = as_sample_matrix(samples, min_samples=2)
    mean = x.mean(axis=1, keepdims=True)
    sd = x.std(axis=1, keepdims=True)
    if np.any(sd <= 0) or not np.all(np.isfinite(sd)):
        bad = int(np.argmin(sd))
        raise DegenerateComponentError(f"component {bad} has zero variance")
    return (x - mean) / sd


def rot_bandwidth(samples) -> float:
    """Gaussian-kernel rule-of-thumb bandwidth 1.06 * sd * N^(-1/5)."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 2:
        raise DegenerateComponentError("rule-of-thumb bandwidth needs N >= 2")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("samples must be finite")
    sd = float(x.std())
    if sd <= 0:
        raise DegenerateComponentError("rule-of-thumb bandwidth needs sd > 0")
    return 1.06 * sd * x.size ** (-0.2)


@dataclass(frozen=True)
class BandwidthSelector:
    """Maps a 1-D sample vector to a positive kernel bandwidth.

    kind is one of "rot" (rule of thumb), "fixed" (constant h) or "plugin"
    (arbitrary callable, e.g. a cumulant-based rule supplied by the caller).
    """

    kind: str = "rot"
    h: Optional[float] = None
    fn: Optional[Callable[[np.ndarray], float]] = field(default=None, compare=False)
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("rot", "fixed", "plugin"):
            raise InvalidInputError(f"unknown bandwidth kind {self.kind!r}")
        if self.kind == "fixed" and not (self.h is not None and self.h > 0):
            raise InvalidInputError("fixed bandwidth must be positive")
        if self.kind == "plugin" and self.fn is None:
            raise InvalidInputError("plugin selector needs a callable")

    @classmethod
    def rot(cls) -> "BandwidthSelector":
        return cls(kind="rot")

    @classmethod
    def fixed(cls, h: float) -> "BandwidthSelector":
        return cls(kind="fixed", h=float(h))

    @classmethod
    def plugin(cls, fn: Callable[[np.ndarray], float], name: str = "plugin") -> "BandwidthSelector":
        return cls(kind="plugin", fn=fn, name=name)

    def select(self, samples) -> float:
        if self.kind == "fixed":
            return float(self.h)
        if self.kind == "rot":
            return rot_bandwidth(samples)
        h = float(self.fn(np.asarray(samples, dtype=float).ravel()))
        if not (np.isfinite(h) and h > 0):
            raise InvalidInputError(f"plugin bandwidth {self.name!r} returned {h}")
        return h


def kde_eval(samples, sigma: float, x):
    """Gaussian KDE value (1/N) sum_i G_sigma(x - x_i) at scalar or array x."""
    pts = np.asarray(samples, dtype=float).ravel()
    if pts.size == 0:
        raise InvalidInputError("kde_eval needs at least one sample")
    if not (np.isfinite(sigma) and sigma > 0):
        raise InvalidInputError("sigma must be positive")
    x = np.asarray(x, dtype=float)
    d = x[..., None] - pts
    out = np.exp(-0.5 * (d / sigma) ** 2).sum(axis=-1) / (SQRT_2PI * sigma * pts.size)
    return float(out) if out.ndim == 0 else out


def grid_lp_norm(diff, spacings, p: float) -> float:
    """L^p norm of a gridded function: (sum |f|^p * trapezoid weights)^(1/p).

    ``spacings`` holds the per-axis grid steps; trapezoidal end weights are
    applied along every axis.
    """
    f = np.abs(np.asarray(diff, dtype=float)) ** p
    for ax, dx in enumerate(spacings):
        w = np.ones(f.shape[ax])
        w[0] = w[-1] = 0.5
        shape = [1] * f.ndim
        shape[ax] = -1
        f = f * (w.reshape(shape) * dx)
    return float(f.sum() ** (1.0 / p))


def lp_fd_grid(samples, sigma: float, p: float = 2.0, grid: int = 128) -> float:
    """Two-stage grid estimate of the L^p distance between the joint KDE and
    the product of the marginal KDEs of a 2 x N sample matrix.

    The input is normalized first, so the value is invariant to positive
    rescaling of the raw rows.  The grid spans [min - 4 sigma, max + 4 sigma]
    per axis; a spacing coarser than sigma/2 is rejected.
    """
    if p < 1:
        raise InvalidInputError("p must be >= 1")
    x = as_sample_matrix(samples, min_samples=2)
    if x.shape[0] != 2:
        raise InvalidInputError("lp_fd_grid needs a 2 x N sample matrix")
    z = normalize(x)
    axes = []
    for row in z:
        lo, hi = row.min() - 4.0 * sigma, row.max() + 4.0 * sigma
        ax = np.linspace(lo, hi, grid)
        if ax[1] - ax[0] > sigma / 2.0:
            raise GridTooCoarseError(
                f"grid spacing {ax[1] - ax[0]:.4g} exceeds sigma/2 = {sigma / 2:.4g}")
        axes.append(ax)
    kx = np.exp(-0.5 * ((axes[0][:, None] - z[0]) / sigma) ** 2) / (SQRT_2PI * sigma)
    ky = np.exp(-0.5 * ((axes[1][:, None] - z[1]) / sigma) ** 2) / (SQRT_2PI * sigma)
    n = z.shape[1]
    joint = kx @ ky.T / n
    product = np.outer(kx.mean(axis=1), ky.mean(axis=1))
    dx = axes[0][1] - axes[0][0]
    dy = axes[1][1] - axes[1][0]
    return grid_lp_norm(joint - product, (dx, dy), p)
