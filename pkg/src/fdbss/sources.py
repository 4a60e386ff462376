"""Seeded generators for the 21 benchmark source distributions (kinds a-u).

Kinds by letter: (a) Student t3, (b) double exponential, (c) uniform,
(d) Student t5, (e) exponential, (f) mixture of two double exponentials,
(g-i) symmetric 2-Gaussian mixtures and (j-l) nonsymmetric ones, (m-o)
symmetric 4-Gaussian mixtures and (p-r) nonsymmetric ones (each triple runs
multimodal / transitional / unimodal), (s-t) skewed power-method draws,
(u) Gaussian.

Mixture component parameters are frozen in data/source_mixtures.csv
(columns: kind, weights, means, sds; the values in each cell are
space-separated, one per component).  For kind f the sds column stores the
Laplace diversity of each component.  Every generator standardizes its
output in sample (zero mean, unit population variance) unless asked not to.
"""

from __future__ import annotations

import csv
import importlib.resources
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidInputError

KINDS = "abcdefghijklmnopqrstu"

# power-method cubic y = a + b z + c z^2 + d z^3 of a standard normal z,
# with a = -c for zero mean; (skew, excess kurtosis) targets in comments
POWER_COEFFS = {
    "s": (0.75031534111078, -0.02734119591845, 0.07699282409939),   # (-0.25, 3.75)
    "t": (1.11251460048528, 0.17363001955694, -0.05033444870926),   # (0.75, 0.0)
}


@dataclass(frozen=True)
class DistributionSpec:
    """One benchmark source kind with its frozen parameters."""

    kind: str
    family: str
    weights: tuple = ()
    means: tuple = ()
    scales: tuple = ()
    coeffs: tuple = ()


@lru_cache(maxsize=1)
def mixture_table() -> dict:
    """Frozen per-kind (weights, means, scales) from the packaged data file."""
    table = {}
    path = importlib.resources.files("fdbss").joinpath("data/source_mixtures.csv")
    with path.open("r", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            table[row["kind"]] = (
                tuple(float(v) for v in row["weights"].split()),
                tuple(float(v) for v in row["means"].split()),
                tuple(float(v) for v in row["sds"].split()),
            )
    return table


@lru_cache(maxsize=None)
def spec_for(kind: str) -> DistributionSpec:
    if kind not in KINDS:
        raise InvalidInputError(f"unknown distribution kind {kind!r}")
    if kind == "a":
        return DistributionSpec(kind, "student_t", coeffs=(3.0,))
    if kind == "b":
        return DistributionSpec(kind, "laplace")
    if kind == "c":
        return DistributionSpec(kind, "uniform")
    if kind == "d":
        return DistributionSpec(kind, "student_t", coeffs=(5.0,))
    if kind == "e":
        return DistributionSpec(kind, "exponential")
    if kind == "u":
        return DistributionSpec(kind, "gaussian")
    if kind in POWER_COEFFS:
        return DistributionSpec(kind, "power_method", coeffs=POWER_COEFFS[kind])
    weights, means, scales = mixture_table()[kind]
    family = "laplace_mixture" if kind == "f" else "gauss_mixture"
    return DistributionSpec(kind, family, weights=weights, means=means, scales=scales)


def _raw_draws(spec: DistributionSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    fam = spec.family
    if fam == "student_t":
        return rng.standard_t(spec.coeffs[0], size=n)
    if fam == "laplace":
        return rng.laplace(0.0, 1.0, size=n)
    if fam == "uniform":
        return rng.uniform(-math.sqrt(3.0), math.sqrt(3.0), size=n)
    if fam == "exponential":
        return rng.exponential(1.0, size=n)
    if fam == "gaussian":
        return rng.standard_normal(size=n)
    if fam == "power_method":
        b, c, d = spec.coeffs
        z = rng.standard_normal(size=n)
        return -c + b * z + c * z**2 + d * z**3
    # mixtures: pick components by cumulative weight, then draw per component
    cumw = np.cumsum(spec.weights)
    comp = np.searchsorted(cumw, rng.random(n), side="right")
    comp = np.minimum(comp, len(spec.weights) - 1)
    loc = np.asarray(spec.means)[comp]
    scale = np.asarray(spec.scales)[comp]
    if fam == "laplace_mixture":
        return loc + rng.laplace(0.0, 1.0, size=n) * scale
    return loc + rng.standard_normal(size=n) * scale


def sample(kind: str, n: int, seed, standardize: bool = True) -> np.ndarray:
    """n i.i.d. draws of the given kind, deterministic per seed.

    With ``standardize`` (the default) the draws are shifted and scaled to
    zero mean and unit population variance in sample.
    """
    if n < 1:
        raise InvalidInputError("need n >= 1")
    spec = spec_for(kind)
    x = _raw_draws(spec, n, np.random.default_rng(seed))
    if standardize:
        sd = x.std()
        if sd <= 0:
            raise InvalidInputError("degenerate draw; cannot standardize")
        x = (x - x.mean()) / sd
    return x


def dependent_pair(n: int, seed) -> np.ndarray:
    """2 x n test pair: a uniform row and its elementwise sin(row/20 * pi).

    The second row is a deterministic function of the first; the argument
    grouping follows the left-to-right reading (row / 20) * pi.
    """
    if n < 2:
        raise InvalidInputError("need n >= 2")
    row1 = sample("c", n, seed)
    row2 = np.sin(row1 / 20.0 * math.pi)
    return np.vstack([row1, row2])
