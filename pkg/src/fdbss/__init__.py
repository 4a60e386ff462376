"""Kernel-based independence measures and least-squares BSS contrasts."""

from .bss import (
    Landscape,
    WhitenResult,
    angle_error,
    landscape,
    mix,
    rotate2,
    rotation2,
    true_unmixing_angle,
    whiten,
)
from .density import (
    BandwidthSelector,
    as_sample_matrix,
    grid_lp_norm,
    kde_eval,
    lp_fd_grid,
    normalize,
    rot_bandwidth,
)
from .errors import (
    DegenerateComponentError,
    FdbssError,
    GridTooCoarseError,
    InvalidInputError,
    LandscapeError,
    SingularSystemError,
    UnsupportedError,
)
from .estimators import (
    ESTIMATOR_KINDS,
    BasisMode,
    EstimatorConfig,
    EstimatorReport,
    config_for,
    fit,
    gfd_value_scale,
    grid_h_matrix,
    lsfd2_fit,
    lsfd_fit,
    lsfd_h,
    lsfd_h_parts,
    lsgfd2_fit,
    lsgfd_fit,
    lsgfd_h,
    lsgfd_h_parts,
    select_basis,
    solve_discrete_sylvester,
    solve_ridge,
)
from .kernels import (
    IIM,
    BasisSet,
    IIMKind,
    KernelSpec,
    QmiEd,
    cross_information_potential,
    cross_reference_iim,
    derivative_interaction,
    gaussian_convolve_sigma,
    gaussian_eval,
    information_force,
    information_potential,
    interaction_matrix,
    multiplicative_reference_iim,
    qmi_ed,
    reference_iim,
)
from .sources import KINDS, DistributionSpec, dependent_pair, mixture_table, sample, spec_for

__all__ = [name for name in dir() if not name.startswith("_")]
