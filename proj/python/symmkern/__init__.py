"""Positive-definite kernels on symmetric cones and hyperbolic spaces."""

from ._core import (
    ConePoint,
    DomainError,
    HyperbolicPoint,
    Kernel,
    NumericalError,
    Space,
    certify,
    check_psd,
    density,
    distance,
    experiment,
    gram,
    krr_fit_predict,
    log_gamma,
    plancherel_density,
    point,
    sample_ball,
    sample_points,
    spherical_function,
)

__all__ = [
    "ConePoint",
    "DomainError",
    "HyperbolicPoint",
    "Kernel",
    "NumericalError",
    "Space",
    "certify",
    "check_psd",
    "density",
    "distance",
    "experiment",
    "gram",
    "krr_fit_predict",
    "log_gamma",
    "plancherel_density",
    "point",
    "sample_ball",
    "sample_points",
    "spherical_function",
]
