"""Square-root diffusion with jumps: transforms, densities, sampling."""

from ._jcir import (
    Model,
    NumericError,
    pure,
    with_exponential_jumps,
    with_gamma_jumps,
    with_point_masses,
    with_tempered_stable,
)

__all__ = [
    "Model",
    "NumericError",
    "pure",
    "with_exponential_jumps",
    "with_gamma_jumps",
    "with_point_masses",
    "with_tempered_stable",
]
