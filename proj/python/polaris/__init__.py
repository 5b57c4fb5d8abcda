"""Python interface to the polaris bulk/surface solver."""

from ._polaris import *  # noqa: F401,F403
from ._polaris import (
    ExchangeLaw,
    Parameters,
    SourceLaw,
    State,
    StepperConfig,
    build_disk_mesh,
    build_radial_ball_mesh,
    run,
)

__all__ = [
    "ExchangeLaw",
    "Parameters",
    "SourceLaw",
    "State",
    "StepperConfig",
    "build_disk_mesh",
    "build_radial_ball_mesh",
    "run",
]
