"""Power-control coverage games among small base stations.

One-shot equilibria, Kalai-Smorodinsky bargaining over the utility region,
and the discounted repeated game with neighbour monitoring.
"""

from .geometry import DensitySpec, GainMode, SbsConfig, Scenario, channel_gain, distance_to_plane, sinr
from .kernels import BACKEND
from .utility import QuadratureSpec, utility_of, utility_vector_of

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DensitySpec",
    "GainMode",
    "QuadratureSpec",
    "SbsConfig",
    "Scenario",
    "channel_gain",
    "distance_to_plane",
    "sinr",
    "utility_of",
    "utility_vector_of",
]
