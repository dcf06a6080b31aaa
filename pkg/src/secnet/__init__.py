"""Throughput-optimal multi-hop link design under Poisson interference and a
secrecy constraint, with a Monte Carlo simulator for checking the closed forms.
"""

from .kernels import BACKEND
from .model import (
    EavesdropperParams,
    LinkDesign,
    SecrecySpec,
    SystemParams,
    distance_bound_dc,
    eavesdropper_outage,
    multi_hop_throughput,
    secrecy_probability,
    single_hop_success,
)
from .montecarlo import EstimateWithCI, MonteCarloConfig
from .optimizer import Mode, OptimizationOutcome, Status, constrained_optimum, unconstrained_optimum
from .specfun import DomainError, kappa, lambert_w0

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DomainError",
    "EavesdropperParams",
    "EstimateWithCI",
    "LinkDesign",
    "Mode",
    "MonteCarloConfig",
    "OptimizationOutcome",
    "SecrecySpec",
    "Status",
    "SystemParams",
    "constrained_optimum",
    "distance_bound_dc",
    "eavesdropper_outage",
    "kappa",
    "lambert_w0",
    "multi_hop_throughput",
    "secrecy_probability",
    "single_hop_success",
    "unconstrained_optimum",
]
