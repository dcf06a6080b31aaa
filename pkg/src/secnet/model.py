"""Analytic stochastic-geometry model of the multi-hop link.

Interferers and eavesdroppers are homogeneous Poisson fields in the plane,
all links see unit-mean Rayleigh fading, and the network is interference
limited. Hop count ``h = D / d`` is real valued throughout. Rates are in
bits/s/Hz (base-2 logarithm); natural logarithms only appear inside
probability exponents.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .specfun import DomainError, kappa

__all__ = [
    "SystemParams",
    "EavesdropperParams",
    "SecrecySpec",
    "LinkDesign",
    "ProbabilityUnderflowWarning",
    "single_hop_success",
    "log_single_hop_success",
    "end_to_end_success",
    "multi_hop_throughput",
    "nearest_eav_distance_pdf",
    "nearest_eav_distance_cdf",
    "eavesdropper_outage",
    "secrecy_probability",
    "distance_bound_dc",
]

UNDERFLOW_FLOOR = 1e-300
_LOG_FLOOR = math.log(UNDERFLOW_FLOOR)


class ProbabilityUnderflowWarning(RuntimeWarning):
    """A probability fell below 1e-300 and was reported as exactly zero."""


def _check_positive(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and value > 0 and math.isfinite(value)):
        raise DomainError(f"{name} must be a finite number > 0, got {value!r}")


@dataclass(frozen=True)
class SystemParams:
    """Legitimate-link geometry and interferer field.

    D is the aggregator to control-unit distance, alpha the path-loss
    exponent and lambda_int the interferer density per unit area. Any
    length unit works as long as D, hop lengths and densities agree.
    """

    D: float
    alpha: float
    lambda_int: float

    def __post_init__(self) -> None:
        _check_positive("D", self.D)
        _check_positive("lambda_int", self.lambda_int)
        if not (isinstance(self.alpha, (int, float)) and self.alpha > 2 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be > 2, got {self.alpha!r}")

    @property
    def kappa(self) -> float:
        return kappa(self.alpha)


@dataclass(frozen=True)
class EavesdropperParams:
    lambda_eav: float
    beta_eav: float

    def __post_init__(self) -> None:
        _check_positive("lambda_eav", self.lambda_eav)
        _check_positive("beta_eav", self.beta_eav)


@dataclass(frozen=True)
class SecrecySpec:
    """Maximum tolerated probability that any hop is overheard."""

    epsilon: float

    def __post_init__(self) -> None:
        if not (isinstance(self.epsilon, (int, float)) and 0 < self.epsilon < 1):
            raise DomainError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")


@dataclass(frozen=True)
class LinkDesign:
    """A candidate design: SIR threshold ``beta`` and hop length ``d``."""

    beta: float
    d: float

    def __post_init__(self) -> None:
        _check_positive("beta", self.beta)
        _check_positive("d", self.d)

    def hops(self, p: SystemParams) -> float:
        return p.D / self.d


def _check_design(p: SystemParams, des: LinkDesign) -> None:
    if des.d > p.D * (1 + 1e-12):
        raise DomainError(f"hop length d={des.d!r} exceeds D={p.D!r}")


def _power(log_base: float, exponent: float, warn: bool = True) -> float:
    """``base ** exponent`` evaluated as ``exp(exponent * log(base))``.

    Values under 1e-300 are reported as 0 with a ProbabilityUnderflowWarning.
    """
    log_value = exponent * log_base
    if log_value < _LOG_FLOOR:
        if not warn:
            return 0.0
        warnings.warn(
            f"probability exp({log_value:.6g}) below {UNDERFLOW_FLOOR:g}; reported as 0",
            ProbabilityUnderflowWarning,
            stacklevel=3,
        )
        return 0.0
    return math.exp(log_value)


def log_single_hop_success(p: SystemParams, des: LinkDesign) -> float:
    return -p.lambda_int * p.kappa * math.pi * des.d ** 2 * des.beta ** (2.0 / p.alpha)


def single_hop_success(p: SystemParams, des: LinkDesign) -> float:
    """Per-hop success probability under Rayleigh fading and PPP interference."""
    return math.exp(log_single_hop_success(p, des))


def end_to_end_success(p: SystemParams, des: LinkDesign, warn: bool = True) -> float:
    """Probability that all ``D/d`` (real-valued) hops succeed."""
    _check_design(p, des)
    return _power(log_single_hop_success(p, des), p.D / des.d, warn)


def multi_hop_throughput(p: SystemParams, des: LinkDesign, warn: bool = True) -> float:
    """End-to-end throughput ``(d/D) log2(1 + beta) P_suc^(D/d)`` in bits/s/Hz.

    ``warn=False`` silences the underflow warning, for use inside searches.
    """
    _check_design(p, des)
    rate = math.log1p(des.beta) / math.log(2.0)
    return des.d / p.D * rate * end_to_end_success(p, des, warn)


def nearest_eav_distance_pdf(e: EavesdropperParams, r: float) -> float:
    """Density of the distance from a fixed point to the nearest eavesdropper."""
    if r < 0:
        raise DomainError(f"distance must be >= 0, got {r!r}")
    return e.lambda_eav * 2.0 * math.pi * r * math.exp(-e.lambda_eav * math.pi * r * r)


def nearest_eav_distance_cdf(e: EavesdropperParams, r: float) -> float:
    if r < 0:
        raise DomainError(f"distance must be >= 0, got {r!r}")
    return -math.expm1(-e.lambda_eav * math.pi * r * r)


def _interference_weight(p: SystemParams, e: EavesdropperParams) -> float:
    return p.lambda_int * p.kappa * e.beta_eav ** (2.0 / p.alpha)


def eavesdropper_outage(p: SystemParams, e: EavesdropperParams) -> float:
    """Per-hop probability that the nearest eavesdropper fails to decode."""
    w = _interference_weight(p, e)
    return w / (w + e.lambda_eav)


def _log_eavesdropper_outage(p: SystemParams, e: EavesdropperParams) -> float:
    # log(w / (w + l)) = -log1p(l / w), accurate when the outage is close to 1
    return -math.log1p(e.lambda_eav / _interference_weight(p, e))


def secrecy_probability(p: SystemParams, e: EavesdropperParams, d: float) -> float:
    """Probability that no hop out of ``D/d`` is overheard."""
    if not 0 < d <= p.D * (1 + 1e-12):
        raise DomainError(f"hop length must satisfy 0 < d <= D, got d={d!r}")
    return _power(_log_eavesdropper_outage(p, e), p.D / d)


def distance_bound_dc(p: SystemParams, e: EavesdropperParams, s: SecrecySpec) -> float:
    """Hop length at which the secrecy probability equals ``1 - epsilon``."""
    return p.D * _log_eavesdropper_outage(p, e) / math.log1p(-s.epsilon)
