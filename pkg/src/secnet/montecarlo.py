"""Monte Carlo validation of the analytic model.

The estimators simulate the physical model directly: Poisson interferer
fields, unit-mean exponential (Rayleigh) power gains and an SIR test at
every receiver. Fields are generated radially, nearest point first, from the
cumulative sums of unit-rate exponential arrivals; conditioned on the point
count this is the same as drawing radii as ``R * sqrt(U)``. A trial stops
drawing interferers as soon as the partial interference sum settles the
SIR test, so work is spent only where the outcome is still open.

Each trial owns its random streams (see :mod:`secnet.rng`), so the
estimates do not depend on how trials are spread over worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .model import EavesdropperParams, LinkDesign, SystemParams, eavesdropper_outage
from .rng import TAG_AUDIT, TAG_EAVESDROPPER, CounterStream, seed_hash, stream_keys, uniforms_at
from .specfun import DomainError

__all__ = [
    "MonteCarloConfig",
    "EstimateWithCI",
    "NonIntegerHopsError",
    "auto_region_radius",
    "sample_ppp_disk",
    "estimate_p_suc",
    "estimate_eav_outage",
    "estimate_end_to_end",
    "sample_nearest_eav_distances",
    "audit_nearest_approximation",
]

CHUNK = 8192
HOP_TOLERANCE = 1e-6


class NonIntegerHopsError(DomainError):
    """D/d is not an integer, so there is no per-hop simulation."""


@dataclass(frozen=True)
class MonteCarloConfig:
    """Simulation settings.

    ``region_radius=None`` means automatic: the disk radius from
    :func:`auto_region_radius`, with the tolerance divided by the SIR
    threshold (and by the hop count for end-to-end runs) so that the
    truncation bias of a success probability stays near
    ``far_field_tolerance`` in relative terms. ``workers`` only changes
    scheduling, never the result.
    """

    trials: int = 100_000
    seed: int = 0
    region_radius: float | None = None
    far_field_tolerance: float = 1e-3
    workers: int = 1

    def __post_init__(self) -> None:
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise DomainError(f"trials must be an integer >= 1, got {self.trials!r}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2 ** 64):
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.region_radius is not None and not self.region_radius > 0:
            raise DomainError(f"region_radius must be > 0, got {self.region_radius!r}")
        if not self.far_field_tolerance > 0:
            raise DomainError(f"far_field_tolerance must be > 0, got {self.far_field_tolerance!r}")
        if not (isinstance(self.workers, int) and self.workers >= 1):
            raise DomainError(f"workers must be an integer >= 1, got {self.workers!r}")


class EstimateWithCI(NamedTuple):
    mean: float
    stderr: float
    trials: int

    @classmethod
    def from_count(cls, count: int, trials: int) -> "EstimateWithCI":
        phat = count / trials
        return cls(phat, math.sqrt(phat * (1.0 - phat) / trials), trials)

    def z_score(self, target: float) -> float:
        """Standardized deviation from ``target``; inf if stderr is 0 and they differ."""
        diff = self.mean - target
        if self.stderr == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / self.stderr


def auto_region_radius(p: SystemParams, d: float, tol: float = 1e-3) -> float:
    """Truncation radius for an interferer field seen by a receiver at distance ``d``.

    Solves ``2 pi lambda R^(2-a) / (a-2) = tol * d^-a`` and floors at ``10 d``.
    """
    if not tol > 0:
        raise DomainError(f"tol must be > 0, got {tol!r}")
    a = p.alpha
    far = tol * (a - 2.0) / (2.0 * math.pi * p.lambda_int)
    radius = (far * d ** -a) ** (1.0 / (2.0 - a))
    return max(radius, 10.0 * d)


def sample_ppp_disk(intensity: float, radius: float, rng: CounterStream) -> np.ndarray:
    """Points of a Poisson process on the disk of given radius, nearest first.

    Returns an ``(n, 2)`` array; ``n`` is Poisson with mean
    ``intensity * pi * radius**2`` and the points are uniform on the disk.
    """
    if not intensity > 0 or not radius > 0:
        raise DomainError("intensity and radius must be > 0")
    mu = intensity * math.pi * radius * radius
    batch = int(mu + 5.0 * math.sqrt(mu) + 16)
    arrivals = []
    total = 0.0
    while True:
        g = total + np.cumsum(rng.exponential(batch))
        inside = g[g <= mu]
        arrivals.append(inside)
        if inside.size < batch:
            break
        total = float(g[-1])
    gamma = np.concatenate(arrivals)
    r = np.sqrt(gamma / (intensity * math.pi))
    theta = 2.0 * math.pi * rng.uniform(gamma.size)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def _run_chunks(fn, trials: int, workers: int) -> int:
    bounds = [(s, min(s + CHUNK, trials)) for s in range(0, trials, CHUNK)]
    if workers == 1 or len(bounds) == 1:
        return sum(fn(a, b) for a, b in bounds)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(lambda ab: fn(*ab), bounds))


def _backend(name: str | None):
    return kernels.get_backend(name) if name else kernels


def _hop_estimate(p, des, cfg, hops, backend):
    k = _backend(backend)
    # Dropping the far field inflates each hop's success probability by about
    # exp(beta * tol); dividing by beta * hops bounds the end-to-end bias by tol.
    radius = cfg.region_radius or auto_region_radius(p, des.d, cfg.far_field_tolerance / (des.beta * hops))
    mu = p.lambda_int * math.pi * radius * radius
    h = seed_hash(cfg.seed)
    count = _run_chunks(
        lambda a, b: k.count_hop_successes(h, a, b, hops, p.lambda_int, p.alpha, des.d, des.beta, mu),
        cfg.trials,
        cfg.workers,
    )
    return EstimateWithCI.from_count(count, cfg.trials)


def estimate_p_suc(
    p: SystemParams, des: LinkDesign, cfg: MonteCarloConfig, backend: str | None = None
) -> EstimateWithCI:
    """Fraction of trials in which a single hop of length ``d`` has SIR > beta."""
    return _hop_estimate(p, des, cfg, 1, backend)


def estimate_end_to_end(
    p: SystemParams, des: LinkDesign, cfg: MonteCarloConfig, backend: str | None = None
) -> EstimateWithCI:
    """Fraction of trials in which every one of the ``D/d`` hops succeeds.

    Hops see independent interferer fields. ``D/d`` must be an integer
    (relative tolerance 1e-6).
    """
    ratio = p.D / des.d
    hops = round(ratio)
    if hops < 1 or abs(ratio - hops) > HOP_TOLERANCE * ratio:
        raise NonIntegerHopsError(f"D/d = {ratio!r} is not an integer hop count")
    return _hop_estimate(p, des, cfg, hops, backend)


def estimate_eav_outage(
    p: SystemParams, e: EavesdropperParams, cfg: MonteCarloConfig, backend: str | None = None
) -> EstimateWithCI:
    """Fraction of trials in which the nearest eavesdropper has SIR <= beta_eav.

    The eavesdropper's interferer field is drawn independently of the
    legitimate receiver's. With the automatic radius, truncation is sized
    per trial from that trial's eavesdropper distance.
    """
    k = _backend(backend)
    h = seed_hash(cfg.seed)
    fixed = cfg.region_radius or 0.0
    count = _run_chunks(
        lambda a, b: k.count_eav_outages(
            h, a, b, p.lambda_int, p.alpha, e.lambda_eav, e.beta_eav, cfg.far_field_tolerance / e.beta_eav, fixed
        ),
        cfg.trials,
        cfg.workers,
    )
    return EstimateWithCI.from_count(count, cfg.trials)


def sample_nearest_eav_distances(e: EavesdropperParams, cfg: MonteCarloConfig) -> np.ndarray:
    """The nearest-eavesdropper distances used by :func:`estimate_eav_outage`, one per trial."""
    keys = stream_keys(cfg.seed, np.arange(cfg.trials, dtype=np.uint64), TAG_EAVESDROPPER)
    return np.sqrt(-np.log(uniforms_at(keys, 0)) / (e.lambda_eav * math.pi))


class AuditResult(NamedTuple):
    analytic: float
    nearest_only: EstimateWithCI
    all_eavesdroppers: EstimateWithCI

    @property
    def gap(self) -> float:
        """Outage overestimate caused by checking only the nearest eavesdropper."""
        return self.nearest_only.mean - self.all_eavesdroppers.mean


def audit_nearest_approximation(
    p: SystemParams, e: EavesdropperParams, cfg: MonteCarloConfig, tail: float = 1e-4
) -> AuditResult:
    """Compare nearest-eavesdropper outage with outage against every eavesdropper.

    Both statistics come from the same realizations: one interferer field
    shared by all eavesdroppers of a trial, with independent fading per
    link. Eavesdroppers are kept out to the distance beyond which the
    expected number of successful ones drops below ``tail``. This runs in
    plain numpy, one trial at a time, so keep ``cfg.trials`` modest.
    """
    w = p.lambda_int * p.kappa * e.beta_eav ** (2.0 / p.alpha)
    r_eav = math.sqrt(max(math.log(e.lambda_eav / (w * tail)), 1.0) / (math.pi * w))
    r_int = r_eav + auto_region_radius(p, r_eav, cfg.far_field_tolerance)
    nearest_fails = 0
    all_fail = 0
    for t in range(cfg.trials):
        rng = CounterStream(cfg.seed, t, TAG_AUDIT)
        eav = sample_ppp_disk(e.lambda_eav, r_eav, rng)
        if eav.shape[0] == 0:
            # nearest eavesdropper lies beyond r_eav and decodes with negligible probability
            nearest_fails += 1
            all_fail += 1
            continue
        ints = sample_ppp_disk(p.lambda_int, r_int, rng)
        signal = rng.exponential(eav.shape[0]) * np.sum(eav ** 2, axis=1) ** (-0.5 * p.alpha)
        dist2 = np.sum((ints[None, :, :] - eav[:, None, :]) ** 2, axis=2)
        gains = rng.exponential(dist2.size).reshape(dist2.shape)
        interference = np.sum(gains * dist2 ** (-0.5 * p.alpha), axis=1)
        decodes = signal > e.beta_eav * interference
        nearest_fails += not decodes[0]
        all_fail += not decodes.any()
    return AuditResult(
        eavesdropper_outage(p, e),
        EstimateWithCI.from_count(nearest_fails, cfg.trials),
        EstimateWithCI.from_count(all_fail, cfg.trials),
    )
