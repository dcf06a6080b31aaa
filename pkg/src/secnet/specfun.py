"""Scalar special functions used by the closed forms.

Only real arguments are supported: the principal branch of the Lambert W
function on ``[-1/e, inf)`` and the interference constant
``kappa(alpha) = Gamma(1 + 2/alpha) * Gamma(1 - 2/alpha)``.
"""

from __future__ import annotations

import math

__all__ = ["DomainError", "lambert_w0", "kappa", "BRANCH_POINT"]

BRANCH_POINT = -math.exp(-1.0)
BRANCH_SLACK = 1e-12

_MAX_ITER = 50


class DomainError(ValueError):
    """Argument outside the domain of a model or special function."""


def _initial_guess(x: float) -> float:
    if x < -0.25:
        # series about the branch point, p = sqrt(2 (1 + e x))
        p = math.sqrt(max(0.0, 2.0 * (1.0 + math.e * x)))
        return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    if x > math.e:
        lx = math.log(x)
        return lx - math.log(lx)
    return math.log1p(x)


def lambert_w0(x: float) -> float:
    """Principal branch W0 of the Lambert W function.

    Solves ``w * exp(w) == x`` for ``w >= -1``. Arguments up to 1e-12 below
    ``-1/e`` are treated as the branch point itself, which absorbs round-off
    in callers that build ``-(a) * exp(-a)`` with ``a`` close to 1.

    Raises
    ------
    DomainError
        If ``x < -1/e - 1e-12`` or ``x`` is NaN.
    """
    x = float(x)
    if math.isnan(x) or x < BRANCH_POINT - BRANCH_SLACK:
        raise DomainError(f"lambert_w0 undefined for x={x!r} < -1/e")
    if x <= BRANCH_POINT:
        return -1.0
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf

    w = _initial_guess(x)
    for _ in range(_MAX_ITER):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 <= 0.0:
            # Halley's denominator degenerates exactly at the branch point
            w = -1.0 + 1e-8
            continue
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w_new = w - step
        if w_new < -1.0:
            w_new = 0.5 * (w - 1.0)
        if abs(w_new - w) < 1e-15 * (1.0 + abs(w_new)):
            return w_new
        w = w_new
    return w


def kappa(alpha: float) -> float:
    """Interference constant ``Gamma(1 + 2/a) Gamma(1 - 2/a)`` for a > 2.

    Evaluated through the reflection identity, ``(2 pi / a) / sin(2 pi / a)``.
    """
    alpha = float(alpha)
    if not alpha > 2.0:
        raise DomainError(f"kappa requires alpha > 2, got {alpha!r}")
    if math.isinf(alpha):
        return 1.0
    t = 2.0 * math.pi / alpha
    return t / math.sin(t)
