"""Flat ``key = value`` configuration files and overrides.

Lines are ``key = value``; ``#`` starts a comment. Values are numbers,
booleans (``true``/``false``), comma-separated lists, or bare strings.
"""

from __future__ import annotations

import math

__all__ = ["ConfigError", "KEYS", "parse_config_text", "coerce", "dump_config"]


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


def _float(v):
    x = float(v)
    if math.isnan(x):
        raise ValueError("NaN is not allowed")
    return x


def _int(v):
    if isinstance(v, float) and v.is_integer():
        return int(v)
    return int(str(v), 0)


def _bool(v):
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("true", "yes", "1", "on"):
        return True
    if s in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected true or false, got {v!r}")


def _floats(v):
    if isinstance(v, (list, tuple)):
        return [_float(x) for x in v]
    return [_float(x) for x in str(v).split(",") if x.strip()]


def _names(v):
    if isinstance(v, (list, tuple)):
        return [str(x) for x in v]
    return [x.strip() for x in str(v).split(",") if x.strip()]


def _radius(v):
    if v is None or str(v).strip().lower() == "auto":
        return "auto"
    return _float(v)


def _str(v):
    return str(v).strip()


KEYS = {
    "D": _float,
    "alpha": _float,
    "lambda_int": _float,
    "lambda_eav": _float,
    "beta_eav": _float,
    "epsilon": _float,
    "mode": _str,
    "beta": _float,
    "d": _float,
    "candidates": _floats,
    "h_max": _int,
    "preset": _str,
    "sweep_variable": _str,
    "grid": _floats,
    "grid_min": _float,
    "grid_max": _float,
    "grid_points": _int,
    "grid_spacing": _str,
    "validate": _bool,
    "workers": _int,
    "trials": _int,
    "seed": _int,
    "region_radius": _radius,
    "far_field_tolerance": _float,
    "targets": _names,
    "format": _str,
}


def coerce(key: str, value):
    key = key.replace("-", "_")
    if key not in KEYS:
        raise ConfigError(f"unknown key `{key}`")
    try:
        return key, KEYS[key](value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"`{key}`: cannot parse {value!r} ({exc})") from None


def parse_config_text(text: str) -> dict:
    cfg = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected `key = value`, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        k, v = coerce(key, value)
        cfg[k] = v
    return cfg


def _render(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ",".join(_render(x) for x in v)
    return str(v)


def dump_config(cfg: dict) -> str:
    return "".join(f"{k} = {_render(cfg[k])}\n" for k in sorted(cfg))
