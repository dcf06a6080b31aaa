"""``secnet`` command line.

    secnet optimize|feasibility|sweep|simulate [--config FILE] [--key value ...]
           [--output FILE] [--format csv|json] [--dump-config FILE]

Settings are merged as preset < config file < flags. The config file
defaults to ``$SECNET_CONFIG`` when set.

Exit codes: 0 success, 1 invalid configuration, 2 I/O failure,
3 infeasible design, 4 Monte Carlo check failed (some |z| > 3).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from .config import ConfigError, coerce, dump_config, parse_config_text
from .model import (
    EavesdropperParams,
    LinkDesign,
    SecrecySpec,
    SystemParams,
    distance_bound_dc,
    eavesdropper_outage,
    secrecy_probability,
    single_hop_success,
)
from .montecarlo import (
    MonteCarloConfig,
    estimate_eav_outage,
    estimate_end_to_end,
    estimate_p_suc,
)
from .optimizer import (
    Mode,
    Status,
    beta_star,
    constrained_optimum,
    integer_hop_optimum,
    optimal_hop_length,
    unconstrained_optimum,
)
from .specfun import DomainError
from . import sweep as sw

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_INFEASIBLE, EXIT_STATISTICAL = 0, 1, 2, 3, 4
CONFIG_ENV = "SECNET_CONFIG"
EAV_KEYS = ("lambda_eav", "beta_eav", "epsilon")
OPTIMIZE_KEYS = ("status", "beta_star", "d_star", "hops", "throughput", "d_c", "constraint_binding", "mode")


class _IOFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="secnet", description="Secrecy-constrained multi-hop throughput design.", allow_abbrev=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("optimize", "optimal (beta, d) design"),
        ("feasibility", "distance bound d_c and feasibility verdicts"),
        ("sweep", "parameter sweep to CSV"),
        ("simulate", "Monte Carlo check of the analytic probabilities"),
    ):
        s = sub.add_parser(name, help=text, allow_abbrev=False)
        s.add_argument("--config", help=f"key = value file (default: ${CONFIG_ENV})")
        s.add_argument("--output", "-o", help="write result here instead of stdout")
        s.add_argument("--format", choices=("csv", "json"))
        s.add_argument("--dump-config", help="write the effective configuration to this file")
    return p


def _parse_overrides(tokens: list[str]) -> dict:
    out = {}
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if not tok.startswith("--") or len(tok) == 2:
            raise ConfigError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(tokens):
                raise ConfigError(f"`{key.replace('-', '_')}`: missing value")
            value = tokens[i + 1]
            i += 2
        k, v = coerce(key, value)
        out[k] = v
    return out


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _IOFailure(f"cannot read {path}: {exc.strerror or exc}") from None


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    try:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {output}: {exc.strerror or exc}") from None


def _require(cfg: dict, *keys: str) -> None:
    for k in keys:
        if k not in cfg:
            raise ConfigError(f"missing required key `{k}`")


def _system(cfg: dict) -> SystemParams:
    _require(cfg, "D", "alpha", "lambda_int")
    return SystemParams(cfg["D"], cfg["alpha"], cfg["lambda_int"])


def _has_eav(cfg: dict) -> bool:
    return all(k in cfg for k in EAV_KEYS)


def _eav(cfg: dict) -> tuple[EavesdropperParams, SecrecySpec]:
    _require(cfg, *EAV_KEYS)
    return EavesdropperParams(cfg["lambda_eav"], cfg["beta_eav"]), SecrecySpec(cfg["epsilon"])


def _mode(cfg: dict) -> Mode:
    if "mode" in cfg:
        try:
            return Mode(cfg["mode"])
        except ValueError:
            choices = ", ".join(m.value for m in Mode)
            raise ConfigError(f"`mode`: {cfg['mode']!r} is not one of {choices}") from None
    return Mode.PAPER if _has_eav(cfg) else Mode.UNCONSTRAINED


def _mc_config(cfg: dict) -> MonteCarloConfig:
    radius = cfg.get("region_radius", "auto")
    return MonteCarloConfig(
        trials=cfg.get("trials", 100_000),
        seed=cfg.get("seed", 0),
        region_radius=None if radius == "auto" else radius,
        far_field_tolerance=cfg.get("far_field_tolerance", 1e-3),
        workers=cfg.get("workers", 1),
    )


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _csv_rows(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in row])
    return buf.getvalue()


def cmd_optimize(cfg: dict) -> tuple[int, str]:
    p = _system(cfg)
    mode = _mode(cfg)
    if mode is Mode.UNCONSTRAINED:
        out = unconstrained_optimum(p)
        if _has_eav(cfg):
            e, s = _eav(cfg)
            out = constrained_optimum(p, e, s, mode)
    else:
        e, s = _eav(cfg)
        out = constrained_optimum(p, e, s, mode)
    doc = out.as_dict()
    if "h_max" in cfg:
        if cfg["h_max"] < 1:
            raise ConfigError("`h_max`: must be >= 1")
        h, b, t = integer_hop_optimum(p, cfg["h_max"])
        doc["integer_hops"] = {"hops": h, "beta": b, "throughput": t}
    if cfg.get("format") == "csv":
        text = _csv_rows(OPTIMIZE_KEYS, [[doc[k] for k in OPTIMIZE_KEYS]])
    else:
        text = _json(doc)
    code = EXIT_OK if out.status is Status.FEASIBLE else EXIT_INFEASIBLE
    return code, text


def _verdict(d_c: float, D: float) -> str:
    if abs(d_c - D) <= 1e-12 * D:
        return "boundary"
    return "feasible" if d_c <= D else "infeasible"


def cmd_feasibility(cfg: dict) -> tuple[int, str]:
    p = _system(cfg)
    e, s = _eav(cfg)
    mode = _mode(cfg)
    d_c = distance_bound_dc(p, e, s)
    verdict = _verdict(d_c, p.D)
    if "candidates" in cfg:
        cands = cfg["candidates"]
    else:
        cands = [min(optimal_hop_length(p, beta_star(p.alpha)), p.D), p.D]
        if d_c < p.D:
            cands.insert(1, d_c)
    rows = []
    for d in cands:
        if not 0 < d <= p.D:
            raise ConfigError(f"`candidates`: hop length {d!r} outside (0, D]")
        prob = secrecy_probability(p, e, d)
        rows.append({"d": d, "secrecy_probability": prob, "meets_target": prob >= 1.0 - s.epsilon})
    exists = verdict != "infeasible"
    doc = {
        "D": p.D,
        "d_c": d_c,
        "epsilon": s.epsilon,
        "eavesdropper_outage": eavesdropper_outage(p, e),
        "candidates": rows,
        "mode": mode.value,
        "verdicts": {
            Mode.PAPER.value: {"verdict": verdict, "hop_range": [0.0, d_c] if exists else None},
            Mode.STRICT.value: {"verdict": verdict, "hop_range": [d_c, p.D] if exists else None},
        },
    }
    if cfg.get("format") == "csv":
        text = _csv_rows(("d", "secrecy_probability", "meets_target"), [list(r.values()) for r in rows])
    else:
        text = _json(doc)
    return (EXIT_OK if exists else EXIT_INFEASIBLE), text


def _sweep_spec(cfg: dict) -> sw.SweepSpec:
    preset = cfg.get("preset")
    if preset is not None and preset not in sw.PRESETS:
        raise ConfigError(f"`preset`: unknown preset {preset!r}; choose from {', '.join(sw.PRESETS)}")
    base = sw.PRESETS[preset] if preset else None
    variable = cfg.get("sweep_variable", base.swept_variable if base else None)
    if variable is None:
        raise ConfigError("missing required key `sweep_variable` (or `preset`)")
    fixed = dict(base.fixed) if base else {}
    for k in sw.PARAM_KEYS:
        if k in cfg:
            fixed[k] = cfg[k]
    fixed.pop(variable, None)
    if "grid" in cfg:
        grid = tuple(cfg["grid"])
    elif "grid_min" in cfg or "grid_max" in cfg or base is None:
        _require(cfg, "grid_min", "grid_max")
        grid = sw.GridSpec(cfg["grid_min"], cfg["grid_max"], cfg.get("grid_points", 21), cfg.get("grid_spacing", "log"))
    else:
        grid = base.grid
        if "grid_points" in cfg or "grid_spacing" in cfg:
            grid = sw.GridSpec(grid.min, grid.max, cfg.get("grid_points", grid.points), cfg.get("grid_spacing", grid.spacing))
    mode = _mode(cfg) if "mode" in cfg else (base.mode if base else _mode(fixed))
    validate = _mc_config(cfg) if cfg.get("validate") else None
    return sw.SweepSpec(variable, grid, fixed, mode, validate)


def cmd_sweep(cfg: dict) -> tuple[int, str]:
    spec = _sweep_spec(cfg)
    rows = sw.runner_for(spec)(spec, cfg.get("workers", 1))
    if cfg.get("format") == "json":
        return EXIT_OK, sw.records_to_json(rows) + "\n"
    return EXIT_OK, sw.csv_text(rows, spec)


def _target_row(name, analytic, est):
    z = est.z_score(analytic)
    return {
        "target": name,
        "analytic": analytic,
        "estimate": est.mean,
        "stderr": est.stderr,
        "trials": est.trials,
        "z": z if math.isfinite(z) else None,
        "pass": math.isfinite(z) and abs(z) <= 3.0,
    }


def cmd_simulate(cfg: dict) -> tuple[int, str]:
    cfg = dict(cfg)
    cfg.setdefault("D", cfg.get("d", 1.0))
    p = _system(cfg)
    mc = _mc_config(cfg)
    targets = cfg.get("targets") or (["p_suc", "eav_outage"] if _has_eav(cfg) else ["p_suc"])
    results = []
    for t in targets:
        if t == "p_suc":
            if "beta" in cfg or "d" in cfg:
                _require(cfg, "beta", "d")
                des = LinkDesign(cfg["beta"], cfg["d"])
            else:
                opt = unconstrained_optimum(p)
                des = LinkDesign(opt.beta_star, opt.d_star)
            results.append(_target_row(t, single_hop_success(p, des), estimate_p_suc(p, des, mc)))
        elif t == "eav_outage":
            _require(cfg, "lambda_eav", "beta_eav")
            e = EavesdropperParams(cfg["lambda_eav"], cfg["beta_eav"])
            results.append(_target_row(t, eavesdropper_outage(p, e), estimate_eav_outage(p, e, mc)))
        elif t == "end_to_end":
            _require(cfg, "beta", "d")
            des = LinkDesign(cfg["beta"], cfg["d"])
            est = estimate_end_to_end(p, des, mc)
            h = round(p.D / des.d)
            results.append(_target_row(t, single_hop_success(p, des) ** h, est))
        else:
            raise ConfigError(f"`targets`: unknown target {t!r}; choose from p_suc, eav_outage, end_to_end")
    doc = {"seed": mc.seed, "trials": mc.trials, "targets": results}
    if cfg.get("format") == "csv":
        keys = ("target", "analytic", "estimate", "stderr", "trials", "z", "pass")
        text = _csv_rows(keys, [[r[k] for k in keys] for r in results])
    else:
        text = _json(doc)
    ok = all(r["pass"] for r in results)
    return (EXIT_OK if ok else EXIT_STATISTICAL), text


COMMANDS = {
    "optimize": cmd_optimize,
    "feasibility": cmd_feasibility,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args, rest = parser.parse_known_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        cfg = {}
        path = args.config or os.environ.get(CONFIG_ENV)
        if path:
            cfg.update(parse_config_text(_read_text(path)))
        cfg.update(_parse_overrides(rest))
        if args.format:
            cfg["format"] = args.format
        if cfg.get("format", "json") not in ("csv", "json"):
            raise ConfigError(f"`format`: expected csv or json, got {cfg['format']!r}")
        if args.dump_config:
            _emit(dump_config(cfg), args.dump_config)
        code, text = COMMANDS[args.command](cfg)
        _emit(text, args.output)
        return code
    except _IOFailure as exc:
        print(f"secnet: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, DomainError, sw.SweepError) as exc:
        print(f"secnet: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
