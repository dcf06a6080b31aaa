"""Parameter sweeps over the optimizer, written as CSV.

A CSV file starts with one ``#`` comment line holding the sweep spec as
canonical JSON, then a header row, then one row per grid point in grid
order. Floats use the shortest representation that round-trips.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .model import EavesdropperParams, LinkDesign, SecrecySpec, SystemParams, secrecy_probability
from .montecarlo import MonteCarloConfig, estimate_eav_outage, estimate_p_suc
from .optimizer import Mode, Status, constrained_optimum, unconstrained_optimum

__all__ = [
    "SWEEP_VARIABLES",
    "CSV_COLUMNS",
    "PRESETS",
    "GridSpec",
    "SweepSpec",
    "SweepRecord",
    "SweepError",
    "make_grid",
    "run_sweep",
    "run_throughput_sweep",
    "run_dc_sweep",
    "run_constrained_sweep",
    "write_csv",
    "read_csv",
    "records_to_json",
    "csv_text",
    "runner_for",
    "RUNNERS",
]

SWEEP_VARIABLES = ("lambda_int", "beta_eav", "epsilon", "lambda_eav", "D")
PARAM_KEYS = ("D", "alpha", "lambda_int", "lambda_eav", "beta_eav", "epsilon")

CSV_COLUMNS = (
    "D",
    "alpha",
    "lambda_int",
    "lambda_eav",
    "beta_eav",
    "epsilon",
    "mode",
    "beta_star",
    "d_star",
    "hops",
    "d_c",
    "status",
    "throughput_unconstrained",
    "throughput_constrained",
    "mc_estimate",
    "mc_stderr",
)


class SweepError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    min: float
    max: float
    points: int
    spacing: str = "log"


def make_grid(g: GridSpec) -> list[float]:
    """Grid with both endpoints reproduced exactly."""
    if g.points < 1:
        raise SweepError("grid needs at least one point")
    if g.points == 1:
        return [float(g.min)]
    if g.spacing == "log":
        if not 0 < g.min < g.max:
            raise SweepError(f"log grid needs 0 < min < max, got {g.min!r}, {g.max!r}")
        lo, hi = math.log10(g.min), math.log10(g.max)
        pts = [10.0 ** (lo + (hi - lo) * i / (g.points - 1)) for i in range(g.points)]
    elif g.spacing == "linear":
        if not g.min < g.max:
            raise SweepError(f"linear grid needs min < max, got {g.min!r}, {g.max!r}")
        step = (g.max - g.min) / (g.points - 1)
        pts = [g.min + i * step for i in range(g.points)]
    else:
        raise SweepError(f"unknown grid spacing {g.spacing!r}")
    pts[0], pts[-1] = float(g.min), float(g.max)
    return pts


def _mc_dict(cfg: MonteCarloConfig | None) -> dict | None:
    # worker count only affects scheduling, so it stays out of the recorded spec
    if cfg is None:
        return None
    d = asdict(cfg)
    d.pop("workers")
    return d


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep.

    ``fixed`` holds every parameter in PARAM_KEYS that is not swept;
    eavesdropper keys (lambda_eav, beta_eav, epsilon) may be omitted for
    unconstrained sweeps.
    """

    swept_variable: str
    grid: tuple[float, ...] | GridSpec
    fixed: dict = field(default_factory=dict)
    mode: Mode = Mode.UNCONSTRAINED
    validate: MonteCarloConfig | None = None

    def __post_init__(self) -> None:
        if self.swept_variable not in SWEEP_VARIABLES:
            raise SweepError(f"cannot sweep {self.swept_variable!r}; choose from {SWEEP_VARIABLES}")
        object.__setattr__(self, "mode", Mode(self.mode))
        values = self.values()
        if not values:
            raise SweepError("grid is empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise SweepError("grid must be strictly increasing")
        unknown = set(self.fixed) - set(PARAM_KEYS)
        if unknown:
            raise SweepError(f"unknown fixed parameters: {sorted(unknown)}")

    def values(self) -> list[float]:
        if isinstance(self.grid, GridSpec):
            return make_grid(self.grid)
        return [float(v) for v in self.grid]

    def to_dict(self) -> dict:
        grid = asdict(self.grid) if isinstance(self.grid, GridSpec) else list(self.values())
        return {
            "swept_variable": self.swept_variable,
            "grid": grid,
            "fixed": dict(self.fixed),
            "mode": self.mode.value,
            "validate": _mc_dict(self.validate),
        }


@dataclass(frozen=True)
class SweepRecord:
    swept_variable: str
    swept_value: float
    D: float
    alpha: float
    lambda_int: float
    lambda_eav: float | None
    beta_eav: float | None
    epsilon: float | None
    mode: str
    beta_star: float | None
    d_star: float | None
    hops: float | None
    d_c: float | None
    status: str
    throughput_unconstrained: float
    throughput_constrained: float
    secrecy_probability_at_dstar: float | None = None
    mc_estimate: float | None = None
    mc_stderr: float | None = None


def _evaluate(spec: SweepSpec, x: float) -> SweepRecord:
    params = dict(spec.fixed)
    params[spec.swept_variable] = x
    missing = {"D", "alpha", "lambda_int"} - set(params)
    if missing:
        raise SweepError(f"missing parameters {sorted(missing)}")
    try:
        p = SystemParams(params["D"], params["alpha"], params["lambda_int"])
        has_eav = all(params.get(k) is not None for k in ("lambda_eav", "beta_eav", "epsilon"))
        if spec.mode is not Mode.UNCONSTRAINED and not has_eav:
            raise SweepError(f"mode {spec.mode.value} needs lambda_eav, beta_eav and epsilon")
        free = unconstrained_optimum(p)
        e = s = None
        if has_eav:
            e = EavesdropperParams(params["lambda_eav"], params["beta_eav"])
            s = SecrecySpec(params["epsilon"])
            out = constrained_optimum(p, e, s, spec.mode)
        else:
            out = free
    except ValueError as exc:
        raise SweepError(f"{spec.swept_variable}={x!r}: {exc}") from exc

    secrecy = None
    if e is not None and out.status is Status.FEASIBLE:
        secrecy = secrecy_probability(p, e, out.d_star)

    mc = None
    if spec.validate is not None:
        if spec.swept_variable == "beta_eav" and e is not None:
            mc = estimate_eav_outage(p, e, spec.validate)
        elif out.status is Status.FEASIBLE:
            mc = estimate_p_suc(p, LinkDesign(out.beta_star, out.d_star), spec.validate)

    return SweepRecord(
        swept_variable=spec.swept_variable,
        swept_value=x,
        D=p.D,
        alpha=p.alpha,
        lambda_int=p.lambda_int,
        lambda_eav=params.get("lambda_eav"),
        beta_eav=params.get("beta_eav"),
        epsilon=params.get("epsilon"),
        mode=spec.mode.value,
        beta_star=out.beta_star,
        d_star=out.d_star,
        hops=out.hops,
        d_c=out.d_c,
        status=out.status.value,
        throughput_unconstrained=free.throughput,
        throughput_constrained=out.throughput,
        secrecy_probability_at_dstar=secrecy,
        mc_estimate=None if mc is None else mc.mean,
        mc_stderr=None if mc is None else mc.stderr,
    )


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRecord]:
    """Evaluate every grid point; rows come back in grid order."""
    values = spec.values()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda x: _evaluate(spec, x), values))
    else:
        rows = [_evaluate(spec, x) for x in values]
    for r in rows:
        if r.status == Status.INFEASIBLE.value and r.throughput_constrained != 0.0:
            raise SweepError(f"{r.swept_variable}={r.swept_value!r}: infeasible row with nonzero throughput")
    return rows


def _require(spec: SweepSpec, variable: str, modes: tuple[Mode, ...]) -> None:
    if spec.swept_variable != variable:
        raise SweepError(f"this sweep varies {variable}, not {spec.swept_variable}")
    if spec.mode not in modes:
        raise SweepError(f"mode {spec.mode.value} not allowed here")


def run_throughput_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRecord]:
    """Unconstrained optimal throughput against interferer density."""
    _require(spec, "lambda_int", (Mode.UNCONSTRAINED,))
    rows = run_sweep(spec, workers)
    for prev, cur in zip(rows, rows[1:]):
        if not cur.throughput_unconstrained < prev.throughput_unconstrained:
            raise SweepError(
                f"throughput not decreasing at lambda_int={cur.swept_value!r} "
                f"({cur.throughput_unconstrained!r} >= {prev.throughput_unconstrained!r})"
            )
    return rows


def run_dc_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRecord]:
    """Distance bound d_c and feasibility against the eavesdropper SIR threshold."""
    _require(spec, "beta_eav", (Mode.PAPER, Mode.STRICT))
    rows = run_sweep(spec, workers)
    for prev, cur in zip(rows, rows[1:]):
        if not cur.d_c < prev.d_c:
            raise SweepError(f"d_c not decreasing at beta_eav={cur.swept_value!r}")
    return rows


def run_constrained_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRecord]:
    """Constrained and unconstrained optimal throughput against interferer density."""
    _require(spec, "lambda_int", (Mode.PAPER, Mode.STRICT))
    return run_sweep(spec, workers)


PRESETS = {
    "fig2": SweepSpec(
        "lambda_int",
        GridSpec(0.2, 20.0, 21, "log"),
        {"D": 3.0, "alpha": 4.0},
        Mode.UNCONSTRAINED,
    ),
    "fig3": SweepSpec(
        "beta_eav",
        GridSpec(0.01, 100.0, 41, "log"),
        {"D": 3.0, "alpha": 4.0, "lambda_int": 1.0, "lambda_eav": 0.1, "epsilon": 0.1},
        Mode.PAPER,
    ),
    "fig4": SweepSpec(
        "lambda_int",
        GridSpec(0.01, 10.0, 31, "log"),
        {"D": 3.0, "alpha": 4.0, "lambda_eav": 0.1, "beta_eav": 1.0, "epsilon": 0.1},
        Mode.PAPER,
    ),
}

RUNNERS = {"fig2": run_throughput_sweep, "fig3": run_dc_sweep, "fig4": run_constrained_sweep}


def runner_for(spec: SweepSpec):
    """The specialised runner matching a spec, falling back to :func:`run_sweep`."""
    if spec.swept_variable == "beta_eav" and spec.mode is not Mode.UNCONSTRAINED:
        return run_dc_sweep
    if spec.swept_variable == "lambda_int":
        return run_throughput_sweep if spec.mode is Mode.UNCONSTRAINED else run_constrained_sweep
    return run_sweep


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return repr(v)
    return str(v)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def write_csv(records: list[SweepRecord], spec: SweepSpec, fh) -> None:
    fh.write("# " + canonical_json(spec.to_dict()) + "\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(("swept_" + spec.swept_variable,) + CSV_COLUMNS)
    for r in records:
        w.writerow([_fmt(r.swept_value)] + [_fmt(getattr(r, c)) for c in CSV_COLUMNS])


def csv_text(records: list[SweepRecord], spec: SweepSpec) -> str:
    buf = io.StringIO()
    write_csv(records, spec, buf)
    return buf.getvalue()


def read_csv(fh) -> tuple[dict, list[dict]]:
    """Parse a sweep CSV into ``(spec_dict, rows)``; numeric cells become floats, blanks None."""
    first = fh.readline()
    if not first.startswith("# "):
        raise SweepError("missing metadata line")
    meta = json.loads(first[2:])
    rows = []
    for row in csv.DictReader(fh):
        parsed = {}
        for k, v in row.items():
            if v == "":
                parsed[k] = None
            elif k in ("mode", "status"):
                parsed[k] = v
            else:
                parsed[k] = float(v)
        rows.append(parsed)
    return meta, rows


def records_to_json(records: list[SweepRecord]) -> str:
    return json.dumps([asdict(r) for r in records], indent=2, allow_nan=False)
