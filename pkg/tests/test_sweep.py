import io
import math
import random
from pathlib import Path

import pytest

from secnet.model import EavesdropperParams, LinkDesign, SecrecySpec, SystemParams, distance_bound_dc
from secnet.montecarlo import MonteCarloConfig, estimate_p_suc
from secnet.optimizer import Mode, constrained_optimum, unconstrained_optimum
from secnet.sweep import (
    PRESETS,
    GridSpec,
    SweepError,
    SweepSpec,
    csv_text,
    make_grid,
    read_csv,
    run_constrained_sweep,
    run_dc_sweep,
    run_sweep,
    run_throughput_sweep,
)

GOLDEN = Path(__file__).parent / "golden"
T_BASE = 0.0961666861537  # oracle: unconstrained optimum at D=3, alpha=4, lambda_int=0.1
FIG4_FIXED = {"D": 3.0, "alpha": 4.0, "lambda_eav": 0.1, "beta_eav": 1.0, "epsilon": 0.1}


def test_log_grid_exact_endpoints_and_geometric():
    g = make_grid(GridSpec(0.01, 10.0, 31))
    assert g[0] == 0.01 and g[-1] == 10.0
    ratios = [b / a for a, b in zip(g, g[1:])]
    assert max(ratios) == pytest.approx(min(ratios), rel=1e-12)
    assert make_grid(GridSpec(0.0, 1.0, 5, "linear")) == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert make_grid(GridSpec(2.0, 2.0, 1)) == [2.0]


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(swept_variable="alpha", grid=(1.0,)),
        dict(swept_variable="lambda_int", grid=()),
        dict(swept_variable="lambda_int", grid=(0.2, 0.1)),
        dict(swept_variable="lambda_int", grid=(0.1,), fixed={"bogus": 1}),
    ],
)
def test_spec_invariants(kwargs):
    with pytest.raises(SweepError):
        SweepSpec(**kwargs)


def test_throughput_sweep_scale_law_example():
    spec = SweepSpec("lambda_int", (0.1, 0.2, 0.4), {"D": 3.0, "alpha": 4.0})
    rows = run_throughput_sweep(spec)
    assert [r.throughput_unconstrained for r in rows] == pytest.approx([T_BASE, T_BASE / 2, T_BASE / 4], rel=1e-12)
    single = run_throughput_sweep(SweepSpec("lambda_int", (0.1,), {"D": 3.0, "alpha": 4.0}))
    assert single[0].throughput_unconstrained == unconstrained_optimum(SystemParams(3, 4, 0.1)).throughput
    doubled = run_throughput_sweep(SweepSpec("lambda_int", (0.1,), {"D": 6.0, "alpha": 4.0}))
    assert doubled[0].throughput_unconstrained == pytest.approx(T_BASE / 4, rel=1e-12)


def test_throughput_sweep_preconditions():
    with pytest.raises(SweepError):
        run_throughput_sweep(SweepSpec("lambda_int", (0.1,), dict(FIG4_FIXED), Mode.PAPER))
    with pytest.raises(SweepError):
        run_sweep(SweepSpec("lambda_int", (0.1,), {"D": 3.0, "alpha": 4.0}, Mode.PAPER))
    with pytest.raises(SweepError, match="lambda_int"):
        run_sweep(SweepSpec("lambda_int", (-1.0,), {"D": 3.0, "alpha": 4.0}))


def test_dc_sweep_examples():
    fixed = {"D": 3.0, "alpha": 4.0, "lambda_eav": 0.1, "epsilon": 0.1}
    rows = run_dc_sweep(SweepSpec("beta_eav", (1.0,), {**fixed, "lambda_int": 1.0}, Mode.PAPER))
    assert rows[0].d_c == pytest.approx(1.7573276713620453, rel=1e-12) and rows[0].status == "Feasible"
    rows = run_dc_sweep(SweepSpec("beta_eav", (1.0,), {**fixed, "lambda_int": 0.1}, Mode.PAPER))
    assert rows[0].d_c == pytest.approx(14.02706689495992, rel=1e-12) and rows[0].status == "Infeasible"
    rows = run_dc_sweep(PRESETS["fig3"])
    assert all(b.d_c < a.d_c for a, b in zip(rows, rows[1:]))


def test_constrained_sweep_examples():
    rows = run_constrained_sweep(SweepSpec("lambda_int", (0.1, 1.0), dict(FIG4_FIXED), Mode.PAPER))
    low, high = rows
    assert low.status == "Infeasible" and low.throughput_constrained == 0.0
    assert low.throughput_unconstrained == pytest.approx(T_BASE, rel=1e-11)
    assert high.throughput_constrained == high.throughput_unconstrained
    assert high.throughput_constrained == pytest.approx(T_BASE / 10, rel=1e-11)


def test_no_eavesdropper_threat_matches_unconstrained_in_strict_mode():
    spec = SweepSpec("lambda_int", GridSpec(0.05, 10.0, 25), {**FIG4_FIXED, "lambda_eav": 1e-9}, Mode.STRICT)
    for r in run_constrained_sweep(spec):
        assert r.throughput_constrained == r.throughput_unconstrained


def test_no_eavesdropper_threat_pins_paper_mode_to_tiny_dc():
    # the paper-mode region d <= d_c collapses as d_c -> 0 with a vanishing threat
    spec = SweepSpec("lambda_int", (0.05, 1.0), {**FIG4_FIXED, "lambda_eav": 1e-9}, Mode.PAPER)
    for r in run_constrained_sweep(spec):
        assert r.d_c < 1e-6 and r.d_star == r.d_c
        assert r.throughput_constrained < 1e-3 * r.throughput_unconstrained


def test_fig4_feasibility_crossover():
    rows = run_constrained_sweep(PRESETS["fig4"])
    root = 0.9 / (math.pi / 2)  # outage hits 1 - epsilon when lambda_int * kappa = 9 * lambda_eav
    assert distance_bound_dc(SystemParams(3, 4, root), EavesdropperParams(0.1, 1.0), SecrecySpec(0.1)) == pytest.approx(3.0)
    flags = [r.status == "Feasible" for r in rows]
    k = flags.index(True)
    assert not any(flags[:k]) and all(flags[k:])
    assert rows[k - 1].swept_value < root <= rows[k].swept_value
    for r in rows:
        expected = r.throughput_unconstrained if r.d_c <= r.D else 0.0
        assert r.throughput_constrained == expected


def test_rows_rederivable_from_direct_calls():
    rng = random.Random(2024)
    for name in ("fig2", "fig3", "fig4"):
        spec = PRESETS[name]
        rows = run_sweep(spec)
        for r in rng.sample(rows, min(10, len(rows))):
            p = SystemParams(r.D, r.alpha, r.lambda_int)
            free = unconstrained_optimum(p)
            assert r.throughput_unconstrained == free.throughput
            if spec.mode is Mode.UNCONSTRAINED:
                assert (r.beta_star, r.d_star, r.hops) == (free.beta_star, free.d_star, free.hops)
                continue
            out = constrained_optimum(p, EavesdropperParams(r.lambda_eav, r.beta_eav), SecrecySpec(r.epsilon), spec.mode)
            assert (r.status, r.d_c, r.throughput_constrained, r.d_star) == (
                out.status.value,
                out.d_c,
                out.throughput,
                out.d_star,
            )


def test_monte_carlo_columns():
    cfg = MonteCarloConfig(trials=4000, seed=42)
    spec = SweepSpec("lambda_int", (0.1, 0.2), {"D": 3.0, "alpha": 4.0}, validate=cfg)
    rows = run_throughput_sweep(spec)
    for r in rows:
        direct = estimate_p_suc(SystemParams(3, 4, r.lambda_int), LinkDesign(r.beta_star, r.d_star), cfg)
        assert (r.mc_estimate, r.mc_stderr) == (direct.mean, direct.stderr)


def test_csv_deterministic_and_parallel_identical():
    spec = SweepSpec("beta_eav", GridSpec(0.1, 10, 7), PRESETS["fig3"].fixed, Mode.PAPER, MonteCarloConfig(2000, 42))
    a = csv_text(run_dc_sweep(spec), spec)
    b = csv_text(run_dc_sweep(spec, workers=4), spec)
    assert a == b == csv_text(run_dc_sweep(spec), spec)


def test_csv_layout_and_round_trip():
    spec = PRESETS["fig4"]
    rows = run_constrained_sweep(spec)
    text = csv_text(rows, spec)
    lines = text.splitlines()
    assert lines[0].startswith("# {")
    assert lines[1].split(",")[:3] == ["swept_lambda_int", "D", "alpha"]
    assert lines[1].split(",")[-2:] == ["mc_estimate", "mc_stderr"]
    meta, parsed = read_csv(io.StringIO(text))
    assert meta == spec.to_dict()
    assert [p["throughput_constrained"] for p in parsed] == [r.throughput_constrained for r in rows]
    assert all(p["mc_estimate"] is None for p in parsed)


@pytest.mark.parametrize("name", ["fig2", "fig3", "fig4"])
def test_presets_match_golden_csv(name):
    spec = PRESETS[name]
    text = csv_text(run_sweep(spec), spec)
    assert text == (GOLDEN / f"{name}.csv").read_text()
