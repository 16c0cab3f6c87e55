"""Experiment harness and command line: configs, orders, emitters, exits."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

import hermsolve.cli as cli
from hermsolve import (
    ConvergenceTable,
    DivergenceError,
    ExperimentConfig,
    ParameterError,
    TableRow,
    convergence_order,
    emit_table,
    parse_schedule,
    parse_table,
    run_experiment,
)


def test_order_time_step_pair():
    got = convergence_order([1.7473e-6, 1.7473e-8], [1e-2, 1e-3])
    assert got == [pytest.approx(2.0, abs=1e-12)]


def test_order_basis_size_pair():
    got = convergence_order([4.2446e-6, 1.6540e-10], [16, 32])
    want = np.log(4.2446e-6 / 1.6540e-10) / np.log(16 / 32)
    assert got == [pytest.approx(want, rel=1e-15)]
    assert got[0] == pytest.approx(-14.6474, abs=1e-3)


def test_order_edge_cases():
    assert convergence_order([1e-3, 1e-3], [1e-1, 1e-2]) == [0.0]
    assert convergence_order([1e-3, 0.0], [1e-1, 1e-2]) == [None]
    assert convergence_order([1e-3, -1e-5], [1e-1, 1e-2]) == [None]
    assert convergence_order([1e-3, 1e-4], [1e-2, 1e-2]) == [None]
    got = convergence_order([1e-2, 1e-4, 1e-6], [1e-1, 1e-2, 1e-3])
    assert got == [pytest.approx(2.0), pytest.approx(2.0)]
    with pytest.raises(ParameterError):
        convergence_order([1e-3], [1e-1])
    with pytest.raises(ParameterError):
        convergence_order([1e-3, 1e-4], [1e-1])


def test_parse_schedule_variants():
    const = parse_schedule("const:1.5", "const:0.2")
    assert const.kind == "constant"
    p = const(2.0)
    assert (p.alpha, p.beta, p.alpha_dot, p.beta_dot) == (1.5, 0.2, 0.0, 0.0)

    tracking = parse_schedule("inv-sqrt-shift", "const:0")
    assert tracking(0.0).alpha == pytest.approx(2.0**-0.5)
    assert tracking(0.0).alpha_dot == pytest.approx(-(2.0**-1.5))

    drift = parse_schedule("const:1", "drift:-1")
    p = drift(0.75)
    assert p.beta == pytest.approx(-0.75) and p.beta_dot == -1.0

    both = parse_schedule("inv-sqrt-shift", "drift:-0.5")
    p = both(1.0)
    assert p.alpha == pytest.approx(0.5)
    assert p.beta == pytest.approx(-0.5) and p.beta_dot == -0.5


def test_parse_schedule_rejects_junk():
    for alpha, beta in [
        ("const:abc", "const:0"),
        ("wobble", "const:0"),
        ("const:-1", "const:0"),
        ("const:1", "drift:fast"),
        ("const:1", "sideways"),
        ("const", "const:0"),
    ]:
        with pytest.raises(ParameterError):
            parse_schedule(alpha, beta)


def test_experiment_config_validation():
    ok = dict(problem="heat", n_values=(8,), dt_values=(1e-2,), t_final=0.1,
              alpha_spec="const:1", beta_spec="const:0")
    ExperimentConfig(**ok)
    for bad in [
        dict(ok, problem="wave"),
        dict(ok, n_values=()),
        dict(ok, dt_values=()),
        dict(ok, n_values=(8, 16), dt_values=(1e-2, 1e-3)),
        dict(ok, n_values=(-2,)),
        dict(ok, dt_values=(-1e-2,)),
        dict(ok, t_final=-1.0),
        dict(ok, dt_values=(3e-2,)),
        dict(ok, out_format="pdf"),
    ]:
        with pytest.raises(ParameterError):
            ExperimentConfig(**bad)


def test_run_experiment_time_step_sweep():
    # N large enough that the time error dominates on every level
    cfg = ExperimentConfig(
        problem="heat", n_values=(40,), dt_values=(1e-1, 1e-2, 1e-3),
        t_final=1.0, alpha_spec="inv-sqrt-shift", beta_spec="const:0",
    )
    table = run_experiment(cfg)
    assert len(table.rows) == 3
    orders = [r.order for r in table.rows]
    assert orders[0] is None
    for o in orders[1:]:
        assert o == pytest.approx(2.0, abs=0.05)
    errs = [r.l2_error for r in table.rows]
    assert errs[0] > errs[1] > errs[2]
    assert table.metadata["least_squares_order"] == pytest.approx(2.0, abs=0.05)
    assert table.metadata["problem"] == "heat"
    assert table.metadata["wall_seconds"] > 0


def test_run_experiment_zero_horizon_is_projection_error():
    cfg = ExperimentConfig(
        problem="heat", n_values=(8, 16), dt_values=(1e-2,), t_final=0.0,
        alpha_spec="const:0.7071067811865476", beta_spec="const:0",
    )
    table = run_experiment(cfg)
    assert all(r.l2_error > 0 for r in table.rows)
    assert table.rows[1].l2_error < table.rows[0].l2_error


def test_run_experiment_sampling():
    cfg = ExperimentConfig(
        problem="heat", n_values=(12,), dt_values=(1e-2,), t_final=0.1,
        alpha_spec="inv-sqrt-shift", beta_spec="const:0",
        sample_times=(0.0, 0.05, 0.1),
    )
    table = run_experiment(cfg)
    samples = table.metadata["samples"]
    assert len(samples) == 1 and len(samples[0]) == 3
    assert [s["t"] for s in samples[0]] == pytest.approx([0.0, 0.05, 0.1])


def test_run_experiment_records_failure_and_continues(monkeypatch):
    real = cli._integrate
    def flaky(initial, run_cfg, problem, **kw):
        if run_cfg.n_modes == 12:
            raise DivergenceError("norm blew up", step=3, time=0.03)
        return real(initial, run_cfg, problem, **kw)

    monkeypatch.setattr(cli, "_integrate", flaky)
    cfg = ExperimentConfig(
        problem="heat", n_values=(8, 12, 16), dt_values=(1e-2,), t_final=0.1,
        alpha_spec="inv-sqrt-shift", beta_spec="const:0",
    )
    table = run_experiment(cfg)
    assert [r.failure is not None for r in table.rows] == [False, True, False]
    failed = table.rows[1]
    assert failed.l2_error is None and failed.order is None
    assert "norm blew up" in failed.failure
    # the row after the failure has no usable predecessor
    assert table.rows[2].order is None
    assert table.metadata["least_squares_order"] is not None


def _tiny_table():
    rows = (
        TableRow(8, 1e-2, 1.2345678e-3, 2.5e-3),
        TableRow(16, 1e-2, 9.87e-7, 1.1e-6, order=-10.2887),
    )
    return ConvergenceTable(rows, {"problem": "heat", "note": [1, 2]})


def test_emit_csv_format():
    text = emit_table(_tiny_table(), "csv")
    lines = text.splitlines()
    assert lines[0] == "N,dt,E_N,E_N_inf,order"
    assert lines[1] == "8,1.00000e-02,1.23457e-03,2.50000e-03,"
    assert lines[2] == "16,1.00000e-02,9.87000e-07,1.10000e-06,-1.02887e+01"
    assert len(lines) == 3 and text.endswith("\n")

    single = ConvergenceTable((TableRow(8, 1e-2, 1e-3, 2e-3),), {})
    assert len(emit_table(single, "csv").splitlines()) == 2


def test_json_round_trip():
    table = _tiny_table()
    again = parse_table(emit_table(table, "json"))
    assert again == table

    cfg = ExperimentConfig(
        problem="heat", n_values=(8,), dt_values=(1e-2,), t_final=0.1,
        alpha_spec="inv-sqrt-shift", beta_spec="const:0",
    )
    live = run_experiment(cfg)
    assert parse_table(emit_table(live, "json")) == live


def test_emit_svg_needs_path(tmp_path):
    with pytest.raises(ParameterError):
        emit_table(_tiny_table(), "svg")
    out = tmp_path / "plot.svg"
    emit_table(_tiny_table(), "svg", str(out))
    body = out.read_text()
    assert body.lstrip().startswith("<?xml") and "</svg>" in body

    empty = ConvergenceTable(
        (TableRow(8, 1e-2, None, None, failure="diverged"),), {}
    )
    with pytest.raises(ParameterError):
        emit_table(empty, "svg", str(tmp_path / "no.svg"))


def _run(args, **kw):
    return CliRunner().invoke(cli.main, args, **kw)


def test_cli_stdout_and_determinism(tmp_path):
    args = ["run", "--problem", "heat", "--n", "8", "--dt", "1e-2",
            "--t-final", "0.1"]
    first = _run(args)
    assert first.exit_code == 0, first.output
    assert first.output.splitlines()[0] == "N,dt,E_N,E_N_inf,order"

    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (out1, out2):
        res = _run(args + ["--out", str(out)])
        assert res.exit_code == 0, res.output
    assert out1.read_bytes() == out2.read_bytes()
    assert out1.read_text().splitlines()[0] == "N,dt,E_N,E_N_inf,order"


def test_cli_json_output(tmp_path):
    out = tmp_path / "table.json"
    res = _run(["run", "--problem", "heat", "--n", "8,16", "--dt", "1e-2",
                "--t-final", "0.1", "--format", "json", "--out", str(out)])
    assert res.exit_code == 0, res.output
    payload = json.loads(out.read_text())
    assert [r["N"] for r in payload["rows"]] == [8, 16]
    assert payload["rows"][1]["order"] is not None
    assert payload["metadata"]["problem"] == "heat"


def test_cli_usage_errors(tmp_path):
    cases = [
        ["run", "--n", "8", "--dt", "1e-2"],
        ["run", "--problem", "heat", "--dt", "1e-2"],
        ["run", "--problem", "heat", "--n", "8"],
        ["run", "--problem", "wave", "--n", "8", "--dt", "1e-2"],
        ["run", "--problem", "heat", "--n", "8", "--dt", "3e-2",
         "--t-final", "1.0"],
        ["run", "--problem", "heat", "--n", "8", "--dt", "1e-2",
         "--format", "svg"],
        ["run", "--problem", "heat", "--n", "8", "--dt", "1e-2",
         "--alpha", "const:nope"],
    ]
    for args in cases:
        res = _run(args)
        assert res.exit_code == 2, (args, res.output)


def test_cli_exit_one_on_failed_row(monkeypatch):
    def always_diverges(initial, run_cfg, problem, **kw):
        raise DivergenceError("norm blew up", step=1, time=run_cfg.dt)

    monkeypatch.setattr(cli, "_integrate", always_diverges)
    res = _run(["run", "--problem", "heat", "--n", "8", "--dt", "1e-2",
                "--t-final", "0.1"])
    assert res.exit_code == 1
    # csv keeps the failed row with empty metric cells
    assert res.output.splitlines()[1] == "8,1.00000e-02,,,"

    as_json = _run(["run", "--problem", "heat", "--n", "8", "--dt", "1e-2",
                    "--t-final", "0.1", "--format", "json"])
    assert as_json.exit_code == 1
    assert "norm blew up" in as_json.output


def test_cli_config_file_merge(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({
        "problem": "heat", "n": [8], "dt": [1e-1], "t_final": 0.1,
    }))
    res = _run(["run", "--config", str(config), "--dt", "1e-2"])
    assert res.exit_code == 0, res.output
    assert ",1.00000e-02," in res.output.splitlines()[1]

    defaults_only = _run(["run", "--config", str(config)])
    assert defaults_only.exit_code == 0
    assert ",1.00000e-01," in defaults_only.output.splitlines()[1]


def test_cli_svg_output(tmp_path):
    out = tmp_path / "sweep.svg"
    res = _run(["run", "--problem", "heat", "--n", "8,12,16", "--dt", "1e-2",
                "--t-final", "0.1", "--format", "svg", "--out", str(out)])
    assert res.exit_code == 0, res.output
    assert out.exists() and out.stat().st_size > 1000


def test_cli_sample_times_json():
    res = _run(["run", "--problem", "heat", "--n", "8", "--dt", "1e-2",
                "--t-final", "0.1", "--sample-times", "0.0,0.1",
                "--format", "json"])
    assert res.exit_code == 0, res.output
    payload = json.loads(res.output)
    ts = [s["t"] for s in payload["metadata"]["samples"][0]]
    assert ts == pytest.approx([0.0, 0.1])
    assert all(np.isfinite(s["E_N"]) for s in payload["metadata"]["samples"][0])
