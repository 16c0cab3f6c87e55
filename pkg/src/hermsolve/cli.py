"""Command-line benchmark harness.

Runs convergence sweeps over basis size or time step for the bundled
problem presets and emits the resulting error table as csv, json, or a
log-log svg plot.  Exactly one of the two parameters may carry several
values; that one is the sweep variable.

Benchmark protocol: every discrete inner product in a run (initial
projection, source coefficients, both error metrics) uses the
(N+1)-point Gauss-Hermite rule mapped by the current basis parameters,
the classical collocation-cost setup.  Library callers that prefer
oversampled integrals can build their own Workspace and keep its
default rule.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import click
import numpy as np

from .basis import BasisParams, ParamSchedule
from .errors import DivergenceError, ParameterError, SolverError
from .problems import DEFAULT_SCHEDULES, PRESETS
from .quadrature import gauss_hermite
from .spectral import errors_against
from .stepper import StepperConfig, Workspace
from .stepper import integrate as _integrate

__all__ = [
    "ExperimentConfig",
    "TableRow",
    "ConvergenceTable",
    "parse_schedule",
    "run_experiment",
    "convergence_order",
    "emit_table",
    "parse_table",
    "main",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """One benchmark invocation: a problem, schedules, and a sweep."""

    problem: str
    n_values: tuple
    dt_values: tuple
    t_final: float
    alpha_spec: str
    beta_spec: str
    sample_times: tuple = ()
    out_format: str = "csv"
    out_path: Optional[str] = None
    seed: int = 0

    def __post_init__(self):
        if self.problem not in PRESETS:
            raise ParameterError(f"unknown problem preset {self.problem!r}")
        if not self.n_values or not self.dt_values:
            raise ParameterError("sweeps must be non-empty")
        if len(self.n_values) > 1 and len(self.dt_values) > 1:
            raise ParameterError("only one of N and dt may carry several values")
        if any(n < 0 for n in self.n_values):
            raise ParameterError("basis sizes must be nonnegative")
        if any(dt <= 0 for dt in self.dt_values):
            raise ParameterError("time steps must be positive")
        if self.t_final < 0:
            raise ParameterError("t_final must be nonnegative")
        for dt in self.dt_values:
            steps = round(self.t_final / dt)
            if abs(self.t_final - steps * dt) > 1e-12 * max(self.t_final, dt):
                raise ParameterError(
                    f"dt={dt} does not divide t_final={self.t_final}"
                )
        if self.out_format not in ("csv", "json", "svg"):
            raise ParameterError(f"unknown output format {self.out_format!r}")


@dataclass(frozen=True)
class TableRow:
    n_modes: int
    dt: float
    l2_error: Optional[float]
    linf_error: Optional[float]
    order: Optional[float] = None
    failure: Optional[str] = None


@dataclass(frozen=True)
class ConvergenceTable:
    rows: tuple
    metadata: dict


def _split_spec(spec: str):
    name, sep, arg = spec.partition(":")
    if not sep:
        return name, None
    try:
        return name, float(arg)
    except ValueError as exc:
        raise ParameterError(f"bad schedule spec {spec!r}") from exc


def parse_schedule(alpha_spec: str, beta_spec: str) -> ParamSchedule:
    """Combine an alpha spec and a beta spec into a ParamSchedule.

    Alpha specs: ``const:<value>`` or ``inv-sqrt-shift``.
    Beta specs: ``const:<value>`` or ``drift:<rate>``.
    """
    a_kind, a_val = _split_spec(alpha_spec)
    b_kind, b_val = _split_spec(beta_spec)
    if a_kind == "const" and a_val is None:
        raise ParameterError("const alpha spec needs a value, e.g. const:2.8284")
    if b_kind in ("const", "drift") and b_val is None:
        raise ParameterError(f"{b_kind} beta spec needs a value")

    if a_kind == "const":
        if b_kind == "const":
            return ParamSchedule.constant(alpha=a_val, beta=b_val)
        if b_kind == "drift":
            return ParamSchedule.linear_drift(alpha=a_val, slope=b_val)
    elif a_kind == "inv-sqrt-shift":
        if b_kind == "const" and b_val == 0.0:
            return ParamSchedule.inverse_sqrt_shift()
        if b_kind == "const":

            def evaluate(t: float, beta=b_val) -> BasisParams:
                s = 2.0 * (t + 1.0)
                return BasisParams(alpha=s**-0.5, beta=beta, alpha_dot=-(s**-1.5))

            return ParamSchedule.custom(evaluate)
        if b_kind == "drift":

            def evaluate(t: float, rate=b_val) -> BasisParams:
                s = 2.0 * (t + 1.0)
                return BasisParams(
                    alpha=s**-0.5,
                    beta=rate * t,
                    alpha_dot=-(s**-1.5),
                    beta_dot=rate,
                )

            return ParamSchedule.custom(evaluate)
    raise ParameterError(
        f"unrecognized schedule specs alpha={alpha_spec!r} beta={beta_spec!r}"
    )


def convergence_order(errors: Sequence[float], params: Sequence[float]):
    """Pairwise fitted orders log(e_{k-1}/e_k) / log(p_{k-1}/p_k).

    Returns one entry per consecutive pair.  A pair with a nonpositive
    error or parameter is reported as None; identical errors give 0.
    """
    if len(errors) != len(params):
        raise ParameterError("errors and params must have equal length")
    if len(errors) < 2:
        raise ParameterError("need at least two sweep points to fit an order")
    out = []
    for k in range(1, len(errors)):
        e0, e1, p0, p1 = errors[k - 1], errors[k], params[k - 1], params[k]
        bad = (
            e0 is None or e1 is None or e0 <= 0 or e1 <= 0
            or p0 <= 0 or p1 <= 0 or p0 == p1
        )
        if bad:
            out.append(None)
        else:
            out.append(float(np.log(e0 / e1) / np.log(p0 / p1)))
    return out


def _pair_order(e0, e1, p0, p1):
    try:
        return convergence_order([e0, e1], [p0, p1])[0]
    except ParameterError:  # pragma: no cover - lengths fixed at 2
        return None


def run_experiment(config: ExperimentConfig) -> ConvergenceTable:
    """Run one solver pass per sweep point and tabulate the errors.

    A diverging or unsolvable run is recorded as a failed row and the
    sweep continues.  Orders appear only on rows with a predecessor.
    """
    factory = PRESETS[config.problem]
    problem = factory()
    schedule = parse_schedule(config.alpha_spec, config.beta_spec)
    sweep_by_n = len(config.n_values) > 1
    points = [
        (n, dt)
        for n in config.n_values
        for dt in config.dt_values
    ]

    t_start = time.perf_counter()
    rows = []
    samples = []
    for n, dt in points:
        rule = gauss_hermite(n + 1)
        ws = Workspace(n, problem, schedule, rule=rule)
        run_cfg = StepperConfig(
            dt=dt, t_final=config.t_final, schedule=schedule, n_modes=n
        )
        try:
            if config.sample_times:
                state, reports = _integrate(
                    problem.u0,
                    run_cfg,
                    problem,
                    record_times=config.sample_times,
                    workspace=ws,
                )
                samples.append(
                    [
                        {"t": r.at_time, "E_N": r.l2_error, "E_N_inf": r.rel_linf_error}
                        for r in reports
                    ]
                )
            else:
                state = _integrate(problem.u0, run_cfg, problem, workspace=ws)
        except (DivergenceError, SolverError) as exc:
            rows.append(TableRow(n, dt, None, None, failure=str(exc)))
            if config.sample_times:
                samples.append(None)
            continue
        t_end = config.t_final
        report = errors_against(state, lambda x: problem.exact(x, t_end), rule)
        rows.append(TableRow(n, dt, report.l2_error, report.rel_linf_error))

    with_orders = [rows[0]]
    for k in range(1, len(rows)):
        prev, cur = rows[k - 1], rows[k]
        p0, p1 = (
            (prev.n_modes, cur.n_modes) if sweep_by_n else (prev.dt, cur.dt)
        )
        order = _pair_order(prev.l2_error, cur.l2_error, p0, p1)
        with_orders.append(
            TableRow(cur.n_modes, cur.dt, cur.l2_error, cur.linf_error,
                     order=order, failure=cur.failure)
        )

    # global least-squares fit over the clean rows, for the metadata
    ls_order = None
    ps = [r.n_modes if sweep_by_n else r.dt for r in rows]
    es = [r.l2_error for r in rows]
    clean = [(p, e) for p, e in zip(ps, es) if e is not None and e > 0]
    if len(clean) >= 2 and len({p for p, _ in clean}) >= 2:
        lp = np.log([p for p, _ in clean])
        le = np.log([e for _, e in clean])
        ls_order = float(np.polyfit(lp, le, 1)[0])

    metadata = {
        "problem": config.problem,
        "alpha": config.alpha_spec,
        "beta": config.beta_spec,
        "t_final": config.t_final,
        "n_values": list(config.n_values),
        "dt_values": list(config.dt_values),
        "seed": config.seed,
        "wall_seconds": time.perf_counter() - t_start,
        "least_squares_order": ls_order,
    }
    if config.sample_times:
        metadata["sample_times"] = list(config.sample_times)
        metadata["samples"] = samples
    return ConvergenceTable(tuple(with_orders), metadata)


def _fmt(x) -> str:
    return "" if x is None else f"{x:.5e}"


def emit_csv(table: ConvergenceTable) -> str:
    lines = ["N,dt,E_N,E_N_inf,order"]
    for r in table.rows:
        lines.append(
            f"{r.n_modes},{_fmt(r.dt)},{_fmt(r.l2_error)},"
            f"{_fmt(r.linf_error)},{_fmt(r.order)}"
        )
    return "\n".join(lines) + "\n"


def emit_json(table: ConvergenceTable) -> str:
    payload = {
        "rows": [
            {
                "N": r.n_modes,
                "dt": r.dt,
                "E_N": r.l2_error,
                "E_N_inf": r.linf_error,
                "order": r.order,
                "failure": r.failure,
            }
            for r in table.rows
        ],
        "metadata": table.metadata,
    }
    return json.dumps(payload, indent=2) + "\n"


def parse_table(text: str) -> ConvergenceTable:
    """Inverse of the json emitter: parse_table(emit_json(t)) == t."""
    payload = json.loads(text)
    rows = tuple(
        TableRow(
            n_modes=r["N"],
            dt=r["dt"],
            l2_error=r["E_N"],
            linf_error=r["E_N_inf"],
            order=r["order"],
            failure=r["failure"],
        )
        for r in payload["rows"]
    )
    return ConvergenceTable(rows, payload["metadata"])


def emit_svg(table: ConvergenceTable, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # fixed hash salt keeps the svg byte-stable across runs
    matplotlib.rcParams["svg.hashsalt"] = "hermsolve"

    sweep_by_n = len(set(r.n_modes for r in table.rows)) > 1
    xs, l2, linf = [], [], []
    for r in table.rows:
        if r.l2_error is None:
            continue
        xs.append(r.n_modes if sweep_by_n else r.dt)
        l2.append(r.l2_error)
        linf.append(r.linf_error)
    if not xs:
        raise ParameterError("no successful rows to plot")

    fig, ax = plt.subplots(figsize=(5.0, 3.75))
    ax.loglog(xs, l2, "o-", label="$E_N$")
    ax.loglog(xs, linf, "s--", label="$E_{N,\\infty}$")
    ax.set_xlabel("N" if sweep_by_n else "dt")
    ax.set_ylabel("error at $t_{final}$")
    ax.set_title(table.metadata.get("problem", ""))
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def emit_table(table: ConvergenceTable, out_format: str,
               path: Optional[str] = None) -> Optional[str]:
    """Render the table; write to path when given, else return the text.

    The svg format always needs a path.
    """
    if out_format == "svg":
        if path is None:
            raise ParameterError("svg output requires an output path")
        emit_svg(table, path)
        return None
    text = emit_csv(table) if out_format == "csv" else emit_json(table)
    if path is None:
        return text
    with open(path, "w") as handle:
        handle.write(text)
    return None


def _parse_list(raw, convert, what):
    if raw is None:
        return None
    if isinstance(raw, (list, tuple)):
        return tuple(convert(v) for v in raw)
    try:
        return tuple(convert(tok) for tok in str(raw).split(",") if tok.strip())
    except ValueError as exc:
        raise ParameterError(f"cannot parse {what} list from {raw!r}") from exc


@click.group()
def main():
    """Spectral convergence benchmarks for unbounded-domain problems."""


@main.command(name="run")
@click.option("--problem", type=str, default=None, help="Preset name: heat, burgers, kdvb.")
@click.option("--n", "n_raw", default=None, help="Basis size or comma list (sweep).")
@click.option("--dt", "dt_raw", default=None, help="Time step or comma list (sweep).")
@click.option("--t-final", type=float, default=None, help="End time (default 1.0).")
@click.option("--alpha", "alpha_spec", default=None,
              help="Scaling spec: const:<v> or inv-sqrt-shift.")
@click.option("--beta", "beta_spec", default=None,
              help="Translation spec: const:<v> or drift:<rate>.")
@click.option("--sample-times", "sample_raw", default=None,
              help="Comma list of times to record errors at.")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Output file (default stdout; svg requires it).")
@click.option("--format", "out_format", type=click.Choice(["csv", "json", "svg"]),
              default=None, help="Output format (default csv).")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON file with the same keys; explicit flags win.")
@click.option("--seed", type=int, default=None,
              help="Recorded in metadata; reserved for perturbation runs.")
def run_command(problem, n_raw, dt_raw, t_final, alpha_spec, beta_spec,
                sample_raw, out_path, out_format, config_path, seed):
    """Run a convergence sweep and emit the error table."""
    merged = {}
    if config_path is not None:
        with open(config_path) as handle:
            merged.update(json.load(handle))
    for key, val in [
        ("problem", problem), ("n", n_raw), ("dt", dt_raw),
        ("t_final", t_final), ("alpha", alpha_spec), ("beta", beta_spec),
        ("sample_times", sample_raw), ("out", out_path),
        ("format", out_format), ("seed", seed),
    ]:
        if val is not None:
            merged[key] = val

    if merged.get("problem") is None:
        raise click.UsageError("--problem is required")
    if merged.get("n") is None:
        raise click.UsageError("--n is required")
    if merged.get("dt") is None:
        raise click.UsageError("--dt is required")

    name = merged["problem"]
    default_alpha, default_beta = DEFAULT_SCHEDULES.get(name, (None, None))
    try:
        config = ExperimentConfig(
            problem=name,
            n_values=_parse_list(merged["n"], int, "N"),
            dt_values=_parse_list(merged["dt"], float, "dt"),
            t_final=float(merged.get("t_final", 1.0)),
            alpha_spec=merged.get("alpha") or default_alpha,
            beta_spec=merged.get("beta") or default_beta,
            sample_times=_parse_list(merged.get("sample_times"), float, "sample time")
            or (),
            out_format=merged.get("format", "csv"),
            out_path=merged.get("out"),
            seed=int(merged.get("seed", 0)),
        )
        parse_schedule(config.alpha_spec, config.beta_spec)
    except ParameterError as exc:
        raise click.UsageError(str(exc)) from exc
    if config.out_format == "svg" and config.out_path is None:
        raise click.UsageError("svg output requires --out")

    table = run_experiment(config)
    try:
        text = emit_table(table, config.out_format, config.out_path)
    except OSError as exc:
        raise click.ClickException(f"cannot write output: {exc}") from exc
    if text is not None:
        click.echo(text, nl=False)
    if any(r.failure is not None for r in table.rows):
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    main()
