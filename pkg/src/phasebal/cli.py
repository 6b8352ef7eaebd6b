"""Command line front end: run, predict, synthesize, sweep.

Degrees at every human boundary, radians everywhere inside. ``run`` writes
<out>/trace.csv and <out>/report.json; the other subcommands write
<out>/report.json or print the report to stdout when no output directory is
given. Exit codes: 0 success (including structured refusals), 2 parse
failure, 3 validation hard failure, 4 numerical blow-up. Advisory
validation warnings never change the exit status.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import analysis
from .control import (
    ControlLaw,
    circle_center,
    partition_subgroups,
    validate_gain_ordering,
    validate_stability_condition,
)
from .errors import AnalysisScopeError, SimulationDivergedError
from .model import GainVector, SwarmState, wrap_angle
from .presets import resolve_preset
from .sim import IntegratorSettings, Scenario, SimulationTrace, simulate

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_BLOWUP = 4


class ParseFailure(Exception):
    """Structural problem with the request (exit 2)."""


class ValidationFailure(Exception):
    """Semantically invalid scenario (exit 3)."""


def default_positions(n: int) -> list[list[float]]:
    """Evenly spaced row on the x axis: agent k at (2(k-1), 0)."""
    return [[2.0 * k, 0.0] for k in range(n)]


@dataclass
class ScenarioConfig:
    """Flat, JSON-facing scenario description (angles in degrees)."""

    n: int
    theta0_deg: list
    gains: list
    r0: list | None = None
    omega0: float = 0.0
    law: str = "balance"
    dt: float = 1e-3
    t_max: float = 200.0
    method: str = "rk4"
    balance_tol: float = 1e-6
    record_stride: int = 1
    seed_name: str | None = None

    @classmethod
    def from_mapping(cls, data: dict) -> "ScenarioConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParseFailure(f"unknown config fields: {sorted(unknown)}")
        missing = {"n", "theta0_deg", "gains"} - set(data)
        if missing:
            raise ParseFailure(f"missing config fields: {sorted(missing)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ParseFailure(str(exc)) from exc

    def validate(self):
        try:
            n = int(self.n)
            theta = np.asarray(self.theta0_deg, dtype=float)
            gains = np.asarray(self.gains, dtype=float)
        except (TypeError, ValueError) as exc:
            raise ParseFailure(f"non-numeric scenario data: {exc}") from exc
        if n < 2:
            raise ValidationFailure("need at least two agents")
        if theta.shape != (n,):
            raise ValidationFailure("theta0_deg length must equal n")
        if gains.shape != (n,):
            raise ValidationFailure("gains length must equal n")
        if not np.all(np.isfinite(theta)) or not np.all(np.isfinite(gains)):
            raise ValidationFailure("headings and gains must be finite")
        if self.r0 is not None:
            r0 = np.asarray(self.r0, dtype=float)
            if r0.shape != (n, 2) or not np.all(np.isfinite(r0)):
                raise ValidationFailure("r0 must be n finite planar positions")
        if self.law not in ("balance", "splay"):
            raise ValidationFailure(f"unknown law {self.law!r}")
        try:
            IntegratorSettings(
                dt=float(self.dt),
                t_max=float(self.t_max),
                method=self.method,
                balance_tol=float(self.balance_tol),
                record_stride=int(self.record_stride),
            )
        except ValueError as exc:
            raise ValidationFailure(str(exc)) from exc
        if not np.isfinite(float(self.omega0)):
            raise ValidationFailure("omega0 must be finite")

    def theta0_rad(self) -> np.ndarray:
        return np.deg2rad(np.asarray(self.theta0_deg, dtype=float))

    def positions(self) -> np.ndarray:
        if self.r0 is None:
            return np.asarray(default_positions(int(self.n)))
        return np.asarray(self.r0, dtype=float)

    def gain_vector(self) -> GainVector:
        return GainVector(np.asarray(self.gains, dtype=float))

    def scenario(self) -> Scenario:
        state = SwarmState(0.0, self.positions(), self.theta0_rad())
        law = ControlLaw(self.law, self.gain_vector(), float(self.omega0))
        settings = IntegratorSettings(
            dt=float(self.dt),
            t_max=float(self.t_max),
            method=self.method,
            balance_tol=float(self.balance_tol),
            record_stride=int(self.record_stride),
        )
        return Scenario(state, law, settings)


def _parse_gains_flag(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError as exc:
        raise ParseFailure(f"could not parse --gains {text!r}") from exc


def load_config(args) -> ScenarioConfig:
    """Assemble the scenario: preset, then config file, then CLI flags."""
    data: dict = {}
    if getattr(args, "preset", None):
        try:
            data.update(resolve_preset(args.preset))
        except KeyError as exc:
            raise ParseFailure(str(exc)) from exc
    if getattr(args, "config", None):
        path = Path(args.config)
        try:
            loaded = json.loads(path.read_text())
        except OSError as exc:
            raise ParseFailure(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParseFailure(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ParseFailure("config file must contain one JSON object")
        if "preset" in loaded:
            try:
                base = resolve_preset(loaded.pop("preset"))
            except KeyError as exc:
                raise ParseFailure(str(exc)) from exc
            base.update(loaded)
            loaded = base
        data.update(loaded)
    if getattr(args, "gains", None):
        gains = _parse_gains_flag(args.gains)
        data["gains"] = gains
        data.setdefault("n", len(gains))
    for flag, key in (
        ("omega0", "omega0"),
        ("dt", "dt"),
        ("tmax", "t_max"),
        ("tol", "balance_tol"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            data[key] = value
    if not data:
        raise ParseFailure("no scenario given: use --preset or --config")
    return ScenarioConfig.from_mapping(data)


def _deg(x) -> float:
    return float(np.rad2deg(x))


def _wrapped_deg(x) -> float:
    return _deg(wrap_angle(float(x)))


def _interval_json(interval: analysis.Interval) -> dict:
    return {
        "lo_deg": _deg(interval.lo),
        "hi_deg": _deg(interval.hi),
        "lo_rad": float(interval.lo),
        "hi_rad": float(interval.hi),
        "lo_closed": interval.lo_closed,
        "hi_closed": interval.hi_closed,
    }


def build_validation(config: ScenarioConfig) -> dict:
    """Advisory validation flags; never fatal."""
    gains = config.gain_vector()
    theta = config.theta0_rad()
    out: dict = {"warnings": []}
    res = validate_stability_condition(gains, "all-positive")
    out["all_positive"] = res.ok
    res = validate_stability_condition(gains, "allow-zeros")
    out["zeros_within_half_n"] = res.ok
    if not res.ok:
        out["warnings"].append(f"stability condition: {res.detail}")
    if gains.n == 2:
        res = validate_stability_condition(gains, "two-agent-sum")
        out["two_agent_sum_positive"] = res.ok
        if not res.ok:
            out["warnings"].append(f"stability condition: {res.detail}")
    if config.law == "splay":
        out["gain_ordering"] = "skipped: not applicable to the splay law"
        return out
    try:
        part = partition_subgroups(theta)
    except ValueError as exc:
        out["gain_ordering"] = f"skipped: {exc}"
    else:
        res = validate_gain_ordering(part, gains)
        out["gain_ordering"] = "ok" if res.ok else f"violated: {res.detail}"
        if not res.ok:
            out["warnings"].append(f"gain ordering: {res.detail}")
    return out


def build_analysis_report(
    config: ScenarioConfig, trace: SimulationTrace | None
) -> dict:
    """Predictions with, when a trace is given, simulated counterparts."""
    theta = config.theta0_rad()
    gains = config.gain_vector()
    try:
        report = analysis.predict_reference_direction(theta, gains)
    except AnalysisScopeError as exc:
        return {"status": "outside-proven-scope", "reason": str(exc)}
    out: dict = {
        "status": "ok",
        "regime": report.regime,
        "theta_f_pred_rad": report.reference_direction,
        "theta_f_pred_deg": _wrapped_deg(report.reference_direction),
        "lambda": [float(v) for v in report.weights],
        "reachable_interval": _interval_json(report.interval),
        "predicted_final_headings_rad": [
            float(v) for v in report.predicted_final_headings
        ],
    }
    if trace is not None and trace.outcome == "converged":
        sim_ref = float(trace.headings[-1, 0])
        out["theta_f_sim_rad"] = sim_ref
        out["theta_f_sim_deg"] = _wrapped_deg(sim_ref)
        out["theta_f_delta_rad"] = sim_ref - report.reference_direction
    if config.n == 2:
        try:
            point = analysis.convergence_point(
                theta, config.positions(), gains
            )
        except (AnalysisScopeError, ValueError) as exc:
            out["convergence_point"] = {"status": "unavailable", "reason": str(exc)}
        else:
            cp = {
                "status": "ok",
                "x": point.x,
                "y": point.y,
                "offset_x": point.offset_x,
                "offset_y": point.offset_y,
                "quadrature_error": point.quadrature_error,
            }
            if trace is not None and trace.outcome == "converged":
                fx, fy = trace.centroid[-1]
                cp["x_sim"] = float(fx)
                cp["y_sim"] = float(fy)
                cp["distance_to_sim"] = float(np.hypot(fx - point.x, fy - point.y))
            out["convergence_point"] = cp
    return out


def format_float(v: float) -> str:
    return f"{v:.17g}"


def write_trace_csv(path: Path, trace: SimulationTrace):
    """Emit the trace columns in their documented order, 17 significant digits."""
    n = trace.n_agents
    header = (
        ["t"]
        + [f"x{i + 1}" for i in range(n)]
        + [f"y{i + 1}" for i in range(n)]
        + [f"theta{i + 1}" for i in range(n)]
        + ["p_mag", "psi"]
        + [f"u{i + 1}" for i in range(n)]
        + ["conserved", "xc", "yc"]
    )
    lines = [",".join(header)]
    for s in range(trace.n_samples):
        row = [format_float(trace.t[s])]
        row += [format_float(v) for v in trace.positions[s, :, 0]]
        row += [format_float(v) for v in trace.positions[s, :, 1]]
        row += [format_float(v) for v in trace.headings[s]]
        row.append(format_float(trace.p_mag[s]))
        row.append(format_float(trace.psi[s]) if trace.psi_defined[s] else "")
        row += [format_float(v) for v in trace.u[s]]
        row.append(
            format_float(trace.conserved[s]) if trace.conserved is not None else ""
        )
        row.append(format_float(trace.centroid[s, 0]))
        row.append(format_float(trace.centroid[s, 1]))
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")


def build_run_report(
    config: ScenarioConfig, trace: SimulationTrace, validation: dict
) -> dict:
    final = trace.final_state()
    report = {
        "schema_version": SCHEMA_VERSION,
        "preset": config.seed_name,
        "law": config.law,
        "n": int(config.n),
        "omega0": float(config.omega0),
        "gains": [float(g) for g in config.gains],
        "outcome": trace.outcome,
        "t_converged": trace.t_converged,
        "t_final": float(trace.t[-1]),
        "n_samples": trace.n_samples,
        "final_headings_rad_unwrapped": [float(v) for v in final.headings],
        "final_headings_deg_wrapped": [
            _wrapped_deg(v) for v in final.headings
        ],
        "final_p_mag": float(trace.p_mag[-1]),
        "final_centroid": [float(v) for v in trace.centroid[-1]],
        "validation": validation,
    }
    if config.omega0 != 0.0:
        report["circle_centers"] = [
            [float(c) for c in circle_center(final, k, float(config.omega0))]
            for k in range(final.n)
        ]
    report["analysis"] = build_analysis_report(config, trace)
    return report


def _write_report(report: dict, out: str | None, name: str = "report.json") -> None:
    text = json.dumps(report, indent=2)
    if out is None:
        print(text)
    else:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / name).write_text(text + "\n")


def cmd_run(args) -> int:
    config = load_config(args)
    config.validate()
    validation = build_validation(config)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            trace = simulate(config.scenario())
        except SimulationDivergedError as exc:
            print(f"numerical blow-up: {exc}", file=sys.stderr)
            return EXIT_BLOWUP
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_trace_csv(outdir / "trace.csv", trace)
    report = build_run_report(config, trace, validation)
    _write_report(report, args.out)
    for warning in validation["warnings"]:
        print(f"warning: {warning}", file=sys.stderr)
    return EXIT_OK


def cmd_predict(args) -> int:
    config = load_config(args)
    config.validate()
    theta = config.theta0_rad()
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "preset": config.seed_name,
        "n": int(config.n),
        "gains": [float(g) for g in config.gains],
    }
    try:
        interval = analysis.reachable_interval(theta)
        report["reachable_interval"] = _interval_json(interval)
    except AnalysisScopeError as exc:
        report["reachable_interval"] = {
            "status": "outside-proven-scope",
            "reason": str(exc),
        }
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report["analysis"] = build_analysis_report(config, trace=None)
    if args.sigma is not None:
        try:
            bounds = analysis.perturbation_bounds(theta, float(args.sigma))
            report["perturbation_bounds"] = _interval_json(bounds)
        except (AnalysisScopeError, ValueError) as exc:
            report["perturbation_bounds"] = {
                "status": "outside-proven-scope",
                "reason": str(exc),
            }
    if args.rho is not None:
        try:
            locus = analysis.locus_line(theta, config.positions(), float(args.rho))
        except ValueError as exc:
            report["locus"] = {"status": "outside-proven-scope", "reason": str(exc)}
        else:
            report["locus"] = {
                "status": "ok",
                "rho": float(args.rho),
                "anchor": [float(v) for v in locus.anchor],
                "h1": locus.h1,
                "h2": locus.h2,
                "vertical": locus.vertical,
                "slope": locus.slope,
            }
    _write_report(report, args.out)
    return EXIT_OK


def cmd_synthesize(args) -> int:
    config = load_config(args)
    config.validate()
    theta = config.theta0_rad()
    target = float(np.deg2rad(args.target))
    c = float(args.c)
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "preset": config.seed_name,
        "target_deg": float(args.target),
        "c": c,
    }
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            gains = analysis.synthesize_gains(theta, target, c)
        except AnalysisScopeError as exc:
            report["status"] = "refused"
            report["reason"] = str(exc)
            _write_report(report, args.out)
            return EXIT_OK
        verification = analysis.predict_reference_direction(theta, gains)
    report["status"] = "ok"
    report["gains"] = [float(g) for g in gains.gains]
    report["condition"] = gains.checked_condition
    report["theta_f_pred_rad"] = verification.reference_direction
    report["theta_f_pred_deg"] = _wrapped_deg(verification.reference_direction)
    report["round_trip_error_rad"] = verification.reference_direction - target
    if args.simulate:
        run_cfg = ScenarioConfig.from_mapping(
            {
                "n": int(config.n),
                "theta0_deg": list(config.theta0_deg),
                "gains": [float(g) for g in gains.gains],
                "r0": config.r0,
                "law": "balance",
                "dt": float(config.dt),
                "t_max": float(config.t_max),
                "balance_tol": float(config.balance_tol),
            }
        )
        trace = simulate(run_cfg.scenario())
        report["outcome"] = trace.outcome
        if trace.outcome == "converged":
            sim_ref = float(trace.headings[-1, 0])
            report["theta_f_sim_rad"] = sim_ref
            report["theta_f_sim_deg"] = _wrapped_deg(sim_ref)
            report["sim_delta_rad"] = sim_ref - target
    _write_report(report, args.out)
    return EXIT_OK


def _sweep_worker(item: tuple[int, dict, str]) -> dict:
    index, data, outdir = item
    config = ScenarioConfig.from_mapping(data)
    config.validate()
    validation = build_validation(config)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        trace = simulate(config.scenario())
    subdir = Path(outdir)
    subdir.mkdir(parents=True, exist_ok=True)
    write_trace_csv(subdir / "trace.csv", trace)
    report = build_run_report(config, trace, validation)
    (subdir / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    summary = {
        "index": index,
        "out": str(subdir),
        "outcome": trace.outcome,
        "t_converged": trace.t_converged,
        "final_p_mag": float(trace.p_mag[-1]),
    }
    return summary


def cmd_sweep(args) -> int:
    if not args.config:
        raise ParseFailure("sweep needs --config pointing at a scenario list")
    path = Path(args.config)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ParseFailure(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseFailure(f"config file is not valid JSON: {exc}") from exc
    scenarios = data.get("scenarios") if isinstance(data, dict) else None
    if not isinstance(scenarios, list) or not scenarios:
        raise ParseFailure('sweep config must contain a non-empty "scenarios" list')
    resolved = []
    for i, entry in enumerate(scenarios):
        if not isinstance(entry, dict):
            raise ParseFailure(f"scenario {i} is not a JSON object")
        entry = dict(entry)
        if "preset" in entry:
            try:
                base = resolve_preset(entry.pop("preset"))
            except KeyError as exc:
                raise ParseFailure(str(exc)) from exc
            base.update(entry)
            entry = base
        resolved.append(entry)
    out = Path(args.out or "out")
    out.mkdir(parents=True, exist_ok=True)
    items = [
        (i, entry, str(out / f"scenario_{i:03d}"))
        for i, entry in enumerate(resolved)
    ]
    jobs = args.jobs or 1
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            summaries = list(pool.map(_sweep_worker, items))
    else:
        summaries = [_sweep_worker(item) for item in items]
    (out / "summary.json").write_text(
        json.dumps({"schema_version": SCHEMA_VERSION, "runs": summaries}, indent=2)
        + "\n"
    )
    return EXIT_OK


def _add_scenario_flags(parser):
    parser.add_argument("--preset", help="named fixture scenario")
    parser.add_argument("--config", help="path to a flat JSON scenario file")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--omega0", type=float, help="base turn rate (rad/s)")
    parser.add_argument("--gains", help="comma separated gains, overrides config")
    parser.add_argument("--dt", type=float, help="integration step (s)")
    parser.add_argument("--tmax", type=float, help="integration horizon (s)")
    parser.add_argument("--tol", type=float, help="convergence threshold")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasebal",
        description="Simulate and analyze phase balancing of planar unit-speed "
        "agents coupled through per-agent controller gains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate and write trace.csv + report.json")
    _add_scenario_flags(p_run)
    p_run.set_defaults(func=cmd_run, out="out")

    p_pred = sub.add_parser("predict", help="closed-form report, no simulation")
    _add_scenario_flags(p_pred)
    p_pred.add_argument("--sigma", type=float, help="max relative gain error")
    p_pred.add_argument("--rho", type=float, help="gain ratio for the locus line")
    p_pred.set_defaults(func=cmd_predict, out=None)

    p_syn = sub.add_parser("synthesize", help="gains for a desired direction")
    _add_scenario_flags(p_syn)
    p_syn.add_argument(
        "--target", type=float, required=True, help="desired direction (degrees)"
    )
    p_syn.add_argument("--c", type=float, default=1.0, help="positive gain scale")
    p_syn.add_argument(
        "--simulate", action="store_true", help="verify the gains by simulation"
    )
    p_syn.set_defaults(func=cmd_synthesize, out=None)

    p_sweep = sub.add_parser("sweep", help="run a list of scenarios")
    p_sweep.add_argument("--config", required=True, help="JSON file with scenarios")
    p_sweep.add_argument("--out", help="output directory", default="out")
    p_sweep.add_argument("--jobs", type=int, default=1, help="worker processes")
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationFailure as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
