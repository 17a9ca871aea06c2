"""Command-line entry point.

Subcommands: ``simulate`` (one epsilon -> samples CSV + scatter SVG),
``sweep`` (epsilon grid -> per-level CSV + transition JSON), ``table1``
(exhaustive reversed-composition report), ``spectrum`` (pair-energy
spectrum of an experiment), ``dataset`` (labeled PGM histograms for
classifier training).

Every run writes ``run.json``, an echo of the resolved configuration;
feeding it back through ``--config`` reproduces all outputs byte-exactly.
Exit codes: 0 success, 2 configuration/parse error, 3 empty result,
1 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import analysis, emit
from .faults import parse_fault_list
from .hopfield import completeness_check, ensemble_from_samples, spectrum
from .netlist import NetlistError, parse_netlist
from .sampler import ComparisonMode, ExperimentConfig, run_experiment


class EmptyResultError(RuntimeError):
    pass


_DEFAULTS = {
    "fault": "",
    "eps": 0.1,
    "grid": "0:0.5:0.05",
    "trials": 1000,
    "mode": "fault-compare",
    "max_iterations": 1_000_000,
    "memoize": False,
    "workers": 1,
    "tau": analysis.DEFAULT_TAU,
    "min_samples": analysis.DEFAULT_MIN_SAMPLES,
    "bins": 64,
    "canvas": 480,
    "run": [],
}


def _add_common(p: argparse.ArgumentParser, *, needs_ckt: bool = True) -> None:
    if needs_ckt:
        p.add_argument("--ckt", help="circuit netlist file (.ckt)")
    p.add_argument("--fault", help="comma-separated fault specs")
    p.add_argument("--trials", type=int, help="number of trials per experiment")
    p.add_argument("--seed", type=int, help="base RNG seed (required)")
    p.add_argument("--mode", choices=["fault-compare", "target-search"])
    p.add_argument("--max-iterations", type=int, dest="max_iterations")
    p.add_argument("--memoize", action="store_true", default=None,
                   help="replay previously accepted inputs per target")
    p.add_argument("--workers", type=int, help="worker threads (never affects output)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--config", help="JSON file with defaults for any option")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ganfault",
        description="Fault-tolerance estimation for logic circuits by "
                    "GAN-style rejection sampling.",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("simulate", help="one experiment: samples CSV + scatter SVG")
    _add_common(p)
    p.add_argument("--eps", type=float, help="uncertainty level in [0, 1]")
    p.add_argument("--canvas", type=int, help="scatter canvas size in pixels")

    p = sub.add_parser("sweep", help="epsilon grid: sweep CSV + transition JSON")
    _add_common(p)
    p.add_argument("--grid", help="epsilon grid 'start:stop:step' or comma list")
    p.add_argument("--tau", type=float, help="nonlinearity threshold on rho")
    p.add_argument("--min-samples", type=int, dest="min_samples",
                   help="accepted samples needed before a level is trusted")

    p = sub.add_parser("table1", help="exhaustive reversed-composition deviations")
    p.add_argument("--out", help="optional output directory for the JSON report")
    p.add_argument("--config", help="JSON file with defaults for any option")

    p = sub.add_parser("spectrum", help="pair-energy spectrum of an experiment")
    _add_common(p)
    p.add_argument("--eps", type=float, help="uncertainty level in [0, 1]")

    p = sub.add_parser("dataset", help="labeled PGM histograms + manifest")
    _add_common(p)
    p.add_argument("--eps", type=float, help="uncertainty level in [0, 1]")
    p.add_argument("--bins", type=int, help="histogram grid size")
    p.add_argument("--run", action="append",
                   help="LABEL=FAULTSPECS entry; repeatable")

    return parser


def _resolve(args: argparse.Namespace) -> dict:
    """Merge config-file values and explicit flags over the defaults."""
    resolved = dict(_DEFAULTS)
    if args.config:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if not isinstance(doc, dict):
            raise ValueError(f"config {args.config} must hold a JSON object")
        doc.pop("command", None)
        resolved.update(doc)
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        resolved[key] = value
    return resolved


def _require(cfg: dict, key: str, command: str):
    if cfg.get(key) is None:
        raise ValueError(f"--{key.replace('_', '-')} is required for {command}")
    return cfg[key]


def _epsilon(cfg: dict) -> float:
    eps = float(cfg["eps"])
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"epsilon out of range [0, 1]: {eps}")
    return eps


def _grid(spec) -> list[float]:
    if isinstance(spec, (list, tuple)):
        values = [float(v) for v in spec]
    elif ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:stop:step, got {spec!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("grid step must be positive")
        values = []
        i = 0
        while (v := round(start + i * step, 10)) <= stop + 1e-9:
            values.append(v)
            i += 1
    else:
        values = [float(v) for v in spec.split(",")]
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"epsilon out of range [0, 1]: {v}")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("grid values must be strictly increasing")
    return values


def _experiment_config(cfg: dict, command: str, epsilon: float) -> ExperimentConfig:
    ckt_path = _require(cfg, "ckt", command)
    circuit = parse_netlist(Path(ckt_path).read_text(encoding="utf-8"))
    seed = _require(cfg, "seed", command)
    trials = int(cfg["trials"])
    return ExperimentConfig(
        circuit=circuit,
        epsilon=epsilon,
        trials=trials,
        seed=int(seed),
        faults=parse_fault_list(str(cfg["fault"])),
        mode=ComparisonMode(cfg["mode"]),
        max_iterations=int(cfg["max_iterations"]),
        memoize=bool(cfg["memoize"]),
    )


def _out_dir(cfg: dict, command: str) -> Path:
    out = Path(_require(cfg, "out", command))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_run_json(out: Path, command: str, cfg: dict) -> None:
    doc = {"command": command}
    for key, value in sorted(cfg.items()):
        doc[key] = value
    (out / "run.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def cmd_simulate(cfg: dict) -> int:
    eps = _epsilon(cfg)
    exp = _experiment_config(cfg, "simulate", eps)
    out = _out_dir(cfg, "simulate")
    _write_run_json(out, "simulate", cfg)
    samples = run_experiment(exp, workers=int(cfg["workers"]))
    emit.write_samples_csv(samples, out / "samples.csv")
    size = int(cfg["canvas"])
    svg = emit.render_scatter(samples, exp.width, canvas=(size, size))
    (out / "scatter.svg").write_text(svg, encoding="utf-8")
    accepted = sum(1 for s in samples if s.accepted)
    print(f"simulate: {len(samples)} trials, {accepted} accepted -> {out}")
    return 0


def cmd_sweep(cfg: dict) -> int:
    grid = _grid(cfg["grid"])
    exp = _experiment_config(cfg, "sweep", grid[0])
    out = _out_dir(cfg, "sweep")
    _write_run_json(out, "sweep", cfg)
    sweep = analysis.run_sweep(exp, grid, workers=int(cfg["workers"]))
    estimate = analysis.detect_transition(
        sweep, tau=float(cfg["tau"]), min_samples=int(cfg["min_samples"])
    )

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["epsilon", "trials", "accepted", "censored_fraction", "slope",
         "intercept", "r_squared", "rho", "mean_iterations", "median_iterations"]
    )
    for p in sweep.points:
        fit = p.fit
        writer.writerow([
            repr(p.epsilon), len(p.samples), p.accepted_count,
            repr(p.censored_fraction),
            repr(fit.slope) if fit else "",
            repr(fit.intercept) if fit else "",
            repr(fit.r_squared) if fit else "",
            repr(fit.rho) if fit else "",
            repr(p.mean_iterations) if p.mean_iterations is not None else "",
            repr(p.median_iterations) if p.median_iterations is not None else "",
        ])
    (out / "sweep.csv").write_text(buf.getvalue(), encoding="utf-8")
    (out / "transition.json").write_text(
        json.dumps(
            {
                "epsilon_star": estimate.epsilon_star,
                "tau": estimate.tau,
                "min_samples": estimate.min_samples,
            },
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )
    shown = "none" if estimate.epsilon_star is None else f"{estimate.epsilon_star}"
    print(f"sweep: {len(grid)} levels, transition epsilon* = {shown} -> {out}")
    return 0


def cmd_table1(cfg: dict) -> int:
    entries = analysis.table1_report()
    print(f"{'pair':28s} {'rows':>7s} {'computed':>9s} {'claimed':>8s}  note")
    for e in entries:
        note = "matches claim" if e.reproduced else "claim not reproduced by Hamming metric"
        print(
            f"{e.pair_name:28s} ({e.rows[0]},{e.rows[1]})  "
            f"{e.computed:8.3f} {e.claimed:8.2f}  {note}"
        )
    if cfg.get("out"):
        out = _out_dir(cfg, "table1")
        _write_run_json(out, "table1", cfg)
        doc = [
            {
                "pair": e.pair_name,
                "rows": list(e.rows),
                "computed": e.computed,
                "claimed": e.claimed,
                "reproduced": e.reproduced,
            }
            for e in entries
        ]
        (out / "table1.json").write_text(
            json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return 0


def cmd_spectrum(cfg: dict) -> int:
    eps = _epsilon(cfg)
    exp = _experiment_config(cfg, "spectrum", eps)
    out = _out_dir(cfg, "spectrum")
    _write_run_json(out, "spectrum", cfg)
    samples = run_experiment(exp, workers=int(cfg["workers"]))
    ensemble = ensemble_from_samples(samples, exp.width)
    if not ensemble:
        raise EmptyResultError("no accepted samples")
    spec = spectrum(ensemble)
    doc = {
        "size": spec.size,
        "width": spec.width,
        "energy_floor": spec.energy_floor,
        "manifolds": [
            {
                "agreement_count": m.agreement_count,
                "degeneracy": m.degeneracy,
                "distinct_patterns": m.distinct_patterns,
                "min_energy": m.min_energy,
                "max_energy": m.max_energy,
                "mean_energy": m.mean_energy,
            }
            for _, m in sorted(spec.manifolds.items())
        ],
    }
    if exp.width <= 16:
        report = completeness_check(exp.width, ensemble)
        doc["complete"] = report.complete
        doc["completeness"] = [
            {"agreement_count": m.agreement_count, "observed": m.observed,
             "expected": m.expected}
            for m in report.manifolds
        ]
    (out / "spectrum.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"spectrum: {spec.size} configurations, "
          f"{len(spec.manifolds)} manifolds -> {out}")
    return 0


def cmd_dataset(cfg: dict) -> int:
    eps = _epsilon(cfg)
    runs_spec = cfg.get("run") or []
    if not runs_spec:
        raise ValueError("--run LABEL=FAULTSPECS is required for dataset")
    exp = _experiment_config(dict(cfg, fault=""), "dataset", eps)
    out = _out_dir(cfg, "dataset")
    _write_run_json(out, "dataset", cfg)
    runs = []
    for entry in runs_spec:
        label, sep, fault_text = str(entry).partition("=")
        if not sep:
            raise ValueError(f"run entry must be LABEL=FAULTSPECS, got {entry!r}")
        runs.append(
            (label, replace(exp, faults=parse_fault_list(fault_text), label=label))
        )
    manifest = emit.emit_dataset(runs, out, bins=int(cfg["bins"]),
                                 workers=int(cfg["workers"]))
    print(f"dataset: {len(manifest.entries)} images -> {out}")
    return 0


_HANDLERS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "table1": cmd_table1,
    "spectrum": cmd_spectrum,
    "dataset": cmd_dataset,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        cfg = _resolve(args)
        return _HANDLERS[args.command](cfg)
    except EmptyResultError as exc:
        print(f"ganfault {args.command}: {exc}", file=sys.stderr)
        return 3
    except (NetlistError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"ganfault {args.command}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"ganfault {args.command}: internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
