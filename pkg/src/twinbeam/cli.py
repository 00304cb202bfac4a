"""Command-line front end.

Subcommands: lumped-optimize, sweep-delta, beam-splitter, beat-limit,
analyze.  Every command reads an optional sectioned config file, emits
CSV (default) or JSON to --out or stdout, and is deterministic for a
fixed config and seed: identical invocations produce byte-identical
output.  JSON output carries run metadata (package version, config
hash, seed) but deliberately no timestamps.

Exit codes: 0 success, 2 validation error (bad flags, malformed
config or trace data), 3 computation error (no flux-neutral crossing,
degenerate steady state, non-convergence).
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, atomic, lumped, propagation, traces
from .configio import (
    ConfigError,
    angular_from_mhz,
    load_sections,
    mhz_from_angular,
    section_float,
    section_int,
)

__all__ = ["main"]


# one config file may serve several commands; each command reads its
# own sections and ignores the rest, but section names must be known
_KNOWN_SECTIONS = {"atomic", "sweep", "window", "search", "lumped"}


def _load_config(path: str | None) -> tuple[dict[str, dict[str, str]], bytes | None]:
    if path is None:
        return {}, None
    sections: dict[str, dict[str, str]] = {}
    for name, mapping in load_sections(path):
        if name not in _KNOWN_SECTIONS:
            raise ConfigError(
                f"unknown section [{name}] in {path}; "
                f"expected one of {', '.join(sorted(_KNOWN_SECTIONS))}"
            )
        if name in sections:
            raise ConfigError(f"duplicate section [{name}] in {path}")
        sections[name] = mapping
    return sections, Path(path).read_bytes()


def _check_keys(mapping: dict[str, str], section: str, allowed: set[str]) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in [{section}]: {', '.join(sorted(unknown))}")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.12g" % value
    return str(value)


def _render_csv(rows: list[dict], summary: dict) -> str:
    lines = [f"# {key} = {_fmt(value)}" for key, value in summary.items()]
    if rows:
        lines.append(",".join(rows[0].keys()))
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row.values()))
    return "\n".join(lines) + "\n"


def _render_json(rows: list[dict], summary: dict, metadata: dict) -> str:
    return json.dumps(
        {"metadata": metadata, "summary": summary, "rows": rows}, indent=2
    ) + "\n"


def _emit(args, command: str, rows: list[dict], summary: dict, config_bytes) -> None:
    metadata = {
        "version": __version__,
        "command": command,
        "config_sha256": hashlib.sha256(config_bytes).hexdigest()
        if config_bytes is not None
        else None,
        "seed": getattr(args, "seed", None),
    }
    if args.format == "json":
        text = _render_json(rows, summary, metadata)
    else:
        text = _render_csv(rows, summary)
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)


def cmd_lumped_optimize(args) -> int:
    sections, raw = _load_config(args.config)
    mapping = sections.get("lumped", {})
    _check_keys(mapping, "lumped", {"grid_step", "refine_tol"})
    grid_step = args.grid_step
    if grid_step is None:
        grid_step = section_float(mapping, "lumped", "grid_step", default=0.01)
    refine_tol = section_float(mapping, "lumped", "refine_tol", default=1e-4)
    opt = lumped.optimize_unit_transmission(grid_step=grid_step, refine_tol=refine_tol)
    row = {
        "gain": opt.config.gain,
        "probe_transmission": opt.config.probe_transmission,
        "conj_transmission": opt.config.conj_transmission,
        "gemellity": opt.gemellity,
        "gemellity_dB": opt.gemellity_db,
    }
    summary = {
        "interior_in_gain": opt.interior_in_gain,
        "conj_at_boundary": opt.conj_at_boundary,
    }
    _emit(args, "lumped-optimize", [row], summary, raw)
    return 0


def _sweep_point(payload) -> dict:
    params, delta_mhz, n_slabs = payload
    point = dataclasses.replace(
        params, two_photon_detuning=angular_from_mhz(delta_mhz)
    )
    result = atomic.pair_output(point, n_slabs=n_slabs)
    return {
        "delta_MHz": delta_mhz,
        "G_a": result.g_a,
        "G_b": result.g_b,
        "sum": result.sum_transmission,
        "gemellity_dB": result.gemellity_db,
    }


def cmd_sweep_delta(args) -> int:
    sections, raw = _load_config(args.config)
    params = atomic.params_from_mapping(sections.get("atomic", {}))
    sweep = sections.get("sweep", {})
    _check_keys(sweep, "sweep", {"delta_min_MHz", "delta_max_MHz", "points", "n_slabs"})
    lo = section_float(sweep, "sweep", "delta_min_MHz", default=-150.0)
    hi = section_float(sweep, "sweep", "delta_max_MHz", default=50.0)
    points = section_int(sweep, "sweep", "points", default=251)
    n_slabs = section_int(sweep, "sweep", "n_slabs", default=512)
    if not lo < hi:
        raise ConfigError(f"sweep window must be increasing, got [{lo}, {hi}] MHz")
    if points < 2:
        raise ConfigError(f"sweep needs at least 2 points, got {points}")
    if n_slabs < 1:
        raise ConfigError(f"n_slabs must be >= 1, got {n_slabs}")
    payloads = [(params, d, n_slabs) for d in np.linspace(lo, hi, points)]
    workers = args.workers
    if workers is None:
        import os

        workers = os.cpu_count() or 1
    if workers > 1:
        from multiprocessing import Pool

        with Pool(processes=workers) as pool:
            rows = list(pool.imap(_sweep_point, payloads, chunksize=8))
    else:
        rows = [_sweep_point(p) for p in payloads]
    _emit(args, "sweep-delta", rows, {}, raw)
    return 0


def cmd_beam_splitter(args) -> int:
    sections, raw = _load_config(args.config)
    params = atomic.params_from_mapping(sections.get("atomic", {}))
    window = sections.get("window", {})
    _check_keys(window, "window", {"min_MHz", "max_MHz", "points", "n_slabs"})
    lo = section_float(window, "window", "min_MHz", default=-150.0)
    hi = section_float(window, "window", "max_MHz", default=50.0)
    points = section_int(window, "window", "points", default=251)
    n_slabs = section_int(window, "window", "n_slabs", default=2048)
    if not lo < hi:
        raise ConfigError(f"window must be increasing, got [{lo}, {hi}] MHz")
    point = atomic.find_beam_splitter_point(
        params,
        window=(angular_from_mhz(lo), angular_from_mhz(hi)),
        n_scan=points,
        n_slabs=n_slabs,
    )
    row = {
        "delta_MHz": mhz_from_angular(point.delta),
        "G_a": point.probe_gain,
        "G_b": point.conj_gain,
        "sum": point.probe_gain + point.conj_gain,
        "gemellity": point.gemellity,
        "gemellity_dB": point.gemellity_db,
    }
    _emit(args, "beam-splitter", [row], {}, raw)
    return 0


def cmd_beat_limit(args) -> int:
    sections, raw = _load_config(args.config)
    search = sections.get("search", {})
    _check_keys(
        search,
        "search",
        {"segments", "restarts", "rate_bound", "feasibility_tol", "target_dB", "subdivisions"},
    )
    if args.seed is None:
        print(
            "warning: no --seed given; beat-limit run is nondeterministic",
            file=sys.stderr,
        )
    found = propagation.search_beyond_lumped_limit(
        n_segments=section_int(search, "search", "segments", default=2),
        seed=args.seed,
        rate_bound=section_float(search, "search", "rate_bound", default=20.0),
        feasibility_tol=section_float(search, "search", "feasibility_tol", default=0.01),
        target_db=section_float(search, "search", "target_dB", default=-2.8),
        restarts=section_int(search, "search", "restarts", default=16),
        subdivisions=section_int(search, "search", "subdivisions", default=128),
    )
    rows = [
        {
            "segment": i,
            "dz": slab.dz,
            "g": slab.g,
            "alpha_a": slab.alpha_a,
            "alpha_b": slab.alpha_b,
        }
        for i, slab in enumerate(found.profile.slabs)
    ]
    summary = {
        "found": found.found,
        "gemellity_dB": found.result.gemellity_db,
        "G_a": found.result.g_a,
        "G_b": found.result.g_b,
        "sum": found.result.sum_transmission,
        "diff_noise_dB": 10.0 * np.log10(found.result.diff_noise),
        "evaluations": found.evaluations,
    }
    _emit(args, "beat-limit", rows, summary, raw)
    return 0


def cmd_analyze(args) -> int:
    trace_set = traces.load_traces(args.traces)
    powers = traces.PowerRecord(args.probe_frac, args.conj_frac)
    analysis = traces.analyze_traces(trace_set, powers, analysis_freq=args.freq)
    rows = []
    diff = analysis.normalized["difference"]
    probe = analysis.normalized["probe"]
    conj = analysis.normalized["conjugate"]
    for i in range(diff.freq.size):
        rows.append(
            {
                "freq_Hz": float(diff.freq[i]),
                "difference_dB": float(diff.psd[i]),
                "probe_dB": float(probe.psd[i]),
                "conjugate_dB": float(conj.psd[i]),
            }
        )
    _emit(args, "analyze", rows, analysis.summary(), Path(args.traces).read_bytes())
    return 0


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="sectioned key-value config file")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--workers", type=int, help="worker processes for sweeps")
    common.add_argument("--seed", type=int, help="random seed for stochastic commands")

    parser = argparse.ArgumentParser(
        prog="twinbeam",
        description="Twin-beam four-wave-mixing models and measurement analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "lumped-optimize",
        parents=[common],
        help="optimum of the amplifier-plus-loss model at unit total transmission",
    )
    p.add_argument("--grid-step", type=float, help="coarse grid step (default 0.01)")
    p.set_defaults(func=cmd_lumped_optimize)

    p = sub.add_parser(
        "sweep-delta",
        parents=[common],
        help="gain curves and gemellity over a two-photon detuning grid",
    )
    p.set_defaults(func=cmd_sweep_delta)

    p = sub.add_parser(
        "beam-splitter",
        parents=[common],
        help="locate the flux-neutral operating point of the atomic medium",
    )
    p.set_defaults(func=cmd_beam_splitter)

    p = sub.add_parser(
        "beat-limit",
        parents=[common],
        help="search distributed profiles for gemellity below the lumped limit",
    )
    p.set_defaults(func=cmd_beat_limit)

    p = sub.add_parser(
        "analyze",
        parents=[common],
        help="normalize measured traces to the SQL and infer the gemellity",
    )
    p.add_argument("traces", help="trace CSV (freq_hz,psd_db,label,rbw_hz)")
    p.add_argument("--probe-frac", type=float, required=True)
    p.add_argument("--conj-frac", type=float, required=True)
    p.add_argument("--freq", type=float, help="analysis frequency in Hz")
    p.set_defaults(func=cmd_analyze)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
