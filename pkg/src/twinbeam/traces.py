"""Measured spectrum-analyzer traces: calibration and twin-beam inference.

Input files are plain CSV with header `freq_hz,psd_db,label,rbw_hz`;
one file may carry several labeled traces (difference, probe,
conjugate, sql, electronic).  Traces are put on a common frequency
grid, normalized to the standard quantum limit after subtracting the
electronic floor in linear power units, and the scalar twin-beam
numbers are inferred at a chosen analysis frequency.

Resolution-bandwidth differences between traces are rejected rather
than corrected; silently rescaling RBW is a classic way to get wrong
squeezing numbers.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .metrics import InferenceResult, infer_from_measurement

__all__ = [
    "TRACE_LABELS",
    "TraceFormatError",
    "SpectrumTrace",
    "PowerRecord",
    "TraceAnalysis",
    "load_traces",
    "parse_traces",
    "normalize_to_sql",
    "band_statistic",
    "band_minimum",
    "measured_gemellity",
    "analyze_traces",
]

TRACE_LABELS = ("difference", "probe", "conjugate", "sql", "electronic")

_CSV_HEADER = ["freq_hz", "psd_db", "label", "rbw_hz"]


class TraceFormatError(ValueError):
    """Malformed or inconsistent trace data."""


@dataclass(frozen=True)
class SpectrumTrace:
    """One labeled noise-power trace.

    freq in Hz, strictly increasing; psd in dB (instrument-referenced
    before normalization, dB relative to the standard quantum limit
    after); rbw is the resolution bandwidth in Hz.
    """

    freq: np.ndarray
    psd: np.ndarray
    rbw: float
    label: str

    def __post_init__(self):
        freq = np.array(self.freq, dtype=float)
        psd = np.array(self.psd, dtype=float)
        if freq.ndim != 1 or freq.shape != psd.shape or freq.size == 0:
            raise ValueError("trace arrays must be nonempty 1-d and congruent")
        if freq.size > 1 and not np.all(np.diff(freq) > 0.0):
            raise ValueError(f"{self.label}: frequencies must be strictly increasing")
        if not (np.all(np.isfinite(freq)) and np.all(np.isfinite(psd))):
            raise ValueError(f"{self.label}: trace values must be finite")
        if self.rbw <= 0.0:
            raise ValueError(f"resolution bandwidth must be positive, got {self.rbw}")
        if self.label not in TRACE_LABELS:
            raise ValueError(
                f"unknown trace label {self.label!r}; expected one of {TRACE_LABELS}"
            )
        freq.setflags(write=False)
        psd.setflags(write=False)
        object.__setattr__(self, "freq", freq)
        object.__setattr__(self, "psd", psd)


@dataclass(frozen=True)
class PowerRecord:
    """Detected DC power fractions, normalized to the input probe power."""

    probe_frac: float
    conj_frac: float

    def __post_init__(self):
        if self.probe_frac < 0.0 or self.conj_frac < 0.0:
            raise ValueError(
                f"power fractions must be nonnegative, got "
                f"({self.probe_frac}, {self.conj_frac})"
            )


@dataclass(frozen=True)
class TraceAnalysis:
    """Normalized traces plus the scalar summary at the analysis frequency."""

    normalized: dict[str, SpectrumTrace]
    analysis_freq: float
    diff_db: float
    probe_db: float
    conj_db: float
    inference: InferenceResult

    def summary(self) -> dict:
        return {
            "analysis_freq_Hz": self.analysis_freq,
            "diff_dB": self.diff_db,
            "F_a_dB": self.probe_db,
            "F_b_dB": self.conj_db,
            "C_ab": self.inference.figures.c_ab,
            "gemellity_dB": self.inference.gemellity_db,
        }


def parse_traces(text: str) -> dict[str, SpectrumTrace]:
    """Parse CSV trace data and resample everything to a common grid.

    Rows are grouped by label; each label's rows are sorted by
    frequency and must have one uniform RBW, and all labels must share
    that RBW.  When grids differ, every trace is linearly interpolated
    onto the first label's grid clipped to the common overlap, so
    non-overlapping endpoints are trimmed.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise TraceFormatError("trace file is empty") from None
    if [h.strip() for h in header] != _CSV_HEADER:
        raise TraceFormatError(
            f"expected header {','.join(_CSV_HEADER)!r}, got {','.join(header)!r}"
        )
    rows: dict[str, list[tuple[float, float, float]]] = {}
    order: list[str] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 4:
            raise TraceFormatError(f"line {lineno}: expected 4 columns, got {len(row)}")
        label = row[2].strip()
        try:
            freq, psd, rbw = float(row[0]), float(row[1]), float(row[3])
        except ValueError:
            raise TraceFormatError(f"line {lineno}: non-numeric value in {row!r}") from None
        if label not in rows:
            rows[label] = []
            order.append(label)
        rows[label].append((freq, psd, rbw))

    if not rows:
        raise TraceFormatError("trace file contains no data rows")

    traces: dict[str, SpectrumTrace] = {}
    for label in order:
        entries = sorted(rows[label])
        freqs = np.array([e[0] for e in entries])
        psds = np.array([e[1] for e in entries])
        rbws = {e[2] for e in entries}
        if len(rbws) != 1:
            raise TraceFormatError(f"trace {label!r} mixes resolution bandwidths {sorted(rbws)}")
        if freqs.size > 1 and not np.all(np.diff(freqs) > 0.0):
            raise TraceFormatError(f"trace {label!r} has duplicate frequency points")
        try:
            traces[label] = SpectrumTrace(freqs, psds, rbws.pop(), label)
        except ValueError as exc:
            raise TraceFormatError(str(exc)) from exc

    rbw_values = {t.rbw for t in traces.values()}
    if len(rbw_values) != 1:
        raise TraceFormatError(
            f"traces use different resolution bandwidths {sorted(rbw_values)}; "
            "re-measure rather than rescale"
        )
    return _common_grid(traces, order)


def _common_grid(
    traces: dict[str, SpectrumTrace], order: list[str]
) -> dict[str, SpectrumTrace]:
    grids = [traces[label].freq for label in order]
    first = grids[0]
    if all(a.shape == first.shape and np.array_equal(a, first) for a in grids[1:]):
        return traces
    lo = max(g[0] for g in grids)
    hi = min(g[-1] for g in grids)
    target = first[(first >= lo) & (first <= hi)]
    if target.size < 2:
        raise TraceFormatError(
            f"trace grids share less than two points (overlap [{lo:g}, {hi:g}] Hz)"
        )
    out = {}
    for label in order:
        t = traces[label]
        out[label] = SpectrumTrace(target, np.interp(target, t.freq, t.psd), t.rbw, label)
    return out


def load_traces(path) -> dict[str, SpectrumTrace]:
    p = Path(path)
    if not p.is_file():
        raise TraceFormatError(f"trace file not found: {p}")
    return parse_traces(p.read_text())


def _require_common_grid(*traces: SpectrumTrace) -> None:
    first = traces[0]
    for t in traces[1:]:
        if t.freq.shape != first.freq.shape or not np.array_equal(t.freq, first.freq):
            raise ValueError(
                f"traces {first.label!r} and {t.label!r} are not on a common grid"
            )
        if t.rbw != first.rbw:
            raise ValueError(
                f"traces {first.label!r} and {t.label!r} have different RBWs"
            )


def normalize_to_sql(
    trace: SpectrumTrace,
    sql: SpectrumTrace,
    electronic: SpectrumTrace | None = None,
) -> SpectrumTrace:
    """Express a trace in dB relative to the standard quantum limit.

    Electronic noise, when provided, is subtracted from both the trace
    and the SQL in linear power units before taking the ratio.  The
    subtraction must leave positive power at every frequency;
    violations are reported with the offending frequency.
    """
    involved = (trace, sql) if electronic is None else (trace, sql, electronic)
    _require_common_grid(*involved)
    signal = 10.0 ** (trace.psd / 10.0)
    reference = 10.0 ** (sql.psd / 10.0)
    if electronic is not None:
        floor = 10.0 ** (electronic.psd / 10.0)
        signal = signal - floor
        reference = reference - floor
    for name, values in ((trace.label, signal), ("sql", reference)):
        bad = np.nonzero(values <= 0.0)[0]
        if bad.size:
            raise ValueError(
                f"electronic floor exceeds trace {name!r} at "
                f"{trace.freq[bad[0]]:g} Hz"
            )
    return SpectrumTrace(trace.freq, 10.0 * np.log10(signal / reference), trace.rbw, trace.label)


def band_statistic(
    trace: SpectrumTrace, f_lo: float, f_hi: float, statistic: str = "min"
) -> float:
    """Named statistic (min or mean) of the trace over [f_lo, f_hi]."""
    if statistic not in ("min", "mean"):
        raise ValueError(f"statistic must be 'min' or 'mean', got {statistic!r}")
    mask = (trace.freq >= f_lo) & (trace.freq <= f_hi)
    if not np.any(mask):
        raise ValueError(
            f"band [{f_lo:g}, {f_hi:g}] Hz contains no points of trace {trace.label!r}"
        )
    values = trace.psd[mask]
    return float(values.min() if statistic == "min" else values.mean())


def band_minimum(trace: SpectrumTrace, f_lo: float, f_hi: float) -> tuple[float, float]:
    """(frequency, value) of the trace minimum over [f_lo, f_hi]."""
    mask = (trace.freq >= f_lo) & (trace.freq <= f_hi)
    if not np.any(mask):
        raise ValueError(
            f"band [{f_lo:g}, {f_hi:g}] Hz contains no points of trace {trace.label!r}"
        )
    sub = np.nonzero(mask)[0]
    i = sub[np.argmin(trace.psd[sub])]
    return float(trace.freq[i]), float(trace.psd[i])


def measured_gemellity(
    diff_db: float, probe_db: float, conj_db: float, powers: PowerRecord
) -> InferenceResult:
    """Scalar twin-beam inference from SQL-normalized values at one frequency."""
    return infer_from_measurement(
        diff_db, probe_db, conj_db, powers.probe_frac, powers.conj_frac
    )


_DEFAULT_BAND = (0.5e6, 5e6)


def analyze_traces(
    traces: dict[str, SpectrumTrace],
    powers: PowerRecord,
    analysis_freq: float | None = None,
    band: tuple[float, float] = _DEFAULT_BAND,
) -> TraceAnalysis:
    """Normalize a trace set and infer the twin-beam numbers.

    Requires difference, probe, conjugate and sql traces; an
    electronic trace is used for floor correction when present.  The
    analysis frequency defaults to the minimum of the normalized
    difference trace inside `band` and is snapped to the nearest grid
    point when given explicitly.
    """
    for label in ("difference", "probe", "conjugate", "sql"):
        if label not in traces:
            raise ValueError(f"missing required trace {label!r}")
    sql = traces["sql"]
    electronic = traces.get("electronic")
    normalized = {
        label: normalize_to_sql(traces[label], sql, electronic)
        for label in ("difference", "probe", "conjugate")
    }
    diff = normalized["difference"]
    if analysis_freq is None:
        analysis_freq, _ = band_minimum(diff, band[0], band[1])
    if not diff.freq[0] <= analysis_freq <= diff.freq[-1]:
        raise ValueError(
            f"analysis frequency {analysis_freq:g} Hz outside trace support "
            f"[{diff.freq[0]:g}, {diff.freq[-1]:g}] Hz"
        )
    index = int(np.argmin(np.abs(diff.freq - analysis_freq)))
    diff_db = float(diff.psd[index])
    probe_db = float(normalized["probe"].psd[index])
    conj_db = float(normalized["conjugate"].psd[index])
    return TraceAnalysis(
        normalized=normalized,
        analysis_freq=float(diff.freq[index]),
        diff_db=diff_db,
        probe_db=probe_db,
        conj_db=conj_db,
        inference=measured_gemellity(diff_db, probe_db, conj_db, powers),
    )
