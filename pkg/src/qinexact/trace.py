"""Run traces and their CSV serialization."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

BASE_COLUMNS = ("k", "f_hat", "gap", "L_k", "gamma_k", "oracle_calls", "elapsed_ms")

# extras written after the base columns, in this order, when present
EXTRA_COLUMNS = ("A_k", "alpha_k", "delta_k", "S_k", "vi_gap", "step_norm")


@dataclass
class RunResult:
    """Full trace of one solver run.

    Per-iteration lists are indexed by iteration ``k = 1..N`` (entry ``k-1``);
    ``iterates`` additionally holds the start point at index 0 when kept.
    ``point`` is the method's output (weighted average for the gradient
    method and Mirror Prox, last iterate for the fast gradient method).
    """

    method: str
    point: np.ndarray
    iterates: list = field(default_factory=list)
    f_hat_history: list = field(default_factory=list)
    L_history: list = field(default_factory=list)
    oracle_calls: int = 0
    calls_history: list = field(default_factory=list)
    line_search_counts: list = field(default_factory=list)
    f_hat_exact: bool = True
    status: str = "max_iters"
    bound_history: Optional[list] = None
    gamma_history: Optional[list] = None
    extras: dict = field(default_factory=dict)
    aux: dict = field(default_factory=dict)
    elapsed_ms: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def averaged_point(self) -> np.ndarray:
        return self.point

    @property
    def n_iters(self) -> int:
        return len(self.f_hat_history)

    @property
    def final_f(self) -> float:
        return self.f_hat_history[-1] if self.f_hat_history else math.nan


def fmt(value) -> str:
    if value is None:
        return ""
    value = float(value)
    return format(value, ".17g")


def trace_rows(result: RunResult, f_min: Optional[float] = None, timing: bool = False):
    extras = [c for c in EXTRA_COLUMNS if c in result.extras]
    header = list(BASE_COLUMNS) + extras
    rows = []
    for i, f_hat in enumerate(result.f_hat_history):
        row = {
            "k": str(i + 1),
            "f_hat": fmt(f_hat),
            "gap": fmt(f_hat - f_min) if f_min is not None else "",
            "L_k": fmt(result.L_history[i]) if i < len(result.L_history) else "",
            "gamma_k": (fmt(result.gamma_history[i])
                        if result.gamma_history is not None else ""),
            "oracle_calls": (str(result.calls_history[i])
                             if i < len(result.calls_history) else ""),
            "elapsed_ms": (fmt(result.elapsed_ms[i])
                           if timing and i < len(result.elapsed_ms) else ""),
        }
        for c in extras:
            vals = result.extras[c]
            row[c] = fmt(vals[i]) if i < len(vals) else ""
        rows.append([row[c] for c in header])
    return header, rows


def trace_to_csv(result: RunResult, f_min: Optional[float] = None,
                 timing: bool = False) -> str:
    """CSV text of a trace; floats at 17 significant digits.

    ``elapsed_ms`` stays empty unless ``timing`` is set, so that identical
    runs produce byte-identical files.
    """
    header, rows = trace_rows(result, f_min, timing)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def read_trace_csv(path) -> dict[str, list]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        cols: dict[str, list] = {name: [] for name in reader.fieldnames}
        for row in reader:
            for k, v in row.items():
                cols[k].append(float(v) if v != "" else None)
    return cols


def weighted_average(points, weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    return np.tensordot(w, np.asarray(points, dtype=float), axes=1) / w.sum()
