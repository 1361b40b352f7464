"""Experiment configuration, verification reports and CSV/JSON output."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

STATISTICS = ("ks", "chi2", "max_residual", "abs_error")
REPORT_FIELDS = ("suite", "params", "statistic_name", "statistic_value", "threshold", "pass", "runtime_seconds")


@dataclass
class ExperimentConfig:
    """One suite invocation.  ``N`` and ``reps`` of ``None`` use the suite defaults."""

    suite: str
    N: int | None = None
    reps: int | None = None
    seed: int = 0
    params: dict = field(default_factory=dict)
    output_path: str | None = None

    def __post_init__(self) -> None:
        from .suites import SUITES

        if self.suite not in SUITES:
            raise KeyError(f"unknown suite {self.suite!r}; known: {', '.join(sorted(SUITES))}")
        if self.reps is not None and self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.N is not None and self.N < 1:
            raise ValueError("N must be >= 1")
        self.params = {str(k): float(v) for k, v in self.params.items()}


@dataclass
class VerificationReport:
    """Outcome of one suite; ``passed`` is derived from value and threshold."""

    suite: str
    params: dict
    statistic_name: str
    statistic_value: float
    threshold: float
    runtime_seconds: float = 0.0
    passed: bool = field(init=False)

    def __post_init__(self) -> None:
        if self.statistic_name not in STATISTICS:
            raise ValueError(f"statistic_name must be one of {STATISTICS}")
        self.statistic_value = float(self.statistic_value)
        self.threshold = float(self.threshold)
        # NaN never passes
        self.passed = bool(self.statistic_value <= self.threshold)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "statistic_name": self.statistic_name,
            "statistic_value": self.statistic_value,
            "threshold": self.threshold,
            "pass": self.passed,
            "runtime_seconds": float(self.runtime_seconds),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        if set(d) != set(REPORT_FIELDS):
            raise ValueError(f"report fields must be exactly {REPORT_FIELDS}")
        r = cls(d["suite"], dict(d["params"]), d["statistic_name"], d["statistic_value"], d["threshold"],
                d["runtime_seconds"])
        if r.passed != bool(d["pass"]):
            raise ValueError("pass flag disagrees with statistic_value <= threshold")
        return r

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (f"{tag} {self.suite}: {self.statistic_name}={self.statistic_value:.6g} "
                f"(threshold {self.threshold:.6g}, {self.runtime_seconds:.1f} s)")


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)) and not isinstance(v, bool):
        return int(v)
    if isinstance(v, np.ndarray):
        return v.tolist()
    return v


def _fmt(x: float) -> str:
    return "%.17g" % x


def _columns(data) -> tuple[list[str], list[np.ndarray]]:
    """Header names and real columns; complex values become re/im pairs."""
    if isinstance(data, dict):
        names, cols = [], []
        for k, v in data.items():
            v = np.asarray(v).ravel()
            if np.iscomplexobj(v):
                names += [f"{k}_re", f"{k}_im"]
                cols += [v.real, v.imag]
            else:
                names.append(str(k))
                cols.append(v.astype(float))
        n = {c.size for c in cols}
        if len(n) > 1:
            raise ValueError("all columns must have the same length")
        return names, cols
    a = np.asarray(data)
    if a.ndim == 1:
        a = a[None, :]
    if a.ndim != 2:
        raise ValueError("array data must be 1-D (one row) or 2-D (rows x values)")
    names, cols = ["index"], [np.arange(a.shape[0], dtype=float)]
    for j in range(a.shape[1]):
        if np.iscomplexobj(a):
            names += [f"re_{j + 1}", f"im_{j + 1}"]
            cols += [a[:, j].real, a[:, j].imag]
        else:
            names.append(f"x_{j + 1}")
            cols.append(a[:, j].astype(float))
    return names, cols


def emit(data, format: str, path) -> None:
    """Write ``data`` as CSV or JSON.

    CSV accepts a dict of equal-length columns or an array (1-D is one row,
    2-D is one row per replica, with a leading ``index`` column); reals are
    written with 17 significant digits and complex values as re/im column
    pairs.  JSON accepts a :class:`VerificationReport` and writes exactly its
    schema fields.

    Raises
    ------
    OSError
        The path is not writable; the message names the path.
    """
    path = Path(path)
    try:
        if format == "json":
            if not isinstance(data, VerificationReport):
                raise TypeError("JSON output takes a VerificationReport")
            text = json.dumps(data.to_dict(), indent=2, sort_keys=False) + "\n"
            path.write_text(text)
        elif format == "csv":
            names, cols = _columns(data)
            with path.open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(names)
                for row in zip(*cols):
                    w.writerow([_fmt(v) for v in row])
        else:
            raise ValueError("format must be 'csv' or 'json'")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Header and float matrix of a CSV written by :func:`emit`."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    body = np.array([[float(v) for v in r] for r in rows[1:]]) if len(rows) > 1 else np.empty((0, len(header)))
    return header, body


def read_report(path) -> VerificationReport:
    d = json.loads(Path(path).read_text())
    return VerificationReport.from_dict(d)
