"""Experiment orchestration, statistics and serialization.

====================  ==================================================
``run_suite``         run a named verification suite
``ks_test``           one-sample Kolmogorov-Smirnov distance
``ks_2samp``          two-sample Kolmogorov-Smirnov distance
``emit``              CSV / JSON output
``Histogram``         binned counts
====================  ==================================================
"""
from __future__ import annotations

from .report import ExperimentConfig, VerificationReport, emit, read_csv, read_report
from .stats import Histogram, ks_2samp, ks_test
from .suites import SUITES, ResourceLimitExceeded, reproducing_integral, run_suite

__all__ = [
    "ExperimentConfig", "VerificationReport", "emit", "read_csv", "read_report", "Histogram", "ks_2samp",
    "ks_test", "SUITES", "ResourceLimitExceeded", "reproducing_integral", "run_suite",
]
