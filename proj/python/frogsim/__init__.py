"""Python bindings for the frog model simulator."""

import json

from ._core import (
    __version__,
    compute_ustar,
    criterion_ids,
    criterion_title,
    discretize_uniform,
    ks_one_sample_uniform,
    sample_J,
    sample_W,
    simulate,
    survival_mass_analytic,
    wake_threshold,
    wake_threshold_cdf,
)
from ._core import run_criterion as _run_criterion


def run_criterion(cid, seed=20240611, threads=0):
    """Runs one acceptance criterion and returns its report as a dict."""
    return json.loads(_run_criterion(cid, seed, threads))


__all__ = [
    "__version__",
    "compute_ustar",
    "criterion_ids",
    "criterion_title",
    "discretize_uniform",
    "ks_one_sample_uniform",
    "run_criterion",
    "sample_J",
    "sample_W",
    "simulate",
    "survival_mass_analytic",
    "wake_threshold",
    "wake_threshold_cdf",
]
