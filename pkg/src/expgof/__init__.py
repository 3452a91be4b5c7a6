"""Weighted-L2 goodness-of-fit tests for exponentiality.

Scale-free tests built on the characterization that X and |X1 - X2|
share a distribution exactly when X is exponential.  The package
provides the test statistic, its asymptotic eigenvalue analysis, local
Bahadur efficiency computations, Monte Carlo critical values and power
studies, and a data-driven choice of the tuning parameter.
"""

from .datasets import get_dataset
from .efficiency import (
    AlternativeModel,
    b_curvature,
    efficiency_curve,
    get_model,
    local_efficiency,
    lrt_slope,
)
from .montecarlo import (
    PowerAlternative,
    RngStream,
    TestOutcome,
    critical_value,
    p_value,
    parse_alternative,
    power,
    power_datadriven,
    run_test,
    sample_alternative,
    sample_null,
    select_tuning,
)
from .special import expi, h2_tilde
from .spectral import SpectralConfig, SpectralResult, build_operator_matrix, delta1, largest_eigenvalue
from .statistic import (
    kernel_h,
    scale_sample,
    statistic_fast,
    statistic_from_raw,
    statistic_naive,
)

__version__ = "0.1.0"

__all__ = [
    "AlternativeModel",
    "PowerAlternative",
    "RngStream",
    "SpectralConfig",
    "SpectralResult",
    "TestOutcome",
    "b_curvature",
    "build_operator_matrix",
    "critical_value",
    "delta1",
    "efficiency_curve",
    "expi",
    "get_dataset",
    "get_model",
    "h2_tilde",
    "kernel_h",
    "largest_eigenvalue",
    "local_efficiency",
    "lrt_slope",
    "p_value",
    "parse_alternative",
    "power",
    "power_datadriven",
    "run_test",
    "sample_alternative",
    "sample_null",
    "scale_sample",
    "select_tuning",
    "statistic_fast",
    "statistic_from_raw",
    "statistic_naive",
]
