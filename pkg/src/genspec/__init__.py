"""Generalized-spectrum toolkit for heavy-tailed and count time series.

Closed-form characteristic-function spectra for six model families,
smoothing-free minimum-distance estimation, subsampling tests, and median
forecasting for heavy-tailed counts.
"""

from .dists import (
    DiscreteStableParams,
    Pmf,
    TailCapError,
    discrete_stable_pmf,
    sample_discrete_stable,
)
from .empirical import (
    Grid,
    adjustment_A,
    bias_B,
    criterion_D,
    dft_kernels,
    gof_statistic,
    periodogram_value,
    spectrum_table,
)
from .estimate import Estimate, ParamSpace, SearchConfig, default_space, fit
from .forecast import (
    evaluate_mspe,
    hill_estimator,
    hill_sequence,
    median_predict_inar,
    predictions_inar,
    transition_pmf,
)
from .infer import (
    TestReport,
    gof_test,
    invertibility_test,
    parameter_test,
    subsample_pvalue,
    subsample_statistics,
    unit_root_test,
)
from .models import (
    COUNT_FAMILIES,
    FAMILIES,
    ModelSpec,
    coeff_tensor,
    eval_spectrum,
    fourier_coeff,
    inar_marginal,
    spectrum_lattice,
)
from .simulate import simulate_inar_changepoint, simulate_path

__version__ = "0.1.0"

__all__ = [
    "COUNT_FAMILIES",
    "DiscreteStableParams",
    "Estimate",
    "FAMILIES",
    "Grid",
    "ModelSpec",
    "ParamSpace",
    "Pmf",
    "SearchConfig",
    "TailCapError",
    "TestReport",
    "adjustment_A",
    "bias_B",
    "coeff_tensor",
    "criterion_D",
    "default_space",
    "dft_kernels",
    "discrete_stable_pmf",
    "eval_spectrum",
    "evaluate_mspe",
    "fit",
    "fourier_coeff",
    "gof_statistic",
    "gof_test",
    "hill_estimator",
    "hill_sequence",
    "inar_marginal",
    "invertibility_test",
    "median_predict_inar",
    "parameter_test",
    "periodogram_value",
    "predictions_inar",
    "sample_discrete_stable",
    "simulate_inar_changepoint",
    "simulate_path",
    "spectrum_lattice",
    "spectrum_table",
    "subsample_pvalue",
    "subsample_statistics",
    "transition_pmf",
    "unit_root_test",
]
