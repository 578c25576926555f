"""Exact and approximate singular spectra of 2-D convolutional layers."""

__version__ = "0.1.0"

from .approximation import (
    ErrorReport,
    QuantileConfig,
    QuantileModel,
    circular_spectrum,
    compare_methods,
    exact_layer_spectrum,
    first_value_error,
    overall_error,
    quantile_spectrum,
    uniform_sampling_spectrum,
)
from .bounds import BoundReport, bound_one_inf, bound_report, bound_reshape, bound_sum_blocks
from .core import (
    ConvFilter,
    ConvLayer,
    DenseOperator,
    InputGeometry,
    PaddingSpec,
    SingularSpectrum,
    default_padding,
    make_layer,
    validate_filter,
)
from .density import (
    GridSamples,
    SpectralDensity,
    compose_symbols,
    eval_F,
    make_density,
    sample_grid,
)
from .operators import build_A, build_C, build_CA, build_T, build_T_strided
from .svd import exact_spectrum, power_sigma_max, sigma_max_gradient, svd
