"""Kernel specification test of the random-walk null in nonlinear autoregression."""

from .bootstrap import (
    BootstrapSpec,
    CriticalValue,
    Innovation,
    Scheme,
    SizePowerCurve,
    SizePowerRow,
    bootstrap_distribution,
    bootstrap_resample,
    critical_value,
    p_value,
    select_bandwidth,
    size_power,
)
from .errors import (
    BandwidthTooSmallError,
    ConfigError,
    CsvParseError,
    DegenerateRegressorError,
    DegenerateStatisticError,
    ExplosionError,
    NoAdmissibleBandwidthError,
    NoSupportError,
    SeriesTooShortError,
    UnitRootTestError,
)
from .kernels import (
    Kernel,
    admissible_window,
    bandwidth_ladder,
    epanechnikov_kernel,
    get_kernel,
    uniform_kernel,
)
from .nw import NwFit, cv_bandwidth, delta_hat, nw_fit, nw_weights
from .series import (
    CustomShift,
    LinearShift,
    NonlinearShift,
    RandomWalk,
    RngStream,
    Series,
    ingest_csv,
    series_to_csv,
    sigma_u_hat,
    simulate,
)
from .stats import (
    DfOutcome,
    TestOutcome,
    dickey_fuller,
    l_stat,
    m_stat,
    n_stat,
    sigma_hat_sq,
    theoretical_variance,
)

__version__ = "0.1.0"
