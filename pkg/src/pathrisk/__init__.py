"""Acceptability indices and path-dependent risk measures for return paths."""

__version__ = "0.1.0"

from .paths import (  # noqa: E402
    Path,
    PathEnsemble,
    TimeGrid,
    drawdown_process,
    lattice_inf,
    lattice_sup,
    max_drawdown,
    r_inf_norm,
    running_max,
    running_min,
    sup_norm_star,
    terminal,
    time_average,
)
from .risk import (  # noqa: E402
    Distortion,
    EmpiricalDistribution,
    InsufficientTailSample,
    avar,
    avar_order_stat,
    distorted_expectation,
    process_risk,
    var,
    weighted_var,
)
from .acceptability import (  # noqa: E402
    IndexFamily,
    NonMonotoneFamily,
    UtilityFunction,
    alpha_sup,
    calmar,
    estimators_from_samples,
    expected_utility,
    raroc,
    raroc_family,
    sharpe_variants,
    ssd_check,
)
from .simulation import (  # noqa: E402
    BrownianParams,
    KouParams,
    SimConfig,
    simulate_bm,
    simulate_kou,
)
