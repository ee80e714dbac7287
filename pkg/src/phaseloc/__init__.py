"""Phase-space distributions, entropic localisation measures and the norm
inequalities relating them, for single-mode bosonic states in a truncated
Fock basis."""

from .battery import DEFAULT_BATTERY
from .engine import (
    Estimate,
    PhaseGrid,
    PhaseSpaceField,
    auto_grid,
    char_function,
    field_from_char,
    grid_pnorm,
    grid_product_trace,
    husimi_q,
    integrate,
    order_smooth,
    wigner_via_char,
    wigner_w,
)
from .errors import ConfigError, GridError, NumericalValidityError, PhaseLocError, TruncationWarning
from .fock import (
    DensityMatrix,
    SqueezeParam,
    displacement_op,
    make_ladder_ops,
    make_state,
    parse_descriptor,
    purity,
    squeeze_interchange,
    squeezing_op,
)
from .gaussian import ExponentTriple, GaussianFn, bbl_bound, bbl_constant, gauss_convolve, gauss_pnorm
from .inequalities import BatteryConfig, InequalityVerdict, run_battery, summarize
from .measures import (
    MeasureConfig,
    MeasureReport,
    StateAnalysis,
    build_measure_report,
    nonclassicality,
    renyi_wehrl,
    suessmann,
    wehrl_entropy,
)

__version__ = "0.1.0"
