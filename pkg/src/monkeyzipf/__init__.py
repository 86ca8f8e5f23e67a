"""Monkey-at-the-typewriter word frequencies with arbitrary letter probabilities."""

__version__ = "0.1.0"

from .errors import BoundViolation, DegenerateSampleError, ResourceError
from .keyboard import (
    DistributionKind,
    DistributionSpec,
    Keyboard,
    SpacingsSample,
    alphas,
    keyboard_from_spacings,
    miller_keyboard,
    sample_spacings,
)
from .exponent import ExponentReport, compute_b, miller_exponent, solve_root
from .enumeration import (
    CountReport,
    CountingTable,
    RankedWord,
    Word,
    brute_force_top_n,
    count_N,
    top_n,
    verify_csiszar_bounds,
    verify_rank_bounds,
)
from .analysis import (
    EULER_GAMMA,
    LogLogSeries,
    ShaoHahnReport,
    convergence_sweep,
    figure1_data,
    fit_loglog_slope,
    shao_hahn_statistic,
    verify_proposition1,
)
