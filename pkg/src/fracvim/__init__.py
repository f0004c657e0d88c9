"""Variational-iteration series solutions of a time-fractional diffusion equation."""

from fracvim.specfun import MLParams, gamma, log_gamma, mittag_leffler
from fracvim.fracops import (
    FracOrder,
    TimePowerTerm,
    caputo_numeric,
    jt_power_rule,
    jt_power_rule_n,
    power_rule_derivative,
    rl_integral_numeric,
)
from fracvim.spatial import (
    LinearOperator,
    SpatialAtom,
    SpatialFunction,
    apply_operator,
    apply_operator_n,
    differentiate,
    evaluate,
)
from fracvim.vim import (
    ProblemSpec,
    SolutionSeries,
    SourceSeries,
    classical_solution,
    correction_term,
    evaluate_solution,
    exact_sinusoidal,
    residual,
    sinusoidal_problem,
    truncated_solution,
)
from fracvim.analysis import (
    ErrorRecord,
    convergence_rate,
    min_terms,
    relative_error,
    table_sweep,
)

__version__ = "0.1.0"
