"""Numerics and verification harness for BC_n elliptic Selberg integral identities."""

from .errors import (
    ConfigurationError,
    DegenerateParameterError,
    DomainError,
    EllSelbergError,
    NonConvergenceError,
    PoleProximityError,
    SampleRejectionError,
    TruncationError,
)
from .qseries import (
    DEFAULT_POLICY,
    Nomes,
    TruncationPolicy,
    double_poch_inf,
    elliptic_gamma,
    elliptic_gamma_recip,
    gamma_pm,
    gamma_pm2,
    product_tail_bound,
    qpoch_inf,
    theta,
    theta_pm,
    theta_pm2,
)
from .invariants import (
    BalancingMode,
    ParameterSet,
    boundary_expectation_ratio,
    coefficient_c,
    e0_closed,
    en_closed,
    fundamental_invariant,
    phi_test_function,
)
from .integrand import (
    DomainClass,
    PoleSets,
    TorusPoint,
    c_constant,
    domain_classify,
    j_closed,
    pole_sets,
    psi,
    psi_tilde,
    qshift_ratio_a,
    qshift_ratio_z,
    w0_window,
)
from .quadrature import (
    QuadratureGrid,
    QuadResult,
    default_budget,
    expectation,
    nabla_expectation,
    nabla_quad,
    torus_integrate,
)
from .residues import (
    cn_recurrence_check,
    continued_integral_n1,
    lim_pinch_J,
    residue_gamma_pm,
    richardson_limit,
)
from .sampling import SafeBox, SampleStats, sample_da_parameters, sample_parameters
from .report import ScenarioReport, relative_error, write_report
from .config import Config, load_config, parse_config
from .scenarios import (
    SCENARIO_NAMES,
    make_continued,
    make_pinched,
    run_suite,
    scenario_dixon_anderson,
    scenario_eval_formula,
    scenario_nabla,
    scenario_pinch,
    scenario_qde,
    scenario_recurrence,
    scenario_recurrence_telescope,
)

__version__ = "0.1.0"
