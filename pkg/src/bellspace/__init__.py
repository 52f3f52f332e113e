"""Classical probability spaces for two-device, two-setting experiments.

Build a finite sample space from setting weights and conditional outcome
tables, query it exactly, check the locality/no-signaling conditions, evaluate
the CHSH bound family, decide joint-distribution existence, and simulate
reproducible trial streams.
"""

from .chsh import (
    TSIRELSON_BOUND,
    BoundCheck,
    ChshReport,
    CorrelationSet,
    CurvePoint,
    chsh_combination,
    chsh_report,
    correlations,
    weighted_chsh_curve,
)
from .errors import (
    BellspaceError,
    ConfigParseError,
    ConfigValidationError,
    CsvSchemaError,
    EmptyStreamError,
    InvalidDistributionError,
    MarginalInconsistencyError,
    NullConditioningError,
)
from .fine import (
    CHSH_BOUND,
    FineResult,
    chsh_inequality_values,
    fine_feasibility,
    joint_exists_by_inequalities,
)
from .locality import (
    ConditionalConsistencyReport,
    LocalityReport,
    conditional_marginal_consistency,
    detection_factorizations,
    marginal_consistency,
    remote_setting_independence,
    setting_independence,
)
from .montecarlo import (
    RNG_ALGORITHM,
    ConvergencePoint,
    EmpiricalEstimate,
    EventRecord,
    FrequencyEstimate,
    Trials,
    convergence_report,
    empirical_chsh,
    estimate,
    sample_trials,
)
from .quantum import (
    PHOTON,
    SPIN,
    AngleSettings,
    ScanResult,
    canonical_chsh_angles,
    predicted_correlations,
    singlet_table,
    tsirelson_scan,
)
from .queries import (
    ALWAYS,
    EventPredicate,
    IdentityLine,
    IdentityReport,
    conditional_probability,
    counterfactual_mass,
    detection_identities,
    nondetection_identities,
    observable_is,
    probability,
    setting_is,
    setting_is_not,
)
from .space import (
    A1,
    A2,
    B1,
    B2,
    DEFAULT_TOLERANCE,
    OBSERVABLES,
    Atom,
    ConditionalTable,
    ObservableId,
    SampleSpace,
    SettingDistribution,
    build_space,
    eval_generator,
    eval_observable,
)

__all__ = [
    # space
    "A1", "A2", "B1", "B2", "OBSERVABLES", "DEFAULT_TOLERANCE",
    "Atom", "ObservableId", "SettingDistribution", "ConditionalTable", "SampleSpace",
    "build_space", "eval_observable", "eval_generator",
    # queries
    "ALWAYS", "EventPredicate", "IdentityLine", "IdentityReport",
    "observable_is", "setting_is", "setting_is_not",
    "probability", "conditional_probability",
    "nondetection_identities", "detection_identities", "counterfactual_mass",
    # locality
    "LocalityReport", "ConditionalConsistencyReport",
    "setting_independence", "remote_setting_independence",
    "detection_factorizations", "marginal_consistency",
    "conditional_marginal_consistency",
    # chsh + fine
    "TSIRELSON_BOUND", "CHSH_BOUND", "CorrelationSet", "BoundCheck", "ChshReport",
    "CurvePoint", "FineResult",
    "correlations", "chsh_combination", "chsh_report", "weighted_chsh_curve",
    "fine_feasibility", "chsh_inequality_values", "joint_exists_by_inequalities",
    # montecarlo
    "RNG_ALGORITHM", "EventRecord", "FrequencyEstimate", "Trials",
    "EmpiricalEstimate", "ConvergencePoint",
    "sample_trials", "estimate", "convergence_report", "empirical_chsh",
    # quantum
    "PHOTON", "SPIN", "AngleSettings", "ScanResult",
    "canonical_chsh_angles", "predicted_correlations", "singlet_table", "tsirelson_scan",
    # errors
    "BellspaceError", "InvalidDistributionError", "NullConditioningError",
    "MarginalInconsistencyError", "EmptyStreamError", "CsvSchemaError",
    "ConfigParseError", "ConfigValidationError",
]
