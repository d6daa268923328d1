"""cflab: high-precision constants from integer sequences, their continued
fractions, and irrationality/normality statistics."""

__version__ = "0.1.0"

from cflab.catalog import (
    EULER_GAMMA,
    MersenneCatalog,
    SequenceSpec,
    WagstaffFit,
    default_catalog,
    load_catalog,
    mersenne_number,
    parse_catalog,
    wagstaff_fit,
)
from cflab.contfrac import (
    CFExpansion,
    ConvergentStream,
    available_kernels,
    cf_expand_certified,
    cf_expand_paper,
    cf_expand_rational,
    cf_from_quotient_sequence,
    convergent_list,
    convergents,
    error_bounds,
    from_cf,
)
from cflab.diagnostics import (
    DiagnosticReport,
    adamczewski_bugeaud_stat,
    build_report,
    davenport_roth_stat,
    khinchin_B_check,
    sondow_epsilon,
    sondow_epsilon_limit,
    tsr_delta,
    wagstaff_c,
    wagstaff_lower_bound_check,
)
from cflab.errors import (
    CatalogError,
    CertificationError,
    CflabError,
    CheckpointError,
    ConfigError,
    PrecisionError,
)
from cflab.exact import (
    BigRational,
    DecimalApprox,
    digit_census,
    log_of_bigint,
    reciprocal_sum,
    to_decimal,
)
from cflab.runner import StatsConfig, StatsRun
from cflab.stats import (
    GaussKuzminHistogram,
    StatSeries,
    gauss_kuzmin_histogram,
    gauss_kuzmin_theoretical,
    khinchin_constant,
    khinchin_estimate,
    levy_constant,
    power_law_fit,
    record_indices,
    running_khinchin,
    running_levy,
    sign_changes,
)

__all__ = [name for name in dir() if not name.startswith("_")]
