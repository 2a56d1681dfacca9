"""Scan-bounded certification and refutation of exponential instability.

Every verdict in this package is relative to declared finite grids:
certificates are validated pointwise on the scan, refutations carry a
concrete witness, and nothing is extrapolated beyond the sampled times.
"""

from .certify import (BVCertificate, BVReport, DecayCertificate, DecayFit,
                      GrowthFunction, InstabilityCheck, NonuniformCertificate,
                      ScanGrids, UniformCertificate, WeakCertificate,
                      WeakResult, certify_weak, check_growth, check_nonuniform,
                      check_uniform, default_scan_grids,
                      exponential_to_growth, fit_decay, growth_to_exponential,
                      refute_bv, validate_weak)
from .datko import (DatkoVerdict, RatioSeries, SufficiencyConstants,
                    datko_ratio_scan, datko_verdict, discrete_sum_scan,
                    discrete_to_integral_bound, discrete_necessity_constant,
                    necessity_constant, sufficiency_constants)
from .errors import (AccuracyError, ConfigError, DivergenceNotObservedError,
                     EvostabError, InputError, IntegrationError,
                     OrderingError, PreconditionError)
from .lyapunov import (LyapunovTable, bound_constant, build_lyapunov,
                       lyapunov_to_datko, verify_lyapunov_bound,
                       verify_lyapunov_equation)
from .numerics import (DEFAULT_PANEL_WIDTH, CumulativeTable, LineFit,
                       fit_log_slope, log_integral_power, orbit_quad_grid,
                       quad_grid)
from .operators import (AxiomReport, ConstantLogProfile, EvolutionOperator,
                        LogMagnitude, OdeFlow, PlanarRotation, ScalarKernel,
                        SpikeLogProfile, corpus, default_axiom_tol,
                        export_trajectory_csv, load_operator,
                        operator_from_config, parse_key_values,
                        sample_unit_probes, verify_axioms)
from .serialize import (dump_report, json_ready, load_report_schema,
                        write_series_csv)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "AxiomReport", "BVCertificate", "BVReport",
    "ConfigError", "ConstantLogProfile", "CumulativeTable", "DatkoVerdict",
    "DecayCertificate", "DecayFit", "DEFAULT_PANEL_WIDTH",
    "DivergenceNotObservedError", "EvolutionOperator", "EvostabError",
    "GrowthFunction", "InputError", "InstabilityCheck", "IntegrationError",
    "LineFit", "LogMagnitude", "LyapunovTable", "NonuniformCertificate",
    "OdeFlow", "OrderingError", "PlanarRotation", "PreconditionError",
    "RatioSeries", "ScalarKernel", "ScanGrids", "SpikeLogProfile",
    "SufficiencyConstants", "UniformCertificate", "WeakCertificate",
    "WeakResult",
    "bound_constant", "build_lyapunov", "certify_weak", "check_growth",
    "check_nonuniform", "check_uniform", "corpus", "datko_ratio_scan",
    "datko_verdict", "default_axiom_tol", "default_scan_grids",
    "discrete_necessity_constant", "discrete_sum_scan",
    "discrete_to_integral_bound", "dump_report", "exponential_to_growth",
    "export_trajectory_csv", "fit_decay", "fit_log_slope",
    "growth_to_exponential", "json_ready", "load_operator",
    "load_report_schema", "log_integral_power", "lyapunov_to_datko",
    "necessity_constant", "operator_from_config", "orbit_quad_grid",
    "parse_key_values", "quad_grid", "refute_bv", "sample_unit_probes",
    "sufficiency_constants", "validate_weak", "verify_axioms",
    "verify_lyapunov_bound", "verify_lyapunov_equation",
    "write_series_csv",
]
