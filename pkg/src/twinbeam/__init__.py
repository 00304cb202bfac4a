"""Twin-beam generation by four-wave mixing and a quantum beam splitter.

Gaussian two-mode states and channels carry the quantum noise; the
gemellity metric certifies twin correlations of possibly unbalanced
beams.  A lumped amplifier-plus-loss model sets the benchmark at unit
total transmission, slab propagation handles distributed gain and
loss, a dressed four-level atom supplies the microscopic gain curves,
and the traces module turns measured spectra into the same metrics.
"""

from .atomic import (
    AtomicParams,
    BeamSplitterPoint,
    CouplingMatrix,
    GainCurve,
    find_beam_splitter_point,
    find_raman_dip,
    gain_curves,
    optical_depth,
    pair_output,
    sideband_response,
    steady_state,
    vapor_density,
)
from .configio import ConfigError
from .gaussian import (
    CovarianceState,
    GaussianChannel,
    amplifier_channel,
    apply,
    coherent_input,
    compose,
    compose_power,
    cp_defect,
    loss_channel,
    minimal_noise_channel,
    rotation_channel,
    transfer_from_mode_matrix,
    uncertainty_defect,
    vacuum_state,
)
from .lumped import (
    CascadeResult,
    LumpedConfig,
    OptimumResult,
    cascade,
    cascade_state,
    constrain_unit_transmission,
    optimize_unit_transmission,
    probe_loss_balancing_curve,
)
from .metrics import (
    InferenceResult,
    NoiseFigures,
    balanced_difference_noise,
    db_from_linear,
    electronic_noise_correction,
    gemellity,
    gemellity_db,
    infer_from_measurement,
    linear_from_db,
    noise_figures,
    optimal_weights,
    weighted_difference_noise,
)
from .propagation import (
    PropagationResult,
    SearchResult,
    Slab,
    SlabProfile,
    load_profile,
    propagate,
    propagate_coupling,
    refine_until_converged,
    save_profile,
    search_beyond_lumped_limit,
)
from .traces import (
    PowerRecord,
    SpectrumTrace,
    TraceAnalysis,
    analyze_traces,
    load_traces,
    measured_gemellity,
    normalize_to_sql,
    parse_traces,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "AtomicParams",
    "BeamSplitterPoint",
    "CascadeResult",
    "ConfigError",
    "CouplingMatrix",
    "CovarianceState",
    "GainCurve",
    "GaussianChannel",
    "InferenceResult",
    "LumpedConfig",
    "NoiseFigures",
    "OptimumResult",
    "PowerRecord",
    "PropagationResult",
    "SearchResult",
    "Slab",
    "SlabProfile",
    "SpectrumTrace",
    "TraceAnalysis",
    "amplifier_channel",
    "analyze_traces",
    "apply",
    "balanced_difference_noise",
    "cascade",
    "cascade_state",
    "coherent_input",
    "compose",
    "compose_power",
    "constrain_unit_transmission",
    "cp_defect",
    "db_from_linear",
    "electronic_noise_correction",
    "find_beam_splitter_point",
    "find_raman_dip",
    "gain_curves",
    "gemellity",
    "gemellity_db",
    "infer_from_measurement",
    "linear_from_db",
    "load_profile",
    "load_traces",
    "loss_channel",
    "measured_gemellity",
    "minimal_noise_channel",
    "noise_figures",
    "normalize_to_sql",
    "optical_depth",
    "optimal_weights",
    "optimize_unit_transmission",
    "pair_output",
    "parse_traces",
    "probe_loss_balancing_curve",
    "propagate",
    "propagate_coupling",
    "refine_until_converged",
    "rotation_channel",
    "save_profile",
    "search_beyond_lumped_limit",
    "sideband_response",
    "steady_state",
    "transfer_from_mode_matrix",
    "uncertainty_defect",
    "vacuum_state",
    "vapor_density",
    "weighted_difference_noise",
]
