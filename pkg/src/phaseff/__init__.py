"""Noise budget engine for electro-optic phase feed-forward amplification.

Analytic quadrature spectra and SNR transfer for a tap/measure/modulate
network, a time-domain Monte Carlo oracle, and a CLI for sweeps, gain fits,
and SNR inference.  All variances are relative to the vacuum level.
"""

from .algebra import (
    NoiseMode,
    QuadratureExpansion,
    SourceVariances,
    db_from_linear,
    linear_from_db,
    scale_add,
    variance_of,
)
from .cli import (
    FitResult,
    RunConfig,
    SnrSettings,
    SweepTrace,
    emit,
    fit_gain,
    load_config,
    load_report_json,
    load_trace_csv,
    main,
    report_snr,
    run_sweep,
)
from .montecarlo import (
    BandpassKernel,
    FlatKernel,
    OracleReport,
    OracleRow,
    PsdEstimate,
    QuadratureStreams,
    SimConfig,
    apply_kernel,
    band_average,
    estimate_psd,
    oracle_compare,
    simulate_streams,
)
from .network import (
    NetworkParams,
    SnrInference,
    SnrReport,
    detected_variance,
    ideal_gain,
    infer_snr,
    max_transfer_ratio,
    optimal_gain,
    output_expansion,
    phase_variance,
    pia_transfer_ratio,
    signal_power_gain,
    spectrum_closed_form,
    spectrum_from_modes,
    transfer_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "BandpassKernel",
    "FitResult",
    "FlatKernel",
    "NetworkParams",
    "NoiseMode",
    "OracleReport",
    "OracleRow",
    "PsdEstimate",
    "QuadratureExpansion",
    "QuadratureStreams",
    "RunConfig",
    "SimConfig",
    "SnrInference",
    "SnrReport",
    "SnrSettings",
    "SourceVariances",
    "SweepTrace",
    "apply_kernel",
    "band_average",
    "db_from_linear",
    "detected_variance",
    "emit",
    "estimate_psd",
    "fit_gain",
    "ideal_gain",
    "infer_snr",
    "linear_from_db",
    "load_config",
    "load_report_json",
    "load_trace_csv",
    "main",
    "max_transfer_ratio",
    "optimal_gain",
    "oracle_compare",
    "output_expansion",
    "phase_variance",
    "pia_transfer_ratio",
    "report_snr",
    "run_sweep",
    "scale_add",
    "signal_power_gain",
    "simulate_streams",
    "spectrum_closed_form",
    "spectrum_from_modes",
    "transfer_ratio",
    "variance_of",
]
