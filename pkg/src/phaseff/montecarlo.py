"""Time-domain stochastic oracle for the feed-forward network.

Each noise mode is drawn as unit-variance white Gaussian samples, so the
averaged periodogram of a bare vacuum mode reads 1.0 in every bin: PSD bins
are directly in vacuum units and compare 1:1 against the analytic spectra.
A sinusoid of amplitude a centred on an interior bin of an m-sample segment
adds a^2 * m / 4 to that bin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy import signal as _signal

from .algebra import NoiseMode
from .network import NetworkParams, spectrum_from_modes

MIN_SAMPLES = 2**14

# Row order of the white-noise draw matrix; fixed so (seed, trial) pins the
# entire realization.
_MODE_ORDER = tuple(NoiseMode)


@dataclass(frozen=True)
class FlatKernel:
    """Instantaneous feed-forward: correction = gain * photocurrent."""


@dataclass(frozen=True)
class BandpassKernel:
    """Causal second-order resonator with peak response `gain` at `center_hz`.

    Models feed-forward electronics that only act in a band around the
    analysis frequency.  bandwidth_hz is the -3 dB width of the peak.
    """

    center_hz: float
    bandwidth_hz: float
    gain: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.center_hz) and self.center_hz > 0.0):
            raise ValueError(f"center_hz must be > 0, got {self.center_hz!r}")
        if not (math.isfinite(self.bandwidth_hz) and self.bandwidth_hz > 0.0):
            raise ValueError(f"bandwidth_hz must be > 0, got {self.bandwidth_hz!r}")
        if not math.isfinite(self.gain):
            raise ValueError(f"gain must be finite, got {self.gain!r}")


Kernel = Union[FlatKernel, BandpassKernel]


@dataclass(frozen=True)
class SimConfig:
    """One Monte Carlo run.

    The optional coherent tone (signal_amplitude, signal_frequency) rides on
    the input phase quadrature on top of its stochastic variance.  The seed
    and a per-call trial index select independent, reproducible noise
    realizations.
    """

    params: NetworkParams
    sample_rate: float
    duration: float
    signal_frequency: float = 0.0
    signal_amplitude: float = 0.0
    kernel: Kernel = field(default_factory=FlatKernel)
    seed: int = 0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sample_rate) and self.sample_rate > 0.0):
            raise ValueError(f"sample_rate must be > 0, got {self.sample_rate!r}")
        if not (math.isfinite(self.duration) and self.duration > 0.0):
            raise ValueError(f"duration must be > 0, got {self.duration!r}")
        if not (math.isfinite(self.signal_frequency) and self.signal_frequency >= 0.0):
            raise ValueError(f"signal_frequency must be >= 0, got {self.signal_frequency!r}")
        if not (math.isfinite(self.signal_amplitude) and self.signal_amplitude >= 0.0):
            raise ValueError(f"signal_amplitude must be >= 0, got {self.signal_amplitude!r}")
        if self.signal_frequency >= self.sample_rate / 2.0:
            raise ValueError(
                f"signal_frequency {self.signal_frequency} Hz is at or above "
                f"Nyquist ({self.sample_rate / 2.0} Hz)"
            )
        if self.n_samples < MIN_SAMPLES:
            raise ValueError(
                f"run too short: {self.n_samples} samples, need at least {MIN_SAMPLES}"
            )
        if not isinstance(self.kernel, (FlatKernel, BandpassKernel)):
            raise ValueError(f"unknown kernel type {type(self.kernel).__name__}")
        if isinstance(self.kernel, FlatKernel) and self.params.gain.imag != 0.0:
            raise ValueError("time-domain runs with the flat kernel need a real gain")
        if isinstance(self.kernel, BandpassKernel) and (
            self.kernel.center_hz >= self.sample_rate / 2.0
        ):
            raise ValueError("bandpass center must lie below Nyquist")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ValueError(f"seed must be an integer in [0, 2^64), got {self.seed!r}")

    @property
    def n_samples(self) -> int:
        return int(round(self.duration * self.sample_rate))


def _substream(seed: int, trial: int) -> np.random.Generator:
    """Counter-based generator keyed on (seed, trial): distinct trials give
    independent streams without sequential state."""
    if not (isinstance(trial, int) and 0 <= trial < 2**64):
        raise ValueError(f"trial must be an integer in [0, 2^64), got {trial!r}")
    key = np.array([seed, trial], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True, eq=False)
class QuadratureStreams:
    """Output-beam quadrature time series, vacuum units."""

    amplitude: np.ndarray
    phase: np.ndarray
    sample_rate: float

    def at_angle(self, phi: float) -> np.ndarray:
        """Projection cos(phi)*amplitude + sin(phi)*phase."""
        phi = float(phi)
        return math.cos(phi) * self.amplitude + math.sin(phi) * self.phase


def apply_kernel(
    kernel: Kernel,
    photocurrent: np.ndarray,
    params: NetworkParams,
    sample_rate: float,
) -> np.ndarray:
    """Feed-forward electronics acting on the photocurrent.

    The flat kernel is a pure scale by the network gain.  The bandpass kernel
    is a causal IIR resonator (scipy's peak filter), so its output at sample
    n depends only on samples <= n.
    """
    photocurrent = np.asarray(photocurrent, dtype=float)
    if isinstance(kernel, FlatKernel):
        if params.gain.imag != 0.0:
            raise ValueError("flat kernel needs a real gain")
        return params.gain.real * photocurrent
    if isinstance(kernel, BandpassKernel):
        q_factor = kernel.center_hz / kernel.bandwidth_hz
        b, a = _signal.iirpeak(kernel.center_hz, q_factor, fs=sample_rate)
        return kernel.gain * _signal.lfilter(b, a, photocurrent)
    raise TypeError(f"unknown kernel type {type(kernel).__name__}")


def simulate_streams(config: SimConfig, trial: int = 0) -> QuadratureStreams:
    """Generate one realization of the output quadrature streams.

    Draws the seven noise modes as unit-variance white series, scales the
    input phase to v_phase_in (adding the coherent tone if configured),
    assembles the homodyne photocurrent with its efficiency-weighted vacuum
    contributions, runs it through the kernel, and applies the correction to
    the transmitted beam's phase quadrature.
    """
    p = config.params
    n = config.n_samples
    rng = _substream(config.seed, trial)
    draws = rng.standard_normal((len(_MODE_ORDER), n))
    rows = {mode: draws[i] for i, mode in enumerate(_MODE_ORDER)}

    eps = p.epsilon
    eh, ed = p.eta_h1, p.eta_d1

    x_phase_in = math.sqrt(p.v_phase_in) * rows[NoiseMode.INPUT_PHASE]
    if config.signal_amplitude > 0.0:
        t = np.arange(n) / config.sample_rate
        x_phase_in = x_phase_in + config.signal_amplitude * np.sin(
            2.0 * math.pi * config.signal_frequency * t
        )

    photocurrent = (
        math.sqrt(eh * ed * (1.0 - eps)) * x_phase_in
        + math.sqrt(ed * eh * eps) * rows[NoiseMode.TAP_VACUUM_PHASE]
        + math.sqrt(ed * (1.0 - eh)) * rows[NoiseMode.HOMODYNE_MISMATCH_PHASE]
        + math.sqrt((1.0 - ed) / 2.0)
        * (rows[NoiseMode.DETECTOR_VACUUM_1] + rows[NoiseMode.DETECTOR_VACUUM_2])
    )
    correction = apply_kernel(config.kernel, photocurrent, p, config.sample_rate)

    amplitude = math.sqrt(eps) * rows[NoiseMode.INPUT_AMPLITUDE] - math.sqrt(
        1.0 - eps
    ) * rows[NoiseMode.TAP_VACUUM_AMPLITUDE]
    phase = (
        math.sqrt(eps) * x_phase_in
        - math.sqrt(1.0 - eps) * rows[NoiseMode.TAP_VACUUM_PHASE]
        + correction
    )
    return QuadratureStreams(amplitude=amplitude, phase=phase, sample_rate=config.sample_rate)


@dataclass(frozen=True, eq=False)
class PsdEstimate:
    """Averaged periodogram with per-bin standard errors, vacuum units."""

    frequencies: np.ndarray
    variance: np.ndarray
    standard_error: np.ndarray


def estimate_psd(series, sample_rate: float, segment_count: int = 64) -> PsdEstimate:
    """Averaged periodogram over non-overlapping rectangular segments.

    Normalization: |rfft(segment)|^2 / m, so a unit-variance white input
    averages to 1.0 in every bin and a sinusoid of amplitude a centred on an
    interior bin contributes a^2 * m / 4 (m = segment length).  Standard
    errors come from the scatter of the per-segment periodograms.
    """
    series = np.asarray(series, dtype=float)
    if series.ndim != 1:
        raise ValueError(f"series must be 1-D, got shape {series.shape}")
    if not (isinstance(segment_count, int) and segment_count >= 8):
        raise ValueError(f"segment_count must be an integer >= 8, got {segment_count!r}")
    if not (math.isfinite(sample_rate) and sample_rate > 0.0):
        raise ValueError(f"sample_rate must be > 0, got {sample_rate!r}")
    seg_len = series.size // segment_count
    if seg_len < 1024:
        raise ValueError(
            f"series too short: {series.size} samples over {segment_count} segments "
            f"leaves {seg_len} per segment, need at least 1024"
        )
    segments = series[: seg_len * segment_count].reshape(segment_count, seg_len)
    periodograms = np.abs(np.fft.rfft(segments, axis=1)) ** 2 / seg_len
    variance = periodograms.mean(axis=0)
    standard_error = periodograms.std(axis=0, ddof=1) / math.sqrt(segment_count)
    frequencies = np.fft.rfftfreq(seg_len, d=1.0 / sample_rate)
    return PsdEstimate(
        frequencies=frequencies, variance=variance, standard_error=standard_error
    )


def band_average(
    estimate: PsdEstimate,
    exclude_hz: float | None = None,
    exclude_width_hz: float = 0.0,
) -> tuple[float, float]:
    """Mean PSD over interior bins, with a combined standard error.

    DC and Nyquist are always dropped; bins within exclude_width_hz of
    exclude_hz (a coherent tone) can be masked out too.  Bins are treated as
    independent, which is exact for white input.
    """
    n_bins = estimate.variance.size
    if n_bins < 3:
        raise ValueError("estimate has no interior bins")
    mask = np.ones(n_bins, dtype=bool)
    mask[0] = mask[-1] = False
    if exclude_hz is not None:
        mask &= np.abs(estimate.frequencies - exclude_hz) > exclude_width_hz
    kept = int(mask.sum())
    if kept == 0:
        raise ValueError("exclusion mask removed every bin")
    mean = float(estimate.variance[mask].mean())
    se = float(np.sqrt(np.sum(estimate.standard_error[mask] ** 2)) / kept)
    return mean, se


@dataclass(frozen=True)
class OracleRow:
    """One angle's Monte Carlo / analytic comparison."""

    phi: float
    mc_variance: float
    standard_error: float
    analytic_variance: float
    n_sigma: float
    within_tolerance: bool


@dataclass(frozen=True)
class OracleReport:
    rows: tuple[OracleRow, ...]
    segment_count: int
    samples_per_run: int

    @property
    def all_pass(self) -> bool:
        return all(row.within_tolerance for row in self.rows)


def oracle_compare(
    config: SimConfig,
    angles: Sequence[float],
    segment_count: int = 64,
    n_sigma: float = 3.0,
) -> OracleReport:
    """Band-averaged Monte Carlo spectra against the analytic model.

    Runs one independent realization per angle (trial index = position in
    `angles`), band-averages its PSD, and flags each row by how many standard
    errors it sits from spectrum_from_modes.  Requires the flat kernel, since
    the analytic model is single-frequency.  A configured tone is masked out
    of the band average.
    """
    if not isinstance(config.kernel, FlatKernel):
        raise ValueError("analytic comparison requires the flat kernel")
    if not (math.isfinite(n_sigma) and n_sigma > 0.0):
        raise ValueError(f"n_sigma must be > 0, got {n_sigma!r}")
    rows = []
    for trial, phi in enumerate(angles):
        streams = simulate_streams(config, trial=trial)
        estimate = estimate_psd(
            streams.at_angle(phi), config.sample_rate, segment_count=segment_count
        )
        if config.signal_amplitude > 0.0:
            bin_width = float(estimate.frequencies[1])
            mc, se = band_average(
                estimate,
                exclude_hz=config.signal_frequency,
                exclude_width_hz=3.0 * bin_width,
            )
        else:
            mc, se = band_average(estimate)
        analytic = float(spectrum_from_modes(config.params, phi))
        gap = abs(mc - analytic)
        z = gap / se if se > 0.0 else (0.0 if gap == 0.0 else math.inf)
        rows.append(
            OracleRow(
                phi=float(phi),
                mc_variance=mc,
                standard_error=se,
                analytic_variance=analytic,
                n_sigma=z,
                within_tolerance=z <= n_sigma,
            )
        )
    return OracleReport(
        rows=tuple(rows), segment_count=segment_count, samples_per_run=config.n_samples
    )
