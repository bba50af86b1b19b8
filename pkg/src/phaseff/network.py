"""Analytic model of the phase feed-forward amplifier.

Layout: a beamsplitter sends a fraction 1-epsilon of the input beam to a
phase homodyne (mode match eta_h1, detector efficiency eta_d1).  The
photocurrent, scaled by an electronic gain, drives a phase modulator on the
transmitted fraction epsilon.  A second homodyne stage of combined efficiency
eta_det2 verifies the output.

All quadrature variances are in units of the vacuum variance; the input
phase quadrature may carry an excess variance v_phase_in >= 1, which is
where any phase signal lives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .algebra import (
    NoiseMode,
    QuadratureExpansion,
    SourceVariances,
    linear_from_db,
    variance_of,
)


@dataclass(frozen=True)
class NetworkParams:
    """Physical settings of one feed-forward run.

    epsilon         beamsplitter transmissivity toward the modulator arm
    eta_h1, eta_d1  in-loop homodyne mode match and detector quantum efficiency
    gain            electronic feed-forward gain (real in hardware, complex
                    values are accepted by the analytic formulas)
    v_phase_in      input phase variance, signal included, relative to vacuum
    eta_det2        combined efficiency of the verification stage
    """

    epsilon: float
    eta_h1: float
    eta_d1: float
    gain: complex
    v_phase_in: float = 1.0
    eta_det2: float = 1.0

    def __post_init__(self) -> None:
        for name in ("epsilon", "eta_h1", "eta_d1", "eta_det2"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and 0.0 < value <= 1.0):
                raise ValueError(f"{name} must be in (0, 1], got {getattr(self, name)!r}")
            object.__setattr__(self, name, value)
        g = complex(self.gain)
        if not (math.isfinite(g.real) and math.isfinite(g.imag)):
            raise ValueError(f"gain must be finite, got {self.gain!r}")
        object.__setattr__(self, "gain", g)
        v = float(self.v_phase_in)
        if not (math.isfinite(v) and v >= 1.0):
            raise ValueError(f"v_phase_in must be >= 1 (vacuum units), got {self.v_phase_in!r}")
        object.__setattr__(self, "v_phase_in", v)

    @property
    def eta1(self) -> float:
        """Combined in-loop detection efficiency eta_h1 * eta_d1."""
        return self.eta_h1 * self.eta_d1

    def with_gain(self, gain: complex) -> "NetworkParams":
        return replace(self, gain=complex(gain))


def output_expansion(params: NetworkParams, phi: float) -> QuadratureExpansion:
    """Output-beam quadrature at analysis angle phi, mode by mode.

    The amplitude projection (cos phi) sees only the passive beamsplitter.
    The phase projection (sin phi) additionally carries the fed-forward
    photocurrent: the tapped input phase, the tap vacuum it beats against,
    the homodyne mode-mismatch vacuum, and the two balanced-detector vacua.
    """
    phi = float(phi)
    if not math.isfinite(phi):
        raise ValueError(f"phi must be finite, got {phi!r}")
    eps = params.epsilon
    eh, ed = params.eta_h1, params.eta_d1
    k = params.gain
    c, s = math.cos(phi), math.sin(phi)
    root2 = math.sqrt(2.0)
    return QuadratureExpansion(
        {
            NoiseMode.INPUT_AMPLITUDE: math.sqrt(eps) * c,
            NoiseMode.INPUT_PHASE: s * (math.sqrt(eps) + k * math.sqrt(eh * ed * (1.0 - eps))),
            NoiseMode.TAP_VACUUM_AMPLITUDE: -math.sqrt(1.0 - eps) * c,
            NoiseMode.TAP_VACUUM_PHASE: s * (k * math.sqrt(ed * eh * eps) - math.sqrt(1.0 - eps)),
            NoiseMode.HOMODYNE_MISMATCH_PHASE: k * s * math.sqrt(ed * (1.0 - eh)),
            NoiseMode.DETECTOR_VACUUM_1: k * s * math.sqrt(1.0 - ed) / root2,
            NoiseMode.DETECTOR_VACUUM_2: k * s * math.sqrt(1.0 - ed) / root2,
        }
    )


def spectrum_from_modes(params: NetworkParams, phi):
    """Output quadrature variance at angle phi, summed mode by mode.

    The input amplitude and phase quadratures are uncorrelated here: the
    amplitude sits at the vacuum level and the phase at v_phase_in.  Accepts
    a scalar angle or an array of angles.
    """
    sources = SourceVariances.vacuum(input_phase=params.v_phase_in)
    if np.ndim(phi) == 0:
        return variance_of(output_expansion(params, float(phi)), sources)
    angles = np.asarray(phi, dtype=float)
    return np.array(
        [variance_of(output_expansion(params, float(x)), sources) for x in angles]
    )


def spectrum_closed_form(params: NetworkParams, phi):
    """Output quadrature variance in closed form, with the square-root
    prefactor on the combined signal term.

    The prefactor sqrt(V^2 / (sin^2 a + V^2 cos^2 a)), with
    tan a = (1 + K sqrt(eta_h1 eta_d1 (1-eps)/eps)) tan phi, interpolates the
    input variance between the amplitude and phase projections.  This form
    matches spectrum_from_modes at the quadrature axes for any V, and at all
    angles when V = 1; at intermediate angles with V > 1 the two differ,
    because here the prefactor rescales the full cos^2 + sin^2 input term
    rather than weighting the phase part alone.  The Monte Carlo oracle sides
    with spectrum_from_modes.
    """
    eps = params.epsilon
    eh, ed = params.eta_h1, params.eta_d1
    k = params.gain
    v = params.v_phase_in

    angles = np.asarray(phi, dtype=float)
    s2 = np.sin(angles) ** 2
    c2 = np.cos(angles) ** 2

    signal_coeff = math.sqrt(eps) + k * math.sqrt(eh * ed * (1.0 - eps))
    signal_gain = abs(signal_coeff) ** 2
    # |tan a / tan phi|^2; the magnitude keeps the angle real for complex gain
    ratio2 = abs(1.0 + k * math.sqrt(eh * ed * (1.0 - eps) / eps)) ** 2

    den = c2 + ratio2 * s2
    safe = np.where(den > 0.0, den, 1.0)
    sin2a = np.where(den > 0.0, ratio2 * s2 / safe, 0.0)
    cos2a = np.where(den > 0.0, c2 / safe, 1.0)
    prefactor = np.sqrt(v * v / (sin2a + v * v * cos2a))

    tap_phase = abs(k * math.sqrt(ed * eh * eps) - math.sqrt(1.0 - eps)) ** 2
    loop_loss = abs(k) ** 2 * (1.0 - ed * eh)

    total = (
        prefactor * (eps * c2 + signal_gain * s2)
        + (1.0 - eps) * c2
        + tap_phase * s2
        + loop_loss * s2
    )
    if np.ndim(phi) == 0:
        return float(total)
    return total


def phase_variance(params: NetworkParams) -> float:
    """Output phase-quadrature variance (angle pi/2), vacuum units."""
    eps = params.epsilon
    eh, ed = params.eta_h1, params.eta_d1
    k = params.gain
    signal_coeff = math.sqrt(eps) + k * math.sqrt(eh * ed * (1.0 - eps))
    tap_coeff = k * math.sqrt(ed * eh * eps) - math.sqrt(1.0 - eps)
    return (
        abs(signal_coeff) ** 2 * params.v_phase_in
        + abs(tap_coeff) ** 2
        + abs(k) ** 2 * (1.0 - ed * eh)
    )


def signal_power_gain(params: NetworkParams) -> float:
    """Power gain applied to a phase-quadrature signal riding on the input."""
    eps = params.epsilon
    coeff = math.sqrt(eps) + params.gain * math.sqrt(params.eta_h1 * params.eta_d1 * (1.0 - eps))
    return abs(coeff) ** 2


def _check_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and 0.0 < value <= 1.0):
        raise ValueError(f"{name} must be in (0, 1], got {value!r}")
    return value


def ideal_gain(epsilon: float) -> float:
    """Gain that cancels the tap vacuum exactly when detection is lossless."""
    epsilon = _check_unit_interval("epsilon", epsilon)
    return math.sqrt((1.0 - epsilon) / epsilon)


def optimal_gain(epsilon: float, eta_h: float, eta_d: float) -> float:
    """Gain maximizing the SNR transfer ratio for lossy in-loop detection."""
    epsilon = _check_unit_interval("epsilon", epsilon)
    eta_h = _check_unit_interval("eta_h", eta_h)
    eta_d = _check_unit_interval("eta_d", eta_d)
    return math.sqrt(eta_h * eta_d * (1.0 - epsilon) / epsilon)


def transfer_ratio(params: NetworkParams, signal_in: float = 1.0) -> float:
    """Output SNR over input SNR for a small phase signal.

    The input signal of power signal_in sits on unit (vacuum) noise.  At the
    output the signal is boosted by the signal power gain and read against
    the feed-forward noise floor, i.e. the phase variance with v_phase_in
    pinned to 1.  The result does not depend on signal_in.
    """
    signal_in = float(signal_in)
    if not (math.isfinite(signal_in) and signal_in > 0.0):
        raise ValueError(f"signal_in must be > 0, got {signal_in!r}")
    gain_power = signal_power_gain(params)
    noise_out = phase_variance(replace(params, v_phase_in=1.0))
    snr_in = signal_in / 1.0
    snr_out = gain_power * signal_in / noise_out
    return snr_out / snr_in


def max_transfer_ratio(epsilon: float, eta_h: float, eta_d: float) -> float:
    """Transfer ratio at the optimal gain: eps*(1 - eta_h*eta_d) + eta_h*eta_d."""
    epsilon = _check_unit_interval("epsilon", epsilon)
    eta_h = _check_unit_interval("eta_h", eta_h)
    eta_d = _check_unit_interval("eta_d", eta_d)
    eta = eta_h * eta_d
    return epsilon * (1.0 - eta) + eta


def pia_transfer_ratio(power_gain: float) -> float:
    """SNR transfer of an ideal phase-insensitive amplifier at the same
    power gain: G / (2G - 1).  Approaches 1/2 from above as G grows."""
    power_gain = float(power_gain)
    if not (math.isfinite(power_gain) and power_gain >= 1.0):
        raise ValueError(f"power_gain must be >= 1, got {power_gain!r}")
    return power_gain / (2.0 * power_gain - 1.0)


def detected_variance(variance, eta: float):
    """Variance seen through a detection stage of efficiency eta.

    The stage attenuates the field and mixes in (1 - eta) of vacuum:
    eta * variance + (1 - eta).  Works on scalars and arrays.
    """
    eta = _check_unit_interval("eta", eta)
    if np.ndim(variance) == 0:
        v = float(variance)
        if not (math.isfinite(v) and v >= 0.0):
            raise ValueError(f"variance must be finite and >= 0, got {variance!r}")
        return eta * v + (1.0 - eta)
    arr = np.asarray(variance, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise ValueError("variance array must be finite and >= 0")
    return eta * arr + (1.0 - eta)


@dataclass(frozen=True)
class SnrInference:
    """One homodyne stage's SNR, as measured and corrected for its loss."""

    detected: float
    inferred: float


@dataclass(frozen=True)
class SnrReport:
    """SNR inference chain for an input/output measurement pair."""

    snr_detected_in: float
    snr_inferred_in: float
    snr_detected_out: float
    snr_inferred_out: float
    t_s: float


def infer_snr(total_db: float, noise_db: float, eta: float) -> SnrInference:
    """Detected and loss-corrected SNR from spectrum-analyzer levels.

    total_db is the measured level with the signal tone on, noise_db with it
    off, both in power dB relative to the vacuum level.  The detected SNR is
    (total - noise) / noise in linear units.  The inferred SNR removes the
    stage's vacuum penalty by referring the noise back through efficiency
    eta: (total - noise) / (noise - (1 - eta)).
    """
    eta = _check_unit_interval("eta", eta)
    total_db = float(total_db)
    noise_db = float(noise_db)
    if not (math.isfinite(total_db) and math.isfinite(noise_db)):
        raise ValueError("dB levels must be finite")
    if total_db < noise_db:
        raise ValueError(
            f"total level {total_db} dB is below the noise level {noise_db} dB"
        )
    total = linear_from_db(total_db)
    noise = linear_from_db(noise_db)
    vacuum_part = 1.0 - eta
    if not noise > vacuum_part:
        raise ValueError(
            f"noise level {noise:.6g} does not exceed the vacuum contribution "
            f"{vacuum_part:.6g} implied by eta={eta}"
        )
    signal = total - noise
    return SnrInference(detected=signal / noise, inferred=signal / (noise - vacuum_part))
