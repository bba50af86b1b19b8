"""Quadrature noise algebra.

Fluctuating quadratures are tracked symbolically as linear combinations of a
fixed set of independent noise modes, each mode carrying its own spectral
variance.  Everything is normalized to the quantum noise limit: a vacuum mode
has variance 1, and power levels in dB are 10*log10 of that linear variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, unique
from typing import Mapping


@unique
class NoiseMode(Enum):
    """The independent fluctuation sources entering the feed-forward network.

    The two detector vacua belong to the balanced pair of photodiodes in the
    in-loop homodyne; they always appear with equal weight.
    """

    INPUT_AMPLITUDE = "input_amplitude"
    INPUT_PHASE = "input_phase"
    TAP_VACUUM_AMPLITUDE = "tap_vacuum_amplitude"
    TAP_VACUUM_PHASE = "tap_vacuum_phase"
    HOMODYNE_MISMATCH_PHASE = "homodyne_mismatch_phase"
    DETECTOR_VACUUM_1 = "detector_vacuum_1"
    DETECTOR_VACUUM_2 = "detector_vacuum_2"


def _as_finite_complex(value: complex, label: str) -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite coefficient for {label}: {value!r}")
    return z


@dataclass(frozen=True)
class QuadratureExpansion:
    """A quadrature observable as a weighted sum of noise modes.

    Exact-zero coefficients are dropped on construction, so mode membership
    in ``coefficients`` means "this source contributes".  ``frequency_hz`` is
    bookkeeping only; it never enters the algebra, but combining expansions
    taken at different frequencies is refused.
    """

    coefficients: Mapping[NoiseMode, complex]
    frequency_hz: float = 0.0

    def __post_init__(self) -> None:
        cleaned: dict[NoiseMode, complex] = {}
        for mode, value in self.coefficients.items():
            if not isinstance(mode, NoiseMode):
                raise ValueError(f"expansion key {mode!r} is not a NoiseMode")
            z = _as_finite_complex(value, mode.value)
            if z != 0:
                cleaned[mode] = z
        object.__setattr__(self, "coefficients", cleaned)
        if not math.isfinite(self.frequency_hz):
            raise ValueError("frequency_hz must be finite")

    def coefficient(self, mode: NoiseMode) -> complex:
        """Weight of one mode, 0 if the mode does not contribute."""
        return self.coefficients.get(mode, 0j)


@dataclass(frozen=True)
class SourceVariances:
    """Spectral variance of each noise mode, in units of the vacuum variance."""

    variance: Mapping[NoiseMode, float]

    def __post_init__(self) -> None:
        cleaned: dict[NoiseMode, float] = {}
        for mode, value in self.variance.items():
            if not isinstance(mode, NoiseMode):
                raise ValueError(f"variance key {mode!r} is not a NoiseMode")
            v = float(value)
            if not math.isfinite(v) or v < 0.0:
                raise ValueError(f"variance for {mode.value} must be finite and >= 0, got {value!r}")
            cleaned[mode] = v
        object.__setattr__(self, "variance", cleaned)

    @classmethod
    def vacuum(cls, input_phase: float = 1.0) -> "SourceVariances":
        """Every mode at the quantum noise limit, with an optional excess
        variance on the input phase quadrature."""
        table = {mode: 1.0 for mode in NoiseMode}
        table[NoiseMode.INPUT_PHASE] = float(input_phase)
        return cls(table)


def scale_add(
    a: QuadratureExpansion,
    ca: complex,
    b: QuadratureExpansion,
    cb: complex,
) -> QuadratureExpansion:
    """Linear combination ca*a + cb*b, coefficient by coefficient."""
    if a.frequency_hz != b.frequency_hz:
        raise ValueError(
            f"frequency mismatch: {a.frequency_hz} Hz vs {b.frequency_hz} Hz"
        )
    ca = _as_finite_complex(ca, "ca")
    cb = _as_finite_complex(cb, "cb")
    combined = {
        mode: ca * a.coefficient(mode) + cb * b.coefficient(mode)
        for mode in set(a.coefficients) | set(b.coefficients)
    }
    return QuadratureExpansion(combined, a.frequency_hz)


def variance_of(expansion: QuadratureExpansion, sources: SourceVariances) -> float:
    """Second moment of an expansion over independent sources.

    Sum over modes of |coefficient|^2 times the source variance.  Every mode
    present in the expansion must have a variance entry.
    """
    total = 0.0
    for mode, coeff in expansion.coefficients.items():
        if mode not in sources.variance:
            raise ValueError(f"no variance given for mode {mode.value}")
        total += (coeff.real * coeff.real + coeff.imag * coeff.imag) * sources.variance[mode]
    return total


def db_from_linear(value: float) -> float:
    """Power dB relative to the quantum noise limit."""
    value = float(value)
    if not value > 0.0:
        raise ValueError(f"dB undefined for non-positive variance {value!r}")
    return 10.0 * math.log10(value)


def linear_from_db(level_db: float) -> float:
    """Inverse of db_from_linear."""
    level_db = float(level_db)
    if not math.isfinite(level_db):
        raise ValueError(f"dB level must be finite, got {level_db!r}")
    return 10.0 ** (level_db / 10.0)
