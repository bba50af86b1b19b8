"""Tests for the analytic feed-forward network model."""

import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phaseff import (
    NetworkParams,
    NoiseMode,
    db_from_linear,
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

# Benchmark operating point used throughout: 20% transmission, measured
# in-loop efficiencies, gain 3.2, inferred input phase variance 8.6 dB,
# verification stage 0.8008.
V_IN = 10.0**0.86
BENCH = NetworkParams(
    epsilon=0.2, eta_h1=0.94, eta_d1=0.91, gain=3.2, v_phase_in=V_IN, eta_det2=0.8008
)

unit_open = st.floats(min_value=0.05, max_value=1.0, allow_nan=False)
real_gains = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)
phase_excess = st.floats(min_value=1.0, max_value=50.0, allow_nan=False)


def params_like(epsilon, eta_h=1.0, eta_d=1.0, gain=0.0, v=1.0, eta2=1.0):
    return NetworkParams(
        epsilon=epsilon, eta_h1=eta_h, eta_d1=eta_d, gain=gain, v_phase_in=v, eta_det2=eta2
    )


network_params = st.builds(
    params_like,
    epsilon=unit_open,
    eta_h=unit_open,
    eta_d=unit_open,
    gain=real_gains,
    v=phase_excess,
)


class TestNetworkParams:
    @pytest.mark.parametrize("field,value", [
        ("epsilon", 0.0),
        ("epsilon", 1.2),
        ("eta_h1", -0.1),
        ("eta_d1", 0.0),
        ("eta_det2", 1.5),
        ("v_phase_in", 0.5),
    ])
    def test_range_validation(self, field, value):
        kwargs = {"epsilon": 0.2, "eta_h1": 0.94, "eta_d1": 0.91, "gain": 1.0}
        kwargs[field] = value
        with pytest.raises(ValueError):
            NetworkParams(**kwargs)

    def test_nonfinite_gain_rejected(self):
        with pytest.raises(ValueError):
            params_like(0.2, gain=float("nan"))

    def test_eta1_is_product(self):
        assert BENCH.eta1 == 0.94 * 0.91

    def test_with_gain_replaces_only_gain(self):
        p2 = BENCH.with_gain(1.5)
        assert p2.gain == 1.5 + 0j
        assert p2.epsilon == BENCH.epsilon
        assert p2.v_phase_in == BENCH.v_phase_in


class TestOutputExpansion:
    @pytest.mark.parametrize("phi", [0.3, 1.0, 2.5])
    def test_identity_channel(self, phi):
        e = output_expansion(params_like(1.0, gain=0.0), phi)
        assert set(e.coefficients) == {NoiseMode.INPUT_AMPLITUDE, NoiseMode.INPUT_PHASE}
        assert e.coefficient(NoiseMode.INPUT_AMPLITUDE) == math.cos(phi)
        assert e.coefficient(NoiseMode.INPUT_PHASE) == math.sin(phi)

    def test_cancellation_gain_zeroes_tap_phase(self):
        # At gain 2 = sqrt(0.8/0.2) the fed-forward tap vacuum cancels the
        # transmitted one exactly, so its key is dropped.
        e = output_expansion(params_like(0.2, gain=2.0), math.pi / 2.0)
        assert NoiseMode.TAP_VACUUM_PHASE not in e.coefficients
        c = e.coefficient(NoiseMode.INPUT_PHASE)
        assert math.isclose(c.real, math.sqrt(5.0), rel_tol=1e-12)
        # lossless loop: no mismatch or detector vacuum enters
        assert NoiseMode.HOMODYNE_MISMATCH_PHASE not in e.coefficients
        assert NoiseMode.DETECTOR_VACUUM_1 not in e.coefficients
        # cos(pi/2) is not an exact float zero, so the amplitude weights
        # survive as ~1e-17 residue
        assert abs(e.coefficient(NoiseMode.INPUT_AMPLITUDE)) < 1e-15

    def test_benchmark_phase_coefficients(self):
        e = output_expansion(BENCH, math.pi / 2.0)
        coeff = {m: e.coefficient(m).real for m in NoiseMode}
        assert math.isclose(coeff[NoiseMode.INPUT_PHASE], 3.094369956578767, rel_tol=1e-12)
        assert math.isclose(coeff[NoiseMode.TAP_VACUUM_PHASE], 0.4291509895394886, rel_tol=1e-12)
        assert math.isclose(
            coeff[NoiseMode.HOMODYNE_MISMATCH_PHASE], 0.7477325725150674, rel_tol=1e-12
        )
        assert math.isclose(coeff[NoiseMode.DETECTOR_VACUUM_1], 0.6788225099390854, rel_tol=1e-12)
        assert coeff[NoiseMode.DETECTOR_VACUUM_1] == coeff[NoiseMode.DETECTOR_VACUUM_2]

    def test_rejects_nonfinite_angle(self):
        with pytest.raises(ValueError):
            output_expansion(BENCH, float("inf"))

    @given(p=network_params, phi=st.floats(min_value=0.0, max_value=2.0 * math.pi))
    def test_detector_vacua_enter_symmetrically(self, p, phi):
        e = output_expansion(p, phi)
        assert e.coefficient(NoiseMode.DETECTOR_VACUUM_1) == e.coefficient(
            NoiseMode.DETECTOR_VACUUM_2
        )


class TestSpectra:
    @pytest.mark.parametrize("phi", [0.0, 0.7, math.pi / 2.0, 2.0, math.pi])
    def test_passive_network_sits_at_qnl(self, phi):
        p = params_like(0.37, eta_h=0.8, eta_d=0.9, gain=0.0)
        assert math.isclose(spectrum_from_modes(p, phi), 1.0, rel_tol=1e-12)

    def test_ideal_amplification_value(self):
        p = params_like(0.2, gain=2.0)
        assert math.isclose(spectrum_from_modes(p, math.pi / 2.0), 5.0, rel_tol=1e-12)
        assert math.isclose(spectrum_closed_form(p, math.pi / 2.0), 5.0, rel_tol=1e-12)

    def test_benchmark_floor_decomposition(self):
        p = replace(BENCH, v_phase_in=1.0)
        total = phase_variance(p)
        gain_term = signal_power_gain(p)
        assert math.isclose(gain_term, 9.575125428177278, rel_tol=1e-12)
        assert math.isclose(total - gain_term, 0.18417057182272226 + 1.480704, rel_tol=1e-9)
        assert math.isclose(total, 11.24, rel_tol=1e-12)

    def test_benchmark_phase_quadrature_with_signal(self):
        assert math.isclose(
            spectrum_from_modes(BENCH, math.pi / 2.0), 71.03052639582329, rel_tol=1e-12
        )
        assert math.isclose(
            spectrum_closed_form(BENCH, math.pi / 2.0), 71.03052639582329, rel_tol=1e-12
        )

    def test_phase_variance_equals_spectrum_at_half_pi(self):
        for p in (BENCH, params_like(0.5, eta_h=0.7, gain=-1.3, v=3.0)):
            assert math.isclose(
                phase_variance(p), spectrum_from_modes(p, math.pi / 2.0), rel_tol=1e-12
            )

    def test_array_evaluation_matches_scalars(self):
        angles = np.linspace(0.0, 2.0 * math.pi, 17)
        for fn in (spectrum_from_modes, spectrum_closed_form):
            vec = fn(BENCH, angles)
            scal = np.array([fn(BENCH, float(a)) for a in angles])
            assert np.allclose(vec, scal, rtol=1e-14, atol=0.0)

    def test_closed_form_continuous_at_half_pi(self):
        mid = spectrum_closed_form(BENCH, math.pi / 2.0)
        for delta in (1e-9, -1e-9):
            assert math.isclose(
                spectrum_closed_form(BENCH, math.pi / 2.0 + delta), mid, rel_tol=1e-6
            )

    def test_closed_form_finite_when_signal_coefficient_cancels(self):
        # a negative gain can null the signal term entirely; the prefactor
        # must not blow up anywhere on the circle
        eps, eh, ed = 0.2, 0.94, 0.91
        k = -math.sqrt(eps) / math.sqrt(eh * ed * (1.0 - eps))
        p = params_like(eps, eta_h=eh, eta_d=ed, gain=k, v=4.0)
        values = spectrum_closed_form(p, np.linspace(0.0, 2.0 * math.pi, 721))
        assert np.all(np.isfinite(values))

    @given(p=network_params, axis=st.sampled_from([0.0, math.pi / 2.0, math.pi, 3.0 * math.pi / 2.0]))
    def test_formulas_agree_on_quadrature_axes(self, p, axis):
        a = spectrum_from_modes(p, axis)
        b = spectrum_closed_form(p, axis)
        assert math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)

    @given(
        p=st.builds(
            params_like,
            epsilon=unit_open,
            eta_h=unit_open,
            eta_d=unit_open,
            gain=real_gains,
        ),
        phi=st.floats(min_value=0.0, max_value=2.0 * math.pi),
    )
    def test_formulas_agree_everywhere_at_unit_phase_variance(self, p, phi):
        a = spectrum_from_modes(p, phi)
        b = spectrum_closed_form(p, phi)
        assert math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12)

    def test_formulas_diverge_at_intermediate_angles_with_excess_variance(self):
        modes_val = spectrum_from_modes(BENCH, math.pi / 4.0)
        closed_val = spectrum_closed_form(BENCH, math.pi / 4.0)
        assert math.isclose(modes_val, 36.01526319791164, rel_tol=1e-10)
        assert math.isclose(closed_val, 25.94205552689667, rel_tol=1e-10)
        assert abs(modes_val - closed_val) > 5.0


class TestGains:
    def test_ideal_gain_reference_points(self):
        assert ideal_gain(0.5) == 1.0
        assert ideal_gain(1.0) == 0.0
        assert math.isclose(ideal_gain(0.2), 2.0, rel_tol=1e-12)

    @pytest.mark.parametrize("bad", [0.0, -0.2, 1.0001])
    def test_ideal_gain_domain(self, bad):
        with pytest.raises(ValueError):
            ideal_gain(bad)

    def test_optimal_gain_reference_points(self):
        assert optimal_gain(0.3, 1.0, 1.0) == ideal_gain(0.3)
        assert math.isclose(optimal_gain(0.2, 0.94, 0.91), 1.8497567407634985, rel_tol=1e-12)
        assert math.isclose(optimal_gain(0.5, 0.5, 0.5), 0.5, rel_tol=1e-12)

    def test_transfer_ratio_reference_points(self):
        # perfect loop at the cancellation gain transfers the SNR untouched
        p = params_like(0.35, gain=ideal_gain(0.35))
        assert math.isclose(transfer_ratio(p), 1.0, rel_tol=1e-12)
        # no feed-forward at all leaves plain beamsplitter loss
        assert math.isclose(transfer_ratio(params_like(0.2)), 0.2, rel_tol=1e-12)

    def test_transfer_ratio_independent_of_signal_power(self):
        p = BENCH.with_gain(optimal_gain(0.2, 0.94, 0.91))
        values = [transfer_ratio(p, s) for s in (0.5, 1.0, 123.0)]
        assert all(math.isclose(v, values[0], rel_tol=1e-12) for v in values)

    def test_transfer_ratio_rejects_nonpositive_signal(self):
        with pytest.raises(ValueError):
            transfer_ratio(BENCH, 0.0)

    def test_max_transfer_matches_transfer_at_optimal_gain(self):
        k = optimal_gain(0.2, 0.94, 0.91)
        direct = transfer_ratio(BENCH.with_gain(k))
        closed = max_transfer_ratio(0.2, 0.94, 0.91)
        assert math.isclose(direct, closed, rel_tol=1e-12)
        assert math.isclose(closed, 0.88432, rel_tol=1e-12)

    def test_max_transfer_boundary_cases(self):
        assert max_transfer_ratio(0.4, 1.0, 1.0) == 1.0
        assert math.isclose(max_transfer_ratio(1.0, 0.94, 0.91), 1.0, rel_tol=1e-12)

    @given(p=network_params)
    def test_transfer_ratio_bounded(self, p):
        t = transfer_ratio(p)
        assert 0.0 <= t <= 1.0 + 1e-12

    @given(
        e1=unit_open, e2=unit_open, eta_h=unit_open, eta_d=unit_open
    )
    def test_max_transfer_monotone_in_epsilon(self, e1, e2, eta_h, eta_d):
        lo, hi = sorted((e1, e2))
        assert max_transfer_ratio(lo, eta_h, eta_d) <= max_transfer_ratio(hi, eta_h, eta_d) + 1e-15

    @given(
        epsilon=unit_open, h1=unit_open, h2=unit_open, d=unit_open
    )
    def test_max_transfer_monotone_in_efficiency(self, epsilon, h1, h2, d):
        lo, hi = sorted((h1, h2))
        assert max_transfer_ratio(epsilon, lo, d) <= max_transfer_ratio(epsilon, hi, d) + 1e-15

    def test_pia_reference_points(self):
        assert pia_transfer_ratio(1.0) == 1.0
        assert math.isclose(pia_transfer_ratio(10.0), 10.0 / 19.0, rel_tol=1e-12)
        assert math.isclose(pia_transfer_ratio(1e6), 0.5, abs_tol=1e-6)

    def test_pia_rejects_gain_below_unity(self):
        with pytest.raises(ValueError):
            pia_transfer_ratio(0.99)


class TestDetection:
    def test_vacuum_fixed_point(self):
        assert detected_variance(1.0, 0.8008) == 1.0

    def test_benchmark_floor_through_verification_stage(self):
        out = detected_variance(11.24, 0.8008)
        assert math.isclose(out, 9.200192, rel_tol=1e-12)
        assert math.isclose(db_from_linear(out), 9.64, abs_tol=5e-3)

    def test_benchmark_signal_through_verification_stage(self):
        out = detected_variance(71.03052639582329, 0.8008)
        assert math.isclose(db_from_linear(out), 17.56487354313705, rel_tol=1e-12)

    def test_array_input(self):
        arr = detected_variance(np.array([1.0, 11.24]), 0.8008)
        assert arr.shape == (2,)
        assert math.isclose(arr[1], 9.200192, rel_tol=1e-12)

    @pytest.mark.parametrize("v,eta", [(-1.0, 0.9), (1.0, 0.0), (1.0, 1.2)])
    def test_domain_errors(self, v, eta):
        with pytest.raises(ValueError):
            detected_variance(v, eta)


class TestInferSnr:
    def test_input_stage_reference(self):
        r = infer_snr(8.0, 0.0, 0.8554)
        assert math.isclose(r.detected, 5.309573444801933, rel_tol=1e-12)
        assert math.isclose(r.inferred, 6.207123503392488, rel_tol=1e-12)

    def test_output_stage_reference(self):
        r = infer_snr(17.6, 9.5, 0.8008)
        assert math.isclose(r.inferred, 5.581287456237841, rel_tol=1e-12)
        assert r.detected < r.inferred

    def test_no_signal_gives_zero(self):
        r = infer_snr(3.7, 3.7, 0.9)
        assert r.detected == 0.0
        assert r.inferred == 0.0

    def test_total_below_noise_rejected(self):
        with pytest.raises(ValueError):
            infer_snr(1.0, 2.0, 0.9)

    def test_noise_below_vacuum_share_rejected(self):
        # linear noise 0.1 cannot be less than the 0.2 vacuum part of eta=0.8
        with pytest.raises(ValueError):
            infer_snr(0.0, -10.0, 0.8)

    @given(
        noise=st.floats(min_value=1.0, max_value=20.0),
        signal=st.floats(min_value=1e-3, max_value=100.0),
        eta=st.floats(min_value=0.3, max_value=1.0),
    )
    def test_inference_inverts_detection(self, noise, signal, eta):
        """Detect a known scene through a lossy stage, then infer back."""
        total_lin = detected_variance(noise + signal, eta)
        noise_lin = detected_variance(noise, eta)
        r = infer_snr(db_from_linear(total_lin), db_from_linear(noise_lin), eta)
        assert math.isclose(r.inferred, signal / noise, rel_tol=1e-10)
