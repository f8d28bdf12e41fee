import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.signal import welch

from dvbtsim.channel import (ChannelSpec, PhaseNoiseSpec, apply_awgn, apply_echo,
                             apply_phase_noise, ebn0_to_esn0, esn0_to_ebn0, esn0_to_snr,
                             noise_variance, phase_noise_process)
from dvbtsim.errors import ParameterError


class TestConversions:
    @pytest.mark.parametrize("k, expected", [(1, 12.0), (6, 19.78), (4, 18.02), (2, 15.01)])
    def test_ebn0_to_esn0(self, k, expected):
        assert ebn0_to_esn0(12.0, k) == pytest.approx(expected, abs=5e-3)

    def test_exact(self):
        assert ebn0_to_esn0(12.0, 6) == pytest.approx(12 + 10 * math.log10(6), abs=1e-12)
        assert ebn0_to_esn0(3.0, 4, 0.5) == pytest.approx(3 + 10 * math.log10(2), abs=1e-12)
        assert esn0_to_snr(10.0, 4) == pytest.approx(10 - 10 * math.log10(4), abs=1e-12)

    @settings(max_examples=100)
    @given(st.floats(-20, 40), st.sampled_from([1, 2, 4, 6]), st.floats(0.05, 1.0))
    def test_inverse(self, ebn0, k, rate):
        assert esn0_to_ebn0(ebn0_to_esn0(ebn0, k, rate), k, rate) == pytest.approx(ebn0, abs=1e-9)

    @pytest.mark.parametrize("k, rate", [(0, 1.0), (2, 0.0), (2, 1.5)])
    def test_bad_params(self, k, rate):
        with pytest.raises(ParameterError):
            ebn0_to_esn0(10.0, k, rate)

    def test_spec_resolution(self):
        a = ChannelSpec(noise_ref="ebn0_db", noise_value_db=12.0, bits_per_symbol=6)
        b = ChannelSpec(noise_ref="esn0_db", noise_value_db=a.esn0_db, bits_per_symbol=6)
        c = ChannelSpec(noise_ref="snr_per_sample_db", noise_value_db=a.snr_per_sample_db,
                        bits_per_symbol=6)
        for s in (a, b, c):
            assert s.snr_per_sample_db == pytest.approx(a.snr_per_sample_db, abs=1e-12)
            assert s.ebn0_db == pytest.approx(12.0, abs=1e-12)
        d = ChannelSpec(noise_ref="esn0_db", noise_value_db=10.0, samples_per_symbol=4)
        assert d.snr_per_sample_db == pytest.approx(10 - 10 * math.log10(4))

    @pytest.mark.parametrize("kw", [dict(noise_ref="snr"), dict(noise_value_db=float("nan")),
                                    dict(bits_per_symbol=3), dict(code_rate=0.0),
                                    dict(samples_per_symbol=0), dict(signal_energy="guess"),
                                    dict(echo=(-1, 0.5))])
    def test_spec_rejects(self, kw):
        with pytest.raises(ParameterError):
            ChannelSpec(**kw)


class TestAwgn:
    def test_noiseless_passthrough(self, rng):
        x = rng.normal(size=100) + 1j
        np.testing.assert_array_equal(apply_awgn(x, ChannelSpec()), x)

    def test_variance_calibration(self):
        n = 10 ** 6
        x = np.ones(n, complex)
        spec = ChannelSpec(noise_ref="esn0_db", noise_value_db=10.0, seed=5)
        noise = apply_awgn(x, spec) - x
        n0 = noise_variance(x, spec)
        assert n0 == pytest.approx(0.1, rel=1e-12)
        assert abs(np.mean(np.abs(noise) ** 2) / n0 - 1) < 0.01
        # N0/2 per axis
        assert abs(np.var(noise.real) / (n0 / 2) - 1) < 0.01
        assert abs(np.var(noise.imag) / (n0 / 2) - 1) < 0.01

    def test_white(self):
        n = 2 ** 16
        spec = ChannelSpec(noise_ref="esn0_db", noise_value_db=0.0, seed=9)
        w = apply_awgn(np.ones(n, complex), spec) - 1.0
        p = np.mean(np.abs(w) ** 2)
        bound = 3 / math.sqrt(n)
        for lag in (1, 2, 3, 10, 100):
            r = np.mean(w[lag:] * np.conj(w[:-lag])) / p
            assert abs(r.real) < bound and abs(r.imag) < bound

    def test_measured_vs_nominal(self, rng):
        x = 2.0 * np.exp(2j * np.pi * rng.random(1000))
        spec = ChannelSpec(noise_ref="esn0_db", noise_value_db=10.0)
        assert noise_variance(x, spec) == pytest.approx(0.4)
        assert noise_variance(x, spec, "nominal") == pytest.approx(0.1)
        assert noise_variance(x, spec, 3.0) == pytest.approx(0.3)

    def test_deterministic(self, rng):
        x = rng.normal(size=500) + 0j
        spec = ChannelSpec(noise_ref="esn0_db", noise_value_db=3.0, seed=77)
        np.testing.assert_array_equal(apply_awgn(x, spec), apply_awgn(x, spec))
        assert not np.array_equal(apply_awgn(x, spec), apply_awgn(x, spec, seed=78))


class TestPhaseNoise:
    def test_spec_defaults(self):
        s = PhaseNoiseSpec()
        assert (s.level_dbc_hz, s.offset_hz, s.corner) == (-76.0, 100.0, 10.0)
        assert 10 * math.log10(s.psd(100.0)) == pytest.approx(-76.0, abs=1e-9)

    @pytest.mark.parametrize("kw", [dict(level_dbc_hz=3.0), dict(offset_hz=0.0),
                                    dict(offset_hz=6000.0), dict(corner_hz=-1.0)])
    def test_spec_rejects(self, kw):
        with pytest.raises(ParameterError):
            PhaseNoiseSpec(**kw)

    def test_disabled_is_identity(self, rng):
        x = rng.normal(size=64) + 1j * rng.normal(size=64)
        off = PhaseNoiseSpec(level_dbc_hz=-math.inf)
        assert not off.enabled
        np.testing.assert_array_equal(apply_phase_noise(x, off, 1), x)
        np.testing.assert_array_equal(apply_phase_noise(x, None, 1), x)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**63), st.floats(-90, -30))
    def test_magnitude_preserved(self, seed, level):
        x = np.random.default_rng(seed).normal(size=256) * (1 + 1j)
        out = apply_phase_noise(x, PhaseNoiseSpec(level_dbc_hz=level), seed)
        np.testing.assert_allclose(np.abs(out), np.abs(x), rtol=1e-13, atol=1e-15)

    def test_psd_calibration(self):
        s = PhaseNoiseSpec()
        phi = phase_noise_process(2 ** 21, s, seed=2024)
        f, pxx = welch(phi, fs=s.sample_rate_hz, nperseg=2 ** 14)
        band = (f >= 95) & (f <= 105)
        measured = 10 * math.log10(np.mean(pxx[band]))
        model = 10 * math.log10(np.mean(s.psd(f[band])))
        assert abs(measured - (-76.0)) <= 1.0
        assert abs(model - (-76.0)) < 0.1

    @pytest.mark.parametrize("level, offset", [(-60.0, 1000.0), (-90.0, 50.0)])
    def test_psd_calibration_other_settings(self, level, offset):
        s = PhaseNoiseSpec(level_dbc_hz=level, offset_hz=offset)
        phi = phase_noise_process(2 ** 20, s, seed=3)
        f, pxx = welch(phi, fs=s.sample_rate_hz, nperseg=2 ** 14)
        band = (f >= 0.95 * offset) & (f <= 1.05 * offset)
        assert abs(10 * math.log10(np.mean(pxx[band])) - level) <= 1.0

    def test_stationary_zero_mean(self):
        s = PhaseNoiseSpec()
        runs = np.array([phase_noise_process(4000, s, seed=i) for i in range(400)])
        sd = math.sqrt(s.variance())
        # ensemble statistics at the start and end of the record agree
        for col in (0, 3999):
            assert abs(np.mean(runs[:, col])) < 4 * sd / math.sqrt(400)
            assert np.std(runs[:, col]) == pytest.approx(sd, rel=0.15)

    def test_deterministic(self):
        s = PhaseNoiseSpec()
        np.testing.assert_array_equal(phase_noise_process(100, s, 4),
                                      phase_noise_process(100, s, 4))


class TestEcho:
    def test_zero_gain(self, rng):
        x = rng.normal(size=20) + 0j
        np.testing.assert_array_equal(apply_echo(x, 3, 0), x)

    def test_zero_delay(self, rng):
        x = rng.normal(size=20) + 0j
        np.testing.assert_allclose(apply_echo(x, 0, 0.5 - 0.5j), (1.5 - 0.5j) * x)

    def test_definition(self, rng):
        x = rng.normal(size=50) + 1j * rng.normal(size=50)
        out = apply_echo(x, 7, 0.3j)
        for n in range(50):
            assert out[n] == pytest.approx(x[n] + (0.3j * x[n - 7] if n >= 7 else 0))

    def test_bad_delay(self):
        with pytest.raises(ParameterError):
            apply_echo(np.ones(4), -2, 0.5)
