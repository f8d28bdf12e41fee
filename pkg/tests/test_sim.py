import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dvbtsim import sim
from dvbtsim.channel import PhaseNoiseSpec
from dvbtsim.config import (ScenarioConfig, build_config, coded_rate, config_to_dict,
                            load_config_file)
from dvbtsim.errors import ConfigError
from dvbtsim.report import SWEEP_COLUMNS, Report, uncoded_row


def uncoded(scheme="QAM16", ebn0=math.inf, n=2000, seed=1, **ch):
    return build_config({"scheme": scheme, "n_symbols": n, "seed": seed,
                         "channel": dict(noise_value_db=ebn0, **ch)})


def coded(scheme="QAM16", ebn0=math.inf, blocks=1, seed=1, ofdm=None, **ch):
    return build_config({"mode": "coded", "scheme": scheme, "rs_blocks": blocks, "seed": seed,
                         "ofdm": ofdm or {"fft_size": 256, "active_carriers": 200},
                         "channel": dict(noise_value_db=ebn0, **ch)})


class TestSeeds:
    def test_frozen_values(self):
        ss = np.random.SeedSequence([7, 2, 3]).generate_state(1, np.uint64)[0]
        assert sim.derive_seed(7, 2, 3) == int(ss)
        assert sim.derive_seed(7, 2, 3) != sim.derive_seed(7, 3, 2)

    def test_streams_distinct(self):
        s = {sim.stream_seed(11, k) for k in (sim.STREAM_SOURCE, sim.STREAM_AWGN,
                                              sim.STREAM_PHASE)}
        assert len(s) == 3


class TestUncoded:
    @pytest.mark.parametrize("scheme", ["QPSK", "QAM16", "QAM64"])
    def test_noiseless(self, scheme):
        r = sim.run_uncoded_scenario(uncoded(scheme, phase_noise=None))
        assert r.stats["symbol"].error_units == 0 and r.stats["bit"].error_units == 0
        assert r.stats["symbol"].total_units == 2000
        assert r.stats["bit"].total_units == 2000 * int(scheme[-2:] == "64" and 6 or
                                                        scheme[-2:] == "16" and 4 or 2)

    def test_deterministic(self):
        c = uncoded("QAM64", 10.0, phase_noise={"level_dbc_hz": -70})
        a, b = sim.run_uncoded_scenario(c), sim.run_uncoded_scenario(c)
        assert a.as_dict() == b.as_dict()
        other = sim.run_uncoded_scenario(dataclasses.replace(c, seed=2))
        assert other.stats != a.stats

    def test_analytic_columns(self):
        r = sim.run_uncoded_scenario(uncoded("QAM16", 6.0))
        assert r.extra["analytic_ser"] == pytest.approx(
            __import__("dvbtsim").analytic_ser("QAM16", 6.0))

    def test_oversampled_matches_one_sample(self):
        a = sim.run_uncoded_scenario(uncoded("QAM16", 6.0, n=50000))
        b = sim.run_uncoded_scenario(uncoded("QAM16", 6.0, n=50000, samples_per_symbol=4))
        assert abs(a.stats["symbol"].rate - b.stats["symbol"].rate) < \
            3 * (a.stats["symbol"].half_width + b.stats["symbol"].half_width)

    def test_wrong_mode(self):
        with pytest.raises(ConfigError):
            sim.run_uncoded_scenario(coded())


class TestSweep:
    def test_single_point_matches_direct_run(self):
        cfg = dataclasses.replace(uncoded("QAM16", n=5000, seed=42), sweep=(9.0,))
        (pt,) = sim.sweep_curve(cfg)
        seed = sim.derive_seed(42, 0, 0)
        direct = sim.run_uncoded_scenario(uncoded("QAM16", 9.0, n=5000, seed=seed))
        assert pt.as_dict() == direct.as_dict()

    def test_workers_do_not_change_results(self):
        cfg = dataclasses.replace(uncoded("QPSK", n=3000, seed=3), sweep=(0.0, 3.0, 6.0))
        one = [r.as_dict() for r in sim.sweep_curve(cfg, workers=1)]
        two = [r.as_dict() for r in sim.sweep_curve(cfg, workers=2)]
        assert one == two

    def test_byte_identical_report(self):
        cfg = dataclasses.replace(uncoded("QAM64", n=3000, seed=5), sweep=(6.0, 12.0))

        def render():
            rows = [uncoded_row(r) for r in sim.sweep_curve(cfg)]
            rep = Report("sweep", config_to_dict(cfg), cfg.seed, SWEEP_COLUMNS, rows)
            return rep.to_csv(), rep.to_json()

        assert render() == render()

    def test_errors(self):
        with pytest.raises(ConfigError):
            sim.sweep_curve(uncoded())
        with pytest.raises(ConfigError):
            sim.sweep_curve(dataclasses.replace(coded(), sweep=(1.0,)))


class TestScatter:
    @pytest.mark.parametrize("scheme, count", [("QPSK", 4), ("QAM16", 16), ("QAM64", 64)])
    def test_noiseless_points(self, scheme, count):
        text = sim.dump_scatter(uncoded(scheme), 10000)
        lines = text.splitlines()
        assert lines[0] == "index,i,q" and len(lines) == 10001
        assert len({tuple(line.split(",")[1:]) for line in lines[1:]}) == count

    def test_qam64_spreads_more(self):
        pn = {"level_dbc_hz": -76}
        s16 = sim.scatter_samples(uncoded("QAM16", 12.0, phase_noise=pn), 10000)
        s64 = sim.scatter_samples(uncoded("QAM64", 12.0, phase_noise=pn), 10000)
        from dvbtsim.mapping import QAM16, QAM64
        assert sim.cluster_spread(s64, QAM64) / sim.cluster_spread(s16, QAM16) > 1

    def test_bad_count(self):
        with pytest.raises(ConfigError):
            sim.scatter_samples(uncoded(), 0)


class TestCoded:
    @pytest.mark.parametrize("scheme", ["QPSK", "QAM16", "QAM64"])
    def test_noiseless(self, scheme):
        r = sim.run_coded_scenario(coded(scheme, blocks=2))
        assert r.extra["payload_exact"]
        assert r.stats["post_rs_bit"].error_units == 0
        assert r.stats["pre_fec_bit"].error_units == 0
        assert r.extra["rs_decode_failures"] == 0

    def test_default_geometry(self):
        r = sim.run_coded_scenario(coded(ofdm={"guard_fraction": "1/8"}))
        assert r.extra["payload_exact"] and r.extra["ofdm_symbols"] >= 1

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 64), st.complex_numbers(max_magnitude=0.8), st.integers(0, 2**32))
    def test_echo_within_guard(self, delay, gain, seed):
        r = sim.run_coded_scenario(coded("QAM64", seed=seed,
                                         echo={"delay": delay, "gain": [gain.real, gain.imag]}))
        assert r.extra["payload_exact"]

    def test_explicit_payload(self, rng):
        payload = rng.integers(0, 256, 223, dtype=np.uint8)
        r = sim.run_coded_scenario(coded(), payload=payload)
        assert r.extra["payload_exact"]
        with pytest.raises(ConfigError):
            sim.run_coded_scenario(coded(), payload=payload[:10])

    def test_moderate_noise_is_corrected(self):
        r = sim.run_coded_scenario(coded("QPSK", 4.0, blocks=4, seed=8))
        assert r.stats["pre_fec_bit"].error_units > 0
        assert r.extra["payload_exact"]

    def test_graceful_at_zero_db(self):
        r = sim.run_coded_scenario(coded("QAM64", 0.0, blocks=3, seed=2))
        assert not r.extra["payload_exact"]
        assert r.stats["post_rs_bit"].error_units > 0
        assert r.extra["rs_decode_failures"] >= 1
        assert r.stats["rs_block"].total_units == 3

    def test_coded_rate(self):
        assert coded_rate() == pytest.approx(223 / 255 * 3 / 4)
        assert coded().channel.code_rate == pytest.approx(coded_rate())


class TestConfig:
    def test_round_trip(self):
        for c in (uncoded("QAM64", 12.0, phase_noise={"level_dbc_hz": -80},
                          echo={"delay": 3, "gain": "0.5-0.1j"}),
                  coded("QPSK", 7.5, blocks=3)):
            assert build_config(config_to_dict(c)) == c

    def test_defaults(self):
        c = build_config({})
        assert isinstance(c, ScenarioConfig)
        assert c.mode == "uncoded" and c.n_symbols == 10500 and c.channel.noise_value_db == math.inf

    @pytest.mark.parametrize("d, path", [
        ({"mode": "fec"}, "mode"),
        ({"scheme": "8PSK"}, "scheme"),
        ({"n_symbols": 0}, "n_symbols"),
        ({"n_symbols": "many"}, "n_symbols"),
        ({"seed": -1}, "seed"),
        ({"bogus": 1}, "bogus"),
        ({"channel": {"noise_ref": "snr"}}, "channel"),
        ({"channel": {"noise_value_db": "loud"}}, "channel.noise_value_db"),
        ({"channel": {"phase_noise": {"level_dbc_hz": 5}}}, "channel.phase_noise"),
        ({"channel": {"phase_noise": {"offset": 5}}}, "channel.phase_noise.offset"),
        ({"channel": {"echo": {"gain": 0.5}}}, "channel.echo.delay"),
        ({"channel": {"echo": {"delay": -3}}}, "channel.echo.delay"),
        ({"channel": {"bits_per_symbol": 6}, "scheme": "QPSK"}, "channel.bits_per_symbol"),
        ({"ofdm": {"fft_size": 64}}, "ofdm"),
        ({"mode": "coded", "ofdm": {"guard_fraction": "1/3"}}, "ofdm"),
        ({"mode": "coded", "ofdm": {"guard_fraction": "x"}}, "ofdm.guard_fraction"),
        ({"sweep": []}, "sweep"),
        ({"sweep": [1, "inf"]}, "sweep"),
        ({"output": {"formats": "xml"}}, "output.formats"),
    ])
    def test_errors_name_the_field(self, d, path):
        with pytest.raises(ConfigError) as ei:
            build_config(d)
        assert ei.value.path == path

    def test_yaml_file(self, tmp_path):
        f = tmp_path / "s.yaml"
        f.write_text("scheme: QAM64\nchannel:\n  noise_value_db: 12\n"
                     "  phase_noise: {level_dbc_hz: -76}\nseed: 9\n")
        c = build_config(load_config_file(f))
        assert c.scheme.name == "QAM64" and c.seed == 9
        assert c.channel.phase_noise == PhaseNoiseSpec()

    def test_yaml_errors(self, tmp_path):
        bad = tmp_path / "bad.yaml"
        bad.write_text("scheme: [unclosed\n")
        with pytest.raises(ConfigError):
            load_config_file(bad)
        lst = tmp_path / "list.yaml"
        lst.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigError):
            load_config_file(lst)
