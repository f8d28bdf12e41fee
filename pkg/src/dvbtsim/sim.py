"""Scenario runners: uncoded modem chain, full coded COFDM chain, sweeps.

Seeds
-----
Every random stream is a pure function of integers, so results do not
depend on worker count or execution order:

* ``derive_seed(master, scenario, trial)`` gives the effective seed of one
  run; it is the first uint64 word of ``SeedSequence([master, scenario,
  trial])``.  Sweep point ``i`` uses ``derive_seed(master, i, 0)``.
* Inside a run, ``stream_seed(seed, STREAM_*)`` splits the effective seed
  into independent source, noise and phase-noise streams.
"""

import dataclasses
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import channel as ch
from .config import config_to_dict
from .conv import DEFAULT_CONV, RATE_3_4, conv_encode, depuncture, puncture, viterbi_decode
from .errors import ConfigError, DecodeFailure
from .interleave import InterleaverParams, deinterleave_block, interleave_block
from .mapping import (bits_to_symbols, demap_soft, demap_symbols, map_symbols,
                      symbols_to_bits)
from .metrics import (ErrorStats, analytic_ber, analytic_ser, count_bit_errors,
                      count_symbol_errors)
from .ofdm import channel_freq_response, equalize_one_tap, ofdm_demodulate, ofdm_modulate
from .rs import DEFAULT_RS, rs_decode, rs_encode

STREAM_SOURCE = 0
STREAM_AWGN = 1
STREAM_PHASE = 2


def derive_seed(master, scenario_index, trial_index=0):
    ss = np.random.SeedSequence([int(master), int(scenario_index), int(trial_index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def stream_seed(seed, stream):
    return int(np.random.SeedSequence([int(seed), int(stream)]).generate_state(1, np.uint64)[0])


@dataclass
class ScenarioResult:
    """Outcome of one run.  ``stats`` maps a label to its ErrorStats."""

    mode: str
    scheme: str
    ebn0_db: float
    seed: int
    stats: dict
    extra: dict = field(default_factory=dict)
    elapsed_s: float = 0.0

    def as_dict(self):
        d = {"mode": self.mode, "scheme": self.scheme,
             "ebn0_db": "inf" if self.ebn0_db == math.inf else self.ebn0_db,
             "seed": self.seed,
             "stats": {k: v.as_dict() for k, v in self.stats.items()}}
        d.update(self.extra)
        return d


def _uncoded_channel(tx, cfg, seed):
    spec = cfg.channel
    x = tx
    if spec.echo is not None:
        x = ch.apply_echo(x, *spec.echo)
    x = ch.apply_awgn(x, spec, seed=stream_seed(seed, STREAM_AWGN))
    if spec.phase_noise is not None:
        x = ch.apply_phase_noise(x, spec.phase_noise, stream_seed(seed, STREAM_PHASE))
    return x


def _uncoded_samples(cfg, n):
    seed = cfg.seed
    rng = np.random.default_rng(stream_seed(seed, STREAM_SOURCE))
    sym = rng.integers(0, cfg.scheme.order, size=n)
    tx = map_symbols(sym, cfg.scheme)
    sps = cfg.channel.samples_per_symbol
    if sps == 1:
        return sym, _uncoded_channel(tx, cfg, seed)
    # rectangular pulse out, integrate-and-dump back: per-symbol Es/N0 is kept
    rx = _uncoded_channel(np.repeat(tx, sps), cfg, seed)
    return sym, rx.reshape(-1, sps).mean(axis=1)


def run_uncoded_scenario(cfg):
    """Source -> map -> [echo] -> AWGN -> phase noise -> hard demap -> count."""
    if cfg.mode != "uncoded":
        raise ConfigError("mode", "run_uncoded_scenario needs mode 'uncoded'")
    t0 = time.perf_counter()
    s = cfg.scheme
    sym, rx = _uncoded_samples(cfg, cfg.n_symbols)
    sym_hat = demap_symbols(rx, s)
    stats = {
        "symbol": count_symbol_errors(sym, sym_hat),
        "bit": count_bit_errors(symbols_to_bits(sym, s), symbols_to_bits(sym_hat, s)),
    }
    ebn0 = cfg.channel.ebn0_db
    extra = {}
    if math.isfinite(ebn0):
        extra = {"analytic_ser": analytic_ser(s, ebn0), "analytic_ber": analytic_ber(s, ebn0)}
    return ScenarioResult("uncoded", s.name, ebn0, cfg.seed, stats, extra,
                          time.perf_counter() - t0)


# -- coded chain ------------------------------------------------------------

def _pad_pattern(n, modulo):
    """Fixed, known filler: 1 0 1 0 ... (bits) or 0 1 2 ... (symbols)."""
    return (np.arange(n) + 1) % modulo


@dataclass(frozen=True)
class CodedLayout:
    """Sizes of every stage for ``rs_blocks`` payload blocks."""

    rs_blocks: int
    cell_bits: int
    active_carriers: int
    tail: int = DEFAULT_CONV.tail

    @property
    def payload_bytes(self):
        return self.rs_blocks * DEFAULT_RS.k

    @property
    def rs_bits(self):
        return self.rs_blocks * DEFAULT_RS.n * 8

    @property
    def info_pad(self):
        # encoder input incl. tail must be a whole number of puncture periods
        per = RATE_3_4.period // 2
        return (-(self.rs_bits + self.tail)) % per

    @property
    def coded_bits(self):
        return RATE_3_4.punctured_length(2 * (self.rs_bits + self.info_pad + self.tail))

    @property
    def block_bits(self):
        return self.cell_bits * InterleaverParams().block_cells

    @property
    def coded_pad(self):
        return (-self.coded_bits) % self.block_bits

    @property
    def data_cells(self):
        return (self.coded_bits + self.coded_pad) // self.cell_bits

    @property
    def cell_pad(self):
        return (-self.data_cells) % self.active_carriers

    @property
    def ofdm_symbols(self):
        return (self.data_cells + self.cell_pad) // self.active_carriers


def coded_transmit(payload, cfg):
    """Payload octets -> (OFDM time samples, transmitted coded bits, layout)."""
    s = cfg.scheme
    lay = CodedLayout(cfg.rs_blocks, s.bits_per_symbol, cfg.ofdm.active_carriers)
    blocks = payload.reshape(cfg.rs_blocks, DEFAULT_RS.k)
    cw = np.concatenate([rs_encode(b) for b in blocks])
    info = np.concatenate([np.unpackbits(cw), np.zeros(lay.info_pad, dtype=np.uint8)])
    coded = puncture(conv_encode(info))
    framed = np.concatenate([coded, _pad_pattern(lay.coded_pad, 2).astype(np.uint8)])
    ip = InterleaverParams(cell_bits=s.bits_per_symbol)
    cells = interleave_block(framed.reshape(-1, s.bits_per_symbol), ip)
    sym = bits_to_symbols(cells.ravel(), s)
    sym = np.concatenate([sym, _pad_pattern(lay.cell_pad, s.order)])
    frame = ofdm_modulate(map_symbols(sym, s), cfg.ofdm)
    return frame.time_samples, coded, lay


def coded_receive(samples, cfg, lay, n0):
    """Inverse chain.  Returns (payload estimate, per-stage details)."""
    s = cfg.scheme
    cells = ofdm_demodulate(samples, cfg.ofdm)
    nv = np.full(cells.size, n0 if n0 > 0 else 1.0)
    erased = np.zeros(cells.size, dtype=bool)
    if cfg.channel.echo is not None:
        delay, gain = cfg.channel.echo
        h = channel_freq_response(delay, gain, cfg.ofdm, allow_isi=True)
        cells, erased = equalize_one_tap(cells, h)
        hh = np.tile(np.abs(h) ** 2, cells.size // h.size)
        nv = nv / np.where(erased, 1.0, hh)
    cells = cells[:lay.data_cells]
    llr = demap_soft(cells, s, nv[:lay.data_cells]).reshape(-1, s.bits_per_symbol)
    llr[erased[:lay.data_cells]] = 0.0
    ip = InterleaverParams(cell_bits=s.bits_per_symbol)
    llr = deinterleave_block(llr, ip).ravel()[:lay.coded_bits]
    info = viterbi_decode(depuncture(llr))
    cw_bits = info[:lay.rs_bits]
    cw = np.packbits(cw_bits).reshape(cfg.rs_blocks, DEFAULT_RS.n)
    out = []
    failures = 0
    corrected = 0
    for block in cw:
        try:
            msg, n = rs_decode(block)
            corrected += n
        except DecodeFailure:
            failures += 1
            msg = block[:DEFAULT_RS.k].copy()
        out.append(msg)
    detail = {"llr": llr, "cw_bits": cw_bits, "failures": failures,
              "corrected": corrected, "erased_cells": int(erased.sum())}
    return np.concatenate(out), detail


def run_coded_scenario(cfg, payload=None):
    """RS -> conv -> puncture -> interleave -> map -> OFDM -> channel -> back.

    Noise level refers to energy per active-carrier cell (nominal, unit
    energy), so Es/N0 is what each subcarrier sees after the FFT.
    """
    if cfg.mode != "coded":
        raise ConfigError("mode", "run_coded_scenario needs mode 'coded'")
    t0 = time.perf_counter()
    seed = cfg.seed
    if payload is None:
        rng = np.random.default_rng(stream_seed(seed, STREAM_SOURCE))
        payload = rng.integers(0, 256, size=cfg.rs_blocks * DEFAULT_RS.k, dtype=np.uint8)
    else:
        payload = np.asarray(payload, dtype=np.uint8).ravel()
        if payload.size != cfg.rs_blocks * DEFAULT_RS.k:
            raise ConfigError("rs_blocks", f"payload of {payload.size} octets does not fill "
                                           f"{cfg.rs_blocks} blocks of {DEFAULT_RS.k}")

    samples, coded, lay = coded_transmit(payload, cfg)
    spec = cfg.channel
    x = samples
    if spec.echo is not None:
        x = ch.apply_echo(x, *spec.echo)
    n0 = ch.noise_variance(x, spec, signal_energy=1.0)
    x = ch.apply_awgn(x, spec, signal_energy=1.0, seed=stream_seed(seed, STREAM_AWGN))
    if spec.phase_noise is not None:
        x = ch.apply_phase_noise(x, spec.phase_noise, stream_seed(seed, STREAM_PHASE))

    est, detail = coded_receive(x, cfg, lay, n0)
    hard = (detail["llr"] < 0).astype(np.uint8)
    rs_bits = np.unpackbits(np.concatenate([rs_encode(b) for b in
                                            payload.reshape(cfg.rs_blocks, DEFAULT_RS.k)]))
    stats = {
        "pre_fec_bit": count_bit_errors(coded, hard),
        "post_viterbi_bit": count_bit_errors(rs_bits, detail["cw_bits"]),
        "post_rs_bit": count_bit_errors(np.unpackbits(payload), np.unpackbits(est)),
        "post_rs_byte": count_symbol_errors(payload, est),
        "rs_block": ErrorStats(cfg.rs_blocks, detail["failures"]),
    }
    extra = {
        "payload_exact": bool(np.array_equal(payload, est)),
        "rs_decode_failures": detail["failures"],
        "rs_corrected_symbols": detail["corrected"],
        "erased_cells": detail["erased_cells"],
        "ofdm_symbols": lay.ofdm_symbols,
        "esn0_db": "inf" if spec.esn0_db == math.inf else spec.esn0_db,
    }
    return ScenarioResult("coded", cfg.scheme.name, spec.ebn0_db, seed, stats, extra,
                          time.perf_counter() - t0)


# -- campaigns ----------------------------------------------------------------

def sweep_point_config(cfg, index):
    """Config of sweep point ``index``: its Eb/N0 and derived seed."""
    return dataclasses.replace(
        cfg, sweep=None, seed=derive_seed(cfg.seed, index, 0),
        channel=dataclasses.replace(cfg.channel, noise_ref="ebn0_db",
                                    noise_value_db=float(cfg.sweep[index]),
                                    seed=derive_seed(cfg.seed, index, 0)))


def _run_point(args):
    cfg, index = args
    return run_uncoded_scenario(sweep_point_config(cfg, index))


def sweep_curve(cfg, workers=None):
    """One uncoded run per Eb/N0 in ``cfg.sweep``; rows in sweep order."""
    if not cfg.sweep:
        raise ConfigError("sweep", "needs a non-empty list of Eb/N0 values")
    if cfg.mode != "uncoded":
        raise ConfigError("mode", "sweeps run the uncoded chain")
    workers = cfg.workers if workers is None else workers
    jobs = [(cfg, i) for i in range(len(cfg.sweep))]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_point, jobs))
    return [_run_point(j) for j in jobs]


def scatter_samples(cfg, n_points):
    """Post-channel samples of the uncoded chain."""
    if cfg.mode != "uncoded":
        raise ConfigError("mode", "scatter dumps need the uncoded chain")
    if n_points < 1:
        raise ConfigError("n_points", "must be positive")
    _, rx = _uncoded_samples(cfg, n_points)
    return rx


def dump_scatter(cfg, n_points):
    """CSV text with rows ``index,i,q``."""
    rx = scatter_samples(cfg, n_points)
    lines = ["index,i,q"]
    lines += [f"{i},{z.real!r},{z.imag!r}" for i, z in enumerate(rx.tolist())]
    return "\n".join(lines) + "\n"


def cluster_spread(samples, scheme):
    """Mean distance to the nearest ideal point over half the minimum spacing."""
    pts = scheme.constellation
    d = np.abs(np.asarray(samples)[:, None] - pts[None, :]).min(axis=1)
    return float(d.mean() / scheme.norm)


# Reference modulator-comparison rows: scheme, Eb/N0 (dB), symbol errors, SER.
REFERENCE_TABLE1 = (
    ("QAM16", 12.0, 4, 0.000381),
    ("QAM64", 12.0, 598, 0.05695),
    ("QPSK", 12.0, 1, 0.00095),
    ("QAM16", 15.0, 0, 0.0),
    ("QAM64", 15.0, 42, 0.00400),
    ("QPSK", 15.0, 0, 0.0),
)


def table1_campaign(master_seed=0, n_seeds=30, n_symbols=10500, phase_noise=None):
    """Repeat every reference row over ``n_seeds`` derived seeds.

    Each row is run with the given phase noise and again with AWGN only, on
    the same seeds.  Returns one dict per row.
    """
    from .config import build_config

    pn = ch.PhaseNoiseSpec() if phase_noise is None else phase_noise
    rows = []
    for r, (name, ebn0, ref_err, ref_ser) in enumerate(REFERENCE_TABLE1):
        base = build_config({"mode": "uncoded", "scheme": name, "n_symbols": n_symbols,
                             "channel": {"noise_ref": "ebn0_db", "noise_value_db": ebn0}})
        counts = []
        counts_awgn = []
        for j in range(n_seeds):
            seed = derive_seed(master_seed, r, j)
            c = dataclasses.replace(base, seed=seed)
            c_pn = c.with_channel(phase_noise=pn, seed=seed)
            counts.append(run_uncoded_scenario(c_pn).stats["symbol"].error_units)
            counts_awgn.append(run_uncoded_scenario(c.with_channel(seed=seed))
                               .stats["symbol"].error_units)
        counts = np.array(counts)
        a_ser = analytic_ser(name, ebn0)
        rows.append({
            "scheme": name,
            "bits_per_symbol": base.scheme.bits_per_symbol,
            "ebn0_db": ebn0,
            "phase_noise_dbc_hz": pn.level_dbc_hz,
            "phase_noise_offset_hz": pn.offset_hz,
            "n_symbols": n_symbols,
            "runs": n_seeds,
            "mean_errors": float(counts.mean()),
            "mean_ser": float(counts.mean() / n_symbols),
            "min_errors": int(counts.min()),
            "max_errors": int(counts.max()),
            "zero_error_runs": int(np.count_nonzero(counts == 0)),
            "mean_errors_no_phase_noise": float(np.mean(counts_awgn)),
            "analytic_ser": a_ser,
            "analytic_errors": a_ser * n_symbols,
            "reference_errors": ref_err,
            "reference_ser": ref_ser,
            "errors": [int(c) for c in counts],
        })
    return rows


def config_echo(cfg):
    return config_to_dict(cfg)
