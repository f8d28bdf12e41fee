"""Deterministic baseband simulation of a DVB-T style COFDM link."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .channel import ChannelSpec, PhaseNoiseSpec, apply_awgn, apply_echo, apply_phase_noise
from .config import ScenarioConfig, build_config
from .conv import conv_encode, depuncture, puncture, viterbi_decode
from .errors import ConfigError, DecodeFailure, DvbtsimError, ParameterError, SizingError
from .interleave import deinterleave_block, interleave_block
from .mapping import QAM16, QAM64, QPSK, demap_hard, demap_soft, get_scheme, map_bits
from .metrics import analytic_ber, analytic_ser, count_bit_errors, count_symbol_errors
from .ofdm import OfdmParams, ofdm_demodulate, ofdm_modulate
from .rs import gf256_mul, rs_decode, rs_encode
from .sim import run_coded_scenario, run_uncoded_scenario, sweep_curve

__all__ = [
    "BACKEND", "ChannelSpec", "PhaseNoiseSpec", "apply_awgn", "apply_echo", "apply_phase_noise",
    "ScenarioConfig", "build_config", "conv_encode", "depuncture", "puncture", "viterbi_decode",
    "ConfigError", "DecodeFailure", "DvbtsimError", "ParameterError", "SizingError",
    "deinterleave_block", "interleave_block", "QAM16", "QAM64", "QPSK", "demap_hard",
    "demap_soft", "get_scheme", "map_bits", "analytic_ber", "analytic_ser", "count_bit_errors",
    "count_symbol_errors", "OfdmParams", "ofdm_demodulate", "ofdm_modulate", "gf256_mul",
    "rs_decode", "rs_encode", "run_coded_scenario", "run_uncoded_scenario", "sweep_curve",
]
