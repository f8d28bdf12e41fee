"""Inner code: K=7 (171, 133) convolutional code, rate-3/4 puncturing, Viterbi.

Coded streams interleave the two generator outputs as X0 Y0 X1 Y1 ...
Soft values follow the LLR convention used across the package: positive
means bit 0, magnitude is reliability, exactly zero is an erasure.

The rate-3/4 keep-mask is the DVB one, X: 1 0 1 and Y: 1 1 0.  Over a period
of three information bits the mother code emits X1 Y1 X2 Y2 X3 Y3 and the
transmitted bits are X1 Y1 Y2 X3, so ``n`` information bits become ``4n/3``
channel bits.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ._backend import kernels
from .errors import ParameterError, SizingError


@dataclass(frozen=True)
class ConvParams:
    constraint_length: int = 7
    generators: tuple = (0o171, 0o133)
    terminate: bool = True

    def __post_init__(self):
        K = self.constraint_length
        if K < 2 or len(self.generators) != 2:
            raise ParameterError("need K >= 2 and exactly two generators")
        if any(g <= 0 or g >= 1 << K for g in self.generators):
            raise ParameterError(f"generators must be nonzero {K}-bit masks")
        if not any(g >> (K - 1) & 1 for g in self.generators):
            raise ParameterError("no generator taps the current input bit")

    @property
    def memory(self):
        return self.constraint_length - 1

    @property
    def tail(self):
        return self.memory if self.terminate else 0


DEFAULT_CONV = ConvParams()


@dataclass(frozen=True)
class PunctureConfig:
    """Keep-mask over consecutive mother-code output bits."""

    pattern: tuple = (1, 1, 0, 1, 1, 0)
    name: str = field(default="3/4", compare=False)

    def __post_init__(self):
        if not self.pattern or not any(self.pattern):
            raise ParameterError("puncture pattern must keep at least one bit")
        if len(self.pattern) % 2:
            raise ParameterError("puncture period must span whole mother-code pairs")

    @property
    def period(self):
        return len(self.pattern)

    @property
    def kept(self):
        return int(sum(self.pattern))

    def punctured_length(self, mother_len):
        if mother_len % self.period:
            raise SizingError(f"length {mother_len} is not a multiple of the puncture "
                              f"period {self.period}")
        return mother_len // self.period * self.kept

    def mother_length(self, punctured_len):
        if punctured_len % self.kept:
            raise SizingError(f"punctured length {punctured_len} is not a multiple of "
                              f"{self.kept} kept bits per period")
        return punctured_len // self.kept * self.period


RATE_3_4 = PunctureConfig()
NO_PUNCTURE = PunctureConfig(pattern=(1, 1), name="1/2")


def _parity(x):
    return bin(x).count("1") & 1


@lru_cache(maxsize=None)
def trellis(params=DEFAULT_CONV):
    """Forward and backward trellis tables.

    The shift register is ``(u << (K-1)) | state``; bit ``K-2`` of the state
    is the most recent past input.  Returns ``(next_state, outputs, pred,
    pred_sym, pred_bit)``.
    """
    K = params.constraint_length
    n_states = 1 << (K - 1)
    g0, g1 = params.generators
    next_state = np.zeros((n_states, 2), dtype=np.int64)
    outputs = np.zeros((n_states, 2), dtype=np.int64)
    pred = np.zeros((n_states, 2), dtype=np.int64)
    pred_sym = np.zeros((n_states, 2), dtype=np.int64)
    pred_bit = np.zeros(n_states, dtype=np.uint8)
    fill = [0] * n_states
    for s in range(n_states):
        for u in (0, 1):
            reg = (u << (K - 1)) | s
            ns = reg >> 1
            sym = (_parity(reg & g0) << 1) | _parity(reg & g1)
            next_state[s, u] = ns
            outputs[s, u] = sym
            pred[ns, fill[ns]] = s
            pred_sym[ns, fill[ns]] = sym
            pred_bit[ns] = u
            fill[ns] += 1
    tables = (next_state, outputs, pred, pred_sym, pred_bit)
    for a in tables:
        a.setflags(write=False)
    return tables


def conv_encode(bits, params=DEFAULT_CONV):
    """Rate-1/2 encode, appending the zero tail when ``params.terminate``."""
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    K = params.constraint_length
    u = np.concatenate([bits, np.zeros(params.tail, dtype=np.uint8)])
    # Bit j of each generator mask taps the input delayed by K-1-j.
    padded = np.concatenate([np.zeros(K - 1, dtype=np.uint8), u])
    out = np.empty((u.size, 2), dtype=np.uint8)
    for col, g in enumerate(params.generators):
        acc = np.zeros(u.size, dtype=np.uint8)
        for delay in range(K):
            if g >> (K - 1 - delay) & 1:
                acc ^= padded[K - 1 - delay:K - 1 - delay + u.size]
        out[:, col] = acc
    return out.ravel()


def puncture(bits, cfg=RATE_3_4):
    bits = np.asarray(bits).ravel()
    cfg.punctured_length(bits.size)
    mask = np.tile(np.asarray(cfg.pattern, dtype=bool), bits.size // cfg.period)
    return bits[mask]


def depuncture(soft, cfg=RATE_3_4):
    """Reinsert punctured positions as zero-valued erasures."""
    soft = np.asarray(soft, dtype=np.float64).ravel()
    n = cfg.mother_length(soft.size)
    mask = np.tile(np.asarray(cfg.pattern, dtype=bool), n // cfg.period)
    out = np.zeros(n, dtype=np.float64)
    out[mask] = soft
    return out


def viterbi_decode(soft, params=DEFAULT_CONV):
    """Maximum-likelihood message for a soft mother-code stream.

    With termination the tail bits are decoded and dropped; the returned
    message has ``len(soft) / 2 - tail`` bits.
    """
    soft = np.asarray(soft, dtype=np.float64).ravel()
    if soft.size % 2 or soft.size // 2 < params.tail:
        raise SizingError(f"soft stream of length {soft.size} is not 2 * (k + {params.tail})")
    if not np.all(np.isfinite(soft)):
        raise ParameterError("soft values must be finite")
    n_steps = soft.size // 2
    _, _, pred, pred_sym, pred_bit = trellis(params)
    bits = kernels.viterbi(soft, pred, pred_sym, pred_bit, n_steps, params.terminate)
    return np.asarray(bits, dtype=np.uint8)[:n_steps - params.tail]


def hard_to_soft(bits):
    """Map hard bits to unit LLRs (0 -> +1, 1 -> -1)."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)
