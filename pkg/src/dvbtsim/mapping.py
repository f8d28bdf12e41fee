"""Gray-coded square constellations (QPSK, 16-QAM, 64-QAM) and demappers.

Labeling follows the DVB-T convention.  A cell word ``y0 y1 ... y(m-1)`` is
split by parity: even-indexed bits drive the in-phase axis, odd-indexed bits
the quadrature axis.  On each axis the first bit is the sign (0 means
positive) and the remaining bits are the reflected Gray code of the
magnitude rank counted from the outermost level::

    axis bits   64-QAM level   16-QAM level   QPSK level
    0 00        +7             +3 (0 0)       +1 (0)
    0 01        +5             +1 (0 1)       -1 (1)
    0 11        +3             -1 (1 1)
    0 10        +1             -3 (1 0)
    1 10        -1
    1 11        -3
    1 01        -5
    1 00        -7

So 16-QAM ``1000`` sits at (-3, +3) and ``0000`` at (+3, +3).  Symbol
integers carry ``y0`` in the most significant bit.  Points are scaled to unit
average energy.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ParameterError, SizingError


def _gray_decode(g):
    b = 0
    while g:
        b ^= g
        g >>= 1
    return b


@dataclass(frozen=True)
class Scheme:
    name: str
    bits_per_symbol: int

    @property
    def order(self):
        return 1 << self.bits_per_symbol

    @property
    def axis_bits(self):
        return self.bits_per_symbol // 2

    @property
    def norm(self):
        """Amplitude scale giving unit average energy: 1/sqrt(2(M-1)/3)."""
        return 1.0 / np.sqrt(2.0 * (self.order - 1) / 3.0)

    @cached_property
    def axis_table(self):
        """Unnormalised axis levels indexed by the axis label (sign bit first)."""
        mb = self.axis_bits
        half = 1 << (mb - 1)
        levels = np.empty(1 << mb)
        for label in range(1 << mb):
            sign = label >> (mb - 1)
            rank = _gray_decode(label & (half - 1))
            mag = 2 * half - 1 - 2 * rank
            levels[label] = -mag if sign else mag
        levels.setflags(write=False)
        return levels

    @cached_property
    def constellation(self):
        """Normalised points indexed by symbol integer."""
        m = self.bits_per_symbol
        sym = np.arange(self.order)
        bits = (sym[:, None] >> np.arange(m - 1, -1, -1)) & 1
        i_lab = _pack(bits[:, 0::2])
        q_lab = _pack(bits[:, 1::2])
        pts = (self.axis_table[i_lab] + 1j * self.axis_table[q_lab]) * self.norm
        pts.setflags(write=False)
        return pts

    @cached_property
    def _slicer(self):
        # Candidate axis labels ordered by |level| then positive first, so that
        # argmin resolves exact ties toward the smaller-magnitude level.
        table = self.axis_table
        order = sorted(range(table.size), key=lambda i: (abs(table[i]), -table[i]))
        labels = np.array(order, dtype=np.int64)
        return labels, table[labels] * self.norm

    def __str__(self):
        return self.name


QPSK = Scheme("QPSK", 2)
QAM16 = Scheme("QAM16", 4)
QAM64 = Scheme("QAM64", 6)
SCHEMES = {s.name: s for s in (QPSK, QAM16, QAM64)}

_ALIASES = {"4QAM": "QPSK", "QAM4": "QPSK", "16QAM": "QAM16", "64QAM": "QAM64"}


def get_scheme(name):
    """Look a scheme up by name; accepts ``QAM-16``, ``16QAM``, ``qam16``..."""
    if isinstance(name, Scheme):
        return name
    key = str(name).upper().replace("-", "").replace("_", "")
    key = _ALIASES.get(key, key)
    try:
        return SCHEMES[key]
    except KeyError:
        raise ParameterError(f"unknown scheme {name!r}; expected one of {sorted(SCHEMES)}") from None


def _pack(bits):
    """Rows of bits (MSB first) to integers."""
    bits = np.asarray(bits, dtype=np.int64)
    w = 1 << np.arange(bits.shape[-1] - 1, -1, -1)
    return bits @ w


def bits_to_symbols(bits, s):
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    m = s.bits_per_symbol
    if bits.size % m:
        raise SizingError(f"{bits.size} bits is not a multiple of {m} bits per symbol")
    return _pack(bits.reshape(-1, m))


def symbols_to_bits(sym, s):
    sym = np.asarray(sym, dtype=np.int64).ravel()
    m = s.bits_per_symbol
    return ((sym[:, None] >> np.arange(m - 1, -1, -1)) & 1).astype(np.uint8).ravel()


def map_symbols(sym, s):
    sym = np.asarray(sym, dtype=np.int64)
    if sym.size and (sym.min() < 0 or sym.max() >= s.order):
        raise ParameterError(f"symbol values must lie in [0, {s.order})")
    return s.constellation[sym]


def map_bits(bits, s):
    return map_symbols(bits_to_symbols(bits, s), s)


_TIE_EPS = 1e-9


def _axis_decide(x, s):
    labels, levels = s._slicer
    d = np.abs(x[:, None] - levels[None, :])
    # distances equal up to rounding count as a tie; first candidate wins
    near = d <= d.min(axis=1, keepdims=True) + _TIE_EPS * s.norm
    return labels[np.argmax(near, axis=1)]


def demap_symbols(iq, s):
    """Hard decision to symbol integers (nearest point)."""
    iq = np.asarray(iq, dtype=np.complex128).ravel()
    i_lab = _axis_decide(iq.real, s)
    q_lab = _axis_decide(iq.imag, s)
    mb = s.axis_bits
    sym = np.zeros(iq.size, dtype=np.int64)
    # Re-interleave axis label bits into y0 y1 y2 ... order.
    for j in range(mb):
        shift_in = mb - 1 - j
        sym = (sym << 1) | ((i_lab >> shift_in) & 1)
        sym = (sym << 1) | ((q_lab >> shift_in) & 1)
    return sym


def demap_hard(iq, s):
    return symbols_to_bits(demap_symbols(iq, s), s)


def demap_soft(iq, s, noise_var):
    """Max-log LLRs, positive meaning bit 0, in cell-word bit order.

    ``noise_var`` is the complex noise variance N0, either a scalar or one
    value per sample.
    """
    iq = np.asarray(iq, dtype=np.complex128).ravel()
    nv = np.asarray(noise_var, dtype=np.float64)
    if np.any(~(nv > 0)):
        raise ParameterError("noise_var must be positive")
    nv = np.broadcast_to(nv, iq.shape)
    mb = s.axis_bits
    table = s.axis_table * s.norm
    labels = np.arange(table.size)
    out = np.empty((iq.size, s.bits_per_symbol))
    for axis, x in enumerate((iq.real, iq.imag)):
        d = (x[:, None] - table[None, :]) ** 2
        for j in range(mb):
            bit = (labels >> (mb - 1 - j)) & 1
            d1 = d[:, bit == 1].min(axis=1)
            d0 = d[:, bit == 0].min(axis=1)
            out[:, 2 * j + axis] = (d1 - d0) / nv
    return out.ravel()
