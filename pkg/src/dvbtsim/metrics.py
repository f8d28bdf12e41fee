"""Error counting, Wilson intervals, and analytic AWGN error rates.

The analytic curves assume uncoded square M-QAM with the Gray labeling of
``mapping`` on an AWGN channel:

SER (exact)::

    p   = 2 (1 - 1/sqrt(M)) Q(sqrt(3 Es/N0 / (M - 1)))
    SER = 1 - (1 - p)^2

BER (exact for Gray square QAM; Cho and Yoon's per-bit expansion)::

    BER = 1/log2(sqrt M) * sum_{k=1}^{log2 sqrt M} P_k
    P_k = 1/sqrt(M) * sum_{i=0}^{(1 - 2^-k) sqrt(M) - 1}
              (-1)^floor(i 2^(k-1) / sqrt M)
              * (2^(k-1) - floor(i 2^(k-1) / sqrt M + 1/2))
              * 2 Q((2i + 1) sqrt(3 Es/N0 / (M - 1)))

For QPSK both reduce to the familiar Q(sqrt(2 Eb/N0)) per bit.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .channel import ebn0_to_esn0
from .errors import SizingError
from .mapping import get_scheme

Z95 = 1.959963984540054


@dataclass(frozen=True)
class ErrorStats:
    total_units: int
    error_units: int

    def __post_init__(self):
        if not 0 <= self.error_units <= self.total_units:
            raise ValueError("need 0 <= error_units <= total_units")

    @property
    def rate(self):
        return self.error_units / self.total_units if self.total_units else 0.0

    @property
    def ci95(self):
        return wilson_interval(self.error_units, self.total_units)

    @property
    def half_width(self):
        lo, hi = self.ci95
        return (hi - lo) / 2.0

    def as_dict(self):
        lo, hi = self.ci95
        return {"total": self.total_units, "errors": self.error_units,
                "rate": self.rate, "ci95": [lo, hi]}

    def __add__(self, other):
        return ErrorStats(self.total_units + other.total_units,
                          self.error_units + other.error_units)


def wilson_interval(errors, total, z=Z95):
    if total == 0:
        return (0.0, 1.0)
    p = errors / total
    z2 = z * z
    den = 1.0 + z2 / total
    centre = (p + z2 / (2 * total)) / den
    half = z * math.sqrt(p * (1 - p) / total + z2 / (4 * total * total)) / den
    # Clamp so the point estimate is always inside despite rounding.
    return (min(max(0.0, centre - half), p), max(min(1.0, centre + half), p))


def _paired(tx, rx):
    tx = np.asarray(tx).ravel()
    rx = np.asarray(rx).ravel()
    if tx.size != rx.size:
        raise SizingError(f"streams differ in length: {tx.size} vs {rx.size}")
    return tx, rx


def count_symbol_errors(tx, rx):
    tx, rx = _paired(tx, rx)
    return ErrorStats(int(tx.size), int(np.count_nonzero(tx != rx)))


def count_bit_errors(tx, rx):
    tx, rx = _paired(tx, rx)
    return ErrorStats(int(tx.size), int(np.count_nonzero(tx.astype(np.uint8) != rx.astype(np.uint8))))


def q_function(x):
    """Gaussian tail probability P(N(0,1) > x)."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def _esn0_linear(scheme, ebn0_db, code_rate):
    return 10.0 ** (ebn0_to_esn0(ebn0_db, scheme.bits_per_symbol, code_rate) / 10.0)


def analytic_ser(scheme, ebn0_db, code_rate=1.0):
    s = get_scheme(scheme)
    M = s.order
    es = _esn0_linear(s, ebn0_db, code_rate)
    p = 2.0 * (1.0 - 1.0 / math.sqrt(M)) * q_function(math.sqrt(3.0 * es / (M - 1)))
    # 1 - (1 - p)^2 without cancellation for small p
    return float(p * (2.0 - p))


def analytic_ber(scheme, ebn0_db, code_rate=1.0):
    s = get_scheme(scheme)
    M = s.order
    rt = int(round(math.sqrt(M)))
    nb = s.axis_bits
    arg = math.sqrt(3.0 * _esn0_linear(s, ebn0_db, code_rate) / (M - 1))
    total = 0.0
    for k in range(1, nb + 1):
        pk = 0.0
        for i in range(int((1 - 2.0 ** -k) * rt)):
            f = i * 2 ** (k - 1) / rt
            w = (-1) ** math.floor(f) * (2 ** (k - 1) - math.floor(f + 0.5))
            pk += w * 2.0 * q_function((2 * i + 1) * arg)
        total += pk / rt
    return float(total / nb)
