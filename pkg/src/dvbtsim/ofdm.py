"""OFDM modulation with cyclic prefix, and a genie-aided one-tap equalizer.

Active carriers sit symmetrically around DC, which stays empty.  With ``A``
active carriers the physical indices are ``-(A // 2) .. -1`` followed by
``1 .. A - A // 2``; cells are loaded in that (ascending frequency) order.
Transforms are unitary so energy per cell equals energy per time sample
summed over the useful part.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import ParameterError, SizingError

GUARD_FRACTIONS = (Fraction(1, 4), Fraction(1, 8), Fraction(1, 16), Fraction(1, 32))


@dataclass(frozen=True)
class OfdmParams:
    fft_size: int = 2048
    active_carriers: int = 1705
    guard_fraction: Fraction = Fraction(1, 4)
    channel_bandwidth_hz: float = 8e6

    def __post_init__(self):
        n = self.fft_size
        if n < 4 or n & (n - 1):
            raise ParameterError(f"fft_size must be a power of two, got {n}")
        if not 0 < self.active_carriers < n:
            raise ParameterError("need 0 < active_carriers < fft_size (DC is unused)")
        gf = Fraction(self.guard_fraction)
        object.__setattr__(self, "guard_fraction", gf)
        if gf not in GUARD_FRACTIONS:
            raise ParameterError(f"guard_fraction must be one of 1/4, 1/8, 1/16, 1/32, got {gf}")
        if (n * gf).denominator != 1:
            raise ParameterError("fft_size * guard_fraction must be an integer")

    @property
    def guard_samples(self):
        return int(self.fft_size * self.guard_fraction)

    @property
    def symbol_samples(self):
        return self.fft_size + self.guard_samples

    @cached_property
    def carrier_indices(self):
        """Physical (signed) carrier index of each loaded cell position."""
        a = self.active_carriers
        neg = a // 2
        idx = np.concatenate([np.arange(-neg, 0), np.arange(1, a - neg + 1)])
        idx.setflags(write=False)
        return idx

    @cached_property
    def fft_bins(self):
        bins = self.carrier_indices % self.fft_size
        bins.setflags(write=False)
        return bins


@dataclass
class OfdmFrame:
    time_samples: np.ndarray
    n_symbols: int


def ofdm_modulate(cells, p=OfdmParams()):
    cells = np.asarray(cells, dtype=np.complex128).ravel()
    if cells.size % p.active_carriers:
        raise SizingError(f"{cells.size} cells do not fill whole symbols of "
                          f"{p.active_carriers} carriers")
    n_sym = cells.size // p.active_carriers
    grid = np.zeros((n_sym, p.fft_size), dtype=np.complex128)
    grid[:, p.fft_bins] = cells.reshape(n_sym, p.active_carriers)
    useful = np.fft.ifft(grid, axis=1, norm="ortho")
    g = p.guard_samples
    framed = np.concatenate([useful[:, p.fft_size - g:], useful], axis=1)
    return OfdmFrame(time_samples=framed.ravel(), n_symbols=n_sym)


def ofdm_demodulate(frame, p=OfdmParams()):
    samples = frame.time_samples if isinstance(frame, OfdmFrame) else frame
    samples = np.asarray(samples, dtype=np.complex128).ravel()
    if samples.size % p.symbol_samples:
        raise SizingError(f"{samples.size} samples is not a whole number of "
                          f"{p.symbol_samples}-sample symbols")
    sym = samples.reshape(-1, p.symbol_samples)[:, p.guard_samples:]
    grid = np.fft.fft(sym, axis=1, norm="ortho")
    return grid[:, p.fft_bins].ravel()


def channel_freq_response(delay, gain, p=OfdmParams(), allow_isi=False):
    """Per-active-carrier response of a direct path plus one echo.

    ``allow_isi`` evaluates the formula for echoes longer than the guard,
    where it no longer describes what the receiver sees.
    """
    if delay < 0 or int(delay) != delay:
        raise ParameterError("delay must be a non-negative integer sample count")
    if delay > p.guard_samples and not allow_isi:
        raise ParameterError(f"echo delay {delay} exceeds the {p.guard_samples}-sample guard")
    k = p.carrier_indices
    return 1.0 + complex(gain) * np.exp(-2j * np.pi * k * int(delay) / p.fft_size)


def equalize_one_tap(cells, h, floor=1e-6):
    """Divide each cell by its carrier response.

    ``h`` has one entry per active carrier and is tiled across symbols.
    Returns ``(equalized, erased)``; erased cells are those with
    ``|h| <= floor`` and come back as 0.
    """
    cells = np.asarray(cells, dtype=np.complex128).ravel()
    h = np.asarray(h, dtype=np.complex128).ravel()
    if h.size == 0 or cells.size % h.size:
        raise SizingError(f"{cells.size} cells do not match a {h.size}-carrier response")
    hh = np.tile(h, cells.size // h.size)
    erased = np.abs(hh) <= floor
    safe = np.where(erased, 1.0, hh)
    out = np.where(erased, 0.0, cells / safe)
    return out, erased
