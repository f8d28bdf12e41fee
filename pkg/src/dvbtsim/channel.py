"""Channel impairments: AWGN, oscillator phase noise, and a static echo.

Noise level can be given three equivalent ways, resolved to a per-sample
SNR as follows::

    esn0 = ebn0 + 10 log10(bits_per_symbol * code_rate)
    snr_per_sample = esn0 - 10 log10(samples_per_symbol)

Every random draw comes from ``numpy.random.default_rng(seed)`` so a channel
call is a pure function of its input, spec and seed.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.signal import lfilter

from .errors import ParameterError

NOISE_REFS = ("snr_per_sample_db", "esn0_db", "ebn0_db")


def ebn0_to_esn0(ebn0_db, k, code_rate=1.0):
    if k < 1:
        raise ParameterError(f"bits per symbol must be >= 1, got {k}")
    if not 0 < code_rate <= 1:
        raise ParameterError(f"code rate must be in (0, 1], got {code_rate}")
    return ebn0_db + 10.0 * math.log10(k * code_rate)


def esn0_to_ebn0(esn0_db, k, code_rate=1.0):
    return esn0_db - (ebn0_to_esn0(0.0, k, code_rate))


def esn0_to_snr(esn0_db, samples_per_symbol=1):
    if samples_per_symbol < 1:
        raise ParameterError("samples_per_symbol must be >= 1")
    return esn0_db - 10.0 * math.log10(samples_per_symbol)


@dataclass(frozen=True)
class PhaseNoiseSpec:
    """Phase-noise level as a one-sided phase PSD at a frequency offset.

    The process is white Gaussian noise through a one-pole low-pass with
    corner ``corner_hz`` (default: a tenth of the offset), scaled so its
    exact discrete-time PSD equals ``level_dbc_hz`` at ``offset_hz``.
    ``level_dbc_hz = -inf`` disables it.
    """

    level_dbc_hz: float = -76.0
    offset_hz: float = 100.0
    sample_rate_hz: float = 10_000.0
    corner_hz: Optional[float] = None

    def __post_init__(self):
        if not self.level_dbc_hz < 0:
            raise ParameterError("phase-noise level must be negative (dBc/Hz)")
        if not self.offset_hz > 0:
            raise ParameterError("phase-noise offset must be positive")
        if not self.offset_hz < self.sample_rate_hz / 2:
            raise ParameterError("phase-noise offset must be below half the sample rate")
        if self.corner_hz is None:
            object.__setattr__(self, "corner_hz", self.offset_hz / 10.0)
        if not 0 < self.corner_hz < self.sample_rate_hz / 2:
            raise ParameterError("corner frequency must lie in (0, sample_rate/2)")

    @property
    def enabled(self):
        return math.isfinite(self.level_dbc_hz)

    @property
    def corner(self):
        return self.corner_hz

    def filter_coefficients(self):
        """``(pole, gain)`` of phi[n] = pole * phi[n-1] + gain * w[n]."""
        fs = self.sample_rate_hz
        pole = math.exp(-2.0 * math.pi * self.corner / fs)
        w = 2.0 * math.pi * self.offset_hz / fs
        denom = abs(1.0 - pole * complex(math.cos(w), -math.sin(w))) ** 2
        # one-sided PSD of the AR(1) output: 2 * gain^2 / (fs * denom)
        gain2 = 10.0 ** (self.level_dbc_hz / 10.0) * fs * denom / 2.0
        return pole, math.sqrt(gain2)

    def psd(self, f):
        """Model one-sided phase PSD (rad^2/Hz) at frequencies ``f``."""
        pole, gain = self.filter_coefficients()
        w = 2.0 * np.pi * np.asarray(f, dtype=float) / self.sample_rate_hz
        return 2.0 * gain ** 2 / (self.sample_rate_hz * np.abs(1.0 - pole * np.exp(-1j * w)) ** 2)

    def variance(self):
        pole, gain = self.filter_coefficients()
        return gain ** 2 / (1.0 - pole ** 2)


@dataclass(frozen=True)
class ChannelSpec:
    noise_ref: str = "ebn0_db"
    noise_value_db: float = math.inf
    bits_per_symbol: int = 2
    code_rate: float = 1.0
    samples_per_symbol: int = 1
    phase_noise: Optional[PhaseNoiseSpec] = None
    echo: Optional[tuple] = None
    seed: int = 0
    signal_energy: str = "measured"

    def __post_init__(self):
        if self.noise_ref not in NOISE_REFS:
            raise ParameterError(f"noise_ref must be one of {NOISE_REFS}")
        if math.isnan(self.noise_value_db) or self.noise_value_db == -math.inf:
            raise ParameterError("noise level must be finite or +inf (noiseless)")
        if self.bits_per_symbol not in (2, 4, 6):
            raise ParameterError("bits_per_symbol must be 2, 4 or 6")
        if not 0 < self.code_rate <= 1:
            raise ParameterError("code_rate must be in (0, 1]")
        if self.samples_per_symbol < 1:
            raise ParameterError("samples_per_symbol must be >= 1")
        if self.signal_energy not in ("measured", "nominal"):
            raise ParameterError("signal_energy must be 'measured' or 'nominal'")
        if self.echo is not None:
            delay, _gain = self.echo
            if delay < 0 or int(delay) != delay:
                raise ParameterError("echo delay must be a non-negative integer")

    @property
    def esn0_db(self):
        v = self.noise_value_db
        if self.noise_ref == "esn0_db":
            return v
        if self.noise_ref == "ebn0_db":
            return ebn0_to_esn0(v, self.bits_per_symbol, self.code_rate)
        return v + 10.0 * math.log10(self.samples_per_symbol)

    @property
    def snr_per_sample_db(self):
        return esn0_to_snr(self.esn0_db, self.samples_per_symbol)

    @property
    def ebn0_db(self):
        if self.noise_ref == "ebn0_db":
            return self.noise_value_db
        return esn0_to_ebn0(self.esn0_db, self.bits_per_symbol, self.code_rate)


def noise_variance(iq, spec, signal_energy=None):
    """Complex noise variance N0 per sample that ``apply_awgn`` would add.

    ``signal_energy`` overrides the spec: a number is used as the nominal
    per-sample energy, ``"measured"`` takes the mean |x|^2 of ``iq``.
    """
    snr_db = spec.snr_per_sample_db
    if snr_db == math.inf:
        return 0.0
    mode = spec.signal_energy if signal_energy is None else signal_energy
    if mode == "measured":
        iq = np.asarray(iq)
        es = float(np.mean(np.abs(iq) ** 2)) if iq.size else 0.0
    elif mode == "nominal":
        es = 1.0
    else:
        es = float(mode)
    return es / 10.0 ** (snr_db / 10.0)


def apply_awgn(iq, spec, signal_energy=None, seed=None):
    """Add circular complex Gaussian noise of variance N0 (N0/2 per axis)."""
    iq = np.asarray(iq, dtype=np.complex128)
    n0 = noise_variance(iq, spec, signal_energy)
    if n0 == 0.0:
        return iq.copy()
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    sigma = math.sqrt(n0 / 2.0)
    noise = rng.standard_normal(iq.shape) + 1j * rng.standard_normal(iq.shape)
    return iq + sigma * noise


def phase_noise_process(n, spec, seed):
    """Stationary phase samples (radians) with the calibrated spectrum."""
    if not spec.enabled:
        return np.zeros(n)
    pole, gain = spec.filter_coefficients()
    rng = np.random.default_rng(seed)
    start = rng.standard_normal() * math.sqrt(spec.variance())
    w = rng.standard_normal(n)
    phi, _ = lfilter([gain], [1.0, -pole], w, zi=[pole * start])
    return phi


def apply_phase_noise(iq, spec, seed):
    """Rotate each sample by the phase-noise process; magnitudes are untouched."""
    iq = np.asarray(iq, dtype=np.complex128)
    if spec is None or not spec.enabled:
        return iq.copy()
    phi = phase_noise_process(iq.size, spec, seed).reshape(iq.shape)
    return iq * np.exp(1j * phi)


def apply_echo(iq, delay, gain):
    """out[n] = in[n] + gain * in[n - delay], nothing before the first sample."""
    iq = np.asarray(iq, dtype=np.complex128)
    if delay < 0 or int(delay) != delay:
        raise ParameterError("echo delay must be a non-negative integer")
    delay = int(delay)
    out = iq.copy()
    if gain == 0 or delay >= iq.size:
        return out
    out[delay:] += complex(gain) * iq[:iq.size - delay]
    return out
