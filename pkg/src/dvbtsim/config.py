"""Scenario configuration: validation, canonical dict form, file loading.

A config is a nested mapping (YAML on disk) mirroring ``ScenarioConfig``::

    mode: uncoded            # or coded
    scheme: QAM64
    n_symbols: 10500         # uncoded: source symbols per run
    rs_blocks: 1             # coded: RS(255,223) payload blocks per run
    seed: 1
    sweep: [0, 3, 6]         # optional Eb/N0 list (uncoded)
    workers: 1
    channel:
      noise_ref: ebn0_db     # snr_per_sample_db | esn0_db | ebn0_db
      noise_value_db: 12     # .inf for a noiseless channel
      samples_per_symbol: 1
      signal_energy: measured
      phase_noise: {level_dbc_hz: -76, offset_hz: 100, sample_rate_hz: 10000}
      echo: {delay: 16, gain: [0.5, 0.0]}
    ofdm: {fft_size: 2048, active_carriers: 1705, guard_fraction: 1/4}
    output: {path: results/run, formats: [csv, json]}
"""

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import yaml

from .channel import ChannelSpec, PhaseNoiseSpec
from .conv import RATE_3_4
from .errors import ConfigError, DvbtsimError
from .mapping import Scheme, get_scheme
from .ofdm import OfdmParams
from .rs import DEFAULT_RS

MODES = ("uncoded", "coded")
FORMATS = ("csv", "json")


def coded_rate(rs=DEFAULT_RS, punct=RATE_3_4):
    """Net information rate of the concatenated code."""
    return (rs.k / rs.n) * (punct.period / 2) / punct.kept


@dataclass(frozen=True)
class OutputSpec:
    path: Optional[str] = None
    formats: tuple = FORMATS


@dataclass(frozen=True)
class ScenarioConfig:
    mode: str = "uncoded"
    scheme: Scheme = get_scheme("QAM16")
    channel: ChannelSpec = ChannelSpec(bits_per_symbol=4)
    n_symbols: int = 10500
    rs_blocks: int = 1
    ofdm: Optional[OfdmParams] = None
    sweep: Optional[tuple] = None
    seed: int = 0
    workers: int = 1
    output: OutputSpec = OutputSpec()

    def with_channel(self, **changes):
        return dataclasses.replace(self, channel=dataclasses.replace(self.channel, **changes))


def _num(value, path, kind=float):
    if isinstance(value, bool):
        raise ConfigError(path, f"expected a number, got {value!r}")
    try:
        if kind is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        if isinstance(value, str):
            value = value.strip().lower()
            if value in ("inf", "+inf", ".inf", "infinity", "off", "none"):
                return math.inf
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(path, f"expected {'an integer' if kind is int else 'a number'}, "
                                f"got {value!r}") from None


def _complex(value, path):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(path, "complex gain as [re, im] needs two entries")
        return complex(_num(value[0], path), _num(value[1], path))
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", "").replace("i", "j"))
        except ValueError:
            raise ConfigError(path, f"cannot parse complex gain {value!r}") from None
    return complex(_num(value, path))


def _check_keys(d, allowed, path):
    if not isinstance(d, dict):
        raise ConfigError(path or "<root>", f"expected a mapping, got {type(d).__name__}")
    extra = sorted(set(d) - set(allowed))
    if extra:
        where = f"{path}.{extra[0]}" if path else extra[0]
        raise ConfigError(where, "unknown field")


def _phase_noise(d, path):
    if d is None or d is False:
        return None
    if isinstance(d, (int, float, str)) and not isinstance(d, bool):
        d = {"level_dbc_hz": d}
    _check_keys(d, ("level_dbc_hz", "offset_hz", "sample_rate_hz", "corner_hz"), path)
    level = _num(d.get("level_dbc_hz", -76.0), f"{path}.level_dbc_hz")
    if level == math.inf:
        return None
    kw = {"level_dbc_hz": level}
    for key in ("offset_hz", "sample_rate_hz", "corner_hz"):
        if d.get(key) is not None:
            kw[key] = _num(d[key], f"{path}.{key}")
    try:
        return PhaseNoiseSpec(**kw)
    except DvbtsimError as exc:
        raise ConfigError(path, str(exc)) from None


def _echo(d, path):
    if d is None or d is False:
        return None
    _check_keys(d, ("delay", "gain"), path)
    if "delay" not in d:
        raise ConfigError(f"{path}.delay", "required")
    delay = _num(d["delay"], f"{path}.delay", int)
    if delay < 0:
        raise ConfigError(f"{path}.delay", "must be >= 0")
    return (delay, _complex(d.get("gain", 0.0), f"{path}.gain"))


def _ofdm(d, path):
    if d is None:
        d = {}
    _check_keys(d, ("fft_size", "active_carriers", "guard_fraction", "channel_bandwidth_hz"), path)
    kw = {}
    for key in ("fft_size", "active_carriers"):
        if key in d:
            kw[key] = _num(d[key], f"{path}.{key}", int)
    if "guard_fraction" in d:
        try:
            kw["guard_fraction"] = Fraction(str(d["guard_fraction"]))
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"{path}.guard_fraction",
                              f"cannot parse {d['guard_fraction']!r}") from None
    if "channel_bandwidth_hz" in d:
        kw["channel_bandwidth_hz"] = _num(d["channel_bandwidth_hz"], f"{path}.channel_bandwidth_hz")
    try:
        return OfdmParams(**kw)
    except DvbtsimError as exc:
        raise ConfigError(path, str(exc)) from None


TOP_KEYS = ("mode", "scheme", "channel", "n_symbols", "rs_blocks", "ofdm", "sweep",
            "seed", "workers", "output")
CHANNEL_KEYS = ("noise_ref", "noise_value_db", "samples_per_symbol", "signal_energy",
                "phase_noise", "echo", "bits_per_symbol", "code_rate")


def build_config(d):
    """Validate a nested mapping into a ``ScenarioConfig``.

    Raises ConfigError naming the dotted path of the first bad field.
    """
    d = dict(d or {})
    _check_keys(d, TOP_KEYS, "")
    mode = d.get("mode", "uncoded")
    if mode not in MODES:
        raise ConfigError("mode", f"must be one of {MODES}, got {mode!r}")
    try:
        scheme = get_scheme(d.get("scheme", "QAM16"))
    except DvbtsimError as exc:
        raise ConfigError("scheme", str(exc)) from None

    seed = _num(d.get("seed", 0), "seed", int)
    if not 0 <= seed < 2 ** 64:
        raise ConfigError("seed", "must be an unsigned 64-bit integer")
    n_symbols = _num(d.get("n_symbols", 10500), "n_symbols", int)
    if n_symbols < 1:
        raise ConfigError("n_symbols", "must be positive")
    rs_blocks = _num(d.get("rs_blocks", 1), "rs_blocks", int)
    if rs_blocks < 1:
        raise ConfigError("rs_blocks", "must be positive")
    workers = _num(d.get("workers", 1), "workers", int)
    if workers < 1:
        raise ConfigError("workers", "must be positive")

    ch = d.get("channel") or {}
    _check_keys(ch, CHANNEL_KEYS, "channel")
    rate = 1.0 if mode == "uncoded" else coded_rate()
    if "bits_per_symbol" in ch and _num(ch["bits_per_symbol"], "channel.bits_per_symbol", int) \
            != scheme.bits_per_symbol:
        raise ConfigError("channel.bits_per_symbol", "must match the scheme")
    if "code_rate" in ch and not math.isclose(_num(ch["code_rate"], "channel.code_rate"), rate):
        raise ConfigError("channel.code_rate", f"must equal {rate!r} in {mode} mode")
    try:
        channel = ChannelSpec(
            noise_ref=ch.get("noise_ref", "ebn0_db"),
            noise_value_db=_num(ch.get("noise_value_db", math.inf), "channel.noise_value_db"),
            bits_per_symbol=scheme.bits_per_symbol,
            code_rate=rate,
            samples_per_symbol=_num(ch.get("samples_per_symbol", 1),
                                    "channel.samples_per_symbol", int),
            phase_noise=_phase_noise(ch.get("phase_noise"), "channel.phase_noise"),
            echo=_echo(ch.get("echo"), "channel.echo"),
            seed=seed,
            signal_energy=ch.get("signal_energy", "measured"),
        )
    except ConfigError:
        raise
    except DvbtsimError as exc:
        raise ConfigError("channel", str(exc)) from None

    ofdm = None
    if mode == "coded":
        ofdm = _ofdm(d.get("ofdm"), "ofdm")
    elif d.get("ofdm") is not None:
        raise ConfigError("ofdm", "only valid in coded mode")

    sweep = d.get("sweep")
    if sweep is not None:
        if isinstance(sweep, (int, float, str)):
            sweep = [sweep]
        if not sweep:
            raise ConfigError("sweep", "must be a non-empty list")
        sweep = tuple(_num(v, f"sweep[{i}]") for i, v in enumerate(sweep))
        if any(not math.isfinite(v) for v in sweep):
            raise ConfigError("sweep", "values must be finite")

    out = d.get("output") or {}
    if isinstance(out, str):
        out = {"path": out}
    _check_keys(out, ("path", "formats"), "output")
    formats = out.get("formats", FORMATS)
    if isinstance(formats, str):
        formats = [f.strip() for f in formats.split(",") if f.strip()]
    bad = [f for f in formats if f not in FORMATS]
    if bad:
        raise ConfigError("output.formats", f"unknown format {bad[0]!r}")
    output = OutputSpec(path=out.get("path"), formats=tuple(formats))

    return ScenarioConfig(mode=mode, scheme=scheme, channel=channel, n_symbols=n_symbols,
                          rs_blocks=rs_blocks, ofdm=ofdm, sweep=sweep, seed=seed,
                          workers=workers, output=output)


def _float_out(x):
    return "inf" if x == math.inf else x


def config_to_dict(cfg):
    """Canonical, JSON-serialisable form; ``build_config`` round-trips it."""
    ch = cfg.channel
    d = {
        "mode": cfg.mode,
        "scheme": cfg.scheme.name,
        "seed": cfg.seed,
        "channel": {
            "noise_ref": ch.noise_ref,
            "noise_value_db": _float_out(ch.noise_value_db),
            "samples_per_symbol": ch.samples_per_symbol,
            "signal_energy": ch.signal_energy,
            "bits_per_symbol": ch.bits_per_symbol,
            "code_rate": ch.code_rate,
            "phase_noise": None if ch.phase_noise is None else {
                "level_dbc_hz": ch.phase_noise.level_dbc_hz,
                "offset_hz": ch.phase_noise.offset_hz,
                "sample_rate_hz": ch.phase_noise.sample_rate_hz,
                "corner_hz": ch.phase_noise.corner,
            },
            "echo": None if ch.echo is None else {
                "delay": ch.echo[0], "gain": [ch.echo[1].real, ch.echo[1].imag]},
        },
    }
    if cfg.mode == "uncoded":
        d["n_symbols"] = cfg.n_symbols
    else:
        d["rs_blocks"] = cfg.rs_blocks
        o = cfg.ofdm
        d["ofdm"] = {"fft_size": o.fft_size, "active_carriers": o.active_carriers,
                     "guard_fraction": str(o.guard_fraction),
                     "channel_bandwidth_hz": o.channel_bandwidth_hz}
    if cfg.sweep is not None:
        d["sweep"] = list(cfg.sweep)
    return d


def load_config_file(path):
    with open(path, encoding="utf-8") as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError("<file>", f"cannot parse {path}: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config file must hold a mapping")
    return data
