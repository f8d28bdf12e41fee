"""Command-line entry point.

Exit codes: 0 success, 1 configuration error, 2 runtime failure (including
RS decode failures when ``--fail-on-decode-error`` is given).
"""

import argparse
import logging
import math
import sys
import time

from . import sim
from .channel import PhaseNoiseSpec
from .config import build_config, config_to_dict, load_config_file
from .errors import ConfigError, DvbtsimError
from .report import (CODED_COLUMNS, SWEEP_COLUMNS, TABLE1_COLUMNS, UNCODED_COLUMNS, Report,
                     coded_row, uncoded_row)

log = logging.getLogger("dvbtsim")


def _sweep_values(text):
    """``0:18:3`` (inclusive) or ``0,3,6``."""
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise argparse.ArgumentTypeError("range must be start:stop:step with step > 0")
        start, stop, step = parts
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(n)]
    return [float(v) for v in text.split(",") if v.strip()]


def _add_common(p, symbols=True):
    p.add_argument("--config", help="YAML scenario file; flags override its values")
    p.add_argument("--scheme", help="QPSK, QAM16 or QAM64")
    noise = p.add_mutually_exclusive_group()
    noise.add_argument("--ebn0", type=float, help="Eb/N0 in dB")
    noise.add_argument("--esn0", type=float, help="Es/N0 in dB")
    noise.add_argument("--snr", type=float, help="SNR per sample in dB")
    p.add_argument("--samples-per-symbol", type=int)
    p.add_argument("--signal-energy", choices=("measured", "nominal"))
    p.add_argument("--phase-noise", help="level in dBc/Hz, or 'off'")
    p.add_argument("--pn-offset", type=float, help="phase-noise offset frequency (Hz)")
    p.add_argument("--pn-rate", type=float, help="phase-noise sample rate (Hz)")
    p.add_argument("--echo-delay", type=int, help="echo delay in samples")
    p.add_argument("--echo-gain", help="complex echo gain, e.g. 0.5 or 0.3+0.2j")
    if symbols:
        p.add_argument("--symbols", type=int, help="symbols per run (uncoded)")
    p.add_argument("--seed", type=int)
    p.add_argument("--output", help="path prefix; writes PREFIX.csv / PREFIX.json")
    p.add_argument("--format", help="comma list of csv,json (default both)")


def build_parser():
    parser = argparse.ArgumentParser(prog="dvbtsim", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("-q", "--quiet", action="store_true", help="no table on stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("uncoded", help="modulator -> AWGN -> phase noise -> demodulator")
    _add_common(p)

    p = sub.add_parser("coded", help="full RS/conv/interleave/QAM/OFDM chain")
    _add_common(p, symbols=False)
    p.add_argument("--blocks", type=int, help="RS(255,223) payload blocks")
    p.add_argument("--fft-size", type=int)
    p.add_argument("--carriers", type=int, help="active carriers")
    p.add_argument("--guard", help="guard fraction: 1/4, 1/8, 1/16, 1/32")
    p.add_argument("--fail-on-decode-error", action="store_true")

    p = sub.add_parser("sweep", help="uncoded SER/BER against Eb/N0")
    _add_common(p)
    p.add_argument("--sweep", type=_sweep_values, help="0:18:3 or 0,3,6 (dB)")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("scatter", help="dump post-channel I/Q samples as CSV")
    _add_common(p, symbols=False)
    p.add_argument("--points", type=int, default=10000)

    p = sub.add_parser("table1", help="repeat the six-row modulator comparison over seeds")
    p.add_argument("--seeds", type=int, default=30, help="master seeds per row")
    p.add_argument("--seed", type=int, default=0, help="campaign master seed")
    p.add_argument("--symbols", type=int, default=10500)
    p.add_argument("--phase-noise", default="-76")
    p.add_argument("--pn-offset", type=float)
    p.add_argument("--pn-rate", type=float)
    p.add_argument("--output")
    p.add_argument("--format")
    return parser


def _overrides(args, mode):
    d = load_config_file(args.config) if getattr(args, "config", None) else {}
    d["mode"] = mode
    ch = dict(d.get("channel") or {})
    if args.scheme:
        d["scheme"] = args.scheme
    for flag, ref in (("ebn0", "ebn0_db"), ("esn0", "esn0_db"), ("snr", "snr_per_sample_db")):
        v = getattr(args, flag)
        if v is not None:
            ch["noise_ref"], ch["noise_value_db"] = ref, v
    if args.samples_per_symbol is not None:
        ch["samples_per_symbol"] = args.samples_per_symbol
    if args.signal_energy:
        ch["signal_energy"] = args.signal_energy
    pn = ch.get("phase_noise")
    pn = dict(pn) if isinstance(pn, dict) else ({"level_dbc_hz": pn} if pn not in (None, False) else None)
    if args.phase_noise is not None:
        pn = None if args.phase_noise.lower() == "off" else dict(pn or {}, level_dbc_hz=args.phase_noise)
    for flag, key in (("pn_offset", "offset_hz"), ("pn_rate", "sample_rate_hz")):
        v = getattr(args, flag)
        if v is not None:
            if pn is None:
                raise ConfigError(f"channel.phase_noise.{key}", "phase noise is off")
            pn[key] = v
    ch["phase_noise"] = pn
    if args.echo_delay is not None or args.echo_gain is not None:
        echo = dict(ch.get("echo") or {})
        if args.echo_delay is not None:
            echo["delay"] = args.echo_delay
        if args.echo_gain is not None:
            echo["gain"] = args.echo_gain
        ch["echo"] = echo
    d["channel"] = ch
    if getattr(args, "symbols", None) is not None:
        d["n_symbols"] = args.symbols
    if args.seed is not None:
        d["seed"] = args.seed
    out = d.get("output") or {}
    out = {"path": out} if isinstance(out, str) else dict(out)
    if args.output:
        out["path"] = args.output
    if args.format:
        out["formats"] = args.format
    d["output"] = out
    if mode == "coded":
        o = dict(d.get("ofdm") or {})
        for flag, key in (("fft_size", "fft_size"), ("carriers", "active_carriers"),
                          ("guard", "guard_fraction")):
            v = getattr(args, flag)
            if v is not None:
                o[key] = v
        d["ofdm"] = o
        if args.blocks is not None:
            d["rs_blocks"] = args.blocks
    if mode == "sweep":
        d["mode"] = "uncoded"
        if args.sweep is not None:
            d["sweep"] = args.sweep
        if args.workers is not None:
            d["workers"] = args.workers
    if mode == "scatter":
        d["mode"] = "uncoded"
    return d


def _emit(report, cfg_out, quiet):
    if not quiet:
        print(report.to_table())
    if cfg_out.path:
        for path in report.write(cfg_out.path, cfg_out.formats):
            log.info("wrote %s", path)


def _cmd_uncoded(args):
    cfg = build_config(_overrides(args, "uncoded"))
    t0 = time.perf_counter()
    res = sim.run_uncoded_scenario(cfg)
    rep = Report("uncoded", config_to_dict(cfg), cfg.seed, UNCODED_COLUMNS,
                 [uncoded_row(res)], [res.as_dict()], time.perf_counter() - t0)
    _emit(rep, cfg.output, args.quiet)
    return 0


def _cmd_coded(args):
    cfg = build_config(_overrides(args, "coded"))
    t0 = time.perf_counter()
    res = sim.run_coded_scenario(cfg)
    rep = Report("coded", config_to_dict(cfg), cfg.seed, CODED_COLUMNS,
                 [coded_row(res, cfg.rs_blocks)], [res.as_dict()], time.perf_counter() - t0)
    _emit(rep, cfg.output, args.quiet)
    if args.fail_on_decode_error and res.extra["rs_decode_failures"]:
        log.error("%d RS block(s) failed to decode", res.extra["rs_decode_failures"])
        return 2
    return 0


def _cmd_sweep(args):
    cfg = build_config(_overrides(args, "sweep"))
    if not cfg.sweep:
        raise ConfigError("sweep", "give --sweep or a sweep list in the config file")
    t0 = time.perf_counter()
    results = sim.sweep_curve(cfg)
    rep = Report("sweep", config_to_dict(cfg), cfg.seed, SWEEP_COLUMNS,
                 [uncoded_row(r) for r in results], [], time.perf_counter() - t0)
    _emit(rep, cfg.output, args.quiet)
    return 0


def _cmd_scatter(args):
    cfg = build_config(_overrides(args, "scatter"))
    text = sim.dump_scatter(cfg, args.points)
    if cfg.output.path:
        with open(f"{cfg.output.path}.csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_table1(args):
    if args.seeds < 1 or args.symbols < 1:
        raise ConfigError("seeds" if args.seeds < 1 else "n_symbols", "must be positive")
    kw = {}
    if args.pn_offset is not None:
        kw["offset_hz"] = args.pn_offset
    if args.pn_rate is not None:
        kw["sample_rate_hz"] = args.pn_rate
    try:
        pn = PhaseNoiseSpec(level_dbc_hz=float(args.phase_noise), **kw)
    except (ValueError, DvbtsimError) as exc:
        raise ConfigError("channel.phase_noise", str(exc)) from None
    t0 = time.perf_counter()
    rows = sim.table1_campaign(args.seed, args.seeds, args.symbols, pn)
    config = {"campaign": "table1", "master_seed": args.seed, "seeds": args.seeds,
              "n_symbols": args.symbols,
              "phase_noise": {"level_dbc_hz": pn.level_dbc_hz, "offset_hz": pn.offset_hz,
                              "sample_rate_hz": pn.sample_rate_hz, "corner_hz": pn.corner},
              "seed_derivation": "derive_seed(master_seed, row_index, trial_index)"}
    rep = Report("table1", config, args.seed, TABLE1_COLUMNS, rows,
                 [{"scheme": r["scheme"], "ebn0_db": r["ebn0_db"], "errors": r["errors"]}
                  for r in rows], time.perf_counter() - t0)
    formats = tuple(f.strip() for f in (args.format or "csv,json").split(","))
    if not args.quiet:
        print(rep.to_table())
    if args.output:
        rep.write(args.output, formats)
    return 0


COMMANDS = {"uncoded": _cmd_uncoded, "coded": _cmd_coded, "sweep": _cmd_sweep,
            "scatter": _cmd_scatter, "table1": _cmd_table1}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (DvbtsimError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.exception("unexpected failure")
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
