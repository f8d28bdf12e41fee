"""Machine-readable reports (CSV and JSON) and a plain-text table.

Files carry only deterministic content: config, seeds, counts, rates and
versions.  Wall-clock time lives on the ``Report`` object and in the text
table, never in CSV/JSON, so reruns are byte-identical.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__

SWEEP_COLUMNS = ("ebn0_db", "scheme", "n_symbols", "symbol_errors", "ser", "ser_ci_lo",
                 "ser_ci_hi", "bit_errors", "ber", "analytic_ser", "analytic_ber", "seed")
UNCODED_COLUMNS = SWEEP_COLUMNS
CODED_COLUMNS = ("ebn0_db", "esn0_db", "scheme", "rs_blocks", "ofdm_symbols", "pre_fec_bits",
                 "pre_fec_bit_errors", "pre_fec_ber", "post_viterbi_bit_errors",
                 "post_viterbi_ber", "post_rs_bit_errors", "post_rs_ber",
                 "rs_decode_failures", "rs_corrected_symbols", "payload_exact", "seed")
TABLE1_COLUMNS = ("scheme", "bits_per_symbol", "ebn0_db", "phase_noise_dbc_hz",
                  "phase_noise_offset_hz", "n_symbols", "runs", "mean_errors", "mean_ser",
                  "min_errors", "max_errors", "zero_error_runs", "mean_errors_no_phase_noise",
                  "analytic_ser", "analytic_errors", "reference_errors", "reference_ser")


def _fmt(v):
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def uncoded_row(result):
    sym = result.stats["symbol"]
    bit = result.stats["bit"]
    lo, hi = sym.ci95
    return {
        "ebn0_db": result.ebn0_db, "scheme": result.scheme, "n_symbols": sym.total_units,
        "symbol_errors": sym.error_units, "ser": sym.rate, "ser_ci_lo": lo, "ser_ci_hi": hi,
        "bit_errors": bit.error_units, "ber": bit.rate,
        "analytic_ser": result.extra.get("analytic_ser", ""),
        "analytic_ber": result.extra.get("analytic_ber", ""), "seed": result.seed,
    }


def coded_row(result, rs_blocks):
    st = result.stats
    return {
        "ebn0_db": result.ebn0_db, "esn0_db": result.extra["esn0_db"], "scheme": result.scheme,
        "rs_blocks": rs_blocks, "ofdm_symbols": result.extra["ofdm_symbols"],
        "pre_fec_bits": st["pre_fec_bit"].total_units,
        "pre_fec_bit_errors": st["pre_fec_bit"].error_units, "pre_fec_ber": st["pre_fec_bit"].rate,
        "post_viterbi_bit_errors": st["post_viterbi_bit"].error_units,
        "post_viterbi_ber": st["post_viterbi_bit"].rate,
        "post_rs_bit_errors": st["post_rs_bit"].error_units, "post_rs_ber": st["post_rs_bit"].rate,
        "rs_decode_failures": result.extra["rs_decode_failures"],
        "rs_corrected_symbols": result.extra["rs_corrected_symbols"],
        "payload_exact": result.extra["payload_exact"], "seed": result.seed,
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return _fmt(obj)
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    return obj


@dataclass
class Report:
    kind: str
    config: dict
    seed: int
    columns: tuple
    rows: list
    details: list = field(default_factory=list)
    elapsed_s: float = 0.0

    def to_json(self):
        doc = {
            "kind": self.kind,
            "generator": {"package": "dvbtsim", "version": __version__,
                          "numpy": np.__version__},
            "seed": self.seed,
            "config": self.config,
            "columns": list(self.columns),
            "rows": self.rows,
            "details": self.details,
        }
        return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(row[c]) for c in self.columns])
        return buf.getvalue()

    def to_table(self):
        widths = [max(len(c), *(len(_short(r[c])) for r in self.rows)) if self.rows else len(c)
                  for c in self.columns]
        lines = ["  ".join(c.rjust(w) for c, w in zip(self.columns, widths))]
        for r in self.rows:
            lines.append("  ".join(_short(r[c]).rjust(w) for c, w in zip(self.columns, widths)))
        lines.append(f"[{self.kind}] seed={self.seed} elapsed={self.elapsed_s:.2f}s")
        return "\n".join(lines)

    def write(self, path, formats=("csv", "json")):
        written = []
        for fmt in formats:
            target = f"{path}.{fmt}"
            text = self.to_csv() if fmt == "csv" else self.to_json()
            with open(target, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            written.append(target)
        return written


def _short(v):
    if isinstance(v, float) and math.isfinite(v):
        return f"{v:.4g}"
    return _fmt(v)
