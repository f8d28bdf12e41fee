"""Compare the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py --repeat 5
"""

import argparse
import importlib
import timeit

import numpy as np

from dvbtsim import conv, rs


def load_backends():
    out = {"python": importlib.import_module("dvbtsim._kernels_py")}
    try:
        out["cython"] = importlib.import_module("dvbtsim._kernels")
    except ImportError:
        pass
    return out


def cases(n_bits, rng):
    _, _, pred, pred_sym, pred_bit = conv.trellis(conv.DEFAULT_CONV)
    bits = rng.integers(0, 2, n_bits)
    llr = (1.0 - 2.0 * conv.conv_encode(bits)) + rng.normal(scale=0.8, size=2 * (n_bits + 6))
    n_steps = n_bits + 6

    p = rs.DEFAULT_RS
    exp, log = rs.field_tables(p.field_poly)
    gen = rs.generator_poly(p)
    msg = rng.integers(0, 256, p.k, dtype=np.uint8)
    cw = rs.rs_encode(msg)
    cw[rng.choice(p.n, 8, replace=False)] ^= 0x5A
    locator = np.array([1, 7, 19, 3], dtype=np.uint8)

    return {
        f"viterbi ({n_bits} bits)":
            lambda k: k.viterbi(llr, pred, pred_sym, pred_bit, n_steps, True),
        "rs parity (223 B)": lambda k: k.rs_remainder(msg, gen, exp, log),
        "rs syndromes (255 B)": lambda k: k.rs_syndromes(cw, p.nsym, p.generator_root_base,
                                                         exp, log),
        "rs chien (255 roots)": lambda k: k.rs_chien(locator, p.n, exp, log),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bits", type=int, default=9000, help="Viterbi message length")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=0, help="calls per repeat (0 = auto)")
    args = ap.parse_args(argv)

    backends = load_backends()
    if "cython" not in backends:
        print("compiled extension not built; timing the fallback only")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<24}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")
    for name, fn in cases(args.bits, rng).items():
        times = {}
        for b, mod in backends.items():
            t = timeit.Timer(lambda: fn(mod))
            number = args.number or t.autorange()[0]
            times[b] = min(t.repeat(args.repeat, number)) / number
        row = f"{name:<24}" + "".join(f"{times[b] * 1e3:>11.3f} ms" for b in backends)
        if "cython" in times:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
