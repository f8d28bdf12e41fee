"""GF(2^8) arithmetic and the systematic Reed-Solomon (255, 223) outer codec.

Codewords are stored highest-degree coefficient first: the message occupies
the first ``k`` octets and the ``n - k`` parity octets follow.  Decoding is
syndrome based (Berlekamp-Massey, Chien search, Forney).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._backend import kernels
from .errors import DecodeFailure, ParameterError, SizingError

FIELD_POLY = 0x11D


@lru_cache(maxsize=None)
def field_tables(poly=FIELD_POLY):
    """Antilog (512 entries, doubled) and log tables for GF(2^8) mod ``poly``.

    Raises ParameterError if ``poly`` is not a primitive degree-8 polynomial.
    """
    if not 0x100 <= poly <= 0x1FF:
        raise ParameterError(f"field polynomial must have degree 8, got {poly:#x}")
    exp = np.zeros(512, dtype=np.uint8)
    log = np.zeros(256, dtype=np.int64)
    x = 1
    for i in range(255):
        if i and x == 1:
            raise ParameterError(f"field polynomial {poly:#x} is not primitive")
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & 0x100:
            x ^= poly
    if x != 1:
        raise ParameterError(f"field polynomial {poly:#x} is not primitive")
    exp[255:510] = exp[:255]
    exp.setflags(write=False)
    log.setflags(write=False)
    return exp, log


def gf256_mul(a, b, poly=FIELD_POLY):
    """Product of two field elements."""
    if a == 0 or b == 0:
        return 0
    exp, log = field_tables(poly)
    return int(exp[log[a] + log[b]])


def gf256_inv(a, poly=FIELD_POLY):
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(2^8)")
    exp, log = field_tables(poly)
    return int(exp[255 - log[a]])


def gf256_pow(a, e, poly=FIELD_POLY):
    if a == 0:
        return 0 if e else 1
    exp, log = field_tables(poly)
    return int(exp[(int(log[a]) * e) % 255])


@dataclass(frozen=True)
class RsParams:
    """Code geometry.  ``n < 255`` gives a shortened code."""

    n: int = 255
    k: int = 223
    field_poly: int = FIELD_POLY
    generator_root_base: int = 0

    def __post_init__(self):
        if not 0 < self.k < self.n <= 255:
            raise ParameterError(f"need 0 < k < n <= 255, got n={self.n}, k={self.k}")
        if (self.n - self.k) % 2:
            raise ParameterError("n - k must be even")
        field_tables(self.field_poly)

    @property
    def nsym(self):
        return self.n - self.k

    @property
    def t(self):
        return self.nsym // 2


DEFAULT_RS = RsParams()


@lru_cache(maxsize=None)
def generator_poly(params=DEFAULT_RS):
    """g(x) = prod (x - alpha^(base + i)), i < n - k; highest degree first."""
    g = [1]
    for i in range(params.nsym):
        root = gf256_pow(2, params.generator_root_base + i, params.field_poly)
        nxt = g + [0]
        for j, c in enumerate(g):
            nxt[j + 1] ^= gf256_mul(c, root, params.field_poly)
        g = nxt
    out = np.array(g, dtype=np.uint8)
    out.setflags(write=False)
    return out


def rs_encode(msg, params=DEFAULT_RS):
    """Systematic encode of one ``k``-octet message into ``n`` octets."""
    msg = np.asarray(bytearray(msg) if isinstance(msg, (bytes, bytearray)) else msg,
                     dtype=np.uint8)
    if msg.ndim != 1 or msg.size != params.k:
        raise SizingError(f"RS({params.n},{params.k}) message must be {params.k} octets, "
                          f"got {msg.size}")
    exp, log = field_tables(params.field_poly)
    parity = kernels.rs_remainder(msg, generator_poly(params), exp, log)
    return np.concatenate([msg, np.asarray(parity, dtype=np.uint8)])


def _berlekamp_massey(synd, poly):
    """Error-locator polynomial, lowest degree first, and its register length."""
    mul = gf256_mul
    C = [1]
    B = [1]
    L = 0
    m = 1
    b = 1
    for i, s in enumerate(synd):
        d = s
        for j in range(1, L + 1):
            if j < len(C):
                d ^= mul(C[j], synd[i - j], poly)
        if d == 0:
            m += 1
            continue
        coef = mul(d, gf256_inv(b, poly), poly)
        T = list(C)
        need = len(B) + m
        if len(C) < need:
            C = C + [0] * (need - len(C))
        for j, bj in enumerate(B):
            C[j + m] ^= mul(coef, bj, poly)
        if 2 * L <= i:
            L = i + 1 - L
            B = T
            b = d
            m = 1
        else:
            m += 1
    while len(C) > 1 and C[-1] == 0:
        C.pop()
    return C, L


def _poly_eval_low(p, x, poly):
    """Evaluate a lowest-degree-first polynomial at x."""
    acc = 0
    for c in reversed(p):
        acc = gf256_mul(acc, x, poly) ^ c
    return acc


def rs_decode(cw, params=DEFAULT_RS):
    """Correct up to ``t`` symbol errors.

    Returns
    -------
    msg : ndarray of uint8, shape (k,)
    corrected : int
        Number of octets changed.

    Raises
    ------
    DecodeFailure
        When the error pattern is detectably uncorrectable.
    """
    cw = np.array(bytearray(cw) if isinstance(cw, (bytes, bytearray)) else cw,
                  dtype=np.uint8)
    if cw.ndim != 1 or cw.size != params.n:
        raise SizingError(f"RS({params.n},{params.k}) codeword must be {params.n} octets, "
                          f"got {cw.size}")
    poly = params.field_poly
    exp, log = field_tables(poly)
    synd = [int(s) for s in kernels.rs_syndromes(cw, params.nsym,
                                                  params.generator_root_base, exp, log)]
    if not any(synd):
        return cw[:params.k].copy(), 0

    locator, n_err = _berlekamp_massey(synd, poly)
    if n_err > params.t or len(locator) - 1 != n_err:
        raise DecodeFailure(f"error locator degree {len(locator) - 1} exceeds t={params.t}")
    positions = np.asarray(kernels.rs_chien(np.array(locator, dtype=np.uint8),
                                            params.n, exp, log))
    if positions.size != n_err:
        raise DecodeFailure(f"found {positions.size} locator roots, expected {n_err}")

    # Omega(x) = S(x) Lambda(x) mod x^(2t)
    omega = [0] * params.nsym
    for i, s in enumerate(synd):
        if s == 0:
            continue
        for j, c in enumerate(locator):
            if i + j < params.nsym:
                omega[i + j] ^= gf256_mul(s, c, poly)
    # formal derivative: odd-degree terms survive in characteristic 2
    deriv = [locator[j] if j % 2 else 0 for j in range(1, len(locator))]

    for pos in positions:
        degree = params.n - 1 - int(pos)
        x = gf256_pow(2, degree, poly)
        x_inv = gf256_inv(x, poly)
        den = _poly_eval_low(deriv, x_inv, poly)
        if den == 0:
            raise DecodeFailure("zero locator derivative in Forney step")
        mag = gf256_mul(_poly_eval_low(omega, x_inv, poly), gf256_inv(den, poly), poly)
        mag = gf256_mul(mag, gf256_pow(x, (1 - params.generator_root_base) % 255, poly), poly)
        cw[pos] ^= mag

    check = kernels.rs_syndromes(cw, params.nsym, params.generator_root_base, exp, log)
    if np.any(check):
        raise DecodeFailure("residual syndrome after correction")
    return cw[:params.k].copy(), int(n_err)
