# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.  Same contracts as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()

BACKEND = "cython"


def viterbi(llr, pred, pred_sym, pred_bit, Py_ssize_t n_steps, bint terminated):
    cdef const double[::1] L = np.ascontiguousarray(llr, dtype=np.float64)
    cdef const cnp.int64_t[:, ::1] P = np.ascontiguousarray(pred, dtype=np.int64)
    cdef const cnp.int64_t[:, ::1] PS = np.ascontiguousarray(pred_sym, dtype=np.int64)
    cdef const cnp.uint8_t[::1] PB = np.ascontiguousarray(pred_bit, dtype=np.uint8)
    cdef Py_ssize_t n_states = P.shape[0]
    if L.shape[0] != 2 * n_steps:
        raise ValueError("llr length must be 2 * n_steps")

    dec_arr = np.empty((n_steps, n_states), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] dec = dec_arr
    pm_arr = np.full(n_states, INFINITY)
    nxt_arr = np.empty(n_states)
    cdef double[::1] pm = pm_arr
    cdef double[::1] nxt = nxt_arr
    cdef double[::1] tmp
    cdef double bm[4]
    cdef double c0, c1, lo
    cdef Py_ssize_t t, s
    pm[0] = 0.0

    for t in range(n_steps):
        bm[0] = 0.0
        bm[1] = L[2 * t + 1]
        bm[2] = L[2 * t]
        bm[3] = L[2 * t] + L[2 * t + 1]
        lo = INFINITY
        for s in range(n_states):
            c0 = pm[P[s, 0]] + bm[PS[s, 0]]
            c1 = pm[P[s, 1]] + bm[PS[s, 1]]
            if c1 < c0:
                dec[t, s] = 1
                nxt[s] = c1
            else:
                dec[t, s] = 0
                nxt[s] = c0
            if nxt[s] < lo:
                lo = nxt[s]
        for s in range(n_states):
            nxt[s] -= lo
        tmp = pm
        pm = nxt
        nxt = tmp

    cdef Py_ssize_t state = 0
    if not terminated:
        lo = INFINITY
        for s in range(n_states):
            if pm[s] < lo:
                lo = pm[s]
                state = s
    bits_arr = np.empty(n_steps, dtype=np.uint8)
    cdef cnp.uint8_t[::1] bits = bits_arr
    for t in range(n_steps - 1, -1, -1):
        bits[t] = PB[state]
        state = P[state, dec[t, state]]
    return bits_arr


cdef inline int _mul(int a, int b, const cnp.uint8_t[::1] ex, const cnp.int64_t[::1] lg) noexcept nogil:
    if a == 0 or b == 0:
        return 0
    return ex[lg[a] + lg[b]]


def rs_remainder(msg, gen, exp, log):
    cdef const cnp.uint8_t[::1] M = np.ascontiguousarray(msg, dtype=np.uint8)
    cdef const cnp.uint8_t[::1] G = np.ascontiguousarray(gen, dtype=np.uint8)
    cdef const cnp.uint8_t[::1] EX = np.ascontiguousarray(exp, dtype=np.uint8)
    cdef const cnp.int64_t[::1] LG = np.ascontiguousarray(log, dtype=np.int64)
    cdef Py_ssize_t nsym = G.shape[0] - 1
    reg_arr = np.zeros(nsym, dtype=np.uint8)
    cdef cnp.uint8_t[::1] reg = reg_arr
    cdef Py_ssize_t i, j
    cdef int fb
    for i in range(M.shape[0]):
        fb = M[i] ^ reg[0]
        for j in range(nsym - 1):
            reg[j] = reg[j + 1]
        reg[nsym - 1] = 0
        if fb:
            for j in range(nsym):
                reg[j] ^= _mul(fb, G[j + 1], EX, LG)
    return reg_arr


def rs_syndromes(cw, Py_ssize_t nsym, Py_ssize_t fcr, exp, log):
    cdef const cnp.uint8_t[::1] C = np.ascontiguousarray(cw, dtype=np.uint8)
    cdef const cnp.uint8_t[::1] EX = np.ascontiguousarray(exp, dtype=np.uint8)
    cdef const cnp.int64_t[::1] LG = np.ascontiguousarray(log, dtype=np.int64)
    cdef Py_ssize_t n = C.shape[0]
    out_arr = np.zeros(nsym, dtype=np.uint8)
    cdef cnp.uint8_t[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef int acc, root
    for j in range(nsym):
        root = EX[(fcr + j) % 255]
        # Horner, highest degree first
        acc = 0
        for i in range(n):
            acc = _mul(acc, root, EX, LG) ^ C[i]
        out[j] = acc
    return out_arr


def rs_chien(locator, Py_ssize_t n, exp, log):
    cdef const cnp.uint8_t[::1] LOC = np.ascontiguousarray(locator, dtype=np.uint8)
    cdef const cnp.uint8_t[::1] EX = np.ascontiguousarray(exp, dtype=np.uint8)
    cdef const cnp.int64_t[::1] LG = np.ascontiguousarray(log, dtype=np.int64)
    cdef Py_ssize_t nl = LOC.shape[0]
    cdef Py_ssize_t i, j, deg
    cdef int acc
    cdef long p
    found = []
    for i in range(n):
        deg = n - 1 - i
        acc = 0
        for j in range(nl):
            if LOC[j] == 0:
                continue
            p = (LG[LOC[j]] - j * deg) % 255
            if p < 0:
                p += 255
            acc ^= EX[p]
        if acc == 0:
            found.append(i)
    return np.asarray(found, dtype=np.int64)
