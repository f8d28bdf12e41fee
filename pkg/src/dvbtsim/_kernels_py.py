"""Pure-numpy implementations of the hot kernels.

Mirrors the signatures of the compiled ``_kernels`` module one-to-one so the
two are interchangeable.  GF(2^8) kernels take the field's exp/log tables as
arguments; ``exp`` must have 512 entries (doubled) and ``log[0]`` is unused.
"""

import numpy as np

BACKEND = "python"


def viterbi(llr, pred, pred_sym, pred_bit, n_steps, terminated):
    """Hard-output Viterbi over a rate-1/2 trellis.

    Parameters
    ----------
    llr : ndarray of float64, shape (2 * n_steps,)
        Soft values, positive meaning bit 0.  Zero is an erasure.
    pred : ndarray of int64, shape (n_states, 2)
        The two predecessor states of every state.
    pred_sym : ndarray of int64, shape (n_states, 2)
        Two-bit label of the branch from ``pred[s, i]`` into ``s``, first
        coded bit in the MSB.
    pred_bit : ndarray of uint8, shape (n_states,)
        Input bit that leads into each state.
    n_steps : int
    terminated : bool
        Trace back from state 0 instead of the best final state.

    Returns
    -------
    ndarray of uint8, shape (n_steps,)
    """
    llr = np.ascontiguousarray(llr, dtype=np.float64).reshape(n_steps, 2)
    n_states = pred.shape[0]

    # Branch cost per 2-bit label, minimised: sum of llr over coded ones.
    labels = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.float64)
    bm = llr @ labels.T

    pm = np.full(n_states, np.inf)
    pm[0] = 0.0
    decisions = np.empty((n_steps, n_states), dtype=np.uint8)
    for t in range(n_steps):
        cand = pm[pred] + bm[t][pred_sym]
        choice = (cand[:, 1] < cand[:, 0]).astype(np.uint8)
        decisions[t] = choice
        pm = np.where(choice, cand[:, 1], cand[:, 0])
        pm -= pm.min()

    state = 0 if terminated else int(np.argmin(pm))
    bits = np.empty(n_steps, dtype=np.uint8)
    for t in range(n_steps - 1, -1, -1):
        bits[t] = pred_bit[state]
        state = pred[state, decisions[t, state]]
    return bits


def _mul_vec(a, b, exp, log):
    out = exp[(log[a].astype(np.int64) + log[b]) % 255]
    return np.where((a == 0) | (b == 0), 0, out).astype(np.uint8)


def rs_remainder(msg, gen, exp, log):
    """Remainder of msg(x) * x^nsym divided by the monic generator ``gen``.

    ``gen`` holds coefficients highest degree first, ``gen[0] == 1``.
    """
    msg = np.asarray(msg, dtype=np.uint8)
    gen = np.asarray(gen, dtype=np.uint8)
    nsym = gen.size - 1
    tail = gen[1:]
    reg = np.zeros(nsym, dtype=np.uint8)
    for byte in msg:
        fb = int(byte) ^ int(reg[0])
        reg[:-1] = reg[1:]
        reg[-1] = 0
        if fb:
            reg ^= _mul_vec(np.full(nsym, fb, dtype=np.uint8), tail, exp, log)
    return reg


def rs_syndromes(cw, nsym, fcr, exp, log):
    """S_j = cw(alpha^(fcr + j)) for j < nsym, cw[0] the highest-degree term."""
    cw = np.asarray(cw, dtype=np.uint8)
    n = cw.size
    degree = np.arange(n - 1, -1, -1, dtype=np.int64)
    root_pow = np.arange(fcr, fcr + nsym, dtype=np.int64)
    nz = cw != 0
    if not nz.any():
        return np.zeros(nsym, dtype=np.uint8)
    lc = log[cw[nz]].astype(np.int64)
    terms = exp[(lc[None, :] + root_pow[:, None] * degree[nz][None, :]) % 255]
    return np.bitwise_xor.reduce(terms.astype(np.uint8), axis=1)


def rs_chien(locator, n, exp, log):
    """Codeword indices whose error-locator root test passes.

    ``locator`` is Lambda(x) lowest degree first.  Index ``i`` (degree
    ``n - 1 - i``) is an error location when Lambda(alpha^-(n-1-i)) == 0.
    """
    locator = np.asarray(locator, dtype=np.uint8)
    degree = np.arange(n - 1, -1, -1, dtype=np.int64)
    acc = np.zeros(n, dtype=np.uint8)
    for j, coef in enumerate(locator):
        if coef == 0:
            continue
        power = (int(log[coef]) - j * degree) % 255
        acc ^= exp[power].astype(np.uint8)
    return np.flatnonzero(acc == 0)
