"""Numba-jitted hot kernels.

Mirrors the signatures in `_kernels_numpy`; selected via `backend`.
Tensors for a batch of experiments are passed flattened with offset
arrays so one compiled kernel serves every party count.
"""

import numpy as np
from numba import njit

GENERAL = 0
MERMIN = 1


@njit(cache=True)
def expval(amps, x_mask, z_mask, ny_mod4):
    """<psi|P|psi> for the Pauli string with the given bitmasks.

    P|i> = i^{nY} (-1)^{popcount(i & z_mask)} |i ^ x_mask>.
    """
    acc_re = 0.0
    acc_im = 0.0
    for i in range(amps.shape[0]):
        v = i & z_mask
        v ^= v >> 32
        v ^= v >> 16
        v ^= v >> 8
        v ^= v >> 4
        v ^= v >> 2
        v ^= v >> 1
        t = np.conj(amps[i ^ x_mask]) * amps[i]
        if v & 1:
            acc_re -= t.real
            acc_im -= t.imag
        else:
            acc_re += t.real
            acc_im += t.imag
    if ny_mod4 == 0:
        return acc_re
    elif ny_mod4 == 1:
        return -acc_im
    elif ny_mod4 == 2:
        return -acc_re
    else:
        return acc_im


@njit(cache=True)
def expval_batch(amps, x_masks, z_masks, ny_mod4s):
    out = np.empty(x_masks.shape[0])
    for j in range(x_masks.shape[0]):
        out[j] = expval(amps, x_masks[j], z_masks[j], ny_mod4s[j])
    return out


@njit(cache=True)
def _experiment_value(tensors, lo, k, parties, plo, settings, kind, buf_a, buf_b):
    """Bell value of one experiment at the given settings.

    Folds the rank-k xyz tensor with each party's 2x3 settings matrix to
    get the 2^k correlation table (party order = major to minor), then
    applies the Walsh-Hadamard abs-sum (general) or the Mermin combination.
    """
    size = 1
    for _ in range(k):
        size *= 3
    for t in range(size):
        buf_a[t] = tensors[lo + t]
    cur = buf_a
    nxt = buf_b
    left = 1
    right = size // 3
    for axis in range(k):
        p = parties[plo + axis]
        a0 = settings[p, 0, 0]
        a1 = settings[p, 0, 1]
        a2 = settings[p, 0, 2]
        b0 = settings[p, 1, 0]
        b1 = settings[p, 1, 1]
        b2 = settings[p, 1, 2]
        for l in range(left):
            bi = l * 3 * right
            bo = l * 2 * right
            for r in range(right):
                x = cur[bi + r]
                y = cur[bi + right + r]
                z = cur[bi + 2 * right + r]
                nxt[bo + r] = a0 * x + a1 * y + a2 * z
                nxt[bo + right + r] = b0 * x + b1 * y + b2 * z
        tmp = cur
        cur = nxt
        nxt = tmp
        left *= 2
        right //= 3
    m = left  # 2^k
    if kind == MERMIN:
        return cur[1] + cur[2] + cur[4] - cur[7]
    h = 1
    while h < m:
        i = 0
        while i < m:
            for j in range(i, i + h):
                x = cur[j]
                y = cur[j + h]
                cur[j] = x + y
                cur[j + h] = x - y
            i += 2 * h
        h *= 2
    s = 0.0
    for j in range(m):
        s += abs(cur[j])
    return s / m


@njit(cache=True)
def joint_objective(tensors, t_off, parties, p_off, settings, kind, values_out):
    """Sum of squared per-experiment Bell values; fills values_out."""
    max_size = 0
    for e in range(t_off.shape[0] - 1):
        sz = t_off[e + 1] - t_off[e]
        if sz > max_size:
            max_size = sz
    buf_a = np.empty(max_size)
    buf_b = np.empty(max_size)
    total = 0.0
    for e in range(t_off.shape[0] - 1):
        k = p_off[e + 1] - p_off[e]
        v = _experiment_value(tensors, t_off[e], k, parties, p_off[e],
                              settings, kind, buf_a, buf_b)
        values_out[e] = v
        total += v * v
    return total


@njit(cache=True)
def scan_direction(tensors, t_off, parties, p_off, settings, kind,
                   party, which, cands):
    """Best candidate direction for one setting, all others held fixed.

    Restores the original direction before returning; the caller applies
    the winner only on strict improvement.  First best index wins ties.
    """
    o0 = settings[party, which, 0]
    o1 = settings[party, which, 1]
    o2 = settings[party, which, 2]
    n_exp = t_off.shape[0] - 1
    values = np.empty(n_exp)
    best = -1.0
    best_g = -1
    for g in range(cands.shape[0]):
        settings[party, which, 0] = cands[g, 0]
        settings[party, which, 1] = cands[g, 1]
        settings[party, which, 2] = cands[g, 2]
        tot = joint_objective(tensors, t_off, parties, p_off, settings,
                              kind, values)
        if tot > best:
            best = tot
            best_g = g
    settings[party, which, 0] = o0
    settings[party, which, 1] = o1
    settings[party, which, 2] = o2
    return best_g, best
