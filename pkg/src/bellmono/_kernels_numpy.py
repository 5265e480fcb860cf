"""Pure-numpy fallback kernels (same signatures as `_kernels_numba`).

Slower but dependency-light; selected with BELLMONO_DISABLE_NUMBA=1.
"""

import numpy as np

GENERAL = 0
MERMIN = 1

_MERMIN_SIGNS = None
_HADAMARD = {}


def _hadamard(k):
    h = _HADAMARD.get(k)
    if h is None:
        h = np.array([[1.0]])
        h2 = np.array([[1.0, 1.0], [1.0, -1.0]])
        for _ in range(k):
            h = np.kron(h, h2)
        _HADAMARD[k] = h
    return h


def expval(amps, x_mask, z_mask, ny_mod4):
    idx = np.arange(amps.shape[0], dtype=np.int64)
    par = np.bitwise_count(idx & np.int64(z_mask)) & 1
    signs = 1.0 - 2.0 * par
    acc = np.sum(np.conj(amps[idx ^ np.int64(x_mask)]) * amps * signs)
    return float((acc * (1j ** ny_mod4)).real)


def expval_batch(amps, x_masks, z_masks, ny_mod4s):
    return np.array([
        expval(amps, int(x), int(z), int(ny))
        for x, z, ny in zip(x_masks, z_masks, ny_mod4s)
    ])


def _experiment_value(tensors, lo, k, parties, plo, settings, kind):
    size = 3 ** k
    E = tensors[lo:lo + size].reshape((3,) * k)
    for axis in range(k):
        p = parties[plo + axis]
        # fold axis `axis` (always the leading remaining 3-axis)
        E = np.tensordot(settings[p], E, axes=([1], [axis]))
        E = np.moveaxis(E, 0, axis)
    flat = E.reshape(-1)
    if kind == MERMIN:
        return flat[1] + flat[2] + flat[4] - flat[7]
    return np.abs(_hadamard(k) @ flat).sum() / flat.size


def joint_objective(tensors, t_off, parties, p_off, settings, kind, values_out):
    total = 0.0
    for e in range(len(t_off) - 1):
        k = p_off[e + 1] - p_off[e]
        v = _experiment_value(tensors, t_off[e], k, parties, p_off[e],
                              settings, kind)
        values_out[e] = v
        total += v * v
    return total


def scan_direction(tensors, t_off, parties, p_off, settings, kind,
                   party, which, cands):
    orig = settings[party, which].copy()
    n_exp = len(t_off) - 1
    values = np.empty(n_exp)
    best = -1.0
    best_g = -1
    for g in range(cands.shape[0]):
        settings[party, which] = cands[g]
        tot = joint_objective(tensors, t_off, parties, p_off, settings,
                              kind, values)
        if tot > best:
            best = tot
            best_g = g
    settings[party, which] = orig
    return best_g, best
