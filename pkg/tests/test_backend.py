"""The numba and numpy kernel twins must agree numerically."""

import numpy as np
import pytest

from bellmono import backend
from bellmono import _kernels_numpy as knp
from bellmono.pauli import parse_label

from conftest import random_amplitudes

knb = pytest.importorskip("bellmono._kernels_numba")


def _random_flat_problem(rng, n_parties, subsets):
    tensors = []
    parties = []
    t_off = [0]
    p_off = [0]
    for sub in subsets:
        t = rng.uniform(-1, 1, size=3 ** len(sub))
        tensors.append(t)
        parties.extend(sub)
        t_off.append(t_off[-1] + t.size)
        p_off.append(p_off[-1] + len(sub))
    settings = rng.standard_normal((n_parties, 2, 3))
    settings /= np.linalg.norm(settings, axis=2, keepdims=True)
    return (np.concatenate(tensors), np.array(t_off, dtype=np.int64),
            np.array(parties, dtype=np.int64), np.array(p_off, dtype=np.int64),
            settings)


def test_expval_agrees(rng):
    for n in range(1, 7):
        amps = random_amplitudes(rng, n)
        for _ in range(10):
            label = "".join(rng.choice(list("IXYZ")) for _ in range(n))
            p = parse_label(label)
            a = knb.expval(amps, p.x_mask, p.z_mask, p.n_y % 4)
            b = knp.expval(amps, p.x_mask, p.z_mask, p.n_y % 4)
            assert a == pytest.approx(b, abs=1e-12)


def test_expval_batch_agrees(rng):
    amps = random_amplitudes(rng, 4)
    labels = ["XXII", "YZYX", "IIII", "ZZZZ", "XYIZ"]
    ps = [parse_label(l) for l in labels]
    xm = np.array([p.x_mask for p in ps], dtype=np.int64)
    zm = np.array([p.z_mask for p in ps], dtype=np.int64)
    ny = np.array([p.n_y % 4 for p in ps], dtype=np.int64)
    assert np.allclose(knb.expval_batch(amps, xm, zm, ny),
                       knp.expval_batch(amps, xm, zm, ny), atol=1e-12)


@pytest.mark.parametrize("kind", [0, 1])
def test_joint_objective_agrees(rng, kind):
    subsets = [(0, 1, 2), (0, 3, 4)] if kind == 0 else [(0, 1, 2), (2, 3, 4)]
    args = _random_flat_problem(rng, 5, subsets)
    v1 = np.empty(2)
    v2 = np.empty(2)
    t1 = knb.joint_objective(*args[:4], args[4], kind, v1)
    t2 = knp.joint_objective(*args[:4], args[4], kind, v2)
    assert t1 == pytest.approx(t2, abs=1e-12)
    assert np.allclose(v1, v2, atol=1e-12)


def test_joint_objective_mixed_sizes(rng):
    # ragged experiment sizes (2-, 3- and 4-party) through one flat call
    args = _random_flat_problem(rng, 6, [(0, 1), (1, 2, 3), (0, 2, 4, 5)])
    v1 = np.empty(3)
    v2 = np.empty(3)
    t1 = knb.joint_objective(*args[:4], args[4], 0, v1)
    t2 = knp.joint_objective(*args[:4], args[4], 0, v2)
    assert t1 == pytest.approx(t2, abs=1e-12)
    assert np.allclose(v1, v2, atol=1e-12)


def test_scan_direction_agrees(rng):
    args = _random_flat_problem(rng, 3, [(0, 1), (0, 2)])
    cands = rng.standard_normal((40, 3))
    cands /= np.linalg.norm(cands, axis=1, keepdims=True)
    s1 = args[4].copy()
    s2 = args[4].copy()
    g1, b1 = knb.scan_direction(*args[:4], s1, 0, 0, 1, cands)
    g2, b2 = knp.scan_direction(*args[:4], s2, 0, 0, 1, cands)
    assert b1 == pytest.approx(b2, abs=1e-12)
    assert g1 == g2
    # both restore the scanned direction
    assert np.allclose(s1, args[4]) and np.allclose(s2, args[4])


def test_backend_flag_selects_numpy(monkeypatch):
    import importlib
    monkeypatch.setenv(backend.DISABLE_FLAG, "1")
    mod = importlib.reload(backend)
    try:
        assert not mod.USING_NUMBA
        assert mod.kernels is knp
    finally:
        monkeypatch.delenv(backend.DISABLE_FLAG)
        importlib.reload(backend)
