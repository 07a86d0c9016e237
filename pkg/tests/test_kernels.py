from itertools import product

import numpy as np
import pytest

from belltasks import kernels


def random_instance(rng, n, nv, order):
    moves = []
    for _ in range(n):
        deg = int(rng.integers(1, nv + 1))
        moves.append(sorted(rng.choice(nv, size=deg, replace=False).tolist()))
    u = rng.integers(-5, 10, size=(nv,) * order).astype(np.int64)
    return moves, u


def brute_sym_r2(moves, u, subtract):
    best = None
    for f in product(*moves):
        v = sum(u[f[x], f[y]] for x in range(len(moves))
                for y in range(len(moves)) if not (subtract and x == y))
        if best is None or v > best:
            best = int(v)
    return best


def brute_pair(moves, u, subtract):
    best = None
    n = len(moves)
    for f in product(*moves):
        for g in product(*moves):
            v = sum(u[f[x], g[y]] for x in range(n) for y in range(n)
                    if not (subtract and x == y))
            if best is None or v > best:
                best = int(v)
    return best


def brute_sym_r3(moves, u3, subtract):
    best = None
    n = len(moves)
    for f in product(*moves):
        v = sum(u3[f[x], f[y], f[z]]
                for x in range(n) for y in range(n) for z in range(n)
                if not (subtract and len({x, y, z}) < 3))
        if best is None or v > best:
            best = int(v)
    return best


def brute_triple(moves, u3, subtract):
    best = None
    n = len(moves)
    for f in product(*moves):
        for g in product(*moves):
            for h in product(*moves):
                v = sum(u3[f[x], g[y], h[z]]
                        for x in range(n) for y in range(n) for z in range(n)
                        if not (subtract and len({x, y, z}) < 3))
                if best is None or v > best:
                    best = int(v)
    return best


def test_backend_selection(monkeypatch):
    monkeypatch.setenv("BELLTASKS_KERNELS", "numpy")
    assert kernels.backend() == "numpy"
    monkeypatch.setenv("BELLTASKS_KERNELS", "numba")
    assert kernels.backend() == "numba"
    monkeypatch.setenv("BELLTASKS_KERNELS", "auto")
    assert kernels.backend() in ("numba", "numpy")
    monkeypatch.setenv("BELLTASKS_KERNELS", "fortran")
    with pytest.raises(kernels.KernelError):
        kernels.backend()


def test_flatten_moves():
    mflat, moff = kernels.flatten_moves([[0, 2], [1], [0, 1, 2]])
    assert moff.tolist() == [0, 2, 3, 6]
    assert mflat.tolist() == [0, 2, 1, 0, 1, 2]
    assert kernels.strategy_count([[0, 2], [1], [0, 1, 2]]) == 6


@pytest.mark.parametrize("subtract", [False, True])
def test_pair_kernels_match_brute_force(subtract):
    rng = np.random.default_rng(7 + subtract)
    for _ in range(4):
        moves, u = random_instance(rng, n=4, nv=4, order=2)
        want = brute_sym_r2(moves, u, subtract)
        got, f = kernels.sym_best_r2(moves, u, subtract)
        assert got == want
        v = sum(u[f[x], f[y]] for x in range(4) for y in range(4)
                if not (subtract and x == y))
        assert int(v) == want
        assert kernels.pair_best(moves, u, subtract)[0] == \
            brute_pair(moves, u, subtract)


@pytest.mark.parametrize("subtract", [False, True])
def test_triple_kernels_match_brute_force(subtract):
    rng = np.random.default_rng(11 + subtract)
    for _ in range(2):
        moves, u3 = random_instance(rng, n=3, nv=3, order=3)
        assert kernels.sym_best_r3(moves, u3, subtract)[0] == \
            brute_sym_r3(moves, u3, subtract)
        assert kernels.triple_best(moves, u3, subtract)[0] == \
            brute_triple(moves, u3, subtract)


def test_backends_agree(monkeypatch):
    rng = np.random.default_rng(3)
    cases2 = [random_instance(rng, n=5, nv=4, order=2) for _ in range(3)]
    cases3 = [random_instance(rng, n=3, nv=3, order=3) for _ in range(2)]
    results = {}
    for name in ("numpy", "numba"):
        monkeypatch.setenv("BELLTASKS_KERNELS", name)
        out = []
        for moves, u in cases2:
            for sub in (False, True):
                b, f = kernels.sym_best_r2(moves, u, sub)
                out.append((b, tuple(f)))
                b, g = kernels.pair_best(moves, u, sub)
                out.append((b, tuple(g)))
        for moves, u3 in cases3:
            for sub in (False, True):
                b, f = kernels.sym_best_r3(moves, u3, sub)
                out.append((b, tuple(f)))
                b, g, h = kernels.triple_best(moves, u3, sub)
                out.append((b, tuple(g), tuple(h)))
        results[name] = out
    assert results["numpy"] == results["numba"]


def dense_to_triplets(mats):
    ptr = [0]
    rr, cc, vv = [], [], []
    for F in mats:
        r, c = np.nonzero(F)
        rr.extend(r.tolist())
        cc.extend(c.tolist())
        vv.extend(F[r, c].tolist())
        ptr.append(len(rr))
    return (np.asarray(ptr, dtype=np.int64), np.asarray(rr, dtype=np.int64),
            np.asarray(cc, dtype=np.int64), np.asarray(vv, dtype=np.float64))


def test_schur_accumulate_matches_dense(monkeypatch):
    rng = np.random.default_rng(5)
    m, N = 6, 7
    mats = []
    for _ in range(m):
        A = rng.standard_normal((N, N))
        A[rng.random((N, N)) < 0.5] = 0.0
        mats.append(A + A.T)
    ptr, rr, cc, vv = dense_to_triplets(mats)
    B = rng.standard_normal((N, N))
    Xinv = B @ B.T + N * np.eye(N)
    Cm = rng.standard_normal((N, N))
    Z = Cm @ Cm.T + N * np.eye(N)
    want = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            want[i, j] = np.trace(mats[i] @ Xinv @ mats[j] @ Z)
    for name in ("numpy", "numba"):
        monkeypatch.setenv("BELLTASKS_KERNELS", name)
        H = np.zeros((m, m))
        kernels.schur_accumulate(ptr, rr, cc, vv, Xinv, Z, H)
        assert np.allclose(H, want, rtol=1e-10, atol=1e-8), name
