"""Dispatch layer for the numerically hot loops.

Every kernel exists twice: a numba-compiled version (in _nbimpl) and a pure
numpy version here with identical semantics: same enumeration order, same
integer arithmetic, same tie-breaking (first maximizer in lexicographic
order).  The BELLTASKS_KERNELS environment variable picks the backend:
"numba", "numpy", or "auto" (the default; numba when importable).  The
variable is re-read on every call so tests and benchmarks can flip it at
runtime.

Strategy enumeration kernels take the per-input move lists flattened into
(mflat, moff) CSR form: moves from input x are mflat[moff[x]:moff[x+1]],
ascending.  Enumeration is a mixed-radix odometer over inputs with the last
input's digit moving fastest, i.e. strategy tuples (f(0),...,f(n-1)) appear
in lexicographic order.  Scores are exact int64 throughout.
"""

import os

import numpy as np

_CHUNK = 1 << 14


class KernelError(ValueError):
    pass


def backend():
    """Active backend name, resolved from BELLTASKS_KERNELS."""
    choice = os.environ.get("BELLTASKS_KERNELS", "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise KernelError(
            f"BELLTASKS_KERNELS={choice!r}: expected auto, numba, or numpy")
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if _load_numba() is None:
            raise KernelError("BELLTASKS_KERNELS=numba but numba is not importable")
        return "numba"
    return "numba" if _load_numba() is not None else "numpy"


_nb = ()


def _load_numba():
    global _nb
    if _nb == ():
        try:
            from . import _nbimpl
            _nb = _nbimpl
        except ImportError:
            _nb = None
    return _nb


def flatten_moves(moves):
    """CSR form (mflat, moff) of per-input move lists."""
    moff = np.zeros(len(moves) + 1, dtype=np.int64)
    for x, mv in enumerate(moves):
        moff[x + 1] = moff[x] + len(mv)
    mflat = np.fromiter((a for mv in moves for a in mv), dtype=np.int64,
                        count=moff[-1])
    return mflat, moff


def strategy_count(moves):
    total = 1
    for mv in moves:
        total *= len(mv)
    return total


def _decode(idx, radices):
    """Mixed-radix digits of each index, last digit fastest; lexicographic."""
    n = len(radices)
    out = np.empty((idx.size, n), dtype=np.int64)
    rem = idx.copy()
    for x in range(n - 1, -1, -1):
        out[:, x] = rem % radices[x]
        rem //= radices[x]
    return out


def _chunks(total):
    lo = 0
    while lo < total:
        hi = min(lo + _CHUNK, total)
        yield lo, hi
        lo = hi


def _combos(lo, hi, mflat, moff):
    n = moff.size - 1
    radices = (moff[1:] - moff[:-1]).astype(np.int64)
    digits = _decode(np.arange(lo, hi, dtype=np.int64), radices)
    return mflat[moff[:-1] + digits]


def _counts(F, nv):
    B = np.zeros((F.shape[0], nv), dtype=np.int64)
    rows = np.repeat(np.arange(F.shape[0]), F.shape[1])
    np.add.at(B, (rows, F.ravel()), 1)
    return B


# ---- symmetric r=2: max over f of sum_{x,y} u[f(x),f(y)], optionally minus diagonal


def _np_sym_best_r2(mflat, moff, u, subtract):
    nv = u.shape[0]
    total = int(np.prod((moff[1:] - moff[:-1]).astype(object)))
    best = None
    best_f = None
    for lo, hi in _chunks(total):
        F = _combos(lo, hi, mflat, moff)
        B = _counts(F, nv)
        V = np.einsum("ta,ab,tb->t", B, u, B)
        if subtract:
            V -= np.take(np.diagonal(u), F).sum(axis=1)
        t = int(np.argmax(V))
        if best is None or V[t] > best:
            best = int(V[t])
            best_f = F[t].copy()
    return best, best_f


def sym_best_r2(moves, u, subtract):
    mflat, moff = flatten_moves(moves)
    u = np.ascontiguousarray(u, dtype=np.int64)
    if backend() == "numba":
        return _load_numba().sym_best_r2(mflat, moff, u, subtract)
    return _np_sym_best_r2(mflat, moff, u, bool(subtract))


# ---- unrestricted r=2: enumerate agent-1 strategy g, best-respond agent 0


def _np_pair_best(mflat, moff, u, subtract):
    nv = u.shape[0]
    n = moff.size - 1
    total = int(np.prod((moff[1:] - moff[:-1]).astype(object)))
    best = None
    best_g = None
    for lo, hi in _chunks(total):
        G = _combos(lo, hi, mflat, moff)
        col = _counts(G, nv) @ u.T  # col[t, a] = sum_y u[a, g_t(y)]
        V = np.zeros(G.shape[0], dtype=np.int64)
        for x in range(n):
            mv = mflat[moff[x]:moff[x + 1]]
            cand = col[:, mv]
            if subtract:
                cand = cand - u[np.ix_(mv)][:, G[:, x]].T
            V += cand.max(axis=1)
        t = int(np.argmax(V))
        if best is None or V[t] > best:
            best = int(V[t])
            best_g = G[t].copy()
    return best, best_g


def pair_best(moves, u, subtract):
    mflat, moff = flatten_moves(moves)
    u = np.ascontiguousarray(u, dtype=np.int64)
    if backend() == "numba":
        return _load_numba().pair_best(mflat, moff, u, subtract)
    return _np_pair_best(mflat, moff, u, bool(subtract))


# ---- symmetric r=3


def _np_sym_best_r3(mflat, moff, u3, subtract):
    nv = u3.shape[0]
    total = int(np.prod((moff[1:] - moff[:-1]).astype(object)))
    d_ab = np.einsum("aab->ab", u3)
    d_ba = np.einsum("aba->ab", u3)
    d_bb = np.einsum("abb->ab", u3)
    d_aaa = np.einsum("aaa->a", u3)
    best = None
    best_f = None
    for lo, hi in _chunks(total):
        F = _combos(lo, hi, mflat, moff)
        B = _counts(F, nv)
        V = np.einsum("ta,tb,tc,abc->t", B, B, B, u3)
        if subtract:
            # pairwise-distinct triples by inclusion-exclusion over x=y, x=z, y=z
            V -= np.einsum("ta,tb,ab->t", B, B, d_ab)
            V -= np.einsum("ta,tb,ab->t", B, B, d_ba)
            V -= np.einsum("ta,tb,ab->t", B, B, d_bb)
            V += 2 * (B @ d_aaa)
        t = int(np.argmax(V))
        if best is None or V[t] > best:
            best = int(V[t])
            best_f = F[t].copy()
    return best, best_f


def sym_best_r3(moves, u3, subtract):
    mflat, moff = flatten_moves(moves)
    u3 = np.ascontiguousarray(u3, dtype=np.int64)
    if backend() == "numba":
        return _load_numba().sym_best_r3(mflat, moff, u3, subtract)
    return _np_sym_best_r3(mflat, moff, u3, bool(subtract))


# ---- unrestricted r=3: enumerate (g, h), best-respond agent 0


def _np_triple_best(mflat, moff, u3, subtract):
    nv = u3.shape[0]
    n = moff.size - 1
    total = int(np.prod((moff[1:] - moff[:-1]).astype(object)))
    mvs = [mflat[moff[x]:moff[x + 1]] for x in range(n)]
    best = None
    best_g = None
    best_h = None
    g_digits = np.zeros(n, dtype=np.int64)
    g = mflat[moff[:-1]].copy()
    while True:
        W = u3[:, g, :].sum(axis=1)  # W[a, c] = sum_y u3[a, g(y), c]
        for lo, hi in _chunks(total):
            H = _combos(lo, hi, mflat, moff)
            Bh = _counts(H, nv)
            col2 = Bh @ W.T  # col2[t, a] = sum_y sum_z u3[a, g(y), h_t(z)]
            V = np.zeros(H.shape[0], dtype=np.int64)
            for x in range(n):
                mv = mvs[x]
                cand = col2[:, mv]
                if subtract:
                    M1 = u3[mv, g[x], :]            # (deg, nv) over final h position
                    sa = Bh @ M1.T                  # sum_z u3[a, g(x), h(z)]
                    sb = W[np.ix_(mv)][:, H[:, x]].T   # sum_y u3[a, g(y), h(x)]
                    sc = np.zeros_like(cand)
                    U2g = u3[np.ix_(mv, g)]         # (deg, n, nv)
                    for y in range(n):
                        sc += U2g[:, y, H[:, y]].T  # sum_y u3[a, g(y), h(y)]
                    tt = M1[:, H[:, x]].T           # u3[a, g(x), h(x)]
                    cand = cand - sa - sb - sc + 2 * tt
                V += cand.max(axis=1)
            t = int(np.argmax(V))
            if best is None or V[t] > best:
                best = int(V[t])
                best_g = g.copy()
                best_h = H[t].copy()
        x = n - 1
        while x >= 0:
            g_digits[x] += 1
            if g_digits[x] < moff[x + 1] - moff[x]:
                g[x] = mflat[moff[x] + g_digits[x]]
                break
            g_digits[x] = 0
            g[x] = mflat[moff[x]]
            x -= 1
        if x < 0:
            break
    return best, best_g, best_h


def triple_best(moves, u3, subtract):
    mflat, moff = flatten_moves(moves)
    u3 = np.ascontiguousarray(u3, dtype=np.int64)
    if backend() == "numba":
        return _load_numba().triple_best(mflat, moff, u3, subtract)
    return _np_triple_best(mflat, moff, u3, bool(subtract))


# ---- interior-point Schur complement: H[i,j] = Tr(F_i Xinv F_j Z)
# Triplets are expanded (both triangles present); same-block entries only.


def _np_schur(ptr, rr, cc, vv, Xinv, Z, H):
    import scipy.sparse as sp

    m = ptr.size - 1
    N = Xinv.shape[0]
    nz = vv.size
    var_of = np.repeat(np.arange(m), np.diff(ptr))
    S = sp.csr_matrix((vv, (var_of, rr * N + cc)), shape=(m, N * N))
    chunk = max(1, min(m, (1 << 22) // max(1, N * N)))
    for j0 in range(0, m, chunk):
        j1 = min(j0 + chunk, m)
        B = np.zeros(((j1 - j0), N, N))
        lo, hi = ptr[j0], ptr[j1]
        np.add.at(B, (var_of[lo:hi] - j0, rr[lo:hi], cc[lo:hi]), vv[lo:hi])
        T = Xinv @ B @ Z
        # H[i, j] = sum_e v_e T_j[q_e, p_e]: gather at transposed positions
        H[:, j0:j1] += S @ T.transpose(0, 2, 1).reshape(j1 - j0, N * N).T
    return H


def schur_accumulate(ptr, rr, cc, vv, Xinv, Z, H):
    if backend() == "numba":
        _load_numba().schur_accumulate(ptr, rr, cc, vv, Xinv, Z, H)
        return H
    return _np_schur(ptr, rr, cc, vv, Xinv, Z, H)
