"""Numba-compiled twins of the kernels in kernels.py.

Kept in a separate importable module so numba can cache compiled code on
disk.  Semantics must match the numpy versions bit for bit: identical
enumeration order (odometer, last input fastest), int64 scores, first
maximizer kept.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def sym_best_r2(mflat, moff, u, subtract):
    n = moff.size - 1
    digits = np.zeros(n, dtype=np.int64)
    f = np.empty(n, dtype=np.int64)
    for x in range(n):
        f[x] = mflat[moff[x]]
    best = np.int64(-(2 ** 62))
    best_f = f.copy()
    while True:
        v = np.int64(0)
        for x in range(n):
            fx = f[x]
            for y in range(n):
                v += u[fx, f[y]]
        if subtract:
            for x in range(n):
                v -= u[f[x], f[x]]
        if v > best:
            best = v
            best_f[:] = f
        x = n - 1
        while x >= 0:
            digits[x] += 1
            if digits[x] < moff[x + 1] - moff[x]:
                f[x] = mflat[moff[x] + digits[x]]
                break
            digits[x] = 0
            f[x] = mflat[moff[x]]
            x -= 1
        if x < 0:
            break
    return best, best_f


@njit(cache=True)
def pair_best(mflat, moff, u, subtract):
    n = moff.size - 1
    nv = u.shape[0]
    digits = np.zeros(n, dtype=np.int64)
    g = np.empty(n, dtype=np.int64)
    for x in range(n):
        g[x] = mflat[moff[x]]
    best = np.int64(-(2 ** 62))
    best_g = g.copy()
    col = np.empty(nv, dtype=np.int64)
    while True:
        for a in range(nv):
            s = np.int64(0)
            for y in range(n):
                s += u[a, g[y]]
            col[a] = s
        v = np.int64(0)
        for x in range(n):
            m = np.int64(-(2 ** 62))
            for e in range(moff[x], moff[x + 1]):
                a = mflat[e]
                cand = col[a] - u[a, g[x]] if subtract else col[a]
                if cand > m:
                    m = cand
            v += m
        if v > best:
            best = v
            best_g[:] = g
        x = n - 1
        while x >= 0:
            digits[x] += 1
            if digits[x] < moff[x + 1] - moff[x]:
                g[x] = mflat[moff[x] + digits[x]]
                break
            digits[x] = 0
            g[x] = mflat[moff[x]]
            x -= 1
        if x < 0:
            break
    return best, best_g


@njit(cache=True)
def sym_best_r3(mflat, moff, u3, subtract):
    n = moff.size - 1
    digits = np.zeros(n, dtype=np.int64)
    f = np.empty(n, dtype=np.int64)
    for x in range(n):
        f[x] = mflat[moff[x]]
    best = np.int64(-(2 ** 62))
    best_f = f.copy()
    while True:
        v = np.int64(0)
        if subtract:
            for x in range(n):
                for y in range(n):
                    if y == x:
                        continue
                    for z in range(n):
                        if z == x or z == y:
                            continue
                        v += u3[f[x], f[y], f[z]]
        else:
            for x in range(n):
                for y in range(n):
                    for z in range(n):
                        v += u3[f[x], f[y], f[z]]
        if v > best:
            best = v
            best_f[:] = f
        x = n - 1
        while x >= 0:
            digits[x] += 1
            if digits[x] < moff[x + 1] - moff[x]:
                f[x] = mflat[moff[x] + digits[x]]
                break
            digits[x] = 0
            f[x] = mflat[moff[x]]
            x -= 1
        if x < 0:
            break
    return best, best_f


@njit(cache=True)
def triple_best(mflat, moff, u3, subtract):
    n = moff.size - 1
    nv = u3.shape[0]
    gd = np.zeros(n, dtype=np.int64)
    hd = np.zeros(n, dtype=np.int64)
    g = np.empty(n, dtype=np.int64)
    h = np.empty(n, dtype=np.int64)
    for x in range(n):
        g[x] = mflat[moff[x]]
    best = np.int64(-(2 ** 62))
    best_g = g.copy()
    best_h = g.copy()
    W = np.empty((nv, nv), dtype=np.int64)
    col2 = np.empty(nv, dtype=np.int64)
    while True:
        for a in range(nv):
            for c in range(nv):
                s = np.int64(0)
                for y in range(n):
                    s += u3[a, g[y], c]
                W[a, c] = s
        for x in range(n):
            h[x] = mflat[moff[x]]
            hd[x] = 0
        while True:
            for a in range(nv):
                s = np.int64(0)
                for z in range(n):
                    s += W[a, h[z]]
                col2[a] = s
            v = np.int64(0)
            for x in range(n):
                m = np.int64(-(2 ** 62))
                for e in range(moff[x], moff[x + 1]):
                    a = mflat[e]
                    cand = col2[a]
                    if subtract:
                        sa = np.int64(0)
                        sb = np.int64(0)
                        sc = np.int64(0)
                        for z in range(n):
                            sa += u3[a, g[x], h[z]]
                            sb += u3[a, g[z], h[x]]
                            sc += u3[a, g[z], h[z]]
                        cand = cand - sa - sb - sc + 2 * u3[a, g[x], h[x]]
                    if cand > m:
                        m = cand
                v += m
            if v > best:
                best = v
                best_g[:] = g
                best_h[:] = h
            x = n - 1
            while x >= 0:
                hd[x] += 1
                if hd[x] < moff[x + 1] - moff[x]:
                    h[x] = mflat[moff[x] + hd[x]]
                    break
                hd[x] = 0
                h[x] = mflat[moff[x]]
                x -= 1
            if x < 0:
                break
        x = n - 1
        while x >= 0:
            gd[x] += 1
            if gd[x] < moff[x + 1] - moff[x]:
                g[x] = mflat[moff[x] + gd[x]]
                break
            gd[x] = 0
            g[x] = mflat[moff[x]]
            x -= 1
        if x < 0:
            break
    return best, best_g, best_h


@njit(cache=True)
def schur_accumulate(ptr, rr, cc, vv, Xinv, Z, H):
    m = ptr.size - 1
    for i in range(m):
        for j in range(i, m):
            acc = 0.0
            for e in range(ptr[i], ptr[i + 1]):
                pe = rr[e]
                qe = cc[e]
                ve = vv[e]
                for f in range(ptr[j], ptr[j + 1]):
                    acc += ve * vv[f] * Xinv[qe, rr[f]] * Z[cc[f], pe]
            H[i, j] += acc
            if j > i:
                H[j, i] += acc
