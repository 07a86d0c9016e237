"""Standard-form semidefinite programming.

Problems are stated as
    maximize  c . x   subject to   F(x) = F0 + sum_i x_i F_i  >= 0 (psd),
with the constraint matrix split into blocks (negative block size marks a
diagonal block).  Weak duality: any Z >= 0 with Tr(F_i Z) = -c_i gives
c . x <= Tr(F0 Z), so the dual objective Tr(F0 Z) certifies upper bounds.

solve_embedded is a dense-per-block primal-dual interior-point method
(HKM search direction, Mehrotra predictor-corrector, infeasible start)
adequate up to total dimension ~1500 and ~9000 scalar variables; larger
problems go through export_sdpa to an external solver.  The SDPA sparse
file carries the usual minimization convention, so the objective vector
and F0 flip sign on the way out and back in.
"""

from dataclasses import dataclass
import re

import numpy as np
from scipy.linalg import cholesky, cho_factor, cho_solve, solve_triangular, eigvalsh

from . import kernels

MAX_DIMENSION = 1500
MAX_VARIABLES = 9000
MAX_ITERATIONS = 200
STEP_FRACTION = 0.98


class SdpSizeError(ValueError):
    """Problem exceeds the embedded solver guards; export it instead."""


class SdpaParseError(ValueError):
    pass


@dataclass(frozen=True)
class SdpProblem:
    m: int                # number of scalar variables
    blocks: tuple         # block sizes; negative size = diagonal block
    c: tuple              # maximize c . x
    entries: tuple        # (matno, block, i, j, value), 0-based, i <= j; matno 0 is F0

    def dimension(self):
        return sum(abs(b) for b in self.blocks)


@dataclass(frozen=True)
class SdpSolution:
    status: str           # optimal | near-optimal | infeasible | unbounded | failed
    x: tuple
    primal: float
    dual: float
    gap: float
    iterations: int
    solver: str


def make_problem(m, blocks, c, entries):
    """Validated, canonically ordered problem (round-trip identity holds)."""
    blocks = tuple(int(b) for b in blocks)
    if not blocks or any(b == 0 for b in blocks):
        raise ValueError("block sizes must be nonzero")
    c = tuple(float(v) for v in c)
    if len(c) != m:
        raise ValueError(f"objective length {len(c)} != m={m}")
    merged = {}
    for (matno, blk, i, j, val) in entries:
        if not 0 <= matno <= m:
            raise ValueError(f"matrix index {matno} out of range")
        if not 0 <= blk < len(blocks):
            raise ValueError(f"block index {blk} out of range")
        size = abs(blocks[blk])
        if i > j:
            i, j = j, i
        if not 0 <= i <= j < size:
            raise ValueError(f"entry ({i},{j}) outside block of size {size}")
        if blocks[blk] < 0 and i != j:
            raise ValueError("off-diagonal entry in a diagonal block")
        key = (matno, blk, i, j)
        merged[key] = merged.get(key, 0.0) + float(val)
    ents = tuple(key + (val,) for key, val in sorted(merged.items()) if val != 0.0)
    return SdpProblem(m=m, blocks=blocks, c=c, entries=ents)


def _dense_blocks(p):
    """F0 per block, and per-block expanded triplets grouped by variable."""
    sizes = [abs(b) for b in p.blocks]
    F0 = [np.zeros((s, s)) for s in sizes]
    tri = [[[] for _ in range(p.m)] for _ in sizes]
    for (matno, blk, i, j, val) in p.entries:
        if matno == 0:
            F0[blk][i, j] = val
            F0[blk][j, i] = val
        else:
            tri[blk][matno - 1].append((i, j, val))
            if i != j:
                tri[blk][matno - 1].append((j, i, val))
    packed = []
    for blk in range(len(sizes)):
        ptr = np.zeros(p.m + 1, dtype=np.int64)
        rows, cols, vals = [], [], []
        for v in range(p.m):
            for (i, j, val) in tri[blk][v]:
                rows.append(i)
                cols.append(j)
                vals.append(val)
            ptr[v + 1] = len(rows)
        packed.append((ptr, np.asarray(rows, dtype=np.int64),
                       np.asarray(cols, dtype=np.int64), np.asarray(vals)))
    return F0, packed


def _gather_traces(packed_blk, M, out):
    """out[i] += Tr(F_i M) for one block, M dense (not necessarily symmetric)."""
    ptr, rows, cols, vals = packed_blk
    if vals.size == 0:
        return out
    var_of = np.repeat(np.arange(ptr.size - 1), np.diff(ptr))
    out += np.bincount(var_of, weights=vals * M[cols, rows], minlength=out.size)
    return out


def _accumulate(packed_blk, weights, out):
    """out += sum_i weights[i] * F_i for one block."""
    ptr, rows, cols, vals = packed_blk
    if vals.size == 0:
        return out
    var_of = np.repeat(np.arange(ptr.size - 1), np.diff(ptr))
    np.add.at(out, (rows, cols), weights[var_of] * vals)
    return out


def _max_step(L, dM):
    """Largest alpha in (0, 1] with M + alpha dM psd, M = L L^T."""
    W = solve_triangular(L, dM, lower=True)
    W = solve_triangular(L, W.T, lower=True)
    lam = eigvalsh(0.5 * (W + W.T))[0]
    if lam >= -1e-13:
        return 1.0
    return min(1.0, -STEP_FRACTION / lam)


def solve_embedded(p, tol=1e-8):
    """Interior-point solve; deterministic for identical input."""
    dim = p.dimension()
    if dim > MAX_DIMENSION:
        raise SdpSizeError(
            f"total dimension {dim} exceeds {MAX_DIMENSION}; use export_sdpa")
    if p.m > MAX_VARIABLES:
        raise SdpSizeError(
            f"{p.m} variables exceed {MAX_VARIABLES}; use export_sdpa")
    m = p.m
    sizes = [abs(b) for b in p.blocks]
    F0, packed = _dense_blocks(p)
    c = np.asarray(p.c)
    scale = max(1.0, max((abs(v) for (_, _, _, _, v) in p.entries), default=1.0),
                float(np.abs(c).max()) if m else 1.0)
    eta = 10.0 * scale
    x = np.zeros(m)
    X = [eta * np.eye(s) for s in sizes]
    Z = [eta * np.eye(s) for s in sizes]
    ntot = sum(sizes)
    status = "failed"
    iters = 0
    feas_tol = max(10.0 * tol, 1e-9) * (1.0 + scale)

    for iters in range(1, MAX_ITERATIONS + 1):
        Fx = [F0[b].copy() for b in range(len(sizes))]
        for b in range(len(sizes)):
            _accumulate(packed[b], x, Fx[b])
            Fx[b] = 0.5 * (Fx[b] + Fx[b].T)
        Rp = [Fx[b] - X[b] for b in range(len(sizes))]
        t_fz = np.zeros(m)
        for b in range(len(sizes)):
            _gather_traces(packed[b], Z[b], t_fz)
        rd = -c - t_fz  # dual feasibility wants Tr(F_i Z) = -c_i
        mu = sum(np.vdot(X[b], Z[b]) for b in range(len(sizes))) / ntot
        pobj = float(c @ x)
        dobj = sum(np.vdot(F0[b], Z[b]) for b in range(len(sizes)))
        gap = dobj - pobj
        rel_gap = abs(gap) / (1.0 + abs(pobj) + abs(dobj))
        pres = max(float(np.abs(Rp[b]).max(initial=0.0)) for b in range(len(sizes)))
        dres = float(np.abs(rd).max(initial=0.0)) if m else 0.0
        if rel_gap <= tol and pres <= feas_tol and dres <= feas_tol:
            status = "optimal"
            break
        if abs(pobj) > 1e12 * scale:
            status = "unbounded"
            break

        L = []
        Xinv = []
        try:
            for b in range(len(sizes)):
                Lb = cholesky(X[b], lower=True)
                L.append(Lb)
                inv = solve_triangular(Lb, np.eye(sizes[b]), lower=True)
                Xinv.append(inv.T @ inv)
        except np.linalg.LinAlgError:
            break
        H = np.zeros((m, m))
        for b in range(len(sizes)):
            kernels.schur_accumulate(*packed[b], Xinv[b], Z[b], H)
        H = 0.5 * (H + H.T)
        H[np.diag_indices_from(H)] += 1e-13 * (1.0 + np.abs(np.diag(H)))
        try:
            Hf = cho_factor(H, lower=True)
        except np.linalg.LinAlgError:
            break

        t = np.zeros(m)
        s_res = np.zeros(m)
        for b in range(len(sizes)):
            _gather_traces(packed[b], Xinv[b], t)
            _gather_traces(packed[b], Xinv[b] @ Rp[b] @ Z[b], s_res)

        def directions(sigmu, corr):
            rhs = sigmu * t - s_res + c
            if corr is not None:
                rhs -= corr
            dx = cho_solve(Hf, rhs)
            dX = []
            dZ = []
            for b in range(len(sizes)):
                dXb = Rp[b].copy()
                _accumulate(packed[b], dx, dXb)
                dXb = 0.5 * (dXb + dXb.T)
                dZb = sigmu * Xinv[b] - Z[b] - Xinv[b] @ (dXb @ Z[b])
                if corr is not None:
                    dZb -= Xinv[b] @ corr_mats[b]
                dZb = 0.5 * (dZb + dZb.T)
                dX.append(dXb)
                dZ.append(dZb)
            return dx, dX, dZ

        try:
            corr_mats = None
            dx_a, dX_a, dZ_a = directions(0.0, None)
            Lz = [cholesky(Z[b], lower=True) for b in range(len(sizes))]
            ap = min((_max_step(L[b], dX_a[b]) for b in range(len(sizes))),
                     default=1.0)
            ad = min((_max_step(Lz[b], dZ_a[b]) for b in range(len(sizes))),
                     default=1.0)
            mu_aff = sum(np.vdot(X[b] + ap * dX_a[b], Z[b] + ad * dZ_a[b])
                         for b in range(len(sizes))) / ntot
            sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3)) if mu > 0 else 0.0

            corr_mats = [dX_a[b] @ dZ_a[b] for b in range(len(sizes))]
            corr = np.zeros(m)
            for b in range(len(sizes)):
                _gather_traces(packed[b], Xinv[b] @ corr_mats[b], corr)
            dx, dX, dZ = directions(sigma * mu, corr)
            ap = min((_max_step(L[b], dX[b]) for b in range(len(sizes))),
                     default=1.0)
            ad = min((_max_step(Lz[b], dZ[b]) for b in range(len(sizes))),
                     default=1.0)
        except np.linalg.LinAlgError:
            break
        if max(ap, ad) < 1e-10:
            break
        x = x + ap * dx
        for b in range(len(sizes)):
            X[b] = X[b] + ap * dX[b]
            Z[b] = Z[b] + ad * dZ[b]
    else:
        iters = MAX_ITERATIONS

    pobj = float(c @ x)
    dobj = float(sum(np.vdot(F0[b], Z[b]) for b in range(len(sizes))))
    gap = dobj - pobj
    if status != "optimal":
        rel_gap = abs(gap) / (1.0 + abs(pobj) + abs(dobj))
        if status == "failed" and rel_gap <= 1e-5:
            status = "near-optimal"
    return SdpSolution(status=status, x=tuple(float(v) for v in x),
                       primal=pobj, dual=dobj, gap=float(gap),
                       iterations=iters, solver="embedded")


# ---- SDPA sparse format (.dat-s); minimization convention in the file


def _fmt(v):
    return format(float(v), ".17g")


def export_sdpa(p):
    """Byte-deterministic SDPA sparse text for the problem."""
    lines = [str(p.m), str(len(p.blocks)),
             " ".join(str(b) for b in p.blocks),
             " ".join(_fmt(-v) for v in p.c)]
    for (matno, blk, i, j, val) in p.entries:
        out = -val if matno == 0 else val
        lines.append(f"{matno} {blk + 1} {i + 1} {j + 1} {_fmt(out)}")
    return "\n".join(lines) + "\n"


def parse_sdpa(text):
    """Inverse of export_sdpa (also accepts comment lines starting with * or ")."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "*\"":
            continue
        rows.append((lineno, line))
    if len(rows) < 4:
        raise SdpaParseError("file has fewer than the four header lines")

    def ints(idx, what):
        lineno, line = rows[idx]
        try:
            return [int(tok) for tok in line.replace(",", " ").split()]
        except ValueError:
            raise SdpaParseError(f"line {lineno}: bad {what}: {line!r}") from None

    m = ints(0, "variable count")[0]
    nblocks = ints(1, "block count")[0]
    blocks = ints(2, "block sizes")
    if len(blocks) != nblocks:
        raise SdpaParseError(f"line {rows[2][0]}: expected {nblocks} block sizes")
    lineno, cline = rows[3]
    try:
        c = [-float(tok) for tok in cline.replace(",", " ").split()]
    except ValueError:
        raise SdpaParseError(f"line {lineno}: bad objective: {cline!r}") from None
    if len(c) != m:
        raise SdpaParseError(f"line {lineno}: expected {m} objective values")
    entries = []
    for lineno, line in rows[4:]:
        toks = line.split()
        if len(toks) != 5:
            raise SdpaParseError(f"line {lineno}: expected 5 fields: {line!r}")
        try:
            matno, blk, i, j = (int(t) for t in toks[:4])
            val = float(toks[4])
        except ValueError:
            raise SdpaParseError(f"line {lineno}: bad entry: {line!r}") from None
        if matno == 0:
            val = -val
        entries.append((matno, blk - 1, i - 1, j - 1, val))
    return make_problem(m, blocks, c, entries)


_OBJ_RE = re.compile(r"objVal(Primal|Dual)\s*[=:]\s*([-+0-9.eEdD]+)")
_PHASE_RE = re.compile(r"phase\.value\s*[=:]\s*(\S+)")


def import_sdpa_solution(text, tol=1e-7):
    """Objective values from external solver output, in our maximize convention."""
    vals = {}
    for kind, num in _OBJ_RE.findall(text):
        vals[kind] = -float(num.replace("D", "e").replace("d", "e"))
    if "Primal" not in vals or "Dual" not in vals:
        raise SdpaParseError("no objValPrimal/objValDual lines found")
    primal, dual = vals["Primal"], vals["Dual"]
    gap = dual - primal
    phase = _PHASE_RE.search(text)
    status = None
    if phase:
        tag = phase.group(1)
        if "INF" in tag.upper():
            status = "infeasible"
        elif "UNBD" in tag.upper():
            status = "unbounded"
    if status is None:
        rel = abs(gap) / (1.0 + abs(primal) + abs(dual))
        status = "optimal" if rel <= tol else "near-optimal"
    return SdpSolution(status=status, x=(), primal=primal, dual=dual,
                       gap=gap, iterations=0, solver="external")
