"""Explicit quantum strategies via alternating optimization.

A realization is a pure state on r local d-dimensional factors plus one
POVM per party and input.  Everything is real: the game coefficients are
real, so the value's real part is attained by real states and symmetric
real operators, and restricting to them loses nothing while halving the
numerics.

The loop alternates two monotone steps.  Fixing measurements, the best
state is the top eigenvector of the Bell operator (the coefficient-weighted
sum of measurement tensor products).  Fixing the state and all parties but
one, the best measurements decouple per input into small SDPs over the
reduced operators; two-outcome inputs collapse to a spectral split, more
outcomes go through the embedded solver.  Candidate measurements are only
accepted when they do not lower the value, so every logged sequence is
non-decreasing by construction.

The symmetric variant forces one shared measurement set and a state in the
permutation-invariant subspace; its measurement step solves the one-party
update and walks a damped line toward it, again accept-if-improving.
"""

from dataclasses import dataclass, replace
from itertools import combinations_with_replacement
import json
import math

import numpy as np

from . import sdp

DEFAULT_RESTARTS = 100
DEFAULT_MAX_ITERS = 500
DEFAULT_TOL = 1e-9
VALUE_EPS = 1e-6  # status comparisons against classical/relaxation references


@dataclass(frozen=True)
class QuantumRealization:
    r: int
    d: int
    state: np.ndarray       # unit vector of length d**r
    measurements: tuple     # measurements[party][input] = {outcome: d x d array}
    value: float = None

    def operator(self, party, x, a):
        return self.measurements[party][x][a]


@dataclass(frozen=True)
class SeesawConfig:
    d: int = None           # local dimension; default: vertex count
    restarts: int = DEFAULT_RESTARTS
    tol: float = DEFAULT_TOL
    max_iters: int = DEFAULT_MAX_ITERS
    seed: int = 0
    symmetric: bool = False

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("at least one restart required")


def validate_realization(game, q, state_tol=1e-10, sum_tol=1e-9, psd_tol=1e-10):
    if q.r != game.r:
        raise ValueError(f"realization has {q.r} parties, game has {game.r}")
    if abs(np.linalg.norm(q.state) - 1.0) > state_tol:
        raise ValueError("state is not normalized")
    if len(q.measurements) != game.r:
        raise ValueError("one measurement family per party required")
    for p in range(game.r):
        if len(q.measurements[p]) != game.n:
            raise ValueError(f"party {p}: one POVM per input required")
        for x in range(game.n):
            povm = q.measurements[p][x]
            if set(povm) != set(game.outcome_sets[x]):
                raise ValueError(f"party {p} input {x}: outcomes do not match moves")
            total = np.zeros((q.d, q.d))
            for a, op in povm.items():
                if np.abs(op - op.T).max() > 1e-9:
                    raise ValueError(f"party {p} input {x} outcome {a}: not symmetric")
                if np.linalg.eigvalsh(op)[0] < -psd_tol:
                    raise ValueError(f"party {p} input {x} outcome {a}: not psd")
                total += op
            if np.abs(total - np.eye(q.d)).max() > sum_tol:
                raise ValueError(f"party {p} input {x}: POVM does not sum to identity")


def _coeff_tree(game):
    """Nested dict over per-party (input, outcome) letters down to floats."""
    tree = {}
    for (xs, outs), c in game.coefficients.items():
        node = tree
        for p in range(game.r - 1):
            node = node.setdefault((xs[p], outs[p]), {})
        key = (xs[game.r - 1], outs[game.r - 1])
        node[key] = node.get(key, 0.0) + float(c)
    return tree


def bell_operator(game, measurements, _tree=None):
    """Sum of coefficients times measurement tensor products."""
    d = next(iter(measurements[0][0].values())).shape[0]
    tree = _coeff_tree(game) if _tree is None else _tree

    def build(node, p):
        dim = d ** (game.r - p)
        out = np.zeros((dim, dim))
        for (x, a), sub in node.items():
            op = measurements[p][x][a]
            if p == game.r - 1:
                out += sub * op
            else:
                out += np.kron(op, build(sub, p + 1))
        return out

    return build(tree, 0)


def born_value(game, q, with_behavior=False):
    """Expected score of the realization's behavior; optionally the table."""
    validate_realization(game, q, state_tol=1e-8, sum_tol=1e-7, psd_tol=1e-7)
    B = bell_operator(game, q.measurements)
    value = float(q.state @ B @ q.state)
    if not with_behavior:
        return value
    psi = q.state.reshape((q.d,) * game.r)
    behavior = {}
    from itertools import product as iproduct
    for xs in game.inputs():
        dist = {}
        for outs in iproduct(*(game.outcome_sets[x] for x in xs)):
            vec = psi
            for p in range(game.r):
                op = q.measurements[p][xs[p]][outs[p]]
                vec = np.tensordot(op, vec, axes=([1], [p]))
                vec = np.moveaxis(vec, 0, p)
            dist[outs] = float(np.tensordot(psi, vec, axes=game.r))
        behavior[xs] = dist
    return value, behavior


def _fix_sign(v):
    for comp in v:
        if abs(comp) > 1e-12:
            return v if comp > 0 else -v
    return v


def update_state(game, q):
    """Top eigenvector of the Bell operator; never lowers the value."""
    B = bell_operator(game, q.measurements)
    w, V = np.linalg.eigh(B)
    state = _fix_sign(V[:, -1])
    return replace(q, state=state, value=float(w[-1]))


def _reduced_ops(game, q, party):
    """Per input of one party: outcome -> reduced operator F with
    value = sum_a Tr(F(a, x) M(a, x)) + contributions of other inputs."""
    d, r = q.d, game.r
    psi = q.state.reshape((d,) * r)
    red = [{a: np.zeros((d, d)) for a in game.outcome_sets[x]}
           for x in range(game.n)]
    for (xs, outs), c in game.coefficients.items():
        vec = psi
        for p in range(r):
            if p == party:
                continue
            op = q.measurements[p][xs[p]][outs[p]]
            vec = np.tensordot(op, vec, axes=([1], [p]))
            vec = np.moveaxis(vec, 0, p)
        # F[i, j] = <psi with slot `party` = i | contracted | slot = j>
        axes = [p for p in range(r) if p != party]
        F = np.tensordot(psi, vec, axes=(axes, axes))
        red[xs[party]][outs[party]] += float(c) * F
    return red


def _two_outcome_split(F1, F2):
    """Maximize Tr(F1 M) + Tr(F2 (I-M)) over 0 <= M <= I: positive part."""
    G = F1 - F2
    w, V = np.linalg.eigh(0.5 * (G + G.T))
    keep = w > 0
    return V[:, keep] @ V[:, keep].T


def _povm_sdp(Fs, d, tol=1e-9):
    """Maximize sum_a Tr(F_a M_a), M_a >= 0, sum M_a = I; k-1 free operators."""
    k = len(Fs)
    pairs = [(i, j) for i in range(d) for j in range(i, d)]
    m = (k - 1) * len(pairs)
    c = []
    entries = [(0, k - 1, i, i, 1.0) for i in range(d)]
    blocks = tuple([d] * k)
    var = 0
    for a in range(k - 1):
        G = Fs[a] - Fs[k - 1]
        for (i, j) in pairs:
            c.append(G[i, j] * (2.0 if i != j else 1.0))
            entries.append((var + 1, a, i, j, 1.0))
            entries.append((var + 1, k - 1, i, j, -1.0))
            var += 1
    prob = sdp.make_problem(m, blocks, c, entries)
    sol = sdp.solve_embedded(prob, tol=tol)
    x = np.asarray(sol.x)
    ops = []
    var = 0
    for a in range(k - 1):
        M = np.zeros((d, d))
        for (i, j) in pairs:
            M[i, j] = x[var]
            M[j, i] = x[var]
            var += 1
        ops.append(M)
    return ops


def _clean_povm(raw_ops, d):
    """Clip candidates to exact psd operators summing below identity."""
    ops = []
    for M in raw_ops:
        w, V = np.linalg.eigh(0.5 * (M + M.T))
        w = np.clip(w, 0.0, None)
        ops.append((V * w) @ V.T)
    if ops:
        S = sum(ops)
        lam = np.linalg.eigvalsh(S)[-1]
        if lam > 1.0:
            ops = [M / lam for M in ops]
    return ops


def update_measurements(game, q, party):
    """Per-input optimal POVMs for one party; accepted only if not worse."""
    red = _reduced_ops(game, q, party)
    d = q.d
    base = born_value(game, q) if q.value is None else q.value
    new_meas = []
    for x in range(game.n):
        outs = game.outcome_sets[x]
        Fs = [red[x][a] for a in outs]
        if len(outs) == 1:
            new_meas.append({outs[0]: np.eye(d)})
            continue
        if len(outs) == 2:
            M = _two_outcome_split(Fs[0], Fs[1])
            ops = _clean_povm([M], d)
        else:
            ops = _clean_povm(_povm_sdp(Fs, d), d)
        povm = {}
        S = np.zeros((d, d))
        for a, M in zip(outs[:-1], ops):
            povm[a] = M
            S += M
        povm[outs[-1]] = np.eye(d) - S
        new_meas.append(povm)
    meas = list(q.measurements)
    meas[party] = tuple(new_meas)
    cand = replace(q, measurements=tuple(meas), value=None)
    cand_value = float(cand.state @ bell_operator(game, cand.measurements) @ cand.state)
    if cand_value >= base - 1e-14:
        return replace(cand, value=cand_value)
    return q


def random_realization(game, d, rng):
    """Random projective measurements (partition conjugated by a random
    orthogonal), independent per party and input; random unit state."""
    meas = []
    for _ in range(game.r):
        fam = []
        for x in range(game.n):
            outs = game.outcome_sets[x]
            Q, R = np.linalg.qr(rng.standard_normal((d, d)))
            Q = Q * np.sign(np.diag(R))
            labels = rng.integers(0, len(outs), size=d)
            povm = {}
            for idx, a in enumerate(outs):
                cols = Q[:, labels == idx]
                povm[a] = cols @ cols.T
            fam.append(povm)
        meas.append(tuple(fam))
    state = rng.standard_normal(d ** game.r)
    state /= np.linalg.norm(state)
    return QuantumRealization(r=game.r, d=d, state=state,
                              measurements=tuple(meas), value=None)


def _run_restart(game, q, tol, max_iters, log=None, sym_basis=None, tree=None):
    q = _sym_state_update(game, q, sym_basis, tree) if sym_basis is not None \
        else update_state(game, q)
    value = q.value
    if log is not None:
        log.append(value)
    for _ in range(max_iters):
        if sym_basis is not None:
            q = _sym_measurement_update(game, q, tree)
            q = _sym_state_update(game, q, sym_basis, tree)
        else:
            for p in range(game.r):
                q = update_measurements(game, q, p)
            q = update_state(game, q)
        if log is not None:
            log.append(q.value)
        if q.value <= value + tol:
            value = max(value, q.value)
            break
        value = q.value
    return replace(q, value=value)


def optimize(game, cfg, classical_value=None, relaxation_bound=None, logs=None):
    """Best realization over seeded random restarts, with a status verdict.

    The verdict compares against the references when given: a value beating
    the classical optimum is a conclusive advantage; otherwise the
    relaxation bound decides between no-advantage and inconclusive.
    """
    d = cfg.d if cfg.d is not None else game.n
    if cfg.symmetric:
        value, q = symmetric_optimize(game, cfg, logs=logs)
    else:
        streams = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
        best = None
        for stream in streams:
            rng = np.random.default_rng(stream)
            log = [] if logs is not None else None
            q = random_realization(game, d, rng)
            q = _run_restart(game, q, cfg.tol, cfg.max_iters, log=log)
            if logs is not None:
                logs.append(log)
            if best is None or q.value > best.value:
                best = q
        value, q = best.value, best
    status = "unknown"
    if classical_value is not None:
        cval = float(classical_value)
        if value > cval + VALUE_EPS:
            status = "conclusive-advantage"
        elif relaxation_bound is not None:
            if relaxation_bound <= cval + VALUE_EPS:
                status = "no-advantage"
            else:
                status = "inconclusive"
    return value, q, status


# ---- symmetric variant: shared measurements, permutation-invariant state


def symmetric_subspace_basis(d, r):
    """Orthonormal columns spanning the permutation-invariant subspace."""
    cols = []
    for combo in combinations_with_replacement(range(d), r):
        v = np.zeros(d ** r)
        seen = set()
        from itertools import permutations
        for perm in permutations(combo):
            if perm in seen:
                continue
            seen.add(perm)
            idx = 0
            for p in perm:
                idx = idx * d + p
            v[idx] = 1.0
        v /= np.linalg.norm(v)
        cols.append(v)
    return np.column_stack(cols)


def _sym_state_update(game, q, P, tree):
    B = bell_operator(game, q.measurements, _tree=tree)
    Bs = P.T @ B @ P
    w, V = np.linalg.eigh(0.5 * (Bs + Bs.T))
    state = _fix_sign(P @ V[:, -1])
    state /= np.linalg.norm(state)
    return replace(q, state=state, value=float(w[-1]))


def _sym_measurement_update(game, q, tree):
    """One-party optimal POVMs applied to all parties with damping."""
    red = _reduced_ops(game, q, 0)
    d = q.d
    base = q.value if q.value is not None else \
        float(q.state @ bell_operator(game, q.measurements, _tree=tree) @ q.state)
    target = []
    for x in range(game.n):
        outs = game.outcome_sets[x]
        Fs = [red[x][a] for a in outs]
        if len(outs) == 1:
            target.append({outs[0]: np.eye(d)})
            continue
        if len(outs) == 2:
            ops = _clean_povm([_two_outcome_split(Fs[0], Fs[1])], d)
        else:
            ops = _clean_povm(_povm_sdp(Fs, d), d)
        povm = {}
        S = np.zeros((d, d))
        for a, M in zip(outs[:-1], ops):
            povm[a] = M
            S += M
        povm[outs[-1]] = np.eye(d) - S
        target.append(povm)
    old = q.measurements[0]
    for t in (1.0, 0.5, 0.25, 0.1):
        fam = []
        for x in range(game.n):
            povm = {a: (1 - t) * old[x][a] + t * target[x][a]
                    for a in game.outcome_sets[x]}
            fam.append(povm)
        fam = tuple(fam)
        cand = replace(q, measurements=(fam,) * game.r, value=None)
        val = float(cand.state @ bell_operator(game, cand.measurements, _tree=tree)
                    @ cand.state)
        if val >= base - 1e-14:
            return replace(cand, value=val)
    return q


def marginal_spread(game, q):
    """Largest deviation between parties' single-party outcome distributions."""
    d = q.d
    psi = q.state.reshape((d,) * q.r)
    worst = 0.0
    probs = []
    for p in range(q.r):
        axes = [i for i in range(q.r) if i != p]
        rho = np.tensordot(psi, psi, axes=(axes, axes))
        table = {}
        for x in range(game.n):
            for a in game.outcome_sets[x]:
                table[(x, a)] = float(np.vdot(rho, q.measurements[p][x][a]))
        probs.append(table)
    for p in range(1, q.r):
        for key, v in probs[0].items():
            worst = max(worst, abs(v - probs[p][key]))
    return worst


def symmetric_optimize(game, cfg, logs=None):
    """Shared-measurement, swap-invariant-state see-saw over restarts."""
    d = cfg.d if cfg.d is not None else game.n
    P = symmetric_subspace_basis(d, game.r)
    tree = _coeff_tree(game)
    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    best = None
    for stream in streams:
        rng = np.random.default_rng(stream)
        log = [] if logs is not None else None
        q0 = random_realization(game, d, rng)
        q0 = replace(q0, measurements=(q0.measurements[0],) * game.r)
        q = _run_restart(game, q0, cfg.tol, cfg.max_iters, log=log,
                         sym_basis=P, tree=tree)
        if logs is not None:
            logs.append(log)
        if best is None or q.value > best.value:
            best = q
    return best.value, best


# ---- classical embeddings and dumps


def embed_deterministic(game, strategies, d=None):
    """Diagonal embedding: the chosen move gets the identity operator."""
    d = d if d is not None else game.n
    meas = []
    for s in strategies:
        fam = []
        for x in range(game.n):
            povm = {a: (np.eye(d) if a == s.move[x] else np.zeros((d, d)))
                    for a in game.outcome_sets[x]}
            fam.append(povm)
        meas.append(tuple(fam))
    state = np.zeros(d ** game.r)
    state[0] = 1.0
    return QuantumRealization(r=game.r, d=d, state=state,
                              measurements=tuple(meas), value=None)


def uniform_realization(game, d=None):
    """Every outcome gets identity over the outcome count: uniform behavior."""
    d = d if d is not None else game.n
    fam = []
    for x in range(game.n):
        k = len(game.outcome_sets[x])
        fam.append({a: np.eye(d) / k for a in game.outcome_sets[x]})
    state = np.zeros(d ** game.r)
    state[0] = 1.0
    return QuantumRealization(r=game.r, d=d, state=state,
                              measurements=(tuple(fam),) * game.r, value=None)


def dump_realization(q):
    payload = {
        "r": q.r,
        "d": q.d,
        "value": q.value,
        "state": [float(v) for v in q.state],
        "measurements": [
            [{str(a): {"re": [float(v) for v in op.ravel()],
                       "im": [0.0] * op.size}
              for a, op in povm.items()}
             for povm in fam]
            for fam in q.measurements],
    }
    return json.dumps(payload, indent=1)
