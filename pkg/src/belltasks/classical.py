"""Classical baselines and exact classical optima.

Three levels of machinery live here.  random_value and evaluate are exact
rational computations straight from the game's coefficient tensor.
classical_optimum clears the uniform prior weight out of the objective,
leaving an integer score table over outcome tuples, and enumerates
deterministic strategies with the integer kernels (symmetric enumeration
when justified, otherwise enumeration of all-but-one agents with a
per-input best response for the remaining one).  The constructive
procedures symmetrize, derandomize, and best_response_improve transform
explicit strategies and never decrease the value; they back the
monotonicity property tests.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
import json

import numpy as np

from . import kernels


class BudgetExceededError(RuntimeError):
    """Enumeration would evaluate more strategy tuples than the budget."""


@dataclass(frozen=True)
class DeterministicStrategy:
    move: tuple  # move[x] = vertex chosen on input x

    def prob(self, a, x):
        return Fraction(1 if self.move[x] == a else 0)

    def support(self, x):
        return (self.move[x],)


@dataclass(frozen=True)
class StochasticStrategy:
    p: dict  # (a, x) -> Fraction

    def prob(self, a, x):
        return self.p.get((a, x), Fraction(0))

    def support(self, x):
        return tuple(sorted(a for (a, xx), v in self.p.items() if xx == x and v > 0))

    def marginal(self, a, n):
        return sum(self.prob(a, x) for x in range(n)) * Fraction(1, n)


def uniform_strategy(game):
    p = {}
    for x in range(game.n):
        w = Fraction(1, len(game.outcome_sets[x]))
        for a in game.outcome_sets[x]:
            p[(a, x)] = w
    return StochasticStrategy(p)


def as_stochastic(s):
    if isinstance(s, StochasticStrategy):
        return s
    return StochasticStrategy({(a, x): Fraction(1) for x, a in enumerate(s.move)})


def check_strategy(game, s):
    """Normalization, nonnegativity, and support inside allowed moves."""
    s = as_stochastic(s)
    for x in range(game.n):
        allowed = set(game.outcome_sets[x])
        total = Fraction(0)
        for (a, xx), v in s.p.items():
            if xx != x:
                continue
            if v < 0:
                raise ValueError(f"negative probability at input {x}")
            if v > 0 and a not in allowed:
                raise ValueError(f"outcome {a} not reachable from input {x}")
            total += v
        if total != 1:
            raise ValueError(f"strategy at input {x} sums to {total}, not 1")


def dump_strategy(s):
    s = as_stochastic(s)
    rows = [{"input": x, "output": a, "num": v.numerator, "den": v.denominator}
            for (a, x), v in sorted(s.p.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            if v > 0]
    return json.dumps(rows, indent=1)


def random_value(game):
    """Exact expected score when every agent moves uniformly at random."""
    total = Fraction(0)
    for (xs, outs), c in game.coefficients.items():
        w = Fraction(1)
        for x in xs:
            w *= Fraction(1, len(game.outcome_sets[x]))
        total += c * w
    return total


def evaluate(game, strategies):
    """Exact expected score of one strategy per agent."""
    if len(strategies) != game.r:
        raise ValueError(f"expected {game.r} strategies, got {len(strategies)}")
    strategies = [as_stochastic(s) for s in strategies]
    for s in strategies:
        check_strategy(game, s)
    total = Fraction(0)
    for (xs, outs), c in game.coefficients.items():
        w = c
        for i in range(game.r):
            w *= strategies[i].prob(outs[i], xs[i])
            if w == 0:
                break
        total += w
    return total


def meeting_closed_form(game, strategies):
    """Rendezvous/any value as sum over vertices of the marginal product."""
    if game.kind != "rendezvous" or game.start != "any":
        raise ValueError("closed form applies to rendezvous with any start")
    strategies = [as_stochastic(s) for s in strategies]
    total = Fraction(0)
    for a in range(game.n):
        term = Fraction(1)
        for s in strategies:
            term *= s.marginal(a, game.n)
        total += term
    return total


def _score_table(game):
    """Integer score per outcome tuple, and the shared prior weight.

    Coefficients are prior * score with the prior constant on its support,
    so dividing one realizing coefficient recovers each score.  Outcome
    tuples never realized by a support input keep score 0; they only ever
    appear in kernel terms that cancel (the subtracted diagonal).
    """
    weights = set(game.prior.values())
    if len(weights) != 1:
        raise ValueError("prior is not uniform on its support")
    w = weights.pop()
    u = np.zeros((game.n,) * game.r, dtype=np.int64)
    seen = np.zeros((game.n,) * game.r, dtype=bool)
    for xs in game.prior:
        for outs in product(*(game.outcome_sets[x] for x in xs)):
            if seen[outs]:
                continue
            seen[outs] = True
            c = game.coefficients.get((xs, outs))
            if c is not None:
                s = c / w
                if s.denominator != 1:
                    raise ValueError("scores are not integers after clearing the prior")
                u[outs] = s.numerator
    return u, w


def _best_response_moves(game, u, others):
    """Deterministic per-input best response of agent 0 against fixed others.

    others holds the move arrays of agents 1..r-1.  Ties break toward the
    lowest vertex index.
    """
    n = game.n
    subtract = game.start == "distinct"
    f = []
    if game.r == 2:
        (g,) = others
        col = u[:, g].sum(axis=1)
        for x in range(n):
            mv = np.asarray(game.outcome_sets[x])
            cand = col[mv]
            if subtract:
                cand = cand - u[mv, g[x]]
            f.append(int(mv[int(np.argmax(cand))]))
    elif game.r == 3:
        g, h = others
        W = u[:, g, :].sum(axis=1)
        col2 = W[:, h].sum(axis=1)
        for x in range(n):
            mv = np.asarray(game.outcome_sets[x])
            cand = col2[mv]
            if subtract:
                sa = u[mv, g[x], :][:, h].sum(axis=1)
                sb = W[mv, h[x]]
                sc = u[np.ix_(mv, g)][:, np.arange(n), h].sum(axis=1)
                cand = cand - sa - sb - sc + 2 * u[mv, g[x], h[x]]
            f.append(int(mv[int(np.argmax(cand))]))
    else:
        raise ValueError("integer best response implemented for r in (2, 3)")
    return tuple(f)


def classical_optimum(game, symmetric_only=False, budget=10 ** 9):
    """Exact maximum over deterministic strategy tuples, with a witness.

    Rendezvous with the any-start prior is searched over symmetric tuples
    only: the symmetrization and derandomization arguments below show the
    optimum is attained there.  Other games enumerate agents 1..r-1 as a
    mixed-radix counter and best-respond agent 0 per input, which covers
    the full product space.  The budget caps the number of enumerated
    tuples; crossing it raises instead of silently truncating.
    """
    sym = symmetric_only or game.symmetric_only or (
        game.kind == "rendezvous" and game.start == "any")
    u, w = _score_table(game)
    moves = [list(s) for s in game.outcome_sets]
    count = kernels.strategy_count(moves)
    subtract = game.start == "distinct"
    if sym:
        if count > budget:
            raise BudgetExceededError(
                f"{count} symmetric strategies exceed the budget of {budget}; "
                "raise the budget or use best_response_improve for a lower bound")
        if game.r == 2:
            best, f = kernels.sym_best_r2(moves, u, subtract)
        elif game.r == 3:
            best, f = kernels.sym_best_r3(moves, u, subtract)
        else:
            raise ValueError("enumeration implemented for r in (2, 3)")
        strat = DeterministicStrategy(tuple(int(a) for a in f))
        return w * int(best), (strat,) * game.r
    if count ** (game.r - 1) > budget:
        raise BudgetExceededError(
            f"{count ** (game.r - 1)} strategy tuples exceed the budget of {budget}; "
            "consider symmetric_only or best_response_improve for a lower bound")
    if game.r == 2:
        best, g = kernels.pair_best(moves, u, subtract)
        others = (np.asarray(g),)
    elif game.r == 3:
        best, g, h = kernels.triple_best(moves, u, subtract)
        others = (np.asarray(g), np.asarray(h))
    else:
        raise ValueError("enumeration implemented for r in (2, 3)")
    f = _best_response_moves(game, u, others)
    strats = (DeterministicStrategy(f),) + tuple(
        DeterministicStrategy(tuple(int(a) for a in o)) for o in others)
    return w * int(best), strats


def symmetrize(game, strategies):
    """Replace all agents by the best single member, rendezvous/any only.

    The value sum_a prod_i m_i(a) of the marginals m_i is at most the
    geometric mean of the per-agent powers sum_a m_i(a)^r, hence at most
    their maximum: copying the best agent never loses.
    """
    if game.kind != "rendezvous" or game.start != "any":
        raise ValueError("symmetrization requires rendezvous with any start")
    strategies = [as_stochastic(s) for s in strategies]
    powers = []
    for s in strategies:
        powers.append(sum(s.marginal(a, game.n) ** game.r for a in range(game.n)))
    i = max(range(len(powers)), key=lambda i: (powers[i], -i))
    return (strategies[i],) * game.r


def derandomize(game, s, log=None):
    """Collapse a stochastic strategy to a deterministic one, rendezvous/any.

    At the lowest input with two or more supported outcomes, the full mass
    of a lesser-marginal outcome moves onto the largest-marginal one.  Each
    shift raises a marginal that already dominates, so the symmetric value
    sum_a m(a)^r never decreases; support shrinks by one per step.
    """
    if game.kind != "rendezvous" or game.start != "any":
        raise ValueError("derandomization requires rendezvous with any start")
    if isinstance(s, DeterministicStrategy):
        return s
    n = game.n
    p = dict(s.p)

    def record():
        if log is not None:
            cur = StochasticStrategy(dict(p))
            log.append(sum(cur.marginal(a, n) ** game.r for a in range(n)))

    record()
    while True:
        x0 = None
        for x in range(n):
            supp = [a for a in game.outcome_sets[x] if p.get((a, x), 0) > 0]
            if len(supp) >= 2:
                x0 = x
                break
        if x0 is None:
            break
        supp = [a for a in game.outcome_sets[x0] if p.get((a, x0), 0) > 0]
        marg = {a: sum(p.get((a, x), Fraction(0)) for x in range(n)) for a in supp}
        a1 = max(supp, key=lambda a: (marg[a], -a))
        a2 = min(a for a in supp if a != a1)
        p[(a1, x0)] = p.get((a1, x0), Fraction(0)) + p[(a2, x0)]
        del p[(a2, x0)]
        record()
    move = []
    for x in range(n):
        (a,) = [a for a in game.outcome_sets[x] if p.get((a, x), 0) > 0]
        move.append(a)
    return DeterministicStrategy(tuple(move))


def best_response_improve(game, init, log=None):
    """Round-robin deterministic best responses until a full quiet cycle.

    Works for every kind and prior.  The value never decreases at any
    replacement, and after the first cycle every agent is deterministic,
    so the procedure terminates at a local optimum of the response lattice.
    """
    strategies = [as_stochastic(s) for s in init]
    for s in strategies:
        check_strategy(game, s)
    value = evaluate(game, strategies)
    if log is not None:
        log.append(value)
    while True:
        improved = False
        for i in range(game.r):
            coef = {}
            for (xs, outs), c in game.coefficients.items():
                wgt = c
                for j in range(game.r):
                    if j == i:
                        continue
                    wgt *= strategies[j].prob(outs[j], xs[j])
                    if wgt == 0:
                        break
                if wgt != 0:
                    key = (xs[i], outs[i])
                    coef[key] = coef.get(key, Fraction(0)) + wgt
            # replace agent i by its per-input argmax, lowest vertex on ties
            move = []
            for x in range(game.n):
                move.append(max(game.outcome_sets[x],
                                key=lambda a: (coef.get((x, a), Fraction(0)), -a)))
            cand = as_stochastic(DeterministicStrategy(tuple(move)))
            new_strats = list(strategies)
            new_strats[i] = cand
            new_value = evaluate(game, new_strats)
            if new_value > value:
                improved = True
            if new_value >= value:
                strategies = new_strats
                value = new_value
            if log is not None:
                log.append(value)
        if not improved:
            break
    out = []
    for s in strategies:
        move = []
        for x in range(game.n):
            supp = [a for a in game.outcome_sets[x] if s.prob(a, x) > 0]
            move.append(supp[0] if len(supp) == 1 else None)
        if any(a is None for a in move):
            # stochastic leftovers only possible if no replacement ever ran
            raise RuntimeError("best response left a stochastic strategy")
        out.append(DeterministicStrategy(tuple(move)))
    return tuple(out)
