"""Task semantics and their encoding as coefficient games.

A task instance fixes the kind (rendezvous or domination), the number of
agents r, the number of simultaneous steps h, and the start prior (uniform
over all tuples, or uniform over pairwise-distinct tuples).  Converting it
to a game means listing, for every input tuple x (start positions) and every
allowed outcome tuple a (final positions), the coefficient

    coefficients[x, a] = prior(x) * score(a),

so that the expected score of any behavior P(a|x) is the plain linear form
sum coefficients * P.  Movement happens on the h-step walk power of the
graph; domination neighborhoods always refer to the original graph.

All numbers here are exact Fractions.  Floats appear only once a game is
handed to a solver.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
import json

from .graphs import walk_power, allowed_moves, closed_neighborhood


@dataclass(frozen=True)
class TaskSpec:
    kind: str  # "rendezvous" or "domination"
    r: int = 2
    h: int = 1
    start: str = "any"  # "any" or "distinct"
    symmetric_only: bool = False

    def __post_init__(self):
        if self.kind not in ("rendezvous", "domination"):
            raise ValueError(f"unknown task kind {self.kind!r}")
        if self.r < 2:
            raise ValueError("at least 2 agents required")
        if self.h < 1:
            raise ValueError("at least 1 step required")
        if self.start not in ("any", "distinct"):
            raise ValueError(f"unknown start mode {self.start!r}")


@dataclass(frozen=True)
class BellGame:
    r: int
    n: int
    kind: str
    start: str
    graph_name: str
    outcome_sets: tuple        # outcome_sets[x] = allowed moves from x, ascending
    prior: dict                # input tuple -> Fraction (only nonzero entries)
    coefficients: dict         # (input tuple, outcome tuple) -> Fraction
    value_range: tuple         # (min achievable score, max achievable score)
    symmetric_only: bool = False

    def moves(self, x):
        return self.outcome_sets[x]

    def inputs(self):
        return sorted(self.prior)


def score(kind, g, positions):
    """Score of one round: all-met indicator, or dominated-vertex count."""
    for p in positions:
        if not (0 <= p < g.n):
            raise ValueError(f"vertex {p} out of range")
    if kind == "rendezvous":
        return Fraction(int(len(set(positions)) == 1))
    if kind == "domination":
        dominated = set()
        for p in set(positions):
            dominated |= closed_neighborhood(g, p)
        return Fraction(len(dominated))
    raise ValueError(f"unknown task kind {kind!r}")


def start_prior(spec, n):
    """Uniform prior over start tuples; distinct mode excludes repeats."""
    if spec.start == "any":
        w = Fraction(1, n ** spec.r)
        return {t: w for t in product(range(n), repeat=spec.r)}
    if n < spec.r:
        raise ValueError(f"distinct start infeasible: {spec.r} agents on {n} vertices")
    count = 1
    for i in range(spec.r):
        count *= n - i
    w = Fraction(1, count)
    return {t: w for t in product(range(n), repeat=spec.r) if len(set(t)) == spec.r}


def build_game(g, spec):
    """Encode the task on graph g as a BellGame."""
    eff = walk_power(g, spec.h)
    outcome_sets = tuple(tuple(allowed_moves(eff, x)) for x in range(g.n))
    prior = start_prior(spec, g.n)
    coefficients = {}
    score_cache = {}
    smin, smax = None, None
    for xs, w in prior.items():
        for outs in product(*(outcome_sets[x] for x in xs)):
            key = tuple(sorted(outs)) if spec.kind == "domination" else outs
            s = score_cache.get(key)
            if s is None:
                s = score(spec.kind, g, outs)
                score_cache[key] = s
            if smin is None or s < smin:
                smin = s
            if smax is None or s > smax:
                smax = s
            if s:
                coefficients[(xs, outs)] = w * s
    vr = (smin, smax)
    return BellGame(r=spec.r, n=g.n, kind=spec.kind, start=spec.start,
                    graph_name=g.name, outcome_sets=outcome_sets, prior=prior,
                    coefficients=coefficients, value_range=vr,
                    symmetric_only=spec.symmetric_only)


def game_value(game, behavior):
    """Expected score of a joint behavior P(outcome tuple | input tuple).

    behavior maps input tuples to dicts over outcome tuples.  Each entry must
    be a normalized distribution over the allowed outcome tuples.
    """
    for xs in game.prior:
        dist = behavior.get(xs)
        if dist is None:
            raise ValueError(f"behavior missing input {xs}")
        total = sum(dist.values())
        if abs(float(total) - 1.0) > 1e-9:
            raise ValueError(f"behavior at input {xs} sums to {float(total)}")
        allowed = set(product(*(game.outcome_sets[x] for x in xs)))
        for outs, p in dist.items():
            if outs not in allowed:
                raise ValueError(f"outcome {outs} not allowed at input {xs}")
            if isinstance(p, float):
                if p < -1e-12:
                    raise ValueError("negative probability")
            elif p < 0:
                raise ValueError("negative probability")
    # float behaviors get a float result; exact behaviors stay exact
    if any(isinstance(p, float) for dist in behavior.values() for p in dist.values()):
        return sum(float(c) * float(behavior[xs].get(outs, 0.0))
                   for (xs, outs), c in game.coefficients.items())
    return sum((c * behavior[xs].get(outs, 0)
                for (xs, outs), c in game.coefficients.items()), Fraction(0))


def dump_game(game):
    """JSON text with the full exact game data."""
    payload = {
        "r": game.r,
        "n": game.n,
        "kind": game.kind,
        "start": game.start,
        "graph": game.graph_name,
        "outcome_sets": [list(s) for s in game.outcome_sets],
        "prior": [{"inputs": list(k), "num": v.numerator, "den": v.denominator}
                  for k, v in sorted(game.prior.items())],
        "coefficients": [{"inputs": list(xs), "outputs": list(outs),
                          "num": c.numerator, "den": c.denominator}
                         for (xs, outs), c in sorted(game.coefficients.items())],
    }
    return json.dumps(payload, indent=1)
