import json
from fractions import Fraction
from itertools import product

import pytest

from belltasks import graphs, tasks
from conftest import make_game


def test_spec_validation():
    with pytest.raises(ValueError):
        tasks.TaskSpec(kind="hide-and-seek")
    with pytest.raises(ValueError):
        tasks.TaskSpec(kind="rendezvous", r=1)
    with pytest.raises(ValueError):
        tasks.TaskSpec(kind="rendezvous", h=0)
    with pytest.raises(ValueError):
        tasks.TaskSpec(kind="rendezvous", start="adjacent")


def test_score_rendezvous():
    g = graphs.make_cycle(5)
    assert tasks.score("rendezvous", g, (2, 2)) == 1
    assert tasks.score("rendezvous", g, (2, 3)) == 0
    assert tasks.score("rendezvous", g, (1, 1, 1)) == 1
    assert tasks.score("rendezvous", g, (1, 1, 2)) == 0
    with pytest.raises(ValueError):
        tasks.score("rendezvous", g, (2, 7))


def test_score_domination():
    g = graphs.make_cycle(5)
    assert tasks.score("domination", g, (0, 0)) == 3
    assert tasks.score("domination", g, (0, 2)) == 5
    assert tasks.score("domination", g, (0, 1)) == 4
    # loops widen the move set but never the dominated set
    gc = graphs.catalog_lookup("square curly").graph
    assert tasks.score("domination", gc, (0, 0)) == 3
    assert tasks.score("domination", gc, (0, 2)) == 4


def test_start_prior_any():
    spec = tasks.TaskSpec(kind="rendezvous", r=2, start="any")
    prior = tasks.start_prior(spec, 3)
    assert len(prior) == 9
    assert all(w == Fraction(1, 9) for w in prior.values())
    assert sum(prior.values()) == 1


def test_start_prior_distinct():
    spec = tasks.TaskSpec(kind="rendezvous", r=3, start="distinct")
    prior = tasks.start_prior(spec, 4)
    assert len(prior) == 4 * 3 * 2
    assert all(len(set(t)) == 3 for t in prior)
    assert sum(prior.values()) == 1
    with pytest.raises(ValueError):
        tasks.start_prior(spec, 2)


def test_build_game_triangle():
    game = make_game("triangle")
    assert game.r == 2 and game.n == 3
    assert game.value_range == (0, 1)
    # one-step moves on a triangle never stay put
    for x in range(3):
        assert x not in game.moves(x)
    # rendezvous keeps only the meet outcomes
    for (xs, outs), c in game.coefficients.items():
        assert outs[0] == outs[1]
        assert c == Fraction(1, 9)
    assert game.inputs() == sorted(product(range(3), repeat=2))


def test_build_game_walk_power():
    game = make_game("hexagon", h=2)
    # two steps on an even cycle allow returning to the start
    assert game.moves(0) == (0, 2, 4)


def test_build_game_domination_range():
    game = make_game("pentagon", kind="domination")
    assert game.value_range == (3, 5)
    curly = make_game("square curly", kind="domination")
    assert curly.value_range == (3, 4)
    assert all(c > 0 for c in curly.coefficients.values())


def test_build_game_distinct_skips_diagonal():
    game = make_game("square", start="distinct")
    assert all(xs[0] != xs[1] for xs in game.prior)
    assert len(game.prior) == 12


def uniform_behavior(game):
    behavior = {}
    for xs in game.prior:
        cells = list(product(*(game.outcome_sets[x] for x in xs)))
        w = Fraction(1, len(cells))
        behavior[xs] = {outs: w for outs in cells}
    return behavior


def test_game_value_uniform_matches_random():
    from belltasks import classical
    for name, kind in [("triangle", "rendezvous"), ("pentagon", "domination")]:
        game = make_game(name, kind=kind)
        assert tasks.game_value(game, uniform_behavior(game)) == \
            classical.random_value(game)


def test_game_value_stays_exact():
    game = make_game("triangle")
    value = tasks.game_value(game, uniform_behavior(game))
    assert isinstance(value, Fraction)
    floaty = {xs: {o: float(p) for o, p in d.items()}
              for xs, d in uniform_behavior(game).items()}
    assert isinstance(tasks.game_value(game, floaty), float)


def test_game_value_validation():
    game = make_game("triangle")
    behavior = uniform_behavior(game)
    missing = dict(behavior)
    del missing[(0, 0)]
    with pytest.raises(ValueError, match="missing input"):
        tasks.game_value(game, missing)
    short = {xs: dict(d) for xs, d in behavior.items()}
    short[(0, 0)] = {(1, 1): Fraction(1, 2)}
    with pytest.raises(ValueError, match="sums to"):
        tasks.game_value(game, short)
    bad = {xs: dict(d) for xs, d in behavior.items()}
    bad[(0, 0)] = {(0, 0): Fraction(1)}  # staying put is not a legal move
    with pytest.raises(ValueError, match="not allowed"):
        tasks.game_value(game, bad)
    neg = {xs: dict(d) for xs, d in behavior.items()}
    neg[(0, 0)] = {(1, 1): Fraction(3, 2), (2, 2): Fraction(-1, 2)}
    with pytest.raises(ValueError, match="negative"):
        tasks.game_value(game, neg)


def test_dump_game_roundtrip():
    game = make_game("square", kind="domination", start="distinct")
    payload = json.loads(tasks.dump_game(game))
    assert payload["kind"] == "domination"
    assert payload["start"] == "distinct"
    assert len(payload["coefficients"]) == len(game.coefficients)
    for item in payload["coefficients"]:
        key = (tuple(item["inputs"]), tuple(item["outputs"]))
        assert game.coefficients[key] == Fraction(item["num"], item["den"])
