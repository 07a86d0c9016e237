from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from belltasks import classical, graphs, tasks
from conftest import make_game


PENTAGON = make_game("pentagon")


def stochastic_strategies(game):
    def build(weight_rows):
        p = {}
        for x, row in enumerate(weight_rows):
            total = sum(row)
            for a, w in zip(game.outcome_sets[x], row):
                if w:
                    p[(a, x)] = Fraction(w, total)
        return classical.StochasticStrategy(p)

    rows = st.tuples(*(
        st.lists(st.integers(0, 8),
                 min_size=len(game.outcome_sets[x]),
                 max_size=len(game.outcome_sets[x])).filter(any)
        for x in range(game.n)))
    return rows.map(build)


def test_random_value_known_cases():
    assert classical.random_value(make_game("triangle")) == Fraction(1, 3)
    assert classical.random_value(
        make_game("arrow", start="distinct")) == Fraction(1, 6)


def test_random_value_matches_uniform_play():
    for name, kind, start in [("square", "rendezvous", "distinct"),
                              ("pentagon", "domination", "any")]:
        game = make_game(name, kind=kind, start=start)
        u = classical.uniform_strategy(game)
        assert classical.evaluate(game, (u,) * game.r) == \
            classical.random_value(game)


def test_classical_optimum_known_cases():
    cases = [
        (("triangle", "rendezvous", "any"), Fraction(5, 9)),
        (("square", "rendezvous", "any"), Fraction(1, 2)),
        (("8-gon", "rendezvous", "any"), Fraction(1, 4)),
        (("12-gon", "rendezvous", "any"), Fraction(1, 6)),
        (("arrow", "rendezvous", "distinct"), Fraction(2, 5)),
        (("square curly", "domination", "any"), Fraction(4)),
        (("square curly", "domination", "distinct"), Fraction(4)),
        (("hexagon", "domination", "any"), Fraction(89, 18)),
        (("13-gon", "domination", "distinct"), Fraction(433, 78)),
    ]
    for (name, kind, start), want in cases:
        game = make_game(name, kind=kind, start=start)
        value, witness = classical.classical_optimum(game)
        assert value == want, (name, kind, start, value)
        assert classical.evaluate(game, witness) == want


def test_classical_optimum_witness_consistency():
    combos = [
        ("pentagon", "rendezvous", "any", 2),
        ("pentagon", "rendezvous", "distinct", 2),
        ("pentagon", "domination", "any", 2),
        ("spike", "domination", "distinct", 2),
        ("triangle", "rendezvous", "any", 3),
        ("square", "rendezvous", "distinct", 3),
    ]
    for name, kind, start, r in combos:
        game = make_game(name, kind=kind, start=start, r=r)
        value, witness = classical.classical_optimum(game)
        assert len(witness) == r
        for s in witness:
            classical.check_strategy(game, s)
        assert classical.evaluate(game, witness) == value


def test_symmetric_only_lower_bounds_full():
    game = make_game("pentagon", kind="domination")
    full, _ = classical.classical_optimum(game)
    sym, _ = classical.classical_optimum(game, symmetric_only=True)
    assert sym <= full


def test_budget_guard():
    game = make_game("pentagon", kind="domination")
    with pytest.raises(classical.BudgetExceededError, match="budget"):
        classical.classical_optimum(game, budget=10)


def test_check_strategy_rejects():
    game = PENTAGON
    with pytest.raises(ValueError, match="sums to"):
        classical.check_strategy(game, classical.StochasticStrategy(
            {(1, 0): Fraction(1, 2)}))
    bad = {(a, x): Fraction(1) for x, a in
           enumerate([0, 0, 1, 2, 3])}  # staying at 0 is not a move
    with pytest.raises(ValueError, match="not reachable"):
        classical.check_strategy(game, classical.StochasticStrategy(bad))


@settings(max_examples=60, deadline=None)
@given(s=stochastic_strategies(PENTAGON), t=stochastic_strategies(PENTAGON))
def test_closed_form_matches_evaluate(s, t):
    assert classical.meeting_closed_form(PENTAGON, (s, t)) == \
        classical.evaluate(PENTAGON, (s, t))


def test_closed_form_requires_meeting_any():
    game = make_game("pentagon", kind="domination")
    u = classical.uniform_strategy(game)
    with pytest.raises(ValueError):
        classical.meeting_closed_form(game, (u, u))


@settings(max_examples=60, deadline=None)
@given(s=stochastic_strategies(PENTAGON), t=stochastic_strategies(PENTAGON))
def test_symmetrize_then_derandomize_never_loses(s, t):
    v0 = classical.evaluate(PENTAGON, (s, t))
    sym = classical.symmetrize(PENTAGON, (s, t))
    v1 = classical.evaluate(PENTAGON, sym)
    assert v1 >= v0
    log = []
    d = classical.derandomize(PENTAGON, sym[0], log=log)
    assert all(a <= b for a, b in zip(log, log[1:]))
    assert classical.evaluate(PENTAGON, (d, d)) >= v1
    classical.check_strategy(PENTAGON, d)


def test_symmetrize_requires_meeting_any():
    game = make_game("square curly", kind="domination")
    u = classical.uniform_strategy(game)
    with pytest.raises(ValueError):
        classical.symmetrize(game, (u, u))


@settings(max_examples=25, deadline=None)
@given(s=stochastic_strategies(PENTAGON), t=stochastic_strategies(PENTAGON))
def test_best_response_monotone_ascent(s, t):
    log = []
    final = classical.best_response_improve(PENTAGON, (s, t), log=log)
    assert all(a <= b for a, b in zip(log, log[1:]))
    assert all(isinstance(f, classical.DeterministicStrategy) for f in final)
    value = classical.evaluate(PENTAGON, final)
    assert value == log[-1]
    assert value <= Fraction(9, 25)  # pentagon meeting optimum


def test_best_response_reaches_local_optimum_domination():
    game = make_game("square curly", kind="domination", start="distinct")
    u = classical.uniform_strategy(game)
    final = classical.best_response_improve(game, (u, u))
    opt, _ = classical.classical_optimum(game)
    assert classical.evaluate(game, final) <= opt


def test_dump_strategy_lists_support():
    import json
    d = classical.DeterministicStrategy((1, 0, 1))
    rows = json.loads(classical.dump_strategy(d))
    assert rows == [{"input": 0, "output": 1, "num": 1, "den": 1},
                    {"input": 1, "output": 0, "num": 1, "den": 1},
                    {"input": 2, "output": 1, "num": 1, "den": 1}]
