import json
from fractions import Fraction

import numpy as np
import pytest

from belltasks import classical, npa, seesaw
from conftest import make_game


def test_embed_deterministic_matches_exact_value():
    for name, kind, start in [("triangle", "rendezvous", "any"),
                              ("square curly", "domination", "distinct")]:
        game = make_game(name, kind=kind, start=start)
        value, witness = classical.classical_optimum(game)
        q = seesaw.embed_deterministic(game, witness)
        assert abs(seesaw.born_value(game, q) - float(value)) < 1e-12


def test_uniform_realization_matches_random_play():
    game = make_game("pentagon", kind="domination")
    q = seesaw.uniform_realization(game)
    assert abs(seesaw.born_value(game, q) -
               float(classical.random_value(game))) < 1e-12


def test_born_value_behavior_table():
    game = make_game("triangle")
    _, witness = classical.classical_optimum(game)
    q = seesaw.embed_deterministic(game, witness)
    value = seesaw.born_value(game, q, with_behavior=False)
    _, behavior = seesaw.born_value(game, q, with_behavior=True)
    for xs in game.inputs():
        assert sum(behavior[xs].values()) == pytest.approx(1.0)
    from belltasks import tasks
    assert tasks.game_value(game, behavior) == pytest.approx(value)


def test_validate_realization_rejects():
    game = make_game("triangle")
    q = seesaw.uniform_realization(game)
    bad_state = seesaw.QuantumRealization(
        r=q.r, d=q.d, state=q.state * 2.0, measurements=q.measurements)
    with pytest.raises(ValueError, match="normalized"):
        seesaw.validate_realization(game, bad_state)
    meas = [list(fam) for fam in q.measurements]
    meas[0][0] = {a: op * 2.0 for a, op in meas[0][0].items()}
    bad_sum = seesaw.QuantumRealization(
        r=q.r, d=q.d, state=q.state,
        measurements=tuple(tuple(f) for f in meas))
    with pytest.raises(ValueError):
        seesaw.validate_realization(game, bad_sum)
    with pytest.raises(ValueError, match="parties"):
        seesaw.validate_realization(make_game("triangle", r=3), q)


def test_config_validation():
    with pytest.raises(ValueError):
        seesaw.SeesawConfig(restarts=0)


def test_update_steps_never_lose():
    game = make_game("pentagon")
    rng = np.random.default_rng(12)
    q = seesaw.random_realization(game, d=3, rng=rng)
    v0 = seesaw.born_value(game, q)
    q = seesaw.update_state(game, q)
    assert q.value >= v0 - 1e-12
    for party in range(game.r):
        before = q.value
        q = seesaw.update_measurements(game, q, party)
        assert q.value >= before - 1e-12
    seesaw.validate_realization(game, q)


def test_optimize_triangle_finds_advantage():
    game = make_game("triangle")
    cfg = seesaw.SeesawConfig(restarts=8, seed=0)
    logs = []
    value, q, status = seesaw.optimize(
        game, cfg, classical_value=Fraction(5, 9), relaxation_bound=7 / 12 + 1e-7)
    assert status == "conclusive-advantage"
    assert 5 / 9 + 1e-6 < value <= 7 / 12 + 1e-7
    seesaw.validate_realization(game, q)
    assert abs(seesaw.born_value(game, q) - value) < 1e-8


def test_optimize_logs_are_monotone():
    game = make_game("square")
    logs = []
    value, q, status = seesaw.optimize(
        game, seesaw.SeesawConfig(restarts=4, seed=1), logs=logs)
    assert len(logs) == 4
    for log in logs:
        assert all(a <= b + 1e-12 for a, b in zip(log, log[1:]))
    assert value == pytest.approx(max(log[-1] for log in logs))


def test_optimize_no_advantage_square():
    game = make_game("square")
    c, _ = classical.classical_optimum(game)
    b = npa.npa_bound(game, "1")
    value, q, status = seesaw.optimize(
        game, seesaw.SeesawConfig(restarts=4, seed=0),
        classical_value=c, relaxation_bound=b.value)
    assert status == "no-advantage"
    assert value <= float(c) + 1e-6


def test_optimize_statuses_with_missing_references():
    game = make_game("square")
    _, _, status = seesaw.optimize(game, seesaw.SeesawConfig(restarts=1))
    assert status == "unknown"
    _, _, status = seesaw.optimize(
        game, seesaw.SeesawConfig(restarts=1),
        classical_value=Fraction(1, 2), relaxation_bound=0.7)
    assert status == "inconclusive"


def test_povm_update_with_three_outcomes():
    # K4 inputs offer three moves, exercising the sdp-based povm step
    game = make_game("tetrahedron")
    rng = np.random.default_rng(5)
    q = seesaw.random_realization(game, d=2, rng=rng)
    q = seesaw.update_state(game, q)
    before = q.value
    q = seesaw.update_measurements(game, q, 0)
    assert q.value >= before - 1e-12
    seesaw.validate_realization(game, q)


def test_symmetric_subspace_basis():
    for d, r in [(2, 2), (3, 2), (2, 3)]:
        P = seesaw.symmetric_subspace_basis(d, r)
        dim = {(2, 2): 3, (3, 2): 6, (2, 3): 4}[(d, r)]
        assert P.shape == (d ** r, dim)
        assert np.allclose(P.T @ P, np.eye(dim), atol=1e-12)
        # columns are swap-invariant
        for col in P.T:
            M = col.reshape((d,) * r)
            assert np.allclose(M, np.swapaxes(M, 0, 1), atol=1e-12)


def test_symmetric_optimize_triangle_distinct():
    game = make_game("triangle", start="distinct")
    cfg = seesaw.SeesawConfig(restarts=6, seed=0, symmetric=True)
    value, q = seesaw.symmetric_optimize(game, cfg)
    assert value == pytest.approx(0.5, abs=1e-4)
    seesaw.validate_realization(game, q)
    # shared measurements and a swap-invariant state keep marginals equal
    assert seesaw.marginal_spread(game, q) < 1e-7


def test_marginal_spread_zero_for_identical_parties():
    game = make_game("triangle")
    _, witness = classical.classical_optimum(game)
    q = seesaw.embed_deterministic(game, witness)
    assert seesaw.marginal_spread(game, q) < 1e-14


def test_dump_realization_roundtrip():
    game = make_game("triangle")
    q = seesaw.uniform_realization(game, d=2)
    payload = json.loads(seesaw.dump_realization(q))
    assert payload["r"] == 2 and payload["d"] == 2
    assert len(payload["state"]) == 4
    op = payload["measurements"][0][0]["1"]
    assert op["re"] == [0.5, 0.0, 0.0, 0.5]
    assert all(v == 0.0 for v in op["im"])
