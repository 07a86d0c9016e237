from fractions import Fraction

import pytest

from belltasks import graphs


def test_cycle_structure():
    g = graphs.make_cycle(5)
    assert g.n == 5
    assert len(g.edges) == 5
    for v in range(5):
        assert sorted(graphs.allowed_moves(g, v)) == sorted(
            [(v - 1) % 5, (v + 1) % 5])


def test_path_and_curly_ends():
    g = graphs.make_path(4)
    assert graphs.allowed_moves(g, 0) == [1]
    assert sorted(graphs.allowed_moves(g, 1)) == [0, 2]
    gc = graphs.make_path(4, curly=True)
    assert sorted(graphs.allowed_moves(gc, 0)) == [0, 1]
    assert sorted(graphs.allowed_moves(gc, 3)) == [2, 3]
    # interior vertices keep no loop
    assert sorted(graphs.allowed_moves(gc, 1)) == [0, 2]


def test_complete_and_cube():
    k4 = graphs.make_complete(4)
    assert all(len(graphs.allowed_moves(k4, v)) == 3 for v in range(4))
    q3 = graphs.make_cube()
    assert q3.n == 8
    assert all(len(graphs.allowed_moves(q3, v)) == 3 for v in range(8))
    # neighbors differ in exactly one bit
    for (u, v) in q3.edges:
        assert bin(u ^ v).count("1") == 1


def test_walk_power_cycle():
    g = graphs.make_cycle(6)
    g2 = graphs.walk_power(g, 2)
    # two steps on an even cycle reach distance 0 or 2
    assert sorted(graphs.allowed_moves(g2, 0)) == [0, 2, 4]


def test_closed_neighborhood_ignores_loops():
    gc = graphs.make_path(3, curly=True)
    assert graphs.closed_neighborhood(gc, 0) == frozenset({0, 1})
    assert graphs.closed_neighborhood(gc, 1) == frozenset({0, 1, 2})


def test_parse_and_load_roundtrip(tmp_path):
    g = graphs.CATALOG["spike"].graph
    text = f"{g.n} {len(g.edges)}\n" + "".join(
        f"{u} {v}\n" for (u, v) in sorted(g.edges))
    path = tmp_path / "spike.txt"
    path.write_text(text)
    loaded = graphs.load_graph(str(path))
    assert loaded.n == g.n and loaded.edges == g.edges


def test_parse_rejects_malformed():
    with pytest.raises(ValueError):
        graphs.parse_graph("not a graph")
    with pytest.raises(ValueError):
        graphs.parse_graph("2 2\n0 1\n")


def test_catalog_lookup_aliases():
    assert graphs.catalog_lookup("K4").name == "tetrahedron"
    assert graphs.catalog_lookup("Square Curly").name == "square curly"
    assert graphs.catalog_lookup("square-curly").name == "square curly"
    assert graphs.catalog_lookup("octahedron").name == "pyramid double"


def test_catalog_lookup_parametric():
    assert graphs.catalog_lookup("7-gon").graph.n == 7
    assert graphs.catalog_lookup("triangle").graph.n == 3
    assert graphs.catalog_lookup("ennagon").graph.n == 9
    assert graphs.catalog_lookup("5-line").graph.n == 5
    gc = graphs.catalog_lookup("6-line curly").graph
    assert sorted(graphs.allowed_moves(gc, 0)) == [0, 1]


def test_catalog_lookup_unknown():
    with pytest.raises(KeyError) as err:
        graphs.catalog_lookup("dodecahedron")
    assert "known names" in str(err.value)


def test_matches_reference_decimals():
    m = graphs._matches_reference
    assert m(Fraction(31, 150), "0.20667")
    assert not m(Fraction(89, 18), "4.95000")
    # double-rounded print: 677/135 = 5.0148148 -> 5.014815 -> 5.01482
    assert m(Fraction(677, 135), "5.01482")
    # plain fifth-decimal truncation is not accepted
    assert not m(Fraction(33, 7), "4.71428")
    assert m(Fraction(1, 3), Fraction(1, 3))
    assert not m(Fraction(1, 3), Fraction(2, 3))


def test_verified_entries_pass():
    for entry in graphs.CATALOG.values():
        if entry.references:
            report = graphs.verify_catalog_entry(entry)
            assert report["ok"], (entry.name, report)


def test_catalog_names_listing():
    names = graphs.catalog_names()
    assert "tetrahedron" in names
    assert any("n-gon" in n for n in names)
