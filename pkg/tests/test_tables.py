from fractions import Fraction

import pytest

from belltasks import graphs, tables


def test_catalog_covers_every_row():
    for t in tables.TABLES.values():
        for row in t.rows:
            entry = graphs.catalog_lookup(row.graph)
            assert entry.graph.n >= 3, row.graph


def test_table_headers():
    kinds = {n: (t.kind, t.start, t.symmetric) for n, t in tables.TABLES.items()}
    assert kinds == {
        1: ("rendezvous", "any", False),
        2: ("rendezvous", "distinct", False),
        3: ("rendezvous", "distinct", True),
        4: ("domination", "any", False),
        5: ("domination", "distinct", False),
    }
    assert all(row.level in ("1+ab", "2")
               for t in tables.TABLES.values() for row in t.rows)


def test_row_lookup():
    row = tables.TABLES[1].row("triangle")
    assert row.classical == Fraction(5, 9)
    with pytest.raises(KeyError):
        tables.TABLES[1].row("dodecahedron")


def test_cell_float():
    assert tables.cell_float(Fraction(5, 9)) == pytest.approx(5 / 9)
    assert tables.cell_float("4.27778") == pytest.approx(4.27778)
    assert tables.cell_float("4,27778") == pytest.approx(4.27778)


def test_cell_matches():
    assert tables.cell_matches(Fraction(5, 9), Fraction(5, 9))
    assert not tables.cell_matches(Fraction(5, 9), Fraction(4, 9))
    assert tables.cell_matches("0.20667", Fraction(31, 150))
    assert not tables.cell_matches("4.95000", Fraction(89, 18))


def test_npa_matches():
    assert tables.npa_matches("0.38090", 0.3809017)
    assert not tables.npa_matches("0.38090", 0.3811)
    assert tables.npa_matches(Fraction(7, 12), 7 / 12 + 5e-5)


def test_advantage_percent():
    rec = tables.advantage_percent(Fraction(1, 3), Fraction(5, 9), Fraction(7, 12))
    assert rec == pytest.approx(12.5)
    rec = tables.advantage_percent(Fraction(1, 4), Fraction(1, 3), Fraction(1, 2))
    assert rec == pytest.approx(200.0)


def test_audit_row_accepts_rounding():
    rec, printed, bad = tables.audit_row(tables.TABLES[1].row("triangle"))
    assert rec == pytest.approx(12.5) and printed == 13 and not bad


def test_audit_flags_inconsistent_rows():
    flagged = {(n, g) for (n, g, rec, printed) in tables.audit_advantages()}
    assert flagged == {(4, "hexagon"), (5, "13-gon")}
    detail = {(n, g): (rec, printed) for (n, g, rec, printed)
              in tables.audit_advantages()}
    rec, printed = detail[(4, "hexagon")]
    assert printed == 13 and rec == pytest.approx(11.11, abs=0.01)


def test_defect_rows_carry_notes():
    noted = {(t.number, row.graph)
             for t in tables.TABLES.values() for row in t.rows if row.notes}
    assert noted == {
        (2, "arrow"), (4, "hexagon"), (4, "heptagon"), (4, "6-line curly"),
        (5, "pentagon curly"), (5, "clamp"), (5, "13-gon")}
