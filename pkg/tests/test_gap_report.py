import pytest

from sandkit.services.gap_report import CSV_FIELDS, GapRow, expander_rows, kneser_rows, rows_to_csv


def test_kneser_rows_report_fractional_cost_against_mst() -> None:
    s2, s3 = kneser_rows([2, 3])
    assert (s2.cost, s2.bound) == (pytest.approx(12.3), 11)
    assert (s3.cost, s3.bound) == (pytest.approx(32.8), 36)
    assert s3.ratio == pytest.approx(36 / 32.8)


def test_kneser_lp_never_exceeds_known_solution() -> None:
    fractional, lp = kneser_rows([2], with_lp=True)
    assert lp.algorithm == "lp"
    assert lp.cost <= fractional.cost + 1e-6


def test_expander_rows() -> None:
    rows = expander_rows(8, 3, 2, 10, seed=1, frt_seeds=range(3))
    assert [r.algorithm for r in rows] == [
        "reference",
        "frt",
        "frt",
        "frt",
        "frt-median",
        "frt-tree",
        "frt-tree",
        "frt-tree",
        "frt-tree-median",
    ]
    reference = rows[0]
    assert reference.cost == 8 * 3 / 2 + 8
    for row in rows[1:]:
        assert row.bound == reference.cost
        assert row.ratio == pytest.approx(row.cost / reference.cost)
    assert rows[-1].cost > reference.cost


def test_rows_to_csv_leaves_missing_cells_empty() -> None:
    text = rows_to_csv([GapRow(family="expander", param="n=8", algorithm="reference", cost=20.0)])
    header, row = text.splitlines()
    assert header == ",".join(CSV_FIELDS)
    assert row == "expander,n=8,reference,20,,,"
