import copy
import json

import numpy as np
import pytest

from faradayct.errors import TableFormatError
from faradayct.protocol.tables import (
    correction_matrix,
    load_table,
    load_table_errata,
    parse_table,
    verify_all,
    verify_tables,
)
from faradayct.qreg import PAULI_MATRICES

X, Z = PAULI_MATRICES["X"], PAULI_MATRICES["Z"]


def raw_table(n):
    from importlib import resources

    return json.loads(resources.files("faradayct").joinpath("data", "tables", f"table{n}.json").read_text())


def test_correction_strings():
    np.testing.assert_allclose(correction_matrix("I"), np.eye(2))
    np.testing.assert_allclose(correction_matrix("ZX"), Z @ X)
    np.testing.assert_allclose(correction_matrix("XZ"), X @ Z)
    np.testing.assert_allclose(correction_matrix("Z⊗X"), np.kron(Z, X))
    with pytest.raises(TableFormatError):
        correction_matrix("Y")


@pytest.mark.parametrize("n,rows", [(1, 8), (2, 16), (3, 8), (4, 16), (5, 32), (6, 64)])
def test_row_counts(n, rows):
    assert len(load_table(n).rows) == rows


@pytest.mark.parametrize("n", [1, 3, 4, 6])
def test_clean_tables_match_fully(n):
    report = verify_tables(n)
    assert report.mismatches == 0
    assert not report.uncovered
    assert report.ok


def test_table_2_sign_slips_are_flagged():
    report = verify_tables(2)
    bad = [r.index for r in report.rows if not r.match]
    assert bad == [6, 7, 10, 11]
    assert all(r.allowlisted for r in report.rows if not r.match)
    truth = {tuple(sorted(u.outcome.items())): u.correction for u in report.uncovered}
    assert truth[tuple(sorted({"F": "R", "C": "0", "B": "0", "B1": "1"}.items()))] == "Z"
    assert truth[tuple(sorted({"F": "R", "C": "1", "B": "1", "B1": "0"}.items()))] == "I"


def test_table_5_inconsistent_rows():
    report = verify_tables(5)
    bad = {r.index: r for r in report.rows if not r.match}
    assert sorted(bad) == [1, 24, 26, 27]
    assert "C1" in bad[26].note and "D" in bad[24].note
    assert bad[27].outcome is None
    # every outcome is either matched by a row or reported with its simulated truth
    assert len(report.uncovered) == 4
    assert report.ok


def test_every_allowlisted_row_mismatches():
    """A stale allowlist entry would hide a fixed row; the report refuses it."""
    errata = load_table_errata()
    reports = {r.table: r for r in verify_all()}
    for (table, row), _ in errata.items():
        assert not reports[table].rows[row].match
    assert all(r.ok for r in reports.values())


def test_injected_sign_flip_is_the_only_mismatch():
    doc = copy.deepcopy(raw_table(1))
    term = doc["rows"][3]["residual"]["terms"][1]
    term["coeff"] = "-1" if term["coeff"] == "+1" else "+1"
    report = verify_tables(doc, family="ct-superposition")
    assert report.mismatches == 1
    assert [r.index for r in report.rows if not r.match] == [3]
    assert not report.ok


def test_injected_wrong_correction():
    doc = copy.deepcopy(raw_table(3))
    doc["rows"][0]["correction"] = "I⊗I"
    report = verify_tables(doc)
    assert report.mismatches == 1
    assert "correction" in report.rows[0].note


def test_family_guard():
    with pytest.raises(TableFormatError):
        verify_tables(1, family="ct-entangled")


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("rows"),
        lambda d: d.update(family="quantum-fax"),
        lambda d: d["rows"][0].pop("correction"),
        lambda d: d["rows"][0].update(correction="σ"),
        lambda d: d["rows"][0]["residual"]["terms"][0].update(ket="012"),
        lambda d: d["rows"][0]["residual"]["terms"][0].update(coeff="2"),
        lambda d: d["rows"][0]["printed"].append("extra"),
    ],
)
def test_malformed_tables_raise(mutate):
    doc = copy.deepcopy(raw_table(1))
    mutate(doc)
    with pytest.raises(TableFormatError):
        parse_table(doc)


def test_invalid_json_file(tmp_path):
    path = tmp_path / "t.json"
    path.write_text("{not json")
    with pytest.raises(TableFormatError):
        load_table(path)


def test_report_serializes():
    d = verify_tables(5).to_dict()
    json.dumps(d)
    assert d["unexpected_mismatches"] == 0
    assert len(d["rows"]) == 32
