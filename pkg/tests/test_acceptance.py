"""Acceptance suite: one check per primary criterion, each printing a PASS/FAIL line.

The lines are repeated in the "acceptance criteria" section of the pytest
terminal summary.
"""
import time

import numpy as np
import pytest

from faradayct.cavity import faraday_phases, standard_tuning
from faradayct.errors import NonUnitPhaseError, NoPauliCorrection, ParityRuleError
from faradayct.optics import WavePlateKind
from faradayct.protocol import build, check_all, run, verify_tables
from faradayct.protocol.spec import FAMILIES
from faradayct.resources import (
    LossModel,
    expected_event_period,
    loss_preset,
    monte_carlo_yield,
    success_probability,
    success_probability_exact,
)
from fractions import Fraction

from conftest import random_payloads, report_criterion


def _spec(family, n, payload, **kw):
    if family == "ct-entangled" and n > 2:
        kw["extended"] = True
    return build(family, n, payload, **kw)


def test_phase_tuning():
    ph = faraday_phases(standard_tuning())
    err = max(abs(ph.phi - np.pi), abs(ph.phi0 - np.pi / 2))
    ok = err <= 1e-12
    report_criterion("phase tuning (phi, phi0) = (pi, pi/2)", ok, f"max error {err:.2e}")
    assert ok


def test_equation_regression():
    start = time.perf_counter()
    payloads = random_payloads(10, seed=2024)
    checks = [c for p in payloads for c in check_all(p)]
    elapsed = time.perf_counter() - start
    ok = all(c.amended_match and c.max_amplitude_error <= 1e-10 for c in checks) and elapsed < 1.0
    literal = sorted({c.id for c in checks if not c.literal_match})
    report_criterion(
        "printed pipeline states reproduced (10 random payloads)",
        ok,
        f"{len(checks) // len(payloads)} states, {elapsed:.2f} s, flagged printed slips: {literal}",
    )
    assert ok


@pytest.mark.xfail(
    strict=True,
    reason="one printed table swaps the sign of beta in four residuals; the simulation and the "
    "printed pre-measurement state both disagree with those rows (see the decision ledger)",
)
def test_tables_1_to_4_match_completely():
    reports = [verify_tables(n, errata={}) for n in (1, 2, 3, 4)]
    rows = [len(r.rows) for r in reports]
    bad = {r.table: r.mismatches for r in reports if r.mismatches}
    ok = rows == [8, 16, 8, 16] and not bad
    report_criterion("tables 1-4 match the simulation on every row", ok,
                     f"rows {rows}, mismatching rows per table {bad}")
    assert ok


def test_tables_5_6_match_outside_allowlist():
    start = time.perf_counter()
    reports = [verify_tables(n) for n in (5, 6)]
    elapsed = time.perf_counter() - start
    allowlisted = [row for r in reports for row in r.rows if row.allowlisted]
    truth_recorded = all(
        row.computed_correction is not None or row.computed_residual is not None or "outcome" in row.note
        for row in allowlisted
    )
    ok = all(r.ok for r in reports) and truth_recorded and elapsed < 5
    report_criterion(
        "tables 5-6 match outside the errata allowlist",
        ok,
        f"{sum(len(r.rows) for r in reports)} rows, {len(allowlisted)} allowlisted, "
        f"{sum(len(r.uncovered) for r in reports)} oracle branches reported, {elapsed:.2f} s",
    )
    assert ok


def test_every_allowlisted_row_carries_oracle_truth():
    reports = [verify_tables(n) for n in (2, 5)]
    for r in reports:
        d = r.to_dict()
        assert d["uncovered_outcomes"], "oracle branches missing from the report"
        for b in d["uncovered_outcomes"]:
            assert b["correction"] and b["residual"]


def test_fidelity_one_and_payload_independence():
    start = time.perf_counter()
    payloads = random_payloads(50, seed=7)
    worst, dependent = 0.0, []
    for family in FAMILIES:
        for n in (1, 2, 3, 4):
            reference = None
            for p in payloads:
                records = run(_spec(family, n, p))[1]
                worst = max(worst, max(abs(r.corrected_payload_fidelity - 1) for r in records))
                table = {r.key(): str(r.correction) for r in records}
                if reference is None:
                    reference = table
                elif table != reference:
                    dependent.append((family, n))
                    break
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and not dependent and elapsed < 30
    report_criterion("fidelity one on every branch, payload-independent corrections", ok,
                     f"max |F-1| {worst:.1e}, payload-dependent: {dependent}, {elapsed:.1f} s")
    assert ok


def test_branch_uniformity():
    worst = 0.0
    for family in FAMILIES:
        for n in (1, 2, 3, 4):
            for p in random_payloads(5, seed=n):
                spec = _spec(family, n, p)
                m = len(spec.measure.targets)
                records = run(spec)[1]
                worst = max(worst, max(abs(r.probability - 2.0**-m) for r in records))
    ok = worst <= 1e-12
    report_criterion("all branches equiprobable at 2^-m", ok, f"max deviation {worst:.1e}")
    assert ok


def test_resource_numbers():
    start = time.perf_counter()
    one = loss_preset()
    two = one.with_paths(2)
    exact = success_probability_exact(one) == Fraction("7.125e-5")
    two_sig = f"{success_probability(two):.4g}" == "2.031e-08"
    period1 = round(expected_event_period(one), 2) == 0.19
    period2 = round(expected_event_period(two) / 60) == 11
    mc = monte_carlo_yield(one, trials=10_000_000, seed=1)
    within = mc.within(success_probability(one), n_sigma=3)
    elapsed = time.perf_counter() - start
    ok = exact and two_sig and period1 and period2 and within and elapsed < 10
    report_criterion(
        "resource numbers and Monte Carlo yield",
        ok,
        f"P1 exact={exact}, P2 4 s.f.={two_sig}, periods {expected_event_period(one):.3f} s / "
        f"{expected_event_period(two) / 60:.2f} min, MC {mc.successes}/{mc.trials} within 3 sigma={within}, "
        f"{elapsed:.2f} s",
    )
    assert ok


def test_negative_cases():
    broken = 0
    for family in FAMILIES:
        spec = _spec(family, 1, (0.6, 0.8j), wave_plate=WavePlateKind.for_controls(1).swapped())
        try:
            run(spec)
        except ParityRuleError:
            pass
        else:
            pytest.fail("parity rule not enforced")
        records = run(spec, check_parity=False, require_correction=False)[1]
        broken += any(r.corrected_payload_fidelity < 1 - 1e-3 for r in records)
    parity_ok = broken == len(FAMILIES)

    import copy
    import json
    from importlib import resources

    doc = json.loads(resources.files("faradayct").joinpath("data", "tables", "table4.json").read_text())
    faulty = copy.deepcopy(doc)
    term = faulty["rows"][5]["residual"]["terms"][0]
    term["coeff"] = "-1" if term["coeff"] == "+1" else "+1"
    fault_ok = verify_tables(doc, errata={}).ok and not verify_tables(faulty, errata={}).ok

    lossy = build("ct-superposition", 1, (0.6, 0.8j), phases=standard_tuning().replace(gamma=0.01))
    try:
        run(lossy)
        strict_ok = False
    except NonUnitPhaseError:
        strict_ok = True

    ok = parity_ok and fault_ok and strict_ok
    report_criterion("negative cases detected", ok,
                     f"swapped parity breaks {broken}/{len(FAMILIES)} families, "
                     f"injected fault caught={fault_ok}, lossy strict rejected={strict_ok}")
    assert ok


def test_no_pauli_fix_under_swapped_parity():
    spec = build("ct-superposition", 2, (0.6, 0.8j), wave_plate=WavePlateKind.for_controls(2).swapped())
    with pytest.raises(NoPauliCorrection):
        run(spec, check_parity=False)
