import numpy as np
import pytest

from faradayct.errors import TableFormatError
from faradayct.protocol.equations import amend, check_all, check_state, load_errata, load_printed_states

from conftest import random_payloads

LITERAL_SLIPS = {"ct-superposition-2/final", "cpt-entangled-1/final", "ct-entangled-1/final"}
STATES = {s.id: s for s in load_printed_states()}


def test_all_printed_states_are_bundled():
    assert len(STATES) == 16
    assert {s.family for s in STATES.values()} == {"ct-superposition", "cpt-entangled", "ct-entangled"}


@pytest.mark.parametrize("payload", random_payloads(10, seed=7))
def test_printed_states_reproduce(payload):
    checks = check_all(payload)
    assert all(c.amended_match for c in checks), [c.id for c in checks if not c.amended_match]
    assert {c.id for c in checks if not c.literal_match} == LITERAL_SLIPS


def test_literal_slips_are_flagged_not_hidden():
    errata = load_errata()
    assert set(errata) == LITERAL_SLIPS
    for cid in LITERAL_SLIPS:
        c = check_state(STATES[cid], (0.6, 0.8j), errata[cid])
        assert not c.literal_match and c.amended_match
        assert c.literal_fidelity < 0.99
        assert c.errata


def test_cpt_slip_is_a_branch_phase_only():
    """The amendment for the one-control entangled state flips one branch's sign,
    which leaves every branch's residual (and so its correction) unchanged."""
    [e] = load_errata()["cpt-entangled-1/final"]
    assert e["find"].replace("-i|R0", "+i|R0") == e["replace"]


def test_amend_requires_exact_occurrences():
    with pytest.raises(TableFormatError):
        amend("abc", [{"id": "x", "find": "zz", "replace": "y"}])
    with pytest.raises(TableFormatError):
        amend("aa", [{"id": "x", "find": "a", "replace": "b", "count": 1}])
    assert amend("aa", [{"id": "x", "find": "a", "replace": "b", "count": 2}]) == "bb"


def test_intermediate_checkpoint_excludes_later_stages():
    s = STATES["ct-superposition-1/after-A"]
    c = check_state(s, (0.6, 0.8j))
    assert c.literal_match
    np.testing.assert_allclose(c.max_amplitude_error, 0, atol=1e-12)


def test_unknown_id():
    with pytest.raises(KeyError):
        check_all((1, 0), ids=["nope"])
