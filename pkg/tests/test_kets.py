import numpy as np
import pytest

from faradayct.errors import TableFormatError
from faradayct.protocol.kets import KetContext, parse, strip_lhs

CTX = KetContext(photon="F", photons=frozenset({"F"}))
CTX2 = KetContext(photon="F2", photon_numbers={"1": "F1", "2": "F2"}, photons=frozenset({"F1", "F2"}))


def test_single_atom_superposition():
    ks = parse(r"\alpha|0\rangle_{A}-\beta|1\rangle_{A}", CTX, alpha=0.6, beta=0.8)
    np.testing.assert_allclose(ks.to_vector(["A"]), [0.6, -0.8])


def test_photon_atom_ket_and_default_photon():
    ks = parse(r"|R0\rangle_{C}", CTX)
    assert ks.basis_assignment() == {"F": 1, "C": 0}
    ks = parse(r"|L1\rangle_{FC}", CTX)
    assert ks.basis_assignment() == {"F": 0, "C": 1}


def test_numbered_photons_and_subscripted_controls():
    ks = parse(r"|R0\rangle_{2C}|L1\rangle_{1E}|01\rangle_{BB_{1}}", CTX2)
    assert ks.basis_assignment() == {"F2": 1, "C": 0, "F1": 0, "E": 1, "B": 0, "B1": 1}


def test_fractions_roots_brackets_and_phases():
    text = r"\frac{1}{\sqrt{2}}\Big(e^{i\phi}|L0\rangle_{A} + i|R\rangle|1\rangle_{A}\Big)"
    ks = parse(text, CTX)
    v = ks.to_vector(["F", "A"])
    np.testing.assert_allclose(v, np.array([-1, 0, 0, 1j]) / np.sqrt(2), atol=1e-15)


def test_distribution_over_products():
    ks = parse(r"(|L\rangle+i|R\rangle)(|0\rangle_{A}-|1\rangle_{A})", CTX)
    np.testing.assert_allclose(ks.to_vector(["F", "A"]), [1, -1, 1j, -1j])


def test_strip_lhs():
    assert strip_lhs(r"|\phi_{4}\rangle=&\frac{1}{2}x") == r"\frac{1}{2}x"
    assert strip_lhs(r"|\phi_{3}^{'}\rangle=y") == "y"


@pytest.mark.parametrize("bad", [r"L1\rangle_{1E}", r"\langle 0|", r"(|0\rangle_{A}", r"|0\rangle_{A}|1\rangle_{A}"])
def test_malformed_input(bad):
    with pytest.raises(TableFormatError):
        parse(bad, CTX)
