import numpy as np
import pytest
from hypothesis import strategies as st


def random_payloads(n, seed=0):
    """``n`` Haar-random qubit amplitudes ``(alpha, beta)``."""
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return [(complex(a), complex(b)) for a, b in z]


@st.composite
def payloads(draw):
    theta = draw(st.floats(0.0, np.pi))
    phase = draw(st.floats(-np.pi, np.pi))
    return complex(np.cos(theta / 2)), complex(np.sin(theta / 2) * np.exp(1j * phase))


def is_generic(p, tol=1e-3):
    """No two Pauli corrections agree on this payload (so the correction is unique)."""
    a, b = p
    if min(abs(a), abs(b)) < tol:
        return False
    return all(abs(b - c * a) > tol for c in (1, -1, 1j, -1j))


generic_payloads = payloads().filter(is_generic)


@pytest.fixture
def payload():
    return (0.6, 0.8j)


ACCEPTANCE_LINES: list[str] = []


def report_criterion(name: str, ok: bool, detail: str = "") -> str:
    """Record and print one acceptance line; returns it for use in assertion messages."""
    line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
