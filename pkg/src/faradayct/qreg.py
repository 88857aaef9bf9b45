"""Dense state vectors over labelled two-level subsystems.

Atoms use the computational basis ``|0>, |1>``; photons use the circular
polarization basis ``|L>, |R>`` with ``L`` at index 0 and ``R`` at index 1.
The first subsystem of a register is the most significant bit of the
amplitude index. Callers address subsystems by name only.

Every operation returns a new :class:`QuantumRegister`; nothing is mutated
in place.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DuplicateLabelError,
    KindMismatchError,
    NonUnitaryError,
    NonUnitPhaseError,
    NotNormalizedError,
    RegisterError,
    UnknownLabelError,
)

NORM_TOL = 1e-9
UNITARY_TOL = 1e-10
PHASE_TOL = 1e-10
ZERO_BRANCH = 1e-14

_SQRT1_2 = 1 / np.sqrt(2)


class Kind(enum.Enum):
    ATOM = "atom"
    PHOTON = "photon"


@dataclass(frozen=True)
class SubsystemLabel:
    name: str
    kind: Kind

    def __str__(self) -> str:
        return self.name


def atom(name: str) -> SubsystemLabel:
    return SubsystemLabel(name, Kind.ATOM)


def photon(name: str) -> SubsystemLabel:
    return SubsystemLabel(name, Kind.PHOTON)


# Named single-subsystem preparations. L/R and 0/1 share indices by design.
PRESET_STATES: dict[str, np.ndarray] = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([_SQRT1_2, _SQRT1_2], dtype=complex),
    "-": np.array([_SQRT1_2, -_SQRT1_2], dtype=complex),
    "L": np.array([1, 0], dtype=complex),
    "R": np.array([0, 1], dtype=complex),
    "linear": np.array([_SQRT1_2, _SQRT1_2], dtype=complex),
}

# Outcome symbols printed for each basis index, per subsystem kind.
BASIS_SYMBOLS = {Kind.ATOM: ("0", "1"), Kind.PHOTON: ("L", "R")}


def _single_state(spec) -> np.ndarray:
    if isinstance(spec, str):
        try:
            return PRESET_STATES[spec].copy()
        except KeyError:
            raise RegisterError(f"unknown preset state {spec!r}") from None
    vec = np.asarray(spec, dtype=complex).reshape(-1)
    if vec.shape != (2,):
        raise RegisterError(f"single-subsystem state must have 2 amplitudes, got {vec.shape}")
    norm = float(np.vdot(vec, vec).real)
    if abs(norm - 1) > NORM_TOL:
        raise NotNormalizedError(f"state {vec} has squared norm {norm}")
    return vec / np.sqrt(norm)


@dataclass(frozen=True, eq=False)
class QuantumRegister:
    """An ordered set of labelled qubits and their joint amplitudes.

    ``weights`` collects the reflection magnitudes of lossy cavity
    interactions applied in ``renormalize`` mode; it is empty for ideal runs.
    """

    subsystems: tuple[SubsystemLabel, ...]
    amplitudes: np.ndarray
    weights: tuple[float, ...] = field(default=())

    def __post_init__(self):
        names = [s.name for s in self.subsystems]
        if len(set(names)) != len(names):
            raise DuplicateLabelError(f"duplicate subsystem names in {names}")
        if not names:
            raise RegisterError("a register needs at least one subsystem")
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (2 ** len(names),):
            raise RegisterError(
                f"{len(names)} subsystems need {2 ** len(names)} amplitudes, got {amps.size}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.subsystems)

    @property
    def n(self) -> int:
        return len(self.subsystems)

    def index(self, name: str) -> int:
        for i, s in enumerate(self.subsystems):
            if s.name == name:
                return i
        raise UnknownLabelError(f"no subsystem named {name!r} in {list(self.names)}")

    def label(self, name: str) -> SubsystemLabel:
        return self.subsystems[self.index(name)]

    def tensor(self) -> np.ndarray:
        """Amplitudes as an ``n``-dimensional ``(2, 2, ..., 2)`` array (a copy)."""
        return self.amplitudes.reshape((2,) * self.n).copy()

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def reorder(self, names: Sequence[str]) -> QuantumRegister:
        """Same state with subsystems permuted into ``names`` order."""
        if sorted(names) != sorted(self.names):
            raise RegisterError(f"{list(names)} is not a permutation of {list(self.names)}")
        perm = [self.index(nm) for nm in names]
        amps = np.transpose(self.tensor(), perm).reshape(-1)
        return QuantumRegister(tuple(self.subsystems[i] for i in perm), amps, self.weights)

    def amplitude(self, bits: Mapping[str, int | str]) -> complex:
        """Amplitude of one basis state, bits given per label as 0/1 or L/R."""
        idx = tuple(_bit(self.label(nm), bits[nm]) for nm in self.names)
        return complex(self.tensor()[idx])

    def __repr__(self) -> str:
        return f"QuantumRegister({', '.join(self.names)}; {self.n} qubits)"


def _bit(label: SubsystemLabel, value) -> int:
    if value in (0, 1):
        return int(value)
    if isinstance(value, str):
        symbols = BASIS_SYMBOLS[label.kind]
        if value in symbols:
            return symbols.index(value)
        if value in ("0", "1"):
            return int(value)
    raise RegisterError(f"bad basis value {value!r} for subsystem {label.name}")


def new_register(states: Iterable[tuple[SubsystemLabel, object]]) -> QuantumRegister:
    """Product state from ``(label, spec)`` pairs.

    ``spec`` is a preset name from :data:`PRESET_STATES` or a normalized
    2-vector such as ``(alpha, beta)``.
    """
    states = list(states)
    if not states:
        raise RegisterError("empty register")
    labels = tuple(lbl for lbl, _ in states)
    names = [lbl.name for lbl in labels]
    if len(set(names)) != len(names):
        raise DuplicateLabelError(f"duplicate subsystem names in {names}")
    amps = np.ones(1, dtype=complex)
    for _, spec in states:
        amps = np.kron(amps, _single_state(spec))
    return QuantumRegister(labels, amps)


def is_unitary(matrix: np.ndarray, atol: float = UNITARY_TOL) -> bool:
    m = np.asarray(matrix, dtype=complex)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.allclose(
        m.conj().T @ m, np.eye(m.shape[0]), atol=atol, rtol=0
    )


def apply_single(reg: QuantumRegister, target: str, matrix) -> QuantumRegister:
    """Apply a 2x2 unitary to one subsystem."""
    u = np.asarray(matrix, dtype=complex)
    if u.shape != (2, 2):
        raise NonUnitaryError(f"expected a 2x2 matrix, got shape {u.shape}")
    if not is_unitary(u):
        raise NonUnitaryError(f"matrix is not unitary within {UNITARY_TOL}:\n{u}")
    q = reg.index(target)
    psi = np.tensordot(u, reg.tensor(), axes=([1], [q]))
    psi = np.moveaxis(psi, 0, q)
    return QuantumRegister(reg.subsystems, psi.reshape(-1), reg.weights)


def apply_controlled_phase_pair(
    reg: QuantumRegister, photon: str, atom: str, phases, mode: str = "strict"
) -> QuantumRegister:
    """Reflect ``photon`` off the cavity holding ``atom``.

    Diagonal gate on the (photon, atom) pair::

        |L0> -> e^{i phi}  |L0>      |L1> -> e^{i phi0} |L1>
        |R0> -> e^{i phi0} |R0>      |R1> -> e^{i phi}  |R1>

    ``phases`` is a :class:`~faradayct.cavity.FaradayPhases`. With a lossy
    cavity (``|r| < 1``) ``mode="strict"`` raises :class:`NonUnitPhaseError`;
    ``mode="renormalize"`` applies the phases alone and appends ``|r|`` to
    the register's ``weights``.
    """
    if mode not in ("strict", "renormalize"):
        raise ValueError(f"mode must be 'strict' or 'renormalize', got {mode!r}")
    p_lbl, a_lbl = reg.label(photon), reg.label(atom)
    if p_lbl.kind is not Kind.PHOTON:
        raise KindMismatchError(f"{photon!r} is a {p_lbl.kind.value}, expected a photon")
    if a_lbl.kind is not Kind.ATOM:
        raise KindMismatchError(f"{atom!r} is a {a_lbl.kind.value}, expected an atom")

    mag = getattr(phases, "mag", 1.0)
    mag0 = getattr(phases, "mag0", 1.0)
    lossy = abs(mag - 1) > 1e-12 or abs(mag0 - 1) > 1e-12
    if lossy and mode == "strict":
        raise NonUnitPhaseError(
            f"|r| = {mag:.6g}, |r0| = {mag0:.6g}: lossy reflection refused in strict mode"
        )
    e, e0 = np.exp(1j * phases.phi), np.exp(1j * phases.phi0)
    # rows: photon L/R, columns: atom 0/1
    table = np.array([[e, e0], [e0, e]])
    p, a = reg.index(photon), reg.index(atom)
    shape = [1] * reg.n
    shape[p] = shape[a] = 2
    factor = (table if p < a else table.T).reshape(shape)
    psi = reg.tensor() * factor
    weights = reg.weights + ((mag,) if lossy else ())
    return QuantumRegister(reg.subsystems, psi.reshape(-1), weights)


# --- Pauli corrections -----------------------------------------------------

PAULI_ORDER = ("I", "X", "Z", "ZX")

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": _X,
    "Z": _Z,
    "ZX": _Z @ _X,  # X first, then Z
}


@dataclass(frozen=True)
class PauliOp:
    """Tensor product of per-target corrections drawn from ``{I, X, Z, ZX}``."""

    targets: tuple[str, ...]
    factors: tuple[str, ...]

    def __post_init__(self):
        if len(self.targets) != len(self.factors):
            raise ValueError("one factor per target")
        for f in self.factors:
            if f not in PAULI_MATRICES:
                raise ValueError(f"unknown Pauli factor {f!r}")

    def matrix(self) -> np.ndarray:
        out = np.ones((1, 1), dtype=complex)
        for f in self.factors:
            out = np.kron(out, PAULI_MATRICES[f])
        return out

    def apply(self, reg: QuantumRegister) -> QuantumRegister:
        for t, f in zip(self.targets, self.factors):
            if f != "I":
                reg = apply_single(reg, t, PAULI_MATRICES[f])
        return reg

    def is_identity(self) -> bool:
        return all(f == "I" for f in self.factors)

    def __str__(self) -> str:
        return "⊗".join(self.factors)


def candidate_corrections(targets: Sequence[str]) -> list[PauliOp]:
    """All ``4**k`` corrections in canonical order (I < X < Z < ZX, leftmost target slowest)."""
    return [
        PauliOp(tuple(targets), combo)
        for combo in itertools.product(PAULI_ORDER, repeat=len(targets))
    ]


# --- phase-insensitive comparison ------------------------------------------


def canonical_phase(vec, atol: float = 1e-12) -> np.ndarray:
    """Rotate the global phase so the first non-negligible amplitude is real positive."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    nz = np.flatnonzero(np.abs(v) > atol)
    if nz.size == 0:
        return v.copy()
    first = v[nz[0]]
    return v * (abs(first) / first)


def equal_up_to_phase(a, b, atol: float = PHASE_TOL) -> bool:
    """Amplitude-wise equality after canonicalizing both global phases."""
    a, b = np.asarray(a, dtype=complex).reshape(-1), np.asarray(b, dtype=complex).reshape(-1)
    if a.shape != b.shape:
        return False
    # Anchor both vectors on the same index so a near-zero leading amplitude
    # cannot pick different anchors in a and b.
    k = int(np.argmax(np.abs(a)))
    if abs(b[k]) < atol:
        return bool(np.allclose(a, b, atol=atol, rtol=0))
    ca = a * (abs(a[k]) / a[k])
    cb = b * (abs(b[k]) / b[k])
    return bool(np.allclose(ca, cb, atol=atol, rtol=0))


def fidelity(a, b) -> float:
    """``|<a|b>|^2`` for normalized vectors."""
    a, b = np.asarray(a, dtype=complex).reshape(-1), np.asarray(b, dtype=complex).reshape(-1)
    return float(abs(np.vdot(a, b)) ** 2)


# --- measurement -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BranchRecord:
    """One outcome of a projective measurement.

    ``correction`` and ``corrected_payload_fidelity`` stay ``None`` until a
    protocol run fills them in.
    """

    outcome: dict[str, str]
    probability: float
    residual: QuantumRegister | None
    correction: PauliOp | None = None
    corrected_payload_fidelity: float | None = None

    def key(self) -> tuple[str, ...]:
        return tuple(self.outcome.values())


def measure_enumerate(reg: QuantumRegister, targets: Sequence[str]) -> list[BranchRecord]:
    """Every outcome of measuring ``targets`` in the computational/circular basis.

    Branches are ordered lexicographically over the target bits in the order
    given. Outcomes with probability below 1e-14 are dropped.
    """
    targets = list(targets)
    if not targets:
        raise RegisterError("measurement needs at least one target")
    if len(set(targets)) != len(targets):
        raise DuplicateLabelError(f"repeated measurement target in {targets}")
    axes = [reg.index(t) for t in targets]
    rest = [i for i in range(reg.n) if i not in axes]
    psi = np.transpose(reg.tensor(), axes + rest).reshape(2 ** len(axes), -1)
    rest_labels = tuple(reg.subsystems[i] for i in rest)
    kinds = [reg.subsystems[i].kind for i in axes]

    branches = []
    for idx, bits in enumerate(itertools.product((0, 1), repeat=len(axes))):
        block = psi[idx]
        p = float(np.vdot(block, block).real)
        if p < ZERO_BRANCH:
            continue
        outcome = {t: BASIS_SYMBOLS[k][b] for t, k, b in zip(targets, kinds, bits)}
        residual = (
            QuantumRegister(rest_labels, block / np.sqrt(p), reg.weights) if rest else None
        )
        branches.append(BranchRecord(outcome, p, residual))
    return branches


def measure_sample(reg: QuantumRegister, targets: Sequence[str], rng_seed: int) -> BranchRecord:
    """Draw one branch with its Born probability; reproducible for a fixed seed."""
    branches = measure_enumerate(reg, targets)
    probs = np.array([b.probability for b in branches])
    rng = np.random.default_rng(rng_seed)
    return branches[int(rng.choice(len(branches), p=probs / probs.sum()))]


def measure_counts(
    reg: QuantumRegister, targets: Sequence[str], shots: int, rng_seed: int
) -> dict[tuple[str, ...], int]:
    """Outcome histogram of ``shots`` independent draws, keyed like :meth:`BranchRecord.key`."""
    branches = measure_enumerate(reg, targets)
    probs = np.array([b.probability for b in branches])
    rng = np.random.default_rng(rng_seed)
    counts = rng.multinomial(shots, probs / probs.sum())
    return {b.key(): int(c) for b, c in zip(branches, counts)}
