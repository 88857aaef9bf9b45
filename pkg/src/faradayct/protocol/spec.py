"""Declarative pipelines for the three teleportation families.

A :class:`ProtocolSpec` lists how each subsystem is prepared and the ordered
stages applied to the joint register. The builders encode the photon routes:

``ct-superposition``
    Photon ``F`` reflects off ``A``, the controls ``B, B1, ...`` and ``C``
    (which holds ``alpha|0> + beta|1>``). A wave plate on ``F`` and a Hadamard on
    ``C`` follow, then ``F``, ``C`` and the controls are measured. The payload
    ends up on ``A``.
``cpt-entangled``
    Same route, but ``C`` starts entangled with a spectator ``D`` as
    ``alpha|01> + beta|10>``. Afterwards ``A`` and ``D`` share that state.
``ct-entangled``
    ``C`` and ``E`` share ``alpha|01> + beta|10>``. Photon ``F2`` visits
    ``A``, the controls and ``C``; photon ``F1`` visits ``D`` and ``E`` and
    crosses a QWP2. Both photons, ``C``, ``E`` and the controls are measured,
    leaving the payload on ``A, D``.

The wave plate on the photon that visits the controls follows the parity
rule: QWP1 for an odd number of controls, QWP2 for an even number.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from ..cavity import STANDARD_PHASES, CavityParams, FaradayPhases
from ..errors import ParityRuleError, ProtocolSpecError
from ..optics import WavePlateKind
from ..qreg import SubsystemLabel, atom, photon

FAMILIES = ("ct-superposition", "cpt-entangled", "ct-entangled")


@dataclass(frozen=True)
class CavityInteraction:
    photon: str
    atom: str
    phases: Union[FaradayPhases, CavityParams] = STANDARD_PHASES


@dataclass(frozen=True)
class WavePlate:
    photon: str
    kind: WavePlateKind


@dataclass(frozen=True)
class HadamardAtom:
    atom: str


@dataclass(frozen=True)
class Measure:
    targets: tuple[str, ...]


Stage = Union[CavityInteraction, WavePlate, HadamardAtom, Measure]


@dataclass(frozen=True)
class Preparation:
    """Initial state of one subsystem or of an entangled group of them."""

    labels: tuple[SubsystemLabel, ...]
    state: object  # preset name or amplitude vector over ``labels``


@dataclass(frozen=True, eq=False)
class ProtocolSpec:
    name: str
    family: str
    n_controls: int
    preparations: tuple[Preparation, ...]
    stages: tuple[Stage, ...]
    teleport_targets: tuple[str, ...]
    control_labels: tuple[str, ...]
    payload: tuple[complex, complex]
    routed_photon: str  # the photon whose wave plate obeys the parity rule
    loss_mode: str = "strict"
    metadata: dict = field(default_factory=dict)

    @property
    def subsystems(self) -> tuple[SubsystemLabel, ...]:
        return tuple(lbl for p in self.preparations for lbl in p.labels)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.subsystems)

    @property
    def photons(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.subsystems if s.kind.value == "photon")

    @property
    def measure(self) -> Measure:
        return next(s for s in self.stages if isinstance(s, Measure))

    def payload_state(self) -> np.ndarray:
        """Intended state of ``teleport_targets`` after correction."""
        a, b = self.payload
        if len(self.teleport_targets) == 1:
            return np.array([a, b], dtype=complex)
        return np.array([0, a, b, 0], dtype=complex)  # alpha|01> + beta|10>

    def routed_wave_plate(self) -> WavePlate:
        return next(
            s for s in self.stages if isinstance(s, WavePlate) and s.photon == self.routed_photon
        )

    def stage_index(self, kind: type, **match) -> int:
        """Index of the first stage of ``kind`` whose attributes equal ``match``."""
        for i, s in enumerate(self.stages):
            if isinstance(s, kind) and all(getattr(s, k) == v for k, v in match.items()):
                return i
        raise ProtocolSpecError(f"{self.name}: no {kind.__name__} stage matching {match}")

    def validate(self, check_parity: bool = True) -> None:
        names = set(self.names)
        if len(names) != len(self.names):
            raise ProtocolSpecError(f"{self.name}: duplicate subsystem labels")
        for s in self.stages:
            refs = s.targets if isinstance(s, Measure) else tuple(
                getattr(s, a) for a in ("photon", "atom") if hasattr(s, a)
            )
            unknown = [r for r in refs if r not in names]
            if unknown:
                raise ProtocolSpecError(f"{self.name}: stage {s} references unknown {unknown}")
        n_measure = sum(isinstance(s, Measure) for s in self.stages)
        if n_measure != 1 or not isinstance(self.stages[-1], Measure):
            raise ProtocolSpecError(f"{self.name}: pipeline must end in exactly one Measure stage")
        if self.n_controls < 1:
            raise ProtocolSpecError(f"{self.name}: at least one control is required")
        if check_parity:
            want = WavePlateKind.for_controls(self.n_controls)
            have = self.routed_wave_plate().kind
            if have is not want:
                raise ParityRuleError(
                    f"{self.name}: {self.n_controls} control(s) require {want.value}, found {have.value}"
                )


def control_names(n: int) -> tuple[str, ...]:
    """``B, B1, B2, ...``"""
    return ("B",) + tuple(f"B{k}" for k in range(1, n))


def _check_payload(payload) -> tuple[complex, complex]:
    a, b = (complex(x) for x in payload)
    norm = abs(a) ** 2 + abs(b) ** 2
    if abs(norm - 1) > 1e-9:
        raise ProtocolSpecError(f"payload must satisfy |alpha|^2+|beta|^2 = 1, got {norm}")
    return a, b


def _check_controls(n_controls: int) -> None:
    if int(n_controls) != n_controls or n_controls < 1:
        raise ProtocolSpecError(f"n_controls must be an integer >= 1, got {n_controls}")


def build_ct_superposition(
    n_controls: int,
    payload: Sequence[complex],
    phases: FaradayPhases | CavityParams = STANDARD_PHASES,
    wave_plate: WavePlateKind | None = None,
) -> ProtocolSpec:
    """Controlled teleportation of ``alpha|0> + beta|1>`` from ``C`` to ``A``.

    ``wave_plate`` overrides the parity rule (for negative tests only).
    """
    _check_controls(n_controls)
    a, b = _check_payload(payload)
    controls = control_names(n_controls)
    preps = (
        Preparation((atom("A"),), "+"),
        *(Preparation((atom(c),), "+") for c in controls),
        Preparation((atom("C"),), np.array([a, b])),
        Preparation((photon("F"),), "linear"),
    )
    plate = wave_plate or WavePlateKind.for_controls(n_controls)
    stages = (
        *(CavityInteraction("F", x, phases) for x in ("A", *controls, "C")),
        WavePlate("F", plate),
        HadamardAtom("C"),
        Measure(("F", "C", *controls)),
    )
    return ProtocolSpec(
        name=f"ct-superposition-{n_controls}",
        family="ct-superposition",
        n_controls=n_controls,
        preparations=preps,
        stages=stages,
        teleport_targets=("A",),
        control_labels=controls,
        payload=(a, b),
        routed_photon="F",
    )


def build_cpt_entangled(
    n_controls: int,
    payload: Sequence[complex],
    phases: FaradayPhases | CavityParams = STANDARD_PHASES,
    wave_plate: WavePlateKind | None = None,
) -> ProtocolSpec:
    """Controlled partial teleportation: ``C`` of the pair ``(C, D)`` is replaced by ``A``."""
    _check_controls(n_controls)
    a, b = _check_payload(payload)
    controls = control_names(n_controls)
    preps = (
        Preparation((atom("A"),), "+"),
        *(Preparation((atom(c),), "+") for c in controls),
        Preparation((atom("C"), atom("D")), np.array([0, a, b, 0])),
        Preparation((photon("F"),), "linear"),
    )
    plate = wave_plate or WavePlateKind.for_controls(n_controls)
    stages = (
        *(CavityInteraction("F", x, phases) for x in ("A", *controls, "C")),
        WavePlate("F", plate),
        HadamardAtom("C"),
        Measure(("F", "C", *controls)),
    )
    return ProtocolSpec(
        name=f"cpt-entangled-{n_controls}",
        family="cpt-entangled",
        n_controls=n_controls,
        preparations=preps,
        stages=stages,
        teleport_targets=("A", "D"),
        control_labels=controls,
        payload=(a, b),
        routed_photon="F",
    )


def build_ct_entangled(
    n_controls: int,
    payload: Sequence[complex],
    phases: FaradayPhases | CavityParams = STANDARD_PHASES,
    wave_plate: WavePlateKind | None = None,
    extended: bool = False,
) -> ProtocolSpec:
    """Controlled teleportation of the pair ``(C, E)`` onto ``(A, D)``.

    One or two controls are the published schemes; more require
    ``extended=True`` and follow the same parity rule.
    """
    _check_controls(n_controls)
    if n_controls > 2 and not extended:
        raise ProtocolSpecError(
            f"ct-entangled with {n_controls} controls needs extended=True"
        )
    a, b = _check_payload(payload)
    controls = control_names(n_controls)
    preps = (
        Preparation((atom("A"),), "+"),
        *(Preparation((atom(c),), "+") for c in controls),
        Preparation((atom("C"), atom("E")), np.array([0, a, b, 0])),
        Preparation((atom("D"),), "+"),
        Preparation((photon("F1"),), "linear"),
        Preparation((photon("F2"),), "linear"),
    )
    plate = wave_plate or WavePlateKind.for_controls(n_controls)
    # Lower and upper routes touch disjoint subsystems, so their relative
    # order is bookkeeping only.
    stages = (
        *(CavityInteraction("F2", x, phases) for x in ("A", *controls, "C")),
        *(CavityInteraction("F1", x, phases) for x in ("D", "E")),
        WavePlate("F2", plate),
        WavePlate("F1", WavePlateKind.QWP2),
        HadamardAtom("C"),
        HadamardAtom("E"),
        Measure(("F2", "C", "F1", "E", *controls)),
    )
    return ProtocolSpec(
        name=f"ct-entangled-{n_controls}",
        family="ct-entangled",
        n_controls=n_controls,
        preparations=preps,
        stages=stages,
        teleport_targets=("A", "D"),
        control_labels=controls,
        payload=(a, b),
        routed_photon="F2",
    )


BUILDERS = {
    "ct-superposition": build_ct_superposition,
    "cpt-entangled": build_cpt_entangled,
    "ct-entangled": build_ct_entangled,
}


def build(family: str, n_controls: int, payload, **kwargs) -> ProtocolSpec:
    try:
        builder = BUILDERS[family]
    except KeyError:
        raise ProtocolSpecError(f"unknown protocol family {family!r}; expected one of {FAMILIES}") from None
    return builder(n_controls, payload, **kwargs)
