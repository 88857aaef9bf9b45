"""Compare simulated intermediate states with the printed state expansions.

Each entry of ``data/equations/states.json`` holds the LaTeX of one printed
state, the pipeline checkpoint it describes, and the spectator subsystems it
leaves implicit (still in their prepared product state). The printed
expansions are kept verbatim; where one disagrees with the simulation, an
entry in ``data/equations/errata.json`` records a term-level amendment and
why. Comparisons are made on normalized vectors up to a global phase, since
several printed prefactors are not normalized.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

import numpy as np

from ..errors import TableFormatError
from ..qreg import PRESET_STATES, equal_up_to_phase, fidelity
from .kets import KetContext, parse, strip_lhs
from .runner import evolve
from .spec import CavityInteraction, ProtocolSpec, build

EQUATION_TOL = 1e-10


@dataclass(frozen=True)
class PrintedState:
    id: str
    family: str
    n_controls: int
    checkpoint: object
    spectators: dict
    context: KetContext
    latex: str


@dataclass(frozen=True)
class EquationCheck:
    id: str
    literal_match: bool
    amended_match: bool
    errata: tuple[str, ...]
    literal_fidelity: float
    max_amplitude_error: float


def _context(d: dict) -> KetContext:
    return KetContext(
        photon=d["photon"],
        photon_numbers=d.get("photon_numbers", {}),
        bare=d.get("bare"),
        photons=frozenset(d.get("photons", ())),
    )


def _read_json(name: str) -> dict:
    return json.loads(resources.files("faradayct").joinpath("data", "equations", name).read_text("utf-8"))


def load_printed_states() -> list[PrintedState]:
    raw = _read_json("states.json")["equations"]
    return [
        PrintedState(
            id=e["id"],
            family=e["family"],
            n_controls=e["n_controls"],
            checkpoint=e["checkpoint"],
            spectators=e.get("spectators", {}),
            context=_context(e["context"]),
            latex=e["latex"],
        )
        for e in raw
    ]


def load_errata() -> dict[str, list[dict]]:
    out: dict[str, list[dict]] = {}
    for item in _read_json("errata.json")["errata"]:
        out.setdefault(item["id"], []).append(item)
    return out


def amend(latex: str, errata: Sequence[dict]) -> str:
    """Apply find/replace amendments; each ``find`` must occur exactly ``count`` times."""
    for e in errata:
        n = latex.count(e["find"])
        if n != e.get("count", 1):
            raise TableFormatError(
                f"erratum for {e['id']}: {e['find']!r} occurs {n} times, expected {e.get('count', 1)}"
            )
        latex = latex.replace(e["find"], e["replace"])
    return latex


def checkpoint_stages(spec: ProtocolSpec, checkpoint) -> int | None:
    if checkpoint == "final":
        return None
    photon, atom = checkpoint["after_cavity"]
    return spec.stage_index(CavityInteraction, photon=photon, atom=atom) + 1


def printed_vector(state: PrintedState, latex: str, payload, order: Sequence[str]) -> np.ndarray:
    """The printed expansion tensored with its spectators, over ``order``."""
    a, b = payload
    ket = parse(strip_lhs(latex), state.context, alpha=a, beta=b)
    covered = [lbl for lbl in order if lbl not in state.spectators]
    vec = ket.to_vector(covered).reshape((2,) * len(covered))
    # append spectators as trailing axes, then permute into ``order``
    labels = list(covered)
    for lbl, spec_state in state.spectators.items():
        single = np.array([a, b]) if spec_state == "payload" else PRESET_STATES[spec_state]
        vec = np.multiply.outer(vec, single)
        labels.append(lbl)
    vec = np.transpose(vec, [labels.index(lbl) for lbl in order]).reshape(-1)
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise TableFormatError(f"{state.id}: printed state evaluates to zero")
    return vec / norm


def simulated_vector(state: PrintedState, payload) -> tuple[np.ndarray, tuple[str, ...]]:
    kwargs = {"extended": True} if state.family == "ct-entangled" and state.n_controls > 2 else {}
    spec = build(state.family, state.n_controls, payload, **kwargs)
    reg = evolve(spec, checkpoint_stages(spec, state.checkpoint))
    return reg.amplitudes, reg.names


def check_state(state: PrintedState, payload, errata: Sequence[dict] = ()) -> EquationCheck:
    sim, order = simulated_vector(state, payload)
    literal = printed_vector(state, state.latex, payload, order)
    amended = printed_vector(state, amend(state.latex, errata), payload, order) if errata else literal
    k = int(np.argmax(np.abs(sim)))
    ph = lambda v: v * (abs(v[k]) / v[k]) if abs(v[k]) > 0 else v  # noqa: E731
    return EquationCheck(
        id=state.id,
        literal_match=equal_up_to_phase(sim, literal, EQUATION_TOL),
        amended_match=equal_up_to_phase(sim, amended, EQUATION_TOL),
        errata=tuple(e["reason"] for e in errata),
        literal_fidelity=fidelity(sim, literal),
        max_amplitude_error=float(np.max(np.abs(ph(sim) - ph(amended)))),
    )


def check_all(payload, ids: Sequence[str] | None = None) -> list[EquationCheck]:
    errata = load_errata()
    states = load_printed_states()
    if ids is not None:
        missing = set(ids) - {s.id for s in states}
        if missing:
            raise KeyError(f"unknown printed state(s): {sorted(missing)}")
        states = [s for s in states if s.id in ids]
    return [check_state(s, payload, errata.get(s.id, ())) for s in states]
