"""Execute a :class:`ProtocolSpec` and synthesize the receiver's corrections."""
from __future__ import annotations

from dataclasses import replace
from typing import Sequence

import numpy as np

from ..cavity import CavityParams, faraday_phases
from ..errors import NoPauliCorrection, NotNormalizedError
from ..optics import hadamard_atom, qwp_matrix
from ..qreg import (
    BranchRecord,
    PauliOp,
    QuantumRegister,
    _single_state,
    apply_controlled_phase_pair,
    apply_single,
    candidate_corrections,
    fidelity,
    measure_enumerate,
)
from .spec import CavityInteraction, HadamardAtom, Measure, ProtocolSpec, WavePlate

FIDELITY_TOL = 1e-10
ACCEPT_TOL = 1e-8


def prepare(spec: ProtocolSpec) -> QuantumRegister:
    """Initial product of the spec's (possibly entangled) preparation groups."""
    amps = np.ones(1, dtype=complex)
    for prep in spec.preparations:
        if len(prep.labels) == 1:
            vec = _single_state(prep.state)
        else:
            vec = np.asarray(prep.state, dtype=complex).reshape(-1)
            if vec.size != 2 ** len(prep.labels):
                raise NotNormalizedError(f"group {prep.labels} needs {2 ** len(prep.labels)} amplitudes")
            norm = float(np.vdot(vec, vec).real)
            if abs(norm - 1) > 1e-9:
                raise NotNormalizedError(f"group {prep.labels} has squared norm {norm}")
        amps = np.kron(amps, vec)
    return QuantumRegister(spec.subsystems, amps)


def apply_stage(reg: QuantumRegister, stage, loss_mode: str = "strict") -> QuantumRegister:
    if isinstance(stage, CavityInteraction):
        phases = stage.phases
        if isinstance(phases, CavityParams):
            phases = faraday_phases(phases)
        return apply_controlled_phase_pair(reg, stage.photon, stage.atom, phases, mode=loss_mode)
    if isinstance(stage, WavePlate):
        return apply_single(reg, stage.photon, qwp_matrix(stage.kind))
    if isinstance(stage, HadamardAtom):
        return apply_single(reg, stage.atom, hadamard_atom())
    if isinstance(stage, Measure):
        return reg
    raise TypeError(f"unknown stage {stage!r}")


def evolve(spec: ProtocolSpec, n_stages: int | None = None) -> QuantumRegister:
    """State after the first ``n_stages`` stages (all unitary stages by default)."""
    reg = prepare(spec)
    stages = spec.stages if n_stages is None else spec.stages[:n_stages]
    for stage in stages:
        reg = apply_stage(reg, stage, spec.loss_mode)
    return reg


def synthesize_correction(
    residual, intended, targets: Sequence[str] | None = None
) -> PauliOp:
    """First correction in canonical order that maps ``residual`` onto ``intended``.

    ``residual`` is a :class:`QuantumRegister` on the teleport targets or a
    bare amplitude vector (then ``targets`` names its subsystems).
    Candidates run through ``{I, X, Z, ZX}`` per target, leftmost target
    varying slowest. Raises :class:`NoPauliCorrection` when none reaches
    fidelity ``1 - 1e-8``.

    For special payloads several candidates can coincide (with ``beta = 0``,
    ``I`` and ``Z`` agree); the earliest one is returned. For generic
    payloads the answer is unique and depends only on the outcome.
    """
    if isinstance(residual, QuantumRegister):
        if targets is not None and tuple(targets) != residual.names:
            residual = residual.reorder(targets)
        targets, vec = residual.names, residual.amplitudes
    else:
        vec = np.asarray(residual, dtype=complex).reshape(-1)
        if targets is None:
            targets = tuple(f"q{i}" for i in range(int(np.log2(vec.size))))
    intended = np.asarray(intended, dtype=complex).reshape(-1)
    best, best_f = None, -1.0
    for op in candidate_corrections(targets):
        f = fidelity(intended, op.matrix() @ vec)
        if f >= 1 - FIDELITY_TOL:
            return op
        if f > best_f:
            best, best_f = op, f
    if best_f >= 1 - ACCEPT_TOL:
        return best
    raise NoPauliCorrection(
        f"no Pauli correction on {tuple(targets)} restores the payload (best {best} at fidelity {best_f:.6g})"
    )


def run(
    spec: ProtocolSpec,
    *,
    check_parity: bool = True,
    require_correction: bool = True,
) -> tuple[QuantumRegister, list[BranchRecord]]:
    """Evolve the pipeline, enumerate the terminal measurement, attach corrections.

    Returns the pre-measurement register and one :class:`BranchRecord` per
    outcome. With ``require_correction=False`` a branch that no Pauli can fix
    gets ``correction=None`` and the best fidelity reachable, instead of
    raising :class:`NoPauliCorrection`.
    """
    spec.validate(check_parity=check_parity)
    final = evolve(spec)
    intended = spec.payload_state()
    targets = spec.teleport_targets
    records = []
    for br in measure_enumerate(final, spec.measure.targets):
        residual = br.residual.reorder(targets)
        try:
            op = synthesize_correction(residual, intended)
        except NoPauliCorrection:
            if require_correction:
                raise
            best = max(
                fidelity(intended, c.matrix() @ residual.amplitudes)
                for c in candidate_corrections(targets)
            )
            records.append(replace(br, residual=residual, corrected_payload_fidelity=best))
            continue
        f = fidelity(intended, op.apply(residual).amplitudes)
        records.append(replace(br, residual=residual, correction=op, corrected_payload_fidelity=f))
    return final, records
