"""JSON-ready summaries of protocol runs.

Complex numbers are written as ``[real, imag]`` pairs rounded to 15 decimal
places, so repeated runs produce identical bytes.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..qreg import BranchRecord, QuantumRegister
from .spec import CavityInteraction, HadamardAtom, Measure, ProtocolSpec, WavePlate


def cjson(z) -> list[float]:
    z = complex(z)
    # ``+ 0.0`` folds -0.0 into 0.0
    return [round(z.real, 15) + 0.0, round(z.imag, 15) + 0.0]


def vec_json(v) -> list[list[float]]:
    return [cjson(x) for x in np.asarray(v).reshape(-1)]


def stage_json(stage) -> dict:
    if isinstance(stage, CavityInteraction):
        return {"stage": "cavity", "photon": stage.photon, "atom": stage.atom}
    if isinstance(stage, WavePlate):
        return {"stage": "wave_plate", "photon": stage.photon, "kind": stage.kind.value}
    if isinstance(stage, HadamardAtom):
        return {"stage": "hadamard", "atom": stage.atom}
    if isinstance(stage, Measure):
        return {"stage": "measure", "targets": list(stage.targets)}
    raise TypeError(f"unknown stage {stage!r}")


def spec_json(spec: ProtocolSpec) -> dict:
    return {
        "name": spec.name,
        "family": spec.family,
        "n_controls": spec.n_controls,
        "subsystems": [{"name": s.name, "kind": s.kind.value} for s in spec.subsystems],
        "stages": [stage_json(s) for s in spec.stages],
        "teleport_targets": list(spec.teleport_targets),
        "control_labels": list(spec.control_labels),
        "payload": {"alpha": cjson(spec.payload[0]), "beta": cjson(spec.payload[1])},
        "loss_mode": spec.loss_mode,
    }


def branch_json(rec: BranchRecord) -> dict:
    res: QuantumRegister | None = rec.residual
    return {
        "outcome": dict(rec.outcome),
        "probability": round(rec.probability, 15),
        "residual": None if res is None else {"subsystems": list(res.names), "amplitudes": vec_json(res.amplitudes)},
        "correction": None if rec.correction is None else str(rec.correction),
        "corrected_payload_fidelity": (
            None if rec.corrected_payload_fidelity is None else round(rec.corrected_payload_fidelity, 15)
        ),
    }


def run_json(spec: ProtocolSpec, records: Sequence[BranchRecord]) -> dict:
    return {
        "protocol": spec_json(spec),
        "mode": "enumerate",
        "n_branches": len(records),
        "branches": [branch_json(r) for r in records],
    }


def sample_trace(records: Sequence[BranchRecord], shots: int, seed: int) -> list[BranchRecord]:
    """``shots`` branches drawn with their Born probabilities."""
    probs = np.array([r.probability for r in records])
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(records), size=int(shots), p=probs / probs.sum())
    return [records[int(i)] for i in picks]


def sample_json(spec: ProtocolSpec, records: Sequence[BranchRecord], shots: int, seed: int) -> dict:
    trace = sample_trace(records, shots, seed)
    return {
        "protocol": spec_json(spec),
        "mode": "sample",
        "samples": int(shots),
        "seed": int(seed),
        "trace": [
            {
                "shot": i,
                "outcome": dict(r.outcome),
                "correction": None if r.correction is None else str(r.correction),
                "corrected_payload_fidelity": (
                    None if r.corrected_payload_fidelity is None else round(r.corrected_payload_fidelity, 15)
                ),
            }
            for i, r in enumerate(trace)
        ],
    }
