"""Reflection coefficients of a low-Q cavity with and without a trapped atom.

All frequencies and rates are plain numbers in one common unit; the presets
express them relative to the cavity damping rate ``kappa``.

The atom-field coupling is called ``lambda_`` here. Some texts write the
standard tuning as ``g = kappa/2``; ``g`` and ``lambda_`` denote the same
coupling constant.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass
from pathlib import Path

from .errors import CavitySingularityError

SINGULAR_TOL = 1e-15

PRESET_DIR_ENV = "FARADAYCT_PRESET_DIR"


@dataclass(frozen=True)
class CavityParams:
    omega_c: float
    omega_0: float
    omega_p: float
    kappa: float
    gamma: float = 0.0
    lambda_: float = 0.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError(f"kappa must be > 0, got {self.kappa}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.lambda_ < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lambda_}")

    @classmethod
    def from_dict(cls, data: dict) -> CavityParams:
        data = dict(data)
        if "lambda" in data:
            data["lambda_"] = data.pop("lambda")
        unknown = set(data) - {"omega_c", "omega_0", "omega_p", "kappa", "gamma", "lambda_"}
        if unknown:
            raise ValueError(f"unknown cavity parameter(s): {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in data.items()})

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lambda_")
        return d

    def replace(self, **changes) -> CavityParams:
        d = asdict(self)
        if "lambda" in changes:
            changes["lambda_"] = changes.pop("lambda")
        d.update(changes)
        return CavityParams(**d)


def standard_tuning(kappa: float = 1.0, omega_c: float = 0.0) -> CavityParams:
    """``omega_p = omega_c - kappa/2``, ``omega_0 = omega_c``, ``lambda = kappa/2``, ``gamma = 0``.

    Gives ``r = -1`` and ``r0 = i``, i.e. phases ``(pi, pi/2)``.
    """
    return CavityParams(
        omega_c=omega_c,
        omega_0=omega_c,
        omega_p=omega_c - kappa / 2,
        kappa=kappa,
        gamma=0.0,
        lambda_=kappa / 2,
    )


def reflection(params: CavityParams) -> complex:
    """Reflection coefficient of the atom-cavity system at the probe frequency."""
    dc = 1j * (params.omega_c - params.omega_p)
    atom = 1j * (params.omega_0 - params.omega_p) + params.gamma / 2
    g2 = params.lambda_**2
    num = (dc - params.kappa / 2) * atom + g2
    den = (dc + params.kappa / 2) * atom + g2
    if abs(den) < SINGULAR_TOL:
        raise CavitySingularityError(f"reflection denominator vanishes for {params}")
    return num / den


def reflection_empty(params: CavityParams) -> complex:
    """Reflection coefficient of the empty cavity; always of unit modulus."""
    dc = 1j * (params.omega_c - params.omega_p)
    return (dc - params.kappa / 2) / (dc + params.kappa / 2)


def principal_arg(z: complex) -> float:
    """Argument in ``(-pi, pi]``.

    ``cmath.phase`` returns ``-pi`` for ``-1 - 0j``; that point belongs to
    ``+pi`` on this branch.
    """
    phi = math.atan2(z.imag, z.real)
    return math.pi if phi == -math.pi else phi


@dataclass(frozen=True)
class FaradayPhases:
    """Phases picked up by a reflected photon.

    ``phi`` is the phase when the photon's polarization couples to the atom
    (``L`` with the atom in ``|0>``, ``R`` with ``|1>``); ``phi0`` is the
    empty-cavity phase seen otherwise.
    """

    phi: float
    phi0: float
    mag: float = 1.0
    mag0: float = 1.0

    @property
    def theta_minus(self) -> float:
        """Polarization rotation for an atom in ``|0>``: ``(phi0 - phi)/2``."""
        return (self.phi0 - self.phi) / 2

    @property
    def theta_plus(self) -> float:
        """Polarization rotation for an atom in ``|1>``: ``(phi - phi0)/2``."""
        return (self.phi - self.phi0) / 2

    @property
    def is_lossless(self) -> bool:
        return abs(self.mag - 1) <= 1e-12 and abs(self.mag0 - 1) <= 1e-12

    def to_dict(self) -> dict:
        return {
            "phi": self.phi,
            "phi0": self.phi0,
            "theta_minus": self.theta_minus,
            "theta_plus": self.theta_plus,
            "mag": self.mag,
            "mag0": self.mag0,
        }


STANDARD_PHASES = FaradayPhases(math.pi, math.pi / 2)


def faraday_phases(params: CavityParams) -> FaradayPhases:
    r = reflection(params)
    r0 = reflection_empty(params)
    return FaradayPhases(principal_arg(r), principal_arg(r0), abs(r), abs(r0))


# --- presets ---------------------------------------------------------------

_BUILTIN = {"standard-tuning": standard_tuning()}


def _preset_dirs() -> list[Path]:
    dirs = []
    if os.environ.get(PRESET_DIR_ENV):
        dirs.append(Path(os.environ[PRESET_DIR_ENV]))
    dirs.append(Path(__file__).parent / "data" / "presets")
    return dirs


def load_cavity_params(path: str | os.PathLike) -> CavityParams:
    """Read a JSON object with keys ``omega_c, omega_0, omega_p, kappa, gamma, lambda``."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return CavityParams.from_dict(data)


def cavity_preset(name: str) -> CavityParams:
    """Look up a named preset.

    Searches ``$FARADAYCT_PRESET_DIR/cavity-<name>.json`` first, then the
    bundled presets, then the built-in ``standard-tuning``.
    """
    for d in _preset_dirs():
        p = d / f"cavity-{name}.json"
        if p.is_file():
            return load_cavity_params(p)
    if name in _BUILTIN:
        return _BUILTIN[name]
    raise KeyError(f"unknown cavity preset {name!r}")
