"""Heralded success probability and event period under photon loss.

A run is accepted only if every photon path survives fiber coupling, the
remaining optics, the polarization filter, detection and the collection solid
angle, and the Bell-type measurement succeeds::

    P = p_bell * (t_fiber * t_optics * p_pol * eta_det * solid_angle) ** n_photon_paths

Schemes with two photonic channels have ``n_photon_paths = 2``.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from .cavity import _preset_dirs

PATH_FACTORS = ("t_fiber", "t_optics", "p_pol", "eta_det", "solid_angle")
PROBABILITY_FIELDS = PATH_FACTORS + ("p_bell",)
DEFAULT_LOSS_PRESET = "olmschenk-2009-like"
MC_BATCH = 1_000_000


@dataclass(frozen=True)
class LossModel:
    """Per-photon-path loss factors, Bell-measurement success and source rate.

    ``p_bell`` defaults to 1/4: the chance that the measurement lands on the
    outcome needing no extra rotation.
    """

    t_fiber: float
    t_optics: float
    p_pol: float
    eta_det: float
    solid_angle: float
    p_bell: float = 0.25
    source_rate: float = 75_000.0
    n_photon_paths: int = 1

    def __post_init__(self):
        for name in PROBABILITY_FIELDS:
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be a probability in [0, 1], got {v!r}")
        if not (isinstance(self.source_rate, (int, float)) and self.source_rate > 0 and math.isfinite(self.source_rate)):
            raise ValueError(f"source_rate must be a positive number of photons per second, got {self.source_rate!r}")
        if isinstance(self.n_photon_paths, bool) or not isinstance(self.n_photon_paths, int) or self.n_photon_paths < 1:
            raise ValueError(f"n_photon_paths must be an integer >= 1, got {self.n_photon_paths!r}")

    @classmethod
    def from_dict(cls, data: dict) -> LossModel:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown loss-model field(s): {sorted(unknown)}")
        missing = set(PATH_FACTORS) - set(data)
        if missing:
            raise ValueError(f"missing loss-model field(s): {sorted(missing)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    def with_paths(self, n: int) -> LossModel:
        return replace(self, n_photon_paths=n)

    @property
    def path_transmission(self) -> float:
        return float(math.prod(getattr(self, f) for f in PATH_FACTORS))


def load_loss_model(path: str | os.PathLike) -> LossModel:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return LossModel.from_dict(data)


def loss_preset(name: str = DEFAULT_LOSS_PRESET) -> LossModel:
    """Load ``loss-<name>.json`` from the preset directory override or the bundled presets."""
    for d in _preset_dirs():
        p = Path(d) / f"loss-{name}.json"
        if p.is_file():
            return load_loss_model(p)
    raise KeyError(f"unknown loss preset {name!r}")


def success_probability_exact(model: LossModel) -> Fraction:
    """The product evaluated on the decimal values as written (no binary rounding)."""
    per_path = math.prod((Fraction(repr(float(getattr(model, f)))) for f in PATH_FACTORS), start=Fraction(1))
    return Fraction(repr(float(model.p_bell))) * per_path ** model.n_photon_paths


def success_probability(model: LossModel) -> float:
    return float(success_probability_exact(model))


def expected_event_period(model: LossModel) -> float:
    """Mean seconds between accepted runs; ``math.inf`` when success is impossible."""
    p = success_probability_exact(model)
    if p == 0:
        return math.inf
    return float(1 / (Fraction(repr(float(model.source_rate))) * p))


@dataclass(frozen=True)
class YieldEstimate:
    trials: int
    successes: int

    @property
    def rate(self) -> float:
        return self.successes / self.trials

    def sigma(self, p: float) -> float:
        """Binomial standard deviation of the rate for true probability ``p``."""
        return math.sqrt(p * (1 - p) / self.trials)

    def within(self, p: float, n_sigma: float = 3.0) -> bool:
        return abs(self.rate - p) <= n_sigma * self.sigma(p)


def monte_carlo_yield(
    model: LossModel,
    protocol=None,
    trials: int = 1_000_000,
    seed: int = 0,
) -> YieldEstimate:
    """Simulate ``trials`` runs with independent Bernoulli losses.

    Each trial draws one Bernoulli per loss factor per photon path and one for
    the Bell measurement; a trial fails at its first loss. Draws for later
    factors are made only for trials still alive, which yields the same joint
    distribution at a fraction of the cost. ``protocol``, if given, must use
    ``model.n_photon_paths`` photons. Deterministic for a fixed ``seed``.
    """
    if int(trials) != trials or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")
    if protocol is not None and len(protocol.photons) != model.n_photon_paths:
        raise ValueError(
            f"{protocol.name} routes {len(protocol.photons)} photon(s) but the loss model has "
            f"n_photon_paths={model.n_photon_paths}"
        )
    factors = [getattr(model, f) for _ in range(model.n_photon_paths) for f in PATH_FACTORS]
    factors.append(model.p_bell)
    rng = np.random.default_rng(seed)
    successes = 0
    remaining = int(trials)
    while remaining:
        batch = min(remaining, MC_BATCH)
        alive = batch
        for p in factors:
            if alive == 0:
                break
            alive = int(np.count_nonzero(rng.random(alive) < p))
        successes += alive
        remaining -= batch
    return YieldEstimate(int(trials), successes)
