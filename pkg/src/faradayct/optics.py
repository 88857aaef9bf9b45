"""Quarter-wave plates on the photon and the Hadamard on an atom.

Both plates are fixed by how they act on two polarization superpositions:

* ``QWP1``: ``(|L> + i|R>)/sqrt(2) -> |L>`` and ``(|L> - i|R>)/sqrt(2) -> |R>``
* ``QWP2``: ``(|L> + |R>)/sqrt(2) -> |L>`` and ``(|L> - |R>)/sqrt(2) -> |R>``

The printed mappings omit the ``1/sqrt(2)``; unitarity requires it.
"""
from __future__ import annotations

import enum

import numpy as np

_S = 1 / np.sqrt(2)


class WavePlateKind(enum.Enum):
    QWP1 = "QWP1"
    QWP2 = "QWP2"

    @classmethod
    def for_controls(cls, n_controls: int) -> "WavePlateKind":
        """QWP1 for an odd number of controls, QWP2 for an even number."""
        return cls.QWP1 if n_controls % 2 else cls.QWP2

    def swapped(self) -> "WavePlateKind":
        return WavePlateKind.QWP2 if self is WavePlateKind.QWP1 else WavePlateKind.QWP1


_QWP = {
    WavePlateKind.QWP1: np.array([[1, -1j], [1, 1j]], dtype=complex) * _S,
    WavePlateKind.QWP2: np.array([[1, 1], [1, -1]], dtype=complex) * _S,
}


def qwp_matrix(kind: WavePlateKind | str) -> np.ndarray:
    """Jones matrix in the ``(L, R)`` basis, first column real."""
    return _QWP[WavePlateKind(kind)].copy()


def hadamard_atom() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=float) * _S
