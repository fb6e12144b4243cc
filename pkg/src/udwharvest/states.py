"""Density matrices with basis metadata, validation and dump format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import NotAState

__all__ = [
    "DensityMatrix",
    "AB_BASIS",
    "ABC_BASIS",
    "partial_trace_control",
    "partial_trace_qubit",
]

# Two-qubit basis order used everywhere: detector A is the left factor.
AB_BASIS = ("|00>", "|01>", "|10>", "|11>")
# Full basis |A B>|control>, control index fastest.
ABC_BASIS = tuple(f"{ab}|{c}>" for ab in AB_BASIS for c in (0, 1))


@dataclass
class DensityMatrix:
    """Hermitian complex matrix plus trace bookkeeping.

    ``normalized`` records whether the entries are meant to have unit
    trace (projective reductions renormalise; raw perturbative blocks may
    carry trace 1 + O(lambda^4)).
    """

    entries: np.ndarray
    basis: tuple = AB_BASIS
    normalized: bool = True

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise NotAState("density matrix must be square")
        if len(self.basis) != self.entries.shape[0]:
            raise NotAState("basis size does not match matrix dimension")

    @property
    def dim(self):
        return self.entries.shape[0]

    def trace(self):
        return complex(np.trace(self.entries))

    def hermiticity_defect(self):
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def min_eigenvalue(self):
        herm = 0.5 * (self.entries + self.entries.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])

    def validate(self, herm_tol=1e-12, trace_tol=1e-10, psd_tol=None):
        scale = max(float(np.max(np.abs(self.entries))), 1.0)
        if self.hermiticity_defect() > herm_tol * scale:
            raise NotAState(
                f"hermiticity defect {self.hermiticity_defect():.3e} above tolerance"
            )
        if self.normalized and abs(self.trace() - 1.0) > trace_tol:
            raise NotAState(f"trace {self.trace():.12g} is not 1 within {trace_tol:g}")
        if psd_tol is not None and self.min_eigenvalue() < -psd_tol:
            raise NotAState(
                f"minimum eigenvalue {self.min_eigenvalue():.3e} below -{psd_tol:g}"
            )
        return self

    # -- dump format --------------------------------------------------------

    def to_dump(self, provenance=None):
        """JSON-serialisable dict: dim, basis order, entries as (re, im)
        pairs at full precision, plus caller-supplied provenance."""
        return {
            "format": "udwharvest-state",
            "version": 1,
            "dim": self.dim,
            "basis": list(self.basis),
            "normalized": self.normalized,
            "trace": [self.trace().real, self.trace().imag],
            "entries": [
                [[z.real, z.imag] for z in row] for row in self.entries
            ],
            "provenance": provenance or {},
        }

    def dump_json(self, provenance=None):
        return json.dumps(self.to_dump(provenance), indent=1)

    @classmethod
    def from_dump(cls, data):
        if data.get("format") != "udwharvest-state":
            raise NotAState("not a state dump")
        entries = np.array(
            [[complex(re, im) for re, im in row] for row in data["entries"]]
        )
        return cls(entries, tuple(data["basis"]), data.get("normalized", True))


def partial_trace_control(rho_abc: np.ndarray) -> np.ndarray:
    """Trace the control qubit out of an 8x8 ABC matrix (control fastest)."""
    r = np.asarray(rho_abc, dtype=complex).reshape(4, 2, 4, 2)
    return np.einsum("aibi->ab", r)


def partial_trace_qubit(rho_ab: np.ndarray, keep: str) -> np.ndarray:
    """Reduce a two-qubit 4x4 matrix to the kept detector ('A' or 'B')."""
    r = np.asarray(rho_ab, dtype=complex).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("abcb->ac", r)
    if keep == "B":
        return np.einsum("abad->bd", r)
    raise ValueError("keep must be 'A' or 'B'")
