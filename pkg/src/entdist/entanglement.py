"""Two-qubit entanglement quantification and gauge-fixed input states.

Input states are parametrized in Schmidt form with real nonnegative
amplitudes: the geometric entanglement parameter c in [0, 1/2] plus one
or two local basis parameters (s1, s2) in [0, 1].  Complex Schmidt phases
are gauged away and not parametrized.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .linalg import (
    SystemLayout,
    check_density_matrix,
    hermitian_eigenvalues,
    partial_transpose,
)

_AB = SystemLayout(("A", "B"))


class StateForm(enum.Enum):
    """Which local-basis parameters the input-state family uses."""

    SCHMIDT_S1 = "schmidt_s1"  # sqrt(c)|0>|s> + sqrt(1-c)|1>|s_perp>
    TWO_SIDED = "two_sided"  # sqrt(c)|s>|v> + sqrt(1-c)|s_perp>|v_perp>


@dataclass(frozen=True)
class PureInputState:
    c: float
    s1: float
    s2: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.c <= 0.5:
            raise ValueError(f"c={self.c} outside [0, 1/2]")
        for name in ("s1", "s2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")


@dataclass(frozen=True)
class EntanglementReport:
    negativity: float
    lambda_min_pt: float
    pt_determinant: float
    is_entangled: bool


def _basis_pair(s: float):
    """|s> = sqrt(s)|0> + sqrt(1-s)|1> and its orthogonal complement."""
    ket = np.array([np.sqrt(s), np.sqrt(1 - s)], dtype=complex)
    perp = np.array([-np.sqrt(1 - s), np.sqrt(s)], dtype=complex)
    return ket, perp


def build_state(p: PureInputState, form: StateForm = StateForm.SCHMIDT_S1) -> np.ndarray:
    """Unit 4-vector of the parametrized two-qubit pure state."""
    s, s_perp = _basis_pair(p.s1)
    rc, rc1 = np.sqrt(p.c), np.sqrt(1 - p.c)
    if form is StateForm.SCHMIDT_S1:
        e0 = np.array([1, 0], dtype=complex)
        e1 = np.array([0, 1], dtype=complex)
        psi = rc * np.kron(e0, s) + rc1 * np.kron(e1, s_perp)
    elif form is StateForm.TWO_SIDED:
        v, v_perp = _basis_pair(p.s2)
        psi = rc * np.kron(s, v) + rc1 * np.kron(s_perp, v_perp)
    else:
        raise ValueError(f"unknown state form {form!r}")
    return psi


def singlet() -> np.ndarray:
    """(|01> - |10>)/sqrt(2)."""
    return np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def report(rho: np.ndarray) -> EntanglementReport:
    """Negativity, minimal PT eigenvalue, PT determinant and the PPT verdict.

    For two qubits the partial transpose has at most one negative
    eigenvalue, so negativity = max(0, -lambda_min) and the determinant
    sign agrees with the eigenvalue sign.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 state, got shape {rho.shape}")
    check_density_matrix(rho)
    pt = partial_transpose(rho, _AB, {"B"})
    lam = hermitian_eigenvalues(pt)
    lam_min = float(lam[0])
    det = float(np.prod(lam))
    return EntanglementReport(
        negativity=max(0.0, -lam_min),
        lambda_min_pt=lam_min,
        pt_determinant=det,
        is_entangled=lam_min < 0.0,
    )


def random_pure_state(rng: np.random.Generator) -> np.ndarray:
    """Haar-random two-qubit pure state (normalized complex Gaussian)."""
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return v / np.linalg.norm(v)
