"""Dense complex linear algebra for multi-qubit operators.

Matrices are plain numpy arrays of complex128 with dimensions that are
powers of two.  Subsystem bookkeeping is done through ``SystemLayout``:
an ordered tuple of single-qubit labels where label 0 is the most
significant bit of the row/column index.  Every partial operation
(transpose, trace) derives from that single convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10


@dataclass(frozen=True)
class SystemLayout:
    """Ordered qubit labels; label 0 is the most significant index bit."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate subsystem labels: {self.labels}")

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return 2 ** len(self.labels)

    def positions(self, subset) -> list[int]:
        unknown = set(subset) - set(self.labels)
        if unknown:
            raise ValueError(f"unknown subsystem labels: {sorted(unknown)}")
        return [i for i, lab in enumerate(self.labels) if lab in set(subset)]

    def check_matches(self, m: np.ndarray):
        if m.shape != (self.dim, self.dim):
            raise ValueError(
                f"matrix shape {m.shape} does not match layout {self.labels} "
                f"of dimension {self.dim}"
            )


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, first factor on the most significant bits."""
    return np.kron(a, b)


def partial_transpose(m: np.ndarray, layout: SystemLayout, subsystems) -> np.ndarray:
    """Transpose the indices of the named qubits only.

    Involutive and Hermiticity/trace preserving.  ``subsystems`` may be
    empty, in which case ``m`` is returned unchanged (as a copy).
    """
    layout.check_matches(m)
    pos = layout.positions(subsystems)
    n = layout.n_qubits
    t = np.asarray(m, dtype=complex).reshape((2,) * (2 * n))
    axes = list(range(2 * n))
    for p in pos:
        axes[p], axes[n + p] = axes[n + p], axes[p]
    return t.transpose(axes).reshape(layout.dim, layout.dim)


def partial_trace(m: np.ndarray, layout: SystemLayout, traced) -> np.ndarray:
    """Trace out the named qubits; remaining labels keep their order."""
    layout.check_matches(m)
    pos = set(layout.positions(traced))
    n = layout.n_qubits
    t = np.asarray(m, dtype=complex).reshape((2,) * (2 * n))
    # Row axis i and column axis n+i of a traced qubit share an einsum index.
    row_idx = list(range(n))
    col_idx = [n + i if i not in pos else i for i in range(n)]
    keep = [i for i in range(n) if i not in pos]
    out_idx = keep + [n + i for i in keep]
    return np.einsum(t, row_idx + col_idx, out_idx).reshape(
        2 ** len(keep), 2 ** len(keep)
    )


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def hermitian_eigenvalues(m: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    The input is symmetrized before the eigensolve to suppress round-off;
    inputs farther than ``tol`` from Hermitian are rejected.
    """
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh((m + m.conj().T) / 2)


def real_embedding(m: np.ndarray) -> np.ndarray:
    """Embed a Hermitian matrix as [[Re m, -Im m], [Im m, Re m]].

    The result is real symmetric, PSD iff ``m`` is PSD, and carries every
    eigenvalue of ``m`` twice.
    """
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise ValueError("matrix is not Hermitian within tolerance")
    m = (m + m.conj().T) / 2
    return np.block([[m.real, -m.imag], [m.imag, m.real]])


def check_density_matrix(rho: np.ndarray, tol: float = HERMITICITY_TOL):
    """Raise unless ``rho`` is Hermitian, unit trace and PSD within tol."""
    rho = np.asarray(rho, dtype=complex)
    if not is_hermitian(rho, tol):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError(f"density matrix trace {np.trace(rho)} != 1")
    lam = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if lam[0] < -tol:
        raise ValueError(f"density matrix has negative eigenvalue {lam[0]}")
