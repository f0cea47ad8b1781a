"""Dense complex matrix algebra sized for small Hermitian problems.

Everything operates on plain ``complex128`` numpy arrays of dimension up to
a few dozen: eigendecompositions use a cyclic Jacobi sweep with a fixed
(row-major, upper-triangle) rotation order, matrix exponentials are spectral,
and partial traces are reshape-based.  The joint-index convention is
system-major throughout: a product operator ``A (x) B`` places the system
index on the slow axis, ``idx = i_system * dim_ancilla + i_ancilla``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatchError, NonHermitianError, NonSquareError

# Relative Hermiticity gate applied before any spectral operation.
HERMITICITY_RTOL = 1e-10
# Jacobi terminates when the off-diagonal Frobenius norm falls below this
# fraction of the input Frobenius norm.
JACOBI_OFF_TOL = 1e-14
_MAX_SWEEPS = 100


def as_complex_matrix(m, *, square: bool = False) -> np.ndarray:
    """Return ``m`` as a fresh complex128 2-d array, rejecting NaN/Inf."""
    a = np.array(m, dtype=complex)
    if a.ndim != 2:
        raise NonSquareError(f"expected a 2-d matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix contains non-finite entries")
    return a


def dag(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def max_abs(a: np.ndarray) -> float:
    """Entrywise max-norm."""
    return float(np.max(np.abs(a))) if a.size else 0.0


def require_hermitian(m, *, name: str = "matrix", rtol: float = HERMITICITY_RTOL) -> np.ndarray:
    """Gate ``m`` on Hermiticity and return its symmetrized copy.

    The deviation ``max|M - M^dag|`` must not exceed ``rtol * max|M|``;
    matrices passing the gate are symmetrized to ``(M + M^dag)/2`` so that
    downstream spectral code sees an exactly Hermitian array.
    """
    a = as_complex_matrix(m, square=True)
    scale = max_abs(a)
    deviation = max_abs(a - a.conj().T)
    if deviation > rtol * scale:
        raise NonHermitianError(
            f"{name} deviates from Hermiticity by {deviation:.3e} (scale {scale:.3e})"
        )
    return 0.5 * (a + a.conj().T)


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` is ascending and real; ``eigenvectors`` holds the
    matching orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def apply(self, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Matrix function ``V fn(w) V^dag`` evaluated on the eigenvalues."""
        v = self.eigenvectors
        return (v * fn(self.eigenvalues)) @ v.conj().T


def _off_diagonal_norm(a: np.ndarray) -> float:
    # Summed over off-diagonal entries only; subtracting the diagonal from the
    # total would cancel catastrophically near convergence.
    abs2 = np.abs(a) ** 2
    np.fill_diagonal(abs2, 0.0)
    return math.sqrt(float(abs2.sum()))


def hermitian_eig(m, *, name: str = "matrix") -> Spectrum:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps run in deterministic row-major order over the upper triangle and
    stop once the off-diagonal Frobenius norm is below
    ``JACOBI_OFF_TOL * ||M||_F``.  Eigenvalues are returned ascending, with a
    stable sort so degenerate blocks keep the rotation-order basis.
    """
    a = require_hermitian(m, name=name)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n > 1:
        tol = JACOBI_OFF_TOL * float(np.linalg.norm(a))
        skip = tol / n
        for _ in range(_MAX_SWEEPS):
            if _off_diagonal_norm(a) <= tol:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    r = abs(apq)
                    if r <= skip:
                        continue
                    app = a[p, p].real
                    aqq = a[q, q].real
                    rho = (aqq - app) / (2.0 * r)
                    if rho >= 0.0:
                        t = 1.0 / (rho + math.sqrt(1.0 + rho * rho))
                    else:
                        t = -1.0 / (-rho + math.sqrt(1.0 + rho * rho))
                    c = 1.0 / math.sqrt(1.0 + t * t)
                    s = (t * c) * (apq / r)
                    s_conj = s.conjugate()
                    # A <- R^dag A R with the rotation acting on rows/cols p, q.
                    row_p = a[p, :].copy()
                    row_q = a[q, :].copy()
                    a[p, :] = c * row_p - s * row_q
                    a[q, :] = s_conj * row_p + c * row_q
                    col_p = a[:, p].copy()
                    col_q = a[:, q].copy()
                    a[:, p] = c * col_p - s_conj * col_q
                    a[:, q] = s * col_p + c * col_q
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    vec_p = v[:, p].copy()
                    vec_q = v[:, q].copy()
                    v[:, p] = c * vec_p - s_conj * vec_q
                    v[:, q] = s * vec_p + c * vec_q
        else:
            raise RuntimeError(f"Jacobi sweep did not converge in {_MAX_SWEEPS} sweeps")
    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return Spectrum(eigenvalues=w[order], eigenvectors=v[:, order])


def expm_unitary(h, t: float) -> np.ndarray:
    """Unitary ``exp(-i t H)`` for Hermitian ``H``, built spectrally."""
    spectrum = hermitian_eig(h, name="generator")
    return spectrum.apply(lambda w: np.exp(-1j * t * w))


def kron(a, b) -> np.ndarray:
    """Kronecker product with the system-major index convention."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def partial_trace(m, dim_system: int, dim_ancilla: int, keep: str) -> np.ndarray:
    """Trace out one tensor factor of a joint-space matrix.

    ``keep`` selects the surviving factor, ``"system"`` or ``"ancilla"``.
    The trace of the result equals the trace of the input.
    """
    a = as_complex_matrix(m, square=True)
    if a.shape[0] != dim_system * dim_ancilla:
        raise DimensionMismatchError(
            f"matrix of dimension {a.shape[0]} is not {dim_system} x {dim_ancilla}"
        )
    blocks = a.reshape(dim_system, dim_ancilla, dim_system, dim_ancilla)
    if keep == "system":
        return np.einsum("iaja->ij", blocks)
    if keep == "ancilla":
        return np.einsum("iaib->ab", blocks)
    raise ValueError(f"keep must be 'system' or 'ancilla', got {keep!r}")


def _conformable(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shapes {a.shape} and {b.shape} do not conform")


def commutator(a, b) -> np.ndarray:
    """``AB - BA``."""
    a = as_complex_matrix(a, square=True)
    b = as_complex_matrix(b, square=True)
    _conformable(a, b)
    return a @ b - b @ a


def double_commutator(a, b) -> np.ndarray:
    """Nested commutator ``[A, [A, B]]``."""
    a = as_complex_matrix(a, square=True)
    b = as_complex_matrix(b, square=True)
    _conformable(a, b)
    return commutator(a, commutator(a, b))
