"""Density matrices, thermal/weakly-coherent ancilla preparations, and the
entropic functionals used by the thermodynamic bookkeeping.

All entropies are in nats.  Eigenvalues of validated states that land in
``[-PSD_TOL, 0)`` are treated as numerical zeros when entropies are taken;
anything below ``-PSD_TOL`` is a hard positivity error rather than noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DiagonalCoherenceError,
    DimensionMismatchError,
    NotPositiveError,
    SupportViolationError,
)
from .linalg import (
    Spectrum,
    dag,
    hermitian_eig,
    max_abs,
    partial_trace,
    require_hermitian,
)

PSD_TOL = 1e-10
TRACE_TOL = 1e-10
# Eigenvalues of sigma below this are outside its support for S(rho || sigma).
SUPPORT_EIGENVALUE_TOL = 1e-12
SUPPORT_WEIGHT_TOL = 1e-9
CHI_DIAGONAL_TOL = 1e-12


class DensityMatrix:
    """Validated density matrix with a cached eigendecomposition.

    Construction gates on Hermiticity, unit trace and positive
    semidefiniteness (eigenvalues above ``-psd_tol``), then stores the
    symmetrized matrix read-only together with its spectrum.
    """

    __slots__ = ("matrix", "basis_labels", "spectrum")

    def __init__(self, matrix, basis_labels=None, *, psd_tol: float = PSD_TOL):
        m = require_hermitian(matrix, name="density matrix")
        trace = float(np.trace(m).real)
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {trace!r} is not 1")
        spectrum = hermitian_eig(m, name="density matrix")
        smallest = float(spectrum.eigenvalues[0])
        if smallest < -psd_tol:
            raise NotPositiveError(f"density matrix has eigenvalue {smallest:.3e}")
        if basis_labels is not None:
            basis_labels = tuple(str(s) for s in basis_labels)
            if len(basis_labels) != m.shape[0]:
                raise DimensionMismatchError("basis_labels length does not match dimension")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "basis_labels", basis_labels)
        object.__setattr__(self, "spectrum", spectrum)

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues

    def expectation(self, operator) -> float:
        """Real part of ``tr(operator @ rho)``."""
        return float(np.trace(np.asarray(operator) @ self.matrix).real)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class AncillaSpec:
    """Preparation recipe for one environment unit.

    The realized state is ``thermal(h_ancilla, beta) + sqrt(tau) * lam * chi``,
    with ``chi`` Hermitian and free of diagonal elements in the eigenbasis of
    ``h_ancilla``.  ``tau`` is the collision duration the preparation is tied
    to; ``lam`` controls the magnitude of the injected coherence.
    """

    h_ancilla: np.ndarray
    beta: float
    chi: np.ndarray
    lam: float
    tau: float

    def __post_init__(self):
        h = require_hermitian(self.h_ancilla, name="h_ancilla")
        chi = require_hermitian(self.chi, name="chi")
        if h.shape != chi.shape:
            raise DimensionMismatchError("h_ancilla and chi dimensions differ")
        if not (math.isfinite(self.beta) and self.beta >= 0.0):
            raise ValueError(f"beta must be finite and >= 0, got {self.beta!r}")
        if not (math.isfinite(self.tau) and self.tau > 0.0):
            raise ValueError(f"tau must be finite and > 0, got {self.tau!r}")
        if not math.isfinite(self.lam):
            raise ValueError(f"lam must be finite, got {self.lam!r}")
        object.__setattr__(self, "h_ancilla", h)
        object.__setattr__(self, "chi", chi)

    @property
    def dim(self) -> int:
        return self.h_ancilla.shape[0]

    @property
    def coherence_amplitude(self) -> float:
        """The small parameter ``lam * sqrt(tau)`` multiplying ``chi``."""
        return self.lam * math.sqrt(self.tau)


def thermal_state(h, beta: float) -> DensityMatrix:
    """Gibbs state ``exp(-beta H) / Z`` built spectrally.

    Eigenvalues are shifted by their minimum before exponentiation so large
    ``beta * H`` cannot overflow.  ``beta = 0`` gives the maximally mixed
    state.
    """
    if not (math.isfinite(beta) and beta >= 0.0):
        raise ValueError(f"beta must be finite and >= 0, got {beta!r}")
    spectrum = hermitian_eig(h, name="hamiltonian")
    shifted = spectrum.eigenvalues - spectrum.eigenvalues[0]
    weights = np.exp(-beta * shifted)
    probs = weights / weights.sum()
    v = spectrum.eigenvectors
    return DensityMatrix((v * probs) @ dag(v))


def weakly_coherent_state(spec: AncillaSpec) -> DensityMatrix:
    """Realize the thermal-plus-coherence preparation of an :class:`AncillaSpec`.

    Fails with :class:`DiagonalCoherenceError` if ``chi`` has diagonal
    elements in the ``h_ancilla`` eigenbasis, and with
    :class:`NotPositiveError` if ``lam * sqrt(tau)`` is too large for the
    state to stay positive at this finite ``tau``.
    """
    basis = hermitian_eig(spec.h_ancilla, name="h_ancilla")
    chi_energy = dag(basis.eigenvectors) @ spec.chi @ basis.eigenvectors
    diag_size = float(np.max(np.abs(np.diagonal(chi_energy))))
    if diag_size > CHI_DIAGONAL_TOL:
        raise DiagonalCoherenceError(
            f"chi has diagonal weight {diag_size:.3e} in the ancilla energy basis"
        )
    thermal = thermal_state(spec.h_ancilla, spec.beta)
    return DensityMatrix(thermal.matrix + spec.coherence_amplitude * spec.chi)


def _entropy_of_probs(probs: np.ndarray) -> float:
    p = np.asarray(probs, dtype=float)
    smallest = float(p.min())
    if smallest < -PSD_TOL:
        raise NotPositiveError(f"probability {smallest:.3e} below tolerance")
    p = np.clip(p, 0.0, None)
    nonzero = p[p > 0.0]
    return float(-(nonzero * np.log(nonzero)).sum())


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """``-sum p ln p`` over the eigenvalues, with ``0 ln 0 = 0``."""
    return _entropy_of_probs(rho.eigenvalues)


def _log_on_support(spectrum: Spectrum) -> np.ndarray:
    mask = spectrum.eigenvalues > SUPPORT_EIGENVALUE_TOL
    v = spectrum.eigenvectors[:, mask]
    return (v * np.log(spectrum.eigenvalues[mask])) @ dag(v)


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Quantum relative entropy ``tr(rho ln rho) - tr(rho ln sigma)``.

    Raises :class:`SupportViolationError` (instead of returning infinity)
    when an eigenvector of ``rho`` with weight above tolerance leaks outside
    the support of ``sigma``.
    """
    if rho.dim != sigma.dim:
        raise DimensionMismatchError("states have different dimensions")
    kernel_mask = sigma.eigenvalues <= SUPPORT_EIGENVALUE_TOL
    if np.any(kernel_mask):
        kernel = sigma.spectrum.eigenvectors[:, kernel_mask]
        carried = rho.eigenvalues > SUPPORT_EIGENVALUE_TOL
        if np.any(carried):
            overlaps = np.abs(dag(kernel) @ rho.spectrum.eigenvectors[:, carried]) ** 2
            worst = float(overlaps.sum(axis=0).max())
            if worst > SUPPORT_WEIGHT_TOL:
                raise SupportViolationError(
                    f"first state has weight {worst:.3e} outside the support of the second"
                )
    cross = float(np.trace(rho.matrix @ _log_on_support(sigma.spectrum)).real)
    return -von_neumann_entropy(rho) - cross


def relative_entropy_of_coherence(rho: DensityMatrix, h_reference) -> float:
    """Coherence of ``rho`` relative to the eigenbasis of ``h_reference``.

    Computed as ``S(dephased rho) - S(rho)`` with off-diagonals zeroed in the
    reference energy basis.  Inside degenerate blocks of ``h_reference`` the
    dephasing basis is the deterministic Jacobi output for that matrix.
    """
    basis = hermitian_eig(h_reference, name="h_reference")
    if basis.dim != rho.dim:
        raise DimensionMismatchError("reference Hamiltonian dimension differs from state")
    populations = np.diagonal(dag(basis.eigenvectors) @ rho.matrix @ basis.eigenvectors).real
    value = _entropy_of_probs(populations) - von_neumann_entropy(rho)
    # The dephased state majorizes rho, so the true value is >= 0; tiny
    # negatives are cancellation noise.
    return value if value > 0.0 else 0.0


def mutual_information(rho_joint: DensityMatrix, dim_system: int, dim_ancilla: int) -> float:
    """``S(rho_S) + S(rho_A) - S(rho_SA)`` for a bipartite state."""
    if dim_system * dim_ancilla != rho_joint.dim:
        raise DimensionMismatchError(
            f"{dim_system} x {dim_ancilla} does not match joint dimension {rho_joint.dim}"
        )
    reduced_system = DensityMatrix(partial_trace(rho_joint.matrix, dim_system, dim_ancilla, "system"))
    reduced_ancilla = DensityMatrix(partial_trace(rho_joint.matrix, dim_system, dim_ancilla, "ancilla"))
    return (
        von_neumann_entropy(reduced_system)
        + von_neumann_entropy(reduced_ancilla)
        - von_neumann_entropy(rho_joint)
    )


def free_energy(rho: DensityMatrix, h, beta: float) -> float:
    """Non-equilibrium free energy ``<H> - S(rho)/beta``."""
    if not (math.isfinite(beta) and beta > 0.0):
        raise ValueError(f"beta must be finite and > 0, got {beta!r}")
    return rho.expectation(h) - von_neumann_entropy(rho) / beta


def ergotropy_exact(rho: DensityMatrix, h) -> float:
    """Maximum unitarily extractable work from ``rho`` under Hamiltonian ``h``.

    The passive competitor pairs the populations of ``rho`` sorted descending
    with the energies sorted ascending.
    """
    spectrum = hermitian_eig(h, name="hamiltonian")
    if spectrum.dim != rho.dim:
        raise DimensionMismatchError("hamiltonian dimension differs from state")
    populations_desc = rho.eigenvalues[::-1]
    passive_energy = float(np.dot(populations_desc, spectrum.eigenvalues))
    value = rho.expectation(h) - passive_energy
    return value if value > 0.0 else 0.0


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """``(1/2) || rho - sigma ||_1`` via the spectrum of the difference."""
    if rho.dim != sigma.dim:
        raise DimensionMismatchError("states have different dimensions")
    diff = hermitian_eig(rho.matrix - sigma.matrix, name="difference")
    return 0.5 * float(np.abs(diff.eigenvalues).sum())


def purity(rho: DensityMatrix) -> float:
    """``tr(rho^2)``."""
    return float(np.sum(rho.eigenvalues**2))


def is_diagonal_in(rho: DensityMatrix, h_reference, tol: float = PSD_TOL) -> bool:
    """True if ``rho`` has no off-diagonal weight in the basis of ``h_reference``."""
    basis = hermitian_eig(h_reference, name="h_reference")
    rotated = dag(basis.eigenvectors) @ rho.matrix @ basis.eigenvectors
    off = rotated - np.diag(np.diagonal(rotated))
    return max_abs(off) <= tol
