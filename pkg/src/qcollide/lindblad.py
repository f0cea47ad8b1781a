"""Continuous-time generator built from the collision ingredients.

The generator acts as ``L(rho) = -i [H_eff, rho] + sum_j D_j(rho)`` with
``H_eff = H_S + sum_j lam_j G_j``.  Superoperators are stored as dense
``d^2 x d^2`` matrices acting on column-stacked density matrices, which keeps
steady-state solves and norm estimates to plain dense linear algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DegenerateSteadyStateError,
    DimensionMismatchError,
    EigenoperatorError,
    FirstMomentError,
    PositivityLostError,
    RankDeficientError,
    StepSizeError,
    TraceDriftError,
)
from .linalg import (
    commutator,
    dag,
    double_commutator,
    hermitian_eig,
    kron,
    max_abs,
    partial_trace,
    require_hermitian,
)
from .states import DensityMatrix, AncillaSpec, thermal_state

FIRST_MOMENT_TOL = 1e-9
EIGENOPERATOR_TOL = 1e-9
DETAILED_BALANCE_RTOL = 1e-10
INTEGRATOR_TRACE_TOL = 1e-8
INTEGRATOR_PSD_TOL = 1e-6
STEADY_STATE_RESIDUAL_TOL = 1e-9
RANK_EIGENVALUE_TOL = 1e-13


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(matrix, dtype=complex).reshape(-1, order="F")


def unvec(vector: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(vector, dtype=complex).reshape((dim, dim), order="F")


def superoperator_matrix(apply_map, dim: int) -> np.ndarray:
    """Dense matrix of a linear map on operators, built column by column.

    Column ``k`` is the column-stacked image of the ``k``-th matrix unit.
    """
    columns = np.empty((dim * dim, dim * dim), dtype=complex)
    for k in range(dim * dim):
        unit = np.zeros((dim, dim), dtype=complex)
        unit[k % dim, k // dim] = 1.0
        columns[:, k] = vec(apply_map(unit))
    return columns


def coherent_generator(v_interaction, chi, dim_system: int, dim_ancilla: int) -> np.ndarray:
    """Effective driving operator ``tr_A( V (I (x) chi) )`` on the system.

    Hermitian whenever ``V`` and ``chi`` are; the output is symmetrized after
    passing that gate.
    """
    lifted = np.asarray(v_interaction, dtype=complex) @ kron(np.eye(dim_system), chi)
    g = partial_trace(lifted, dim_system, dim_ancilla, "system")
    return require_hermitian(g, name="coherent generator")


def thermal_first_moment(v_interaction, rho_thermal, dim_system: int, dim_ancilla: int) -> np.ndarray:
    """``tr_A( V (I (x) rho_th) )``; must vanish for the dissipator recipe."""
    lifted = np.asarray(v_interaction, dtype=complex) @ kron(np.eye(dim_system), rho_thermal)
    return partial_trace(lifted, dim_system, dim_ancilla, "system")


def dissipator_apply(v_interaction, rho_system, rho_thermal, dim_system: int, dim_ancilla: int) -> np.ndarray:
    """Thermal dissipator ``-(1/2) tr_A [V, [V, rho (x) rho_th]]``."""
    joint = kron(rho_system, rho_thermal)
    nested = double_commutator(v_interaction, joint)
    return -0.5 * partial_trace(nested, dim_system, dim_ancilla, "system")


@dataclass(frozen=True, eq=False)
class SpeciesTerm:
    """Per-environment-species piece of the generator."""

    label: str
    beta: float
    lam: float
    coherent_op: np.ndarray
    dissipator: np.ndarray

    def heat_rate(self, rho_matrix: np.ndarray, h_system: np.ndarray) -> float:
        dim = h_system.shape[0]
        image = unvec(self.dissipator @ vec(rho_matrix), dim)
        return float(np.trace(h_system @ image).real)

    def work_rate(self, rho_matrix: np.ndarray, h_system: np.ndarray) -> float:
        z = np.trace(commutator(self.coherent_op, h_system) @ rho_matrix)
        return float((1j * self.lam * z).real)


class LindbladGenerator:
    """Dense master-equation generator with per-species bookkeeping."""

    def __init__(self, h_eff: np.ndarray, species: list[SpeciesTerm]):
        self.h_eff = require_hermitian(h_eff, name="effective Hamiltonian")
        if not species:
            raise ValueError("generator needs at least one species term")
        self.species = list(species)
        self.dim = self.h_eff.shape[0]
        expected = self.dim * self.dim
        for term in self.species:
            if term.dissipator.shape != (expected, expected):
                raise DimensionMismatchError("dissipator dimension mismatch")
        self.dissipator = sum(term.dissipator for term in self.species)

    def apply(self, rho_matrix: np.ndarray) -> np.ndarray:
        """``-i [H_eff, rho] + D(rho)``."""
        drift = -1j * commutator(self.h_eff, rho_matrix)
        return drift + unvec(self.dissipator @ vec(rho_matrix), self.dim)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Full generator as a matrix on column-stacked states."""
        return superoperator_matrix(self.apply, self.dim)

    @cached_property
    def norm_estimate(self) -> float:
        """Spectral-norm estimate via 20 power-iteration steps on ``L^dag L``."""
        m = self.matrix
        gram = dag(m) @ m
        x = np.ones(m.shape[0], dtype=complex)
        x /= np.linalg.norm(x)
        for _ in range(20):
            y = gram @ x
            norm = np.linalg.norm(y)
            if norm == 0.0:
                return 0.0
            x = y / norm
        rayleigh = float(np.real(np.conj(x) @ (gram @ x)))
        return math.sqrt(max(rayleigh, 0.0))


def build_generator(h_system, spec: AncillaSpec, v_interaction, label: str = "A") -> LindbladGenerator:
    """Assemble the single-species generator from collision ingredients.

    Requires the interaction to have no thermal first moment (shift ``V`` by
    the offending system operator otherwise); raises
    :class:`FirstMomentError` when violated.
    """
    h_s = require_hermitian(h_system, name="h_system")
    v = require_hermitian(v_interaction, name="v_interaction")
    dim_system = h_s.shape[0]
    dim_ancilla = spec.dim
    if v.shape[0] != dim_system * dim_ancilla:
        raise DimensionMismatchError("interaction does not live on the joint space")
    rho_th = thermal_state(spec.h_ancilla, spec.beta).matrix
    moment = thermal_first_moment(v, rho_th, dim_system, dim_ancilla)
    if max_abs(moment) > FIRST_MOMENT_TOL:
        raise FirstMomentError(
            f"tr_A(V rho_th) has weight {max_abs(moment):.3e}; shift V to remove it"
        )
    g = coherent_generator(v, spec.chi, dim_system, dim_ancilla)
    dissipator = superoperator_matrix(
        lambda m: dissipator_apply(v, m, rho_th, dim_system, dim_ancilla), dim_system
    )
    term = SpeciesTerm(label=label, beta=spec.beta, lam=spec.lam, coherent_op=g, dissipator=dissipator)
    return LindbladGenerator(h_eff=h_s + spec.lam * g, species=[term])


def multi_bath_generator(
    h_system, species: list[tuple[AncillaSpec, np.ndarray]], labels: list[str] | None = None
) -> LindbladGenerator:
    """Additive generator for several independent ancilla species."""
    if not species:
        raise ValueError("need at least one species")
    if labels is None:
        labels = [f"species-{i}" for i in range(len(species))]
    if len(labels) != len(species):
        raise ValueError("labels length does not match species")
    singles = [
        build_generator(h_system, spec, v, label=label)
        for (spec, v), label in zip(species, labels)
    ]
    h_s = require_hermitian(h_system, name="h_system")
    terms = [gen.species[0] for gen in singles]
    h_eff = h_s + sum(term.lam * term.coherent_op for term in terms)
    return LindbladGenerator(h_eff=h_eff, species=terms)


@dataclass(frozen=True, eq=False)
class EigenoperatorCoupling:
    """One ``g L^dag (x) A + h.c.`` coupling between matched lowering operators.

    ``lowering_system`` and ``lowering_ancilla`` must lower their respective
    Hamiltonians by the same Bohr frequency.
    """

    lowering_system: np.ndarray
    lowering_ancilla: np.ndarray
    frequency: float
    amplitude: complex

    def validate(self, h_system=None, h_ancilla=None, tol: float = EIGENOPERATOR_TOL) -> None:
        for h, op, side in (
            (h_system, self.lowering_system, "system"),
            (h_ancilla, self.lowering_ancilla, "ancilla"),
        ):
            if h is None:
                continue
            h = np.asarray(h, dtype=complex)
            defect = commutator(h, op) + self.frequency * np.asarray(op, dtype=complex)
            scale = max(1.0, max_abs(h) * max_abs(np.asarray(op)))
            if max_abs(defect) > tol * scale:
                raise EigenoperatorError(
                    f"{side} operator is not an eigenoperator at frequency {self.frequency}"
                )


def eigenoperator_interaction(couplings: list[EigenoperatorCoupling], dim_system: int, dim_ancilla: int) -> np.ndarray:
    """Interaction ``sum_k g_k L_k^dag (x) A_k + h.c.`` on the joint space."""
    v = np.zeros((dim_system * dim_ancilla,) * 2, dtype=complex)
    for c in couplings:
        term = c.amplitude * kron(dag(np.asarray(c.lowering_system, dtype=complex)), c.lowering_ancilla)
        v += term + dag(term)
    return v


@dataclass(frozen=True)
class JumpRates:
    """Downward/upward rates of one jump channel."""

    frequency: float
    gamma_minus: float
    gamma_plus: float


def eigenoperator_dissipator(
    couplings: list[EigenoperatorCoupling],
    h_ancilla,
    beta: float,
    h_system=None,
) -> tuple[list[JumpRates], np.ndarray]:
    """Thermal jump dissipator ``sum_k gamma_k^- D[L_k] + gamma_k^+ D[L_k^dag]``.

    Rates are thermal averages ``gamma^- = |g|^2 <A A^dag>``,
    ``gamma^+ = |g|^2 <A^dag A>`` and are verified to satisfy detailed balance
    ``gamma^+ / gamma^- = exp(-beta omega)`` to ``1e-10`` relative.
    """
    if not couplings:
        raise ValueError("need at least one coupling")
    rho_th = thermal_state(h_ancilla, beta).matrix
    dim_system = np.asarray(couplings[0].lowering_system).shape[0]
    rates: list[JumpRates] = []
    channels: list[tuple[float, np.ndarray]] = []
    for c in couplings:
        c.validate(h_system=h_system, h_ancilla=h_ancilla)
        a_op = np.asarray(c.lowering_ancilla, dtype=complex)
        l_op = np.asarray(c.lowering_system, dtype=complex)
        if l_op.shape[0] != dim_system:
            raise DimensionMismatchError("couplings act on different system dimensions")
        weight = abs(c.amplitude) ** 2
        gamma_minus = weight * float(np.trace(a_op @ dag(a_op) @ rho_th).real)
        gamma_plus = weight * float(np.trace(dag(a_op) @ a_op @ rho_th).real)
        target = math.exp(-beta * c.frequency)
        if gamma_minus <= 0.0:
            if gamma_plus > 0.0:
                raise EigenoperatorError("vanishing downward rate with nonzero upward rate")
        elif abs(gamma_plus / gamma_minus - target) > DETAILED_BALANCE_RTOL * target:
            raise EigenoperatorError(
                f"rates {gamma_plus:.6e}/{gamma_minus:.6e} break detailed balance "
                f"at frequency {c.frequency}"
            )
        rates.append(JumpRates(frequency=c.frequency, gamma_minus=gamma_minus, gamma_plus=gamma_plus))
        channels.append((gamma_minus, l_op))
        channels.append((gamma_plus, dag(l_op)))

    def apply_map(rho):
        out = np.zeros_like(rho)
        for rate, jump in channels:
            if rate == 0.0:
                continue
            jj = dag(jump) @ jump
            out += rate * (jump @ rho @ dag(jump) - 0.5 * (jj @ rho + rho @ jj))
        return out

    return rates, superoperator_matrix(apply_map, dim_system)


def integrate(
    gen: LindbladGenerator, rho0: DensityMatrix, t_final: float, dt: float
) -> list[tuple[float, DensityMatrix]]:
    """Fixed-step RK4 integration of the master equation.

    The step must satisfy ``dt <= 0.1 / ||L||``.  After each step the trace
    drift is asserted (never renormalized), the state is symmetrized, and
    positivity is checked against a loosened gate (``-1e-6``), since a coarse
    but admissible step can push eigenvalues slightly negative.
    Returns ``(time, state)`` snapshots including the initial one.
    """
    if not (math.isfinite(dt) and dt > 0.0):
        raise ValueError(f"dt must be finite and > 0, got {dt!r}")
    if not (math.isfinite(t_final) and t_final >= 0.0):
        raise ValueError(f"t_final must be finite and >= 0, got {t_final!r}")
    norm = gen.norm_estimate
    if norm > 0.0 and dt > 0.1 / norm:
        raise StepSizeError(f"dt={dt} exceeds stability bound {0.1 / norm:.3e}")
    l_matrix = gen.matrix
    dim = gen.dim

    n_whole = int(math.floor(t_final / dt + 1e-9))
    remainder = t_final - n_whole * dt
    steps = [dt] * n_whole
    if remainder > 1e-12 * max(t_final, 1.0):
        steps.append(remainder)

    trajectory: list[tuple[float, DensityMatrix]] = [(0.0, rho0)]
    state = vec(rho0.matrix)
    t = 0.0
    for h in steps:
        k1 = l_matrix @ state
        k2 = l_matrix @ (state + 0.5 * h * k1)
        k3 = l_matrix @ (state + 0.5 * h * k2)
        k4 = l_matrix @ (state + h * k3)
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
        rho = unvec(state, dim)
        drift = abs(float(np.trace(rho).real) - 1.0)
        if drift > INTEGRATOR_TRACE_TOL:
            raise TraceDriftError(f"trace drifted by {drift:.3e} at t={t}")
        rho = 0.5 * (rho + dag(rho))
        state = vec(rho)
        try:
            snapshot = DensityMatrix(rho, psd_tol=INTEGRATOR_PSD_TOL)
        except Exception as exc:
            raise PositivityLostError(f"state left the positive cone at t={t}: {exc}") from exc
        trajectory.append((t, snapshot))
    return trajectory


def steady_state(gen: LindbladGenerator) -> DensityMatrix:
    """Solve ``L(rho) = 0`` with unit trace as a dense linear system.

    The first row of the generator matrix (the equation for the (0, 0)
    entry, which is linearly dependent through trace annihilation) is
    replaced by the vectorized trace constraint.  Uniqueness is asserted by a
    rank check of the constrained system.
    """
    if gen.dim > 16:
        raise DimensionMismatchError("steady-state solve supports dimension <= 16")
    size = gen.dim * gen.dim
    constrained = gen.matrix.copy()
    trace_row = np.zeros(size, dtype=complex)
    trace_row[:: gen.dim + 1] = 1.0
    constrained[0, :] = trace_row
    rhs = np.zeros(size, dtype=complex)
    rhs[0] = 1.0
    if np.linalg.matrix_rank(constrained) < size:
        raise DegenerateSteadyStateError("steady state is not unique (rank-deficient system)")
    solution = np.linalg.solve(constrained, rhs)
    rho = unvec(solution, gen.dim)
    rho = 0.5 * (rho + dag(rho))
    residual = max_abs(gen.apply(rho))
    if residual > STEADY_STATE_RESIDUAL_TOL:
        raise DegenerateSteadyStateError(f"steady-state residual {residual:.3e} too large")
    return DensityMatrix(rho)


@dataclass(frozen=True)
class RateLedger:
    """Instantaneous thermodynamic rates at a given state."""

    energy_rate: float
    coherent_work_rates: tuple[float, ...]
    incoherent_heat_rates: tuple[float, ...]
    entropy_rate: float
    entropy_production_rate: float

    @property
    def coherent_work_rate(self) -> float:
        return float(sum(self.coherent_work_rates))

    @property
    def incoherent_heat_rate(self) -> float:
        return float(sum(self.incoherent_heat_rates))


def rates(gen: LindbladGenerator, rho: DensityMatrix, h_system) -> RateLedger:
    """Energy, work, heat and entropy rates of the generator at ``rho``.

    The entropy rate uses ``-tr(L(rho) ln rho)``, valid because the generator
    annihilates the trace; rank-deficient states are reported as errors
    rather than regularized.
    """
    h_s = require_hermitian(h_system, name="h_system")
    if rho.dim != gen.dim:
        raise DimensionMismatchError("state dimension differs from generator")
    smallest = float(rho.eigenvalues[0])
    if smallest < RANK_EIGENVALUE_TOL:
        raise RankDeficientError(f"eigenvalue {smallest:.3e} too small for ln(rho)")
    image = gen.apply(rho.matrix)
    log_rho = rho.spectrum.apply(np.log)
    entropy_rate = -float(np.trace(image @ log_rho).real)
    work = tuple(term.work_rate(rho.matrix, h_s) for term in gen.species)
    heat = tuple(term.heat_rate(rho.matrix, h_s) for term in gen.species)
    energy_rate = float(np.trace(h_s @ image).real)
    closure = abs(energy_rate - (sum(work) + sum(heat)))
    scale = max(1.0, abs(energy_rate), sum(abs(x) for x in work) + sum(abs(x) for x in heat))
    if closure > 1e-10 * scale:
        raise ValueError(
            f"energy rate {energy_rate!r} does not close against work+heat "
            f"(defect {closure:.3e}); h_system inconsistent with the generator?"
        )
    pi = entropy_rate - sum(term.beta * q for term, q in zip(gen.species, heat))
    return RateLedger(
        energy_rate=energy_rate,
        coherent_work_rates=work,
        incoherent_heat_rates=heat,
        entropy_rate=entropy_rate,
        entropy_production_rate=pi,
    )
