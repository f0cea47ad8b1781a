"""Stroboscopic collision dynamics with an exact per-collision ledger.

One collision evolves ``rho_S (x) rho_A`` with the joint unitary generated by
``H_S + H_A + V / sqrt(tau)`` for a duration ``tau``, then traces out the
ancilla.  Every energetic and entropic quantity of the stroke is recorded
exactly from the pre/post states; the finite-duration coherent work and
incoherent heat are ``tau`` times the master-equation rate formulas evaluated
at the pre-collision state.

Sign conventions: ``heat_ancilla > 0`` means the ancilla gained energy, and
the switching work is stored as ``work = d_energy + heat_ancilla``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from functools import cached_property

import numpy as np

from .errors import DimensionMismatchError
from .lindblad import coherent_generator, dissipator_apply
from .linalg import commutator, dag, expm_unitary, kron, max_abs, partial_trace, require_hermitian
from .states import (
    AncillaSpec,
    DensityMatrix,
    free_energy,
    relative_entropy,
    relative_entropy_of_coherence,
    thermal_state,
    von_neumann_entropy,
    weakly_coherent_state,
)

ENERGY_CONSERVING_RTOL = 1e-10
UNITARITY_TOL = 1e-10


class CollisionConfig:
    """Ingredients of one system-ancilla collision species.

    ``v_interaction`` is the pre-scaling potential on the joint space (units
    energy * sqrt(time)); the realized joint Hamiltonian divides it by
    ``sqrt(tau)``.  Derived objects (joint unitary, prepared ancilla state,
    coherent operator) are computed lazily and cached, so a config can be
    reused across many collisions at no extra cost.
    """

    def __init__(self, h_system, v_interaction, ancilla: AncillaSpec, label: str = "A"):
        self.h_system = require_hermitian(h_system, name="h_system")
        self.v_interaction = require_hermitian(v_interaction, name="v_interaction")
        self.ancilla = ancilla
        self.label = str(label)
        self.dim_system = self.h_system.shape[0]
        self.dim_ancilla = ancilla.dim
        if self.v_interaction.shape[0] != self.dim_system * self.dim_ancilla:
            raise DimensionMismatchError(
                f"interaction dimension {self.v_interaction.shape[0]} is not "
                f"{self.dim_system} x {self.dim_ancilla}"
            )
        if not (math.isfinite(ancilla.beta) and ancilla.beta > 0.0):
            raise ValueError("collisions need a finite positive ancilla beta")
        free = self.free_hamiltonian
        defect = max_abs(commutator(self.v_interaction, free))
        scale = max(1.0, max_abs(self.v_interaction) * max_abs(free))
        self.strict_energy_conserving = defect <= ENERGY_CONSERVING_RTOL * scale

    @cached_property
    def free_hamiltonian(self) -> np.ndarray:
        """``H_S (x) I + I (x) H_A`` on the joint space."""
        return kron(self.h_system, np.eye(self.dim_ancilla)) + kron(
            np.eye(self.dim_system), self.ancilla.h_ancilla
        )

    @cached_property
    def unitary(self) -> np.ndarray:
        return build_unitary(self)

    @cached_property
    def ancilla_state(self) -> DensityMatrix:
        return weakly_coherent_state(self.ancilla)

    @cached_property
    def thermal_ancilla(self) -> DensityMatrix:
        return thermal_state(self.ancilla.h_ancilla, self.ancilla.beta)

    @cached_property
    def coherent_op(self) -> np.ndarray:
        return coherent_generator(self.v_interaction, self.ancilla.chi, self.dim_system, self.dim_ancilla)

    def subdivided(self, parts: int) -> "CollisionConfig":
        """Equivalent species config for one sub-collision of a round of ``parts``.

        Duration shrinks to ``tau / parts`` while the interaction picks up a
        factor ``sqrt(parts)`` and the coherence strength compensates so the
        injected coherence amplitude ``lam * sqrt(tau)`` is unchanged.
        """
        if parts == 1:
            return self
        root = math.sqrt(parts)
        spec = self.ancilla
        sub_spec = AncillaSpec(
            h_ancilla=spec.h_ancilla,
            beta=spec.beta,
            chi=spec.chi,
            lam=spec.lam * root,
            tau=spec.tau / parts,
        )
        return CollisionConfig(self.h_system, root * self.v_interaction, sub_spec, label=self.label)


def build_unitary(cfg: CollisionConfig) -> np.ndarray:
    """Joint collision unitary ``exp[-i tau (H_S + H_A + V / sqrt(tau))]``."""
    tau = cfg.ancilla.tau
    h_joint = cfg.free_hamiltonian + cfg.v_interaction / math.sqrt(tau)
    u = expm_unitary(h_joint, tau)
    unitarity = max_abs(dag(u) @ u - np.eye(u.shape[0]))
    if unitarity > UNITARITY_TOL:
        raise RuntimeError(f"unitary defect {unitarity:.3e} beyond tolerance")
    if cfg.strict_energy_conserving:
        free = cfg.free_hamiltonian
        defect = max_abs(commutator(u, free))
        if defect > 1e-8 * max(1.0, max_abs(free)):
            raise RuntimeError(f"energy-conserving unitary defect {defect:.3e}")
    return u


@dataclass(frozen=True)
class CollisionLedger:
    """Exact thermodynamic record of one collision (or one round).

    All entries are additive over strokes.  ``entropy_production`` is the sum
    ``mutual_info + rel_entropy_ancilla`` by construction.
    """

    d_energy: float
    heat_ancilla: float
    work: float
    coherent_work: float
    incoherent_heat: float
    entropy_production: float
    mutual_info: float
    rel_entropy_ancilla: float
    coherence_before: float
    coherence_after: float
    d_free_energy: float

    @classmethod
    def zero(cls) -> "CollisionLedger":
        return cls(*([0.0] * len(fields(cls))))

    def __add__(self, other: "CollisionLedger") -> "CollisionLedger":
        return CollisionLedger(
            *(getattr(self, f.name) + getattr(other, f.name) for f in fields(self))
        )


@dataclass(frozen=True)
class CollisionOutcome:
    """Post-collision states together with the stroke ledger."""

    system: DensityMatrix
    ancilla: DensityMatrix
    joint: DensityMatrix
    ledger: CollisionLedger


def collide(rho_system: DensityMatrix, cfg: CollisionConfig) -> CollisionOutcome:
    """Run one stroke of the stroboscopic map and account for it exactly."""
    if rho_system.dim != cfg.dim_system:
        raise DimensionMismatchError("system state dimension differs from config")
    rho_a = cfg.ancilla_state
    u = cfg.unitary
    joint_after = DensityMatrix(u @ kron(rho_system.matrix, rho_a.matrix) @ dag(u))
    rho_s_after = DensityMatrix(
        partial_trace(joint_after.matrix, cfg.dim_system, cfg.dim_ancilla, "system")
    )
    rho_a_after = DensityMatrix(
        partial_trace(joint_after.matrix, cfg.dim_system, cfg.dim_ancilla, "ancilla")
    )

    h_s = cfg.h_system
    h_a = cfg.ancilla.h_ancilla
    beta = cfg.ancilla.beta
    tau = cfg.ancilla.tau

    d_energy = rho_s_after.expectation(h_s) - rho_system.expectation(h_s)
    heat_ancilla = rho_a_after.expectation(h_a) - rho_a.expectation(h_a)
    work = d_energy + heat_ancilla

    z = np.trace(commutator(cfg.coherent_op, h_s) @ rho_system.matrix)
    coherent_work = float((1j * cfg.ancilla.lam * tau * z).real)
    dissipated = dissipator_apply(
        cfg.v_interaction, rho_system.matrix, cfg.thermal_ancilla.matrix, cfg.dim_system, cfg.dim_ancilla
    )
    incoherent_heat = tau * float(np.trace(h_s @ dissipated).real)

    mutual = (
        von_neumann_entropy(rho_s_after)
        + von_neumann_entropy(rho_a_after)
        - von_neumann_entropy(joint_after)
    )
    rel_ancilla = relative_entropy(rho_a_after, rho_a)
    ledger = CollisionLedger(
        d_energy=d_energy,
        heat_ancilla=heat_ancilla,
        work=work,
        coherent_work=coherent_work,
        incoherent_heat=incoherent_heat,
        entropy_production=mutual + rel_ancilla,
        mutual_info=mutual,
        rel_entropy_ancilla=rel_ancilla,
        coherence_before=relative_entropy_of_coherence(rho_a, h_a),
        coherence_after=relative_entropy_of_coherence(rho_a_after, h_a),
        d_free_energy=free_energy(rho_s_after, h_s, beta) - free_energy(rho_system, h_s, beta),
    )
    return CollisionOutcome(system=rho_s_after, ancilla=rho_a_after, joint=joint_after, ledger=ledger)


@dataclass(frozen=True)
class TrajectoryStep:
    """State after one full round of collisions, with that round's ledger."""

    index: int
    time: float
    state: DensityMatrix
    ledger: CollisionLedger


@dataclass(frozen=True)
class TrajectoryRecord:
    """Stroboscopic run: per-round steps, running sums, per-species totals."""

    steps: list[TrajectoryStep]
    cumulative: list[CollisionLedger]
    species_totals: dict[str, CollisionLedger]

    @property
    def final_state(self) -> DensityMatrix | None:
        return self.steps[-1].state if self.steps else None


def run_trajectory(
    rho0: DensityMatrix,
    cfgs: list[CollisionConfig],
    n_steps: int,
    schedule: str = "single",
) -> TrajectoryRecord:
    """Run repeated collisions against fresh, identically prepared ancillae.

    ``schedule="single"`` accepts exactly one species.  ``"round-robin"``
    interleaves ``m`` species in config order: each sub-collision lasts
    ``tau/m`` with the interaction rescaled by ``sqrt(m)``, so one recorded
    step is a full round of duration ``tau`` and cumulative columns compare
    directly with the additive continuous-time generator.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    if not cfgs:
        raise ValueError("need at least one collision config")
    if schedule == "single":
        if len(cfgs) != 1:
            raise ValueError("single-species schedule takes exactly one config")
    elif schedule != "round-robin":
        raise ValueError(f"unknown schedule {schedule!r}")
    tau = cfgs[0].ancilla.tau
    dim = cfgs[0].dim_system
    labels = [cfg.label for cfg in cfgs]
    if len(set(labels)) != len(labels):
        raise ValueError("species labels must be distinct")
    for cfg in cfgs:
        if cfg.dim_system != dim:
            raise DimensionMismatchError("species disagree on the system dimension")
        if abs(cfg.ancilla.tau - tau) > 1e-15 * max(tau, 1.0):
            raise ValueError("species must share the round duration tau")

    m = len(cfgs)
    subs = [cfg.subdivided(m) for cfg in cfgs]
    totals = {label: CollisionLedger.zero() for label in labels}
    running = CollisionLedger.zero()
    steps: list[TrajectoryStep] = []
    cumulative: list[CollisionLedger] = []
    state = rho0
    for n in range(1, n_steps + 1):
        round_ledger = CollisionLedger.zero()
        for label, sub in zip(labels, subs):
            outcome = collide(state, sub)
            state = outcome.system
            round_ledger = round_ledger + outcome.ledger
            totals[label] = totals[label] + outcome.ledger
        running = running + round_ledger
        steps.append(TrajectoryStep(index=n, time=n * tau, state=state, ledger=round_ledger))
        cumulative.append(running)
    return TrajectoryRecord(steps=steps, cumulative=cumulative, species_totals=totals)
