import math
import time

import numpy as np
import pytest

from qcollide.collisions import CollisionConfig, CollisionLedger, build_unitary, collide, run_trajectory
from qcollide.linalg import commutator, dag, expm_unitary, kron, max_abs
from qcollide.presets import (
    qubit_collision,
    qubit_hamiltonian,
    maximally_mixed,
    three_level_collision,
    three_level_state,
    SIGMA_X,
)
from qcollide.rng import SplitMix64
from qcollide.presets import random_collision
from qcollide.states import (
    AncillaSpec,
    DensityMatrix,
    thermal_state,
    trace_distance,
    von_neumann_entropy,
)
from qcollide.verify import entropic_identity_residuals, halving_ratios

LN3 = math.log(3.0)


class TestCollisionConfig:
    def test_qubit_example_conserves_energy(self):
        assert qubit_collision().strict_energy_conserving

    def test_generic_interaction_does_not(self):
        cfg = qubit_collision()
        spec = cfg.ancilla
        v = kron(SIGMA_X, SIGMA_X) + 0.3 * kron(SIGMA_X, np.eye(2))
        assert not CollisionConfig(cfg.h_system, v, spec).strict_energy_conserving

    def test_three_level_fixture_conserves_energy(self):
        assert three_level_collision(1e-3).strict_energy_conserving

    def test_rejects_infinite_temperature(self):
        spec = AncillaSpec(qubit_hamiltonian(), 0.0, SIGMA_X.copy(), 0.1, 1e-2)
        with pytest.raises(ValueError):
            CollisionConfig(qubit_hamiltonian(), kron(SIGMA_X, SIGMA_X), spec)


class TestBuildUnitary:
    def test_free_evolution_factorizes(self):
        tau = 0.3
        spec = AncillaSpec(qubit_hamiltonian(0.7), LN3, SIGMA_X.copy(), 0.0, tau)
        cfg = CollisionConfig(qubit_hamiltonian(1.3), np.zeros((4, 4)), spec)
        u = build_unitary(cfg)
        want = kron(expm_unitary(qubit_hamiltonian(1.3), tau), expm_unitary(qubit_hamiltonian(0.7), tau))
        assert max_abs(u - want) <= 1e-12

    def test_unitarity_and_commutant(self):
        cfg = qubit_collision(tau=1e-2)
        u = cfg.unitary
        assert max_abs(dag(u) @ u - np.eye(4)) <= 1e-10
        assert max_abs(commutator(u, cfg.free_hamiltonian)) <= 1e-10


class TestCollide:
    def test_no_interaction_is_inert(self):
        # free evolution with a commuting system state and thermal ancillae
        spec = AncillaSpec(qubit_hamiltonian(), LN3, SIGMA_X.copy(), 0.0, 1e-2)
        cfg = CollisionConfig(qubit_hamiltonian(), np.zeros((4, 4)), spec)
        rho = DensityMatrix(np.diag([0.3, 0.7]))
        out = collide(rho, cfg)
        assert max_abs(out.system.matrix - rho.matrix) <= 1e-12
        for name in (
            "d_energy", "heat_ancilla", "work", "coherent_work", "incoherent_heat",
            "entropy_production", "mutual_info", "rel_entropy_ancilla", "d_free_energy",
        ):
            assert abs(getattr(out.ledger, name)) <= 1e-12

    def test_global_gibbs_fixed_point(self):
        cfg = qubit_collision(lam=0.0, tau=5e-2)
        rho = thermal_state(cfg.h_system, LN3)
        out = collide(rho, cfg)
        assert abs(out.ledger.heat_ancilla) <= 1e-9
        assert abs(out.ledger.entropy_production) <= 1e-9
        assert trace_distance(out.system, rho) <= 1e-12

    def test_ledger_decomposition(self):
        out = collide(maximally_mixed(2), qubit_collision(tau=1e-2))
        led = out.ledger
        assert led.entropy_production == led.mutual_info + led.rel_entropy_ancilla
        assert led.work == led.d_energy + led.heat_ancilla

    def test_joint_entropy_is_unitary_invariant(self):
        cfg = qubit_collision(tau=2e-2)
        rho = DensityMatrix(np.array([[0.6, 0.1 + 0.2j], [0.1 - 0.2j, 0.4]]))
        out = collide(rho, cfg)
        before = von_neumann_entropy(rho) + von_neumann_entropy(cfg.ancilla_state)
        assert abs(von_neumann_entropy(out.joint) - before) <= 1e-9
        # the ledger's correlation entry is the joint-state mutual information
        from qcollide.states import mutual_information

        assert abs(mutual_information(out.joint, 2, 2) - out.ledger.mutual_info) <= 1e-12

    def test_qubit_ledger_within_half_order_envelope(self):
        # finite-duration ledger agrees with the leading-order identities
        tau = 1e-3
        cfg = qubit_collision(tau=tau, lam=0.3)
        led = collide(DensityMatrix(0.5 * np.eye(2)), cfg).ledger
        beta = cfg.ancilla.beta
        d_coherence = led.coherence_after - led.coherence_before
        envelope = tau**1.5
        assert abs(led.d_energy - (led.coherent_work + led.incoherent_heat)) <= envelope
        assert abs(led.mutual_info - (-beta * led.d_free_energy - d_coherence)) <= envelope
        assert abs(led.rel_entropy_ancilla - (beta * led.coherent_work + d_coherence)) <= envelope
        assert abs(led.entropy_production - beta * (led.coherent_work - led.d_free_energy)) <= envelope


class TestRandomizedPositivity:
    def test_exact_inequalities_hold(self):
        # generic Hermitian interactions, shifted to zero thermal first moment
        rng = SplitMix64(20260810)
        start = time.perf_counter()
        for _ in range(1000):
            rho, cfg = random_collision(rng, eigenoperator=False)
            led = collide(rho, cfg).ledger
            assert led.entropy_production >= -1e-9
            assert led.mutual_info >= -1e-9
            assert led.rel_entropy_ancilla >= -1e-9
        assert time.perf_counter() - start < 60.0


@pytest.fixture(scope="module")
def residuals():
    taus = (5e-4, 2.5e-4, 1.25e-4, 6.25e-5)
    return entropic_identity_residuals(three_level_collision, three_level_state(), taus)


class TestPerturbativeScaling:
    def test_first_law_half_order(self, residuals):
        for ratio in halving_ratios(residuals.first_law):
            assert 2.4 <= ratio <= 3.2

    def test_entropy_production_half_order_envelope(self, residuals):
        # The entropy-production defect decays at least as fast as tau^1.5;
        # an exact cancellation makes it second order here, so only the lower
        # edge of the generic window applies.
        for ratio in halving_ratios(residuals.entropy_production):
            assert ratio >= 2.4
        envelope = 3.0 * max(r / t**1.5 for r, t in zip(residuals.entropy_production, residuals.taus))
        for r, t in zip(residuals.entropy_production, residuals.taus):
            assert r <= envelope * t**1.5


class TestRunTrajectory:
    def test_empty_run(self):
        record = run_trajectory(maximally_mixed(2), [qubit_collision()], 0)
        assert record.steps == []
        assert record.final_state is None

    def test_times_and_prefix_sums(self):
        cfg = qubit_collision(tau=1e-2)
        record = run_trajectory(maximally_mixed(2), [cfg], 25)
        times = [s.time for s in record.steps]
        assert np.allclose(np.diff(times), 1e-2)
        total = CollisionLedger.zero()
        for step, cum in zip(record.steps, record.cumulative):
            total = total + step.ledger
            assert abs(total.entropy_production - cum.entropy_production) <= 1e-12
            assert abs(total.d_energy - cum.d_energy) <= 1e-12
        assert abs(record.species_totals["A"].d_energy - record.cumulative[-1].d_energy) <= 1e-12

    def test_relaxation_to_thermal(self):
        # thermal ancillae make the Gibbs state of H_S the exact fixed point
        cfg = qubit_collision(lam=0.0, tau=5e-2)
        record = run_trajectory(DensityMatrix(np.diag([0.9, 0.1])), [cfg], 400)
        target = thermal_state(cfg.h_system, LN3)
        assert trace_distance(record.final_state, target) <= 1e-6

    def test_round_robin_single_species_matches_single(self):
        cfg = qubit_collision(tau=1e-2)
        a = run_trajectory(maximally_mixed(2), [cfg], 10, schedule="single")
        b = run_trajectory(maximally_mixed(2), [cfg], 10, schedule="round-robin")
        assert trace_distance(a.final_state, b.final_state) == 0.0

    def test_two_bath_heat_flow(self):
        # hot species feeds energy in, cold species takes it out, entropy grows
        hot = qubit_collision(beta=0.4, lam=0.0, tau=2e-2, label="hot")
        cold = qubit_collision(beta=2.2, g=0.8, lam=0.0, tau=2e-2, label="cold")
        record = run_trajectory(maximally_mixed(2), [hot, cold], 600, schedule="round-robin")
        tail = record.species_totals
        assert tail["hot"].heat_ancilla < 0.0  # hot ancillae lose energy
        assert tail["cold"].heat_ancilla > 0.0
        assert record.cumulative[-1].entropy_production >= -1e-9

    def test_schedule_validation(self):
        cfg = qubit_collision()
        with pytest.raises(ValueError):
            run_trajectory(maximally_mixed(2), [cfg, cfg], 1, schedule="single")
        with pytest.raises(ValueError):
            run_trajectory(maximally_mixed(2), [cfg], 1, schedule="zigzag")
        with pytest.raises(ValueError):
            run_trajectory(maximally_mixed(2), [cfg, cfg], 1, schedule="round-robin")
