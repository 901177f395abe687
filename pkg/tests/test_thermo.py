import math

import numpy as np
import pytest

from orbitmi.errors import (
    EnergyNotConserved,
    EqualTemperatures,
    InfeasibleMarginals,
    MarginalsNotThermal,
    NonPositiveTemperature,
    SpectrumMismatch,
)
from orbitmi.extremize import build_rho_max, strong_energy_unitary
from orbitmi.qcore import DensityMatrix, mutual_information, spectrum_of
from orbitmi.thermo import (
    LN2,
    ThermalScenario,
    bits_to_nats,
    collision_simulate,
    free_energy,
    gibbs_state,
    heat_flow_bound_check,
    max_anomalous_heat,
    nats_to_bits,
    partial_swap_unitary,
    qubit_scenario,
    refinery_gain,
    szilard_work,
)

H_QUBIT = np.diag([0.0, 1.0])


def bell_state() -> DensityMatrix:
    m = np.zeros((4, 4), dtype=complex)
    m[np.ix_([0, 3], [0, 3])] = 0.5
    return DensityMatrix(m, (2, 2))


def correlated_thermal_state(sc: ThermalScenario, tilt: float, coherence: float) -> DensityMatrix:
    """Diagonal tilt plus a middle-block coherence; marginals stay Gibbs."""
    p = np.diag(np.kron(gibbs_state(sc.h_a, sc.t_a), gibbs_state(sc.h_b, sc.t_b))).real
    m = np.diag(p + tilt * np.array([1.0, -1.0, -1.0, 1.0])).astype(complex)
    m[1, 2] = coherence
    m[2, 1] = np.conj(coherence)
    return DensityMatrix(m, (2, 2))


class TestGibbs:
    def test_infinite_temperature_limit(self):
        g = gibbs_state(H_QUBIT, 1e6)
        assert np.max(np.abs(g - np.eye(2) / 2)) < 1e-6

    def test_unit_temperature(self):
        g = gibbs_state(H_QUBIT, 1.0)
        z = 1 + math.exp(-1)
        assert np.allclose(np.diag(g), [1 / z, math.exp(-1) / z], atol=1e-12)

    def test_rejects_non_positive_temperature(self):
        with pytest.raises(NonPositiveTemperature):
            gibbs_state(H_QUBIT, 0.0)

    def test_free_energy_minimality(self):
        gen = np.random.default_rng(0)
        f_th = free_energy(gibbs_state(H_QUBIT, 1.0), H_QUBIT, 1.0)
        for _ in range(100):
            p = gen.dirichlet([1, 1])
            v = gen.standard_normal(2) + 1j * gen.standard_normal(2)
            v /= np.linalg.norm(v)
            u = np.array([[v[0], -np.conj(v[1])], [v[1], np.conj(v[0])]])
            rho = u @ np.diag(p) @ u.conj().T
            assert free_energy(rho, H_QUBIT, 1.0) >= f_th - 1e-10


class TestFreeEnergy:
    def test_thermal_identity(self):
        # F(Gibbs) = -kT ln Z
        for t in (0.5, 1.0, 3.0):
            z = 1 + math.exp(-1.0 / t)
            assert free_energy(gibbs_state(H_QUBIT, t), H_QUBIT, t) == pytest.approx(
                -t * math.log(z), abs=1e-12
            )

    def test_ground_state(self):
        assert free_energy(np.diag([1.0, 0.0]), H_QUBIT, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            free_energy(np.eye(2) / 2, np.diag([0.0, 1.0, 2.0]), 1.0)


class TestSzilard:
    def test_pure_product(self):
        rho = DensityMatrix(np.diag([1.0, 0.0, 0.0, 0.0]), (2, 2))
        assert szilard_work(rho, 1.0) == pytest.approx(math.log(4), abs=1e-12)

    def test_maximally_mixed(self):
        rho = DensityMatrix(np.eye(4) / 4, (2, 2))
        assert szilard_work(rho, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_bell(self):
        assert szilard_work(bell_state(), 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_temperature_scaling(self):
        rho = DensityMatrix(np.diag([1.0, 0.0, 0.0, 0.0]), (2, 2))
        assert szilard_work(rho, 2.5) == pytest.approx(2.5 * math.log(4), abs=1e-12)


class TestRefinery:
    def test_product_state_no_gain(self):
        rho_a = gibbs_state(H_QUBIT, 1.0)
        rho_b = gibbs_state(H_QUBIT, 2.0)
        rho = DensityMatrix(np.kron(rho_a, rho_b), (2, 2))
        assert refinery_gain(rho, 1.0) == pytest.approx(0.0, abs=1e-10)

    def test_bell_gain(self):
        assert refinery_gain(bell_state(), 1.0) == pytest.approx(2 * LN2, abs=1e-10)

    def test_rho_max_gain(self):
        rho = build_rho_max([0.6, 0.3, 0.1, 0.0], (2, 2))
        assert refinery_gain(rho, 1.0) == pytest.approx(0.4503470856735489, abs=1e-4)

    def test_never_negative(self):
        gen = np.random.default_rng(4)
        from orbitmi.qcore import haar_unitaries

        for u in haar_unitaries(4, 25, gen):
            lam = gen.dirichlet(np.ones(4))
            rho = DensityMatrix(u @ np.diag(lam) @ u.conj().T, (2, 2))
            assert refinery_gain(rho, 1.0) >= 0.0

    def test_gain_realized_by_refined_state(self):
        # Work after refining to the orbit minimum equals work + gain.
        from orbitmi.extremize import build_rho_min

        rho = build_rho_max([0.6, 0.3, 0.1, 0.0], (2, 2))
        refined = build_rho_min(spectrum_of(rho), (2, 2)).to_density_matrix()
        gain = refinery_gain(rho, 1.0)
        assert szilard_work(refined, 1.0) - szilard_work(rho, 1.0) == pytest.approx(
            gain, abs=1e-8
        )


class TestRefineryEnumerationCap:
    def test_large_dims_refused(self):
        # 3 x 6 = 18 cells exceeds the arrangement-enumeration cap.
        from orbitmi.errors import TooLarge

        diag = np.zeros(18)
        diag[0] = 1.0
        rho = DensityMatrix(np.diag(diag), (3, 6))
        with pytest.raises(TooLarge):
            refinery_gain(rho, 1.0)


class TestUnitCoherence:
    def test_round_trip(self):
        for x in (0.0, 0.3, 1.0, 2.0, 17.5):
            assert nats_to_bits(bits_to_nats(x)) == pytest.approx(x, abs=1e-14)

    def test_bell_conversion(self):
        assert bits_to_nats(mutual_information(bell_state())) == pytest.approx(
            2 * LN2, abs=1e-12
        )


class TestHeatFlow:
    def test_identity_evolution(self):
        sc = qubit_scenario(1.0, 2.0)
        rho = DensityMatrix(
            np.kron(gibbs_state(H_QUBIT, 1.0), gibbs_state(H_QUBIT, 2.0)), (2, 2)
        )
        rep = heat_flow_bound_check(rho, rho, sc)
        assert rep.q_a == 0.0
        assert rep.delta_i == 0.0
        assert rep.bound_satisfied
        assert not rep.anomalous

    def test_uncorrelated_heat_flows_hot_to_cold(self):
        sc = qubit_scenario(0.8, 1.9)
        before = DensityMatrix(
            np.kron(gibbs_state(H_QUBIT, sc.t_a), gibbs_state(H_QUBIT, sc.t_b)), (2, 2)
        )
        for seed in range(100):
            u = strong_energy_unitary((2, 2), seed)
            after = DensityMatrix(u @ before.matrix @ u.conj().T, (2, 2))
            rep = heat_flow_bound_check(before, after, sc)
            assert rep.bound_satisfied
            assert rep.q_a >= -1e-8  # A is colder: heat flows into it
            assert not rep.anomalous

    @staticmethod
    def middle_block_rotation(phi: float) -> np.ndarray:
        # Rotation inside the degenerate-energy span of |01>, |10>;
        # commutes with the total Hamiltonian.
        u = np.eye(4, dtype=complex)
        u[1, 1] = math.cos(phi)
        u[2, 2] = math.cos(phi)
        u[1, 2] = -math.sin(phi)
        u[2, 1] = math.sin(phi)
        return u

    def test_correlations_enable_anomalous_flow(self):
        sc = qubit_scenario(0.8, 1.9)
        before = correlated_thermal_state(sc, tilt=0.0, coherence=0.1)
        u = self.middle_block_rotation(-0.5)
        after = DensityMatrix(u @ before.matrix @ u.conj().T, (2, 2))
        rep = heat_flow_bound_check(before, after, sc)
        assert rep.bound_satisfied
        # Consuming the coherence pushes heat out of the colder body A.
        assert rep.q_a < 0.0
        assert rep.delta_i < 0.0
        assert rep.anomalous

    def test_bound_across_random_strong_unitaries(self):
        sc = qubit_scenario(0.8, 1.9)
        gen = np.random.default_rng(12)
        for seed in range(100):
            tilt = float(gen.uniform(-0.02, 0.02))
            coh = complex(gen.uniform(-0.1, 0.1), gen.uniform(-0.1, 0.1))
            before = correlated_thermal_state(sc, tilt=tilt, coherence=coh)
            u = strong_energy_unitary((2, 2), gen)
            after = DensityMatrix(u @ before.matrix @ u.conj().T, (2, 2))
            rep = heat_flow_bound_check(before, after, sc)
            assert rep.bound_satisfied

    def test_rejects_non_thermal_marginals(self):
        sc = qubit_scenario(1.0, 2.0)
        rho = DensityMatrix(np.eye(4) / 4, (2, 2))
        with pytest.raises(MarginalsNotThermal):
            heat_flow_bound_check(rho, rho, sc)

    def test_rejects_energy_change(self):
        sc = qubit_scenario(1.0, 1.0)
        before = DensityMatrix(
            np.kron(gibbs_state(H_QUBIT, 1.0), gibbs_state(H_QUBIT, 1.0)), (2, 2)
        )
        # Reversing the populations keeps the spectrum but inverts the energy.
        after = DensityMatrix(np.diag(np.diag(before.matrix).real[::-1]), (2, 2))
        with pytest.raises(EnergyNotConserved):
            heat_flow_bound_check(before, after, sc)

    def test_rejects_spectrum_change(self):
        sc = qubit_scenario(1.0, 1.0)
        before = DensityMatrix(
            np.kron(gibbs_state(H_QUBIT, 1.0), gibbs_state(H_QUBIT, 1.0)), (2, 2)
        )
        p = np.diag(before.matrix).real
        tweak = np.array([0.01, -0.01, 0.01, -0.01]) * np.array([1, 1, -1, -1])
        tweaked = p + np.array([0.011, -0.011, -0.011, 0.011])
        after = DensityMatrix(np.diag(tweaked), (2, 2))
        with pytest.raises(SpectrumMismatch):
            heat_flow_bound_check(before, after, sc)

    def test_json_round_trip(self):
        sc = qubit_scenario(1.0, 2.0)
        rho = DensityMatrix(
            np.kron(gibbs_state(H_QUBIT, 1.0), gibbs_state(H_QUBIT, 2.0)), (2, 2)
        )
        rep = heat_flow_bound_check(rho, rho, sc)
        d = rep.to_json_dict()
        assert set(d) == {
            "q_a",
            "delta_i_nats",
            "bound_satisfied",
            "anomalous",
            "witness_triggered",
        }


class TestAnomalousHeatBound:
    def test_witness_threshold_values(self):
        # Hand-computed: ln2 / |1/t_a - 1/t_b|.  The spectrum is chosen so
        # the thermal marginal pair is feasible at all three temperature pairs.
        lam = [0.7, 0.2, 0.08, 0.02]
        cases = [
            ((1.0, 2.0), 2 * math.log(2)),
            ((0.5, 1.0), math.log(2)),
            ((1.0, 4.0), 4 * math.log(2) / 3),
        ]
        for (ta, tb), expected in cases:
            out = max_anomalous_heat(lam, qubit_scenario(ta, tb))
            assert out.witness_threshold == pytest.approx(expected, abs=1e-12)

    def test_uncorrelated_state_bound_zero(self):
        sc = qubit_scenario(1.0, 2.0)
        rho = DensityMatrix(
            np.kron(gibbs_state(H_QUBIT, 1.0), gibbs_state(H_QUBIT, 2.0)), (2, 2)
        )
        out = max_anomalous_heat(rho, sc)
        assert out.max_heat == pytest.approx(0.0, abs=1e-8)
        assert out.qmi_source == "state"

    def test_spectrum_worst_case(self):
        sc = qubit_scenario(1.0, 2.0)
        rho = DensityMatrix(
            np.kron(gibbs_state(H_QUBIT, 1.0), gibbs_state(H_QUBIT, 2.0)), (2, 2)
        )
        lam = spectrum_of(rho)
        out = max_anomalous_heat(lam, sc)
        assert out.qmi_source == "spectrum-worst-case"
        assert out.max_heat > 0.0
        # Worst case dominates the state-specific bound.
        assert out.max_heat >= max_anomalous_heat(rho, sc).max_heat

    def test_equal_temperatures_rejected(self):
        with pytest.raises(EqualTemperatures):
            max_anomalous_heat([0.6, 0.3, 0.1, 0.0], qubit_scenario(1.0, 1.0))

    def test_infeasible_marginals(self):
        # A pure spectrum admits only equal marginal eigenvalues, but the
        # two temperatures differ.
        with pytest.raises(InfeasibleMarginals):
            max_anomalous_heat([1.0, 0.0, 0.0, 0.0], qubit_scenario(1.0, 2.0))

    def test_anomalous_flow_within_bound(self):
        sc = qubit_scenario(0.8, 1.9)
        before = correlated_thermal_state(sc, tilt=0.0, coherence=0.1)
        out = max_anomalous_heat(before, sc)
        phis = np.linspace(-1.5, 1.5, 13)
        saw_anomalous = False
        for phi in phis:
            u = TestHeatFlow.middle_block_rotation(phi)
            after = DensityMatrix(u @ before.matrix @ u.conj().T, (2, 2))
            rep = heat_flow_bound_check(before, after, sc)
            if rep.anomalous:
                saw_anomalous = True
                assert abs(rep.q_a) <= out.max_heat + 1e-10
        assert saw_anomalous


class TestCollisions:
    def test_equal_temperatures_stationary(self):
        tr = collision_simulate(qubit_scenario(1.3, 1.3), 20, theta=0.7, rng=1)
        for rec in tr.steps:
            assert abs(rec.q_a) < 1e-8
            assert rec.t_a == pytest.approx(1.3, abs=1e-8)
            assert rec.t_b == pytest.approx(1.3, abs=1e-8)

    def test_product_mode_equilibrates(self):
        tr = collision_simulate(
            qubit_scenario(0.5, 2.0), 200, unitary="partial-swap",
            mode="full-product", theta=0.3, rng=0,
        )
        last = tr.steps[-1]
        assert abs(last.t_a - last.t_b) < 0.01

    def test_product_mode_entropy_monotone(self):
        tr = collision_simulate(
            qubit_scenario(0.5, 2.0), 200, unitary="partial-swap",
            mode="full-product", theta=0.3, rng=0,
        )
        totals = [r.s_a + r.s_b for r in tr.steps]
        assert all(b >= a - 1e-10 for a, b in zip(totals, totals[1:]))

    def test_dephase_mode_equilibrates(self):
        tr = collision_simulate(
            qubit_scenario(0.5, 2.0), 500, unitary="partial-swap",
            mode="dephase-to-minimal", theta=0.3, rng=0,
        )
        last = tr.steps[-1]
        assert abs(last.t_a - last.t_b) < 0.05

    def test_dephase_retains_minimal_correlations(self):
        # After dephasing, the joint state is the least correlated member
        # of its own orbit: its mutual information matches the closed form.
        from orbitmi.extremize import i_min_two_qubit

        sc = qubit_scenario(0.5, 2.0)
        u = partial_swap_unitary(0.3)
        joint = np.kron(
            gibbs_state(sc.h_a, sc.t_a), gibbs_state(sc.h_b, sc.t_b)
        ).astype(complex)
        for _ in range(50):
            tau = u @ joint @ u.conj().T
            pops = np.diagonal(tau).real
            joint = np.diag(pops / pops.sum()).astype(complex)
            dm = DensityMatrix(joint, (2, 2))
            gap = mutual_information(dm) - i_min_two_qubit(spectrum_of(dm))
            assert abs(gap) < 1e-10

    def test_dephase_mode_keeps_correlations_nonzero(self):
        tr = collision_simulate(
            qubit_scenario(0.5, 2.0), 30, unitary="partial-swap",
            mode="dephase-to-minimal", theta=0.3, rng=0,
        )
        assert max(r.qmi for r in tr.steps) > 1e-6

    def test_random_strong_mode(self):
        tr = collision_simulate(
            qubit_scenario(0.5, 2.0), 300, unitary="random-strong",
            mode="full-product", rng=2,
        )
        last = tr.steps[-1]
        assert abs(last.t_a - last.t_b) < 0.01

    def test_eq1_per_collision(self):
        sc = qubit_scenario(0.7, 1.6)
        for mode in ("full-product", "dephase-to-minimal"):
            tr = collision_simulate(sc, 80, unitary="random-strong", mode=mode, rng=9)
            for prev, cur in zip(tr.steps, tr.steps[1:]):
                lhs = cur.q_a / prev.t_a - cur.q_a / prev.t_b
                rhs = (cur.s_a + cur.s_b) - (prev.s_a + prev.s_b)
                assert lhs >= rhs - 1e-8

    def test_invalid_mode(self):
        with pytest.raises(ValueError):
            collision_simulate(qubit_scenario(1.0, 2.0), 5, mode="bogus")
        with pytest.raises(ValueError):
            collision_simulate(qubit_scenario(1.0, 2.0), 5, unitary="bogus")

    def test_partial_swap_needs_matched_gaps(self):
        sc = ThermalScenario(
            h_a=np.diag([0.0, 1.0]), h_b=np.diag([0.0, 2.0]), t_a=1.0, t_b=2.0
        )
        with pytest.raises(EnergyNotConserved):
            collision_simulate(sc, 5, unitary="partial-swap")

    def test_csv_format(self):
        tr = collision_simulate(qubit_scenario(0.5, 2.0), 3, rng=0)
        lines = tr.to_csv().strip().split("\n")
        assert lines[0] == "step,s_a,s_b,t_a,t_b,qmi,q_a"
        assert len(lines) == 1 + 4  # initial row plus three collisions
