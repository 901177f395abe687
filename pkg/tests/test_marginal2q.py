import numpy as np
import pytest

from orbitmi.errors import EnergyOutOfRange, InfeasibleEnergy, WrongDimension
from orbitmi.extremize import (
    build_rho_max,
    build_rho_min,
    i_min_two_qubit,
    sample_orbit_qmi,
)
from orbitmi.marginal2q import (
    MarginalPoint,
    MarginalRegion,
    contains,
    energy_max_point,
    extremal_points,
    rasterize,
)
from orbitmi.qcore import mutual_information, partial_trace


class TestTypes:
    def test_point_clips_noise(self):
        p = MarginalPoint(0.5 + 1e-13, -1e-13)
        assert p.lambda_a == 0.5 and p.lambda_b == 0.0

    def test_point_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            MarginalPoint(0.6, 0.1)

    def test_region_needs_four_eigenvalues(self):
        with pytest.raises(WrongDimension):
            MarginalRegion([0.5, 0.5])

    def test_region_energy_range(self):
        with pytest.raises(EnergyOutOfRange):
            MarginalRegion([0.6, 0.3, 0.1, 0.0], energy=2.5)


class TestContains:
    def test_pure_spectrum_diagonal(self):
        r = MarginalRegion([1.0, 0.0, 0.0, 0.0])
        for x in np.linspace(0, 0.5, 11):
            assert contains(r, MarginalPoint(x, x))
        assert not contains(r, MarginalPoint(0.1, 0.2))

    def test_third_inequality(self):
        r = MarginalRegion([0.6, 0.3, 0.1, 0.0])
        assert not contains(r, MarginalPoint(0.1, 0.1))

    def test_boundary_point(self):
        r = MarginalRegion([0.6, 0.3, 0.1, 0.0])
        assert contains(r, MarginalPoint(0.1, 0.3))

    def test_energy_slice_nesting(self):
        lam = [0.6, 0.3, 0.1, 0.0]
        r_free = MarginalRegion(lam)
        r_e = MarginalRegion(lam, energy=0.6)
        gen = np.random.default_rng(0)
        for _ in range(200):
            p = MarginalPoint(gen.uniform(0, 0.5), gen.uniform(0, 0.5))
            if contains(r_e, p):
                assert contains(r_free, p)

    def test_convexity_probe(self):
        lam = [0.55, 0.25, 0.15, 0.05]
        r = MarginalRegion(lam)
        gen = np.random.default_rng(1)
        inside = []
        while len(inside) < 10:
            p = MarginalPoint(gen.uniform(0, 0.5), gen.uniform(0, 0.5))
            if contains(r, p):
                inside.append(p)
        for a in inside:
            for b in inside:
                for t in np.linspace(0, 1, 11):
                    mix = MarginalPoint(
                        (1 - t) * a.lambda_a + t * b.lambda_a,
                        (1 - t) * a.lambda_b + t * b.lambda_b,
                    )
                    assert contains(r, mix)

    def test_sampled_orbit_points_inside(self):
        gen = np.random.default_rng(2)
        for _ in range(5):
            lam = np.sort(gen.dirichlet(np.ones(4)))[::-1]
            r = MarginalRegion(lam)
            for _, pt in sample_orbit_qmi(lam, (2, 2), 2000, gen):
                assert contains(r, pt)


class TestExtremalPoints:
    def test_pure(self):
        lo, hi = extremal_points(MarginalRegion([1, 0, 0, 0]))
        assert (lo.lambda_a, lo.lambda_b) == (0.0, 0.0)
        assert (hi.lambda_a, hi.lambda_b) == (0.5, 0.5)

    def test_half_half(self):
        lo, hi = extremal_points(MarginalRegion([0.5, 0.5, 0, 0]))
        assert (lo.lambda_a, lo.lambda_b) == (0.0, 0.5)
        assert (hi.lambda_a, hi.lambda_b) == (0.5, 0.5)

    def test_rank_four(self):
        lo, hi = extremal_points(MarginalRegion([0.6, 0.3, 0.1, 0.0]))
        assert (lo.lambda_a, lo.lambda_b) == (pytest.approx(0.1), pytest.approx(0.3))
        assert (hi.lambda_a, hi.lambda_b) == (0.5, 0.5)

    def test_membership(self):
        gen = np.random.default_rng(3)
        for _ in range(50):
            lam = np.sort(gen.dirichlet(np.ones(4)))[::-1]
            r = MarginalRegion(lam)
            lo, hi = extremal_points(r)
            assert contains(r, lo)
            assert contains(r, hi)

    def test_min_point_matches_minimizer_state(self):
        lam = [0.6, 0.3, 0.1, 0.0]
        cs = build_rho_min(lam, (2, 2))
        rho = cs.to_density_matrix()
        lo, _ = extremal_points(MarginalRegion(lam))
        lam_a = min(np.linalg.eigvalsh(partial_trace(rho, "A")))
        lam_b = min(np.linalg.eigvalsh(partial_trace(rho, "B")))
        assert lam_a == pytest.approx(lo.lambda_a, abs=1e-10)
        assert lam_b == pytest.approx(lo.lambda_b, abs=1e-10)
        assert mutual_information(rho) == pytest.approx(i_min_two_qubit(lam), abs=1e-8)

    def test_max_point_matches_rho_max(self):
        lam = [0.6, 0.3, 0.1, 0.0]
        rho = build_rho_max(lam, (2, 2))
        _, hi = extremal_points(MarginalRegion(lam))
        lam_a = min(np.linalg.eigvalsh(partial_trace(rho, "A")))
        assert lam_a == pytest.approx(hi.lambda_a, abs=1e-8)


class TestEnergyMaxPoint:
    def test_unit_energy(self):
        q = energy_max_point(MarginalRegion([0.6, 0.3, 0.1, 0.0], energy=1.0))
        assert (q.lambda_a, q.lambda_b) == (0.5, 0.5)

    def test_low_energy(self):
        q = energy_max_point(MarginalRegion([0.6, 0.3, 0.1, 0.0], energy=0.6))
        assert (q.lambda_a, q.lambda_b) == (pytest.approx(0.3), pytest.approx(0.3))

    def test_energy_symmetry(self):
        q = energy_max_point(MarginalRegion([0.6, 0.3, 0.1, 0.0], energy=1.4))
        assert (q.lambda_a, q.lambda_b) == (pytest.approx(0.3), pytest.approx(0.3))

    def test_infeasible(self):
        # lambda_2 + lambda_3 + 2 lambda_4 = 0.4 > min(E, 2-E) = 0.2
        with pytest.raises(InfeasibleEnergy):
            energy_max_point(MarginalRegion([0.6, 0.3, 0.1, 0.0], energy=0.2))

    def test_membership(self):
        r = MarginalRegion([0.6, 0.3, 0.1, 0.0], energy=0.6)
        assert contains(r, energy_max_point(r))

    def test_requires_energy(self):
        with pytest.raises(ValueError):
            energy_max_point(MarginalRegion([0.6, 0.3, 0.1, 0.0]))


class TestRasterize:
    def test_pure_spectrum_diagonal_only(self):
        raster = rasterize(MarginalRegion([1, 0, 0, 0]), 101)
        ii, jj = np.nonzero(raster.inside)
        assert len(ii) == 101
        assert np.all(ii == jj)

    def test_uniform_spectrum_single_cell(self):
        raster = rasterize(MarginalRegion([0.25] * 4), 101)
        ii, jj = np.nonzero(raster.inside)
        assert list(ii) == [100] and list(jj) == [100]

    def test_band_shape(self):
        raster = rasterize(MarginalRegion([0.8, 0.2, 0.0, 0.0]), 101)
        ax = raster.axis
        for i, a in enumerate(ax):
            for j, b in enumerate(ax):
                expected = abs(a - b) <= 0.2 + 1e-12 and a + b >= 0.2 - 1e-12
                assert raster.inside[i, j] == expected

    def test_markers(self):
        raster = rasterize(MarginalRegion([0.6, 0.3, 0.1, 0.0], energy=0.6), 11)
        assert raster.markers["max"] == (0.5, 0.5)
        assert raster.markers["min"] == (pytest.approx(0.1), pytest.approx(0.3))
        assert raster.markers["q"] == (pytest.approx(0.3), pytest.approx(0.3))
        assert set(raster.markers_json_dict()) == {"min", "max", "q"}

    def test_csv_header_and_size(self):
        raster = rasterize(MarginalRegion([0.6, 0.3, 0.1, 0.0]), 5)
        lines = raster.to_csv().strip().split("\n")
        assert lines[0] == "lambda_b,lambda_a,inside"
        assert len(lines) == 1 + 25

    def test_grid_n_validation(self):
        with pytest.raises(ValueError):
            rasterize(MarginalRegion([1, 0, 0, 0]), 1)
