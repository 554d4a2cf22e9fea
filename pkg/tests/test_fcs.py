import math

import numpy as np
import pytest

from hypercurrent import (AnalyticityError, BathPair, Boxcar, DomainError,
                          EquilibriumError, General,
                          energy, fermi, hyper_snr, hyper_weight,
                          linear_hyper, mean_current, particle, variance)
from hypercurrent.fcs import (GridProblem, build_grid_problem, cgf_density,
                              cgf_point, cumulant_from_cgf, direction_angle,
                              grid_oracle_linear, grid_oracle_optimum)
from hypercurrent.quadrature import integrate_energy

from conftest import (FIG2A_T, FIG2B_T, fig2a_baths, fig2b_baths,
                      random_baths, random_transmission)


def cubic():
    return General(lambda e: 0.3 * e ** 3 - e + 0.5, name="cubic")


class TestCgfDensity:
    def test_vanishes_at_zero_field(self, rng):
        h, t, fl, fr = rng.uniform(-3, 3, 50), *rng.uniform(0, 1, (3, 50))
        assert np.all(cgf_density(h, t, fl, fr, 0.0) == 0.0)

    def test_vanishes_without_transmission(self):
        assert cgf_density(1.3, 0.0, 0.7, 0.2, 0.8) == 0.0

    def test_full_transmission_single_direction(self):
        # only left-to-right transfers: ln(1 + (e^x - 1) f_L)
        fl = 0.3
        assert cgf_density(1.0, 1.0, fl, 0.0, 0.4) == pytest.approx(
            math.log(1 + (math.exp(0.4) - 1) * fl), rel=1e-15)

    def test_exchange_symmetry(self, rng):
        for _ in range(200):
            h, eta = rng.uniform(-3, 3, 2)
            t, fl, fr = rng.uniform(0, 1, 3)
            assert cgf_density(h, t, fl, fr, eta) == pytest.approx(
                cgf_density(h, t, fr, fl, -eta), rel=1e-13, abs=1e-16)

    def test_leaves_domain(self):
        with pytest.raises(AnalyticityError):
            cgf_density(1.0, 1.0, 1.0, 0.0, -800.0)
        with pytest.raises(AnalyticityError):
            cgf_density(1.0, 1.0, 0.5, 0.0, 800.0)

    def test_point_record(self):
        b = fig2a_baths(1.0)
        p = cgf_point(energy(), FIG2A_T, b, 0.1, 0.5)
        assert (p.eta, p.eps) == (0.5, 0.1)
        assert p.value == cgf_density(0.1, FIG2A_T(0.1), fermi(b.beta_L, b.mu_L, 0.1),
                                      fermi(b.beta_R, b.mu_R, 0.1), 0.5)


class TestCumulants:
    def test_pointwise_against_closed_forms(self, rng):
        for _ in range(300):
            T, b = random_transmission(rng), random_baths(rng)
            eps = rng.uniform(-8, 8)
            h = General(lambda e, c=rng.normal(size=3): c[0] + c[1] * e + c[2] * e * e)
            fl, fr = fermi(b.beta_L, b.mu_L, eps), fermi(b.beta_R, b.mu_R, eps)
            t, hv = T(eps), h(eps)
            first = hv * t * (fl - fr)
            second = hv * hv * t * (fl + fr - 2 * fl * fr - t * (fl - fr) ** 2)
            assert cumulant_from_cgf(1, h, T, b, eps) == pytest.approx(first, rel=1e-8, abs=1e-12)
            assert cumulant_from_cgf(2, h, T, b, eps) == pytest.approx(second, rel=1e-6, abs=1e-10)

    def test_integrated_cumulants_match_currents(self):
        b = fig2a_baths(1.0)
        for h in (particle(), energy(), cubic()):
            J, _ = integrate_energy(lambda e: cumulant_from_cgf(1, h, FIG2A_T, b, e), b, FIG2A_T)
            D, _ = integrate_energy(lambda e: cumulant_from_cgf(2, h, FIG2A_T, b, e), b, FIG2A_T)
            assert J == pytest.approx(mean_current(h, FIG2A_T, b), rel=1e-8)
            assert D == pytest.approx(variance(h, FIG2A_T, b), rel=1e-6)

    def test_explicit_step(self):
        b = fig2b_baths(2.0)
        a = cumulant_from_cgf(2, energy(), FIG2B_T, b, 1.0, step=1e-3)
        c = cumulant_from_cgf(2, energy(), FIG2B_T, b, 1.0)
        assert a == pytest.approx(c, rel=1e-6)

    def test_rejects_higher_orders(self):
        with pytest.raises(ValueError):
            cumulant_from_cgf(3, energy(), FIG2A_T, fig2a_baths(1.0), 0.0)


class TestGridOracle:
    @pytest.mark.parametrize("T, b", [(FIG2A_T, fig2a_baths(1.0)), (FIG2A_T, fig2a_baths(3.0)),
                                      (FIG2B_T, fig2b_baths(2.0)), (FIG2B_T, fig2b_baths(6.0))])
    def test_matches_continuum_optimum(self, T, b):
        problem = build_grid_problem(T, b, 100_000)
        h_vec, S = grid_oracle_optimum(problem)
        assert S == pytest.approx(hyper_snr(T, b).S_hyp, rel=1e-6)
        np.testing.assert_allclose(h_vec, hyper_weight(T, b, problem.nodes),
                                   rtol=1e-12, atol=1e-300)
        assert problem.snr(h_vec) == pytest.approx(S, rel=1e-12)

    def test_error_shrinks_with_resolution(self):
        b = fig2a_baths(1.0)
        exact = hyper_snr(FIG2A_T, b).S_hyp
        errors = [abs(grid_oracle_optimum(build_grid_problem(FIG2A_T, b, n))[1] - exact)
                  for n in (250, 500, 1000, 2000, 4000)]
        for coarse, fine in zip(errors, errors[1:]):
            assert fine < coarse or fine < 1e-12 * exact

    def test_no_vector_beats_optimum(self, rng):
        problem = build_grid_problem(FIG2B_T, fig2b_baths(4.0), 2000)
        h_vec, S = grid_oracle_optimum(problem)
        for scale in (1e-3, 1e-1, 1.0):
            for _ in range(30):
                trial = h_vec + scale * np.abs(h_vec).max() * rng.normal(size=h_vec.size)
                assert problem.snr(trial) <= S * (1 + 1e-12)

    def test_equilibrium(self):
        with pytest.raises(EquilibriumError):
            grid_oracle_optimum(build_grid_problem(FIG2A_T, BathPair(1, 0, 1, 0), 500))

    def test_invalid_problem(self):
        with pytest.raises(DomainError):
            build_grid_problem(FIG2A_T, fig2a_baths(1.0), 2)
        with pytest.raises(DomainError):
            GridProblem(np.array([0.0, 0.0, 1.0]), np.ones(3), np.ones(3), np.ones(3))
        with pytest.raises(DomainError):
            GridProblem(np.arange(3.0), np.ones(3), np.ones(3), -np.ones(3))


class TestGridLinearOracle:
    @pytest.mark.parametrize("T, b", [(FIG2A_T, fig2a_baths(1.0)), (FIG2A_T, fig2a_baths(4.0)),
                                      (FIG2B_T, fig2b_baths(1.0)), (FIG2B_T, fig2b_baths(8.0))])
    def test_matches_closed_form(self, T, b):
        a, c, S = grid_oracle_linear(build_grid_problem(T, b, 100_000))
        lin = linear_hyper(T, b)
        assert S == pytest.approx(lin.S_lhyp, rel=1e-6)
        assert direction_angle(a, c, lin.a, lin.b) <= 1e-4

    def test_pure_particle_toy(self):
        b = BathPair(1.0, -0.5, 1.0, 0.5)
        T = Boxcar(0.8, -1.0, 1.0)
        a, c, S = grid_oracle_linear(build_grid_problem(T, b, 20_001))
        assert abs(a) < 1e-4
        lin = linear_hyper(T, b)
        assert abs(lin.a) <= 1e-12 * abs(lin.b)
        # the boxcar edges cost the trapezoid grid first-order accuracy
        assert S == pytest.approx(lin.S_lhyp, rel=1e-2)

    def test_degenerate_grid(self):
        problem = GridProblem(np.array([0.0, 1.0, 2.0]), np.ones(3), np.ones(3),
                              np.array([0.0, 1.0, 0.0]))
        with pytest.raises(DomainError):
            grid_oracle_linear(problem)


@pytest.mark.parametrize("args, expected", [
    ((1.0, 0.0, 0.0, 1.0), math.pi / 2), ((1.0, 1.0, -2.0, -2.0), 0.0),
    ((1.0, 0.0, 1.0, 1.0), math.pi / 4), ((1.0, 0.0, -1.0, 1e-9), 1e-9),
])
def test_direction_angle(args, expected):
    assert direction_angle(*args) == pytest.approx(expected, abs=1e-15)
