import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkdv.errors import BlowUp, GridMismatch, InputError, NegativeBase, Singularity
from gkdv.exact import TravelingWaveSolution, WaveKind, constant_solution, tw_field, tw_profile
from gkdv.fdsolver import Converged, SolutionProfile, SolverConfig, discrete_residual, make_grid, solve
from gkdv.model import Constant, GKdVEquation
from gkdv.oracle import OracleConfig, compare_profiles, rk_solve
from gkdv.reconstruct import SpaceTimeField, pde_residual
from gkdv.reduce import GenericODE, ReducedIVP, catalog_reduction, kdv_burgers_benchmark, standard_ivp

COSH = TravelingWaveSolution(1, 1, 1)


# ---------------------------------------------------------------------------
# exact solutions
# ---------------------------------------------------------------------------

def test_cosh_peak_values():
    assert tw_profile(COSH, 0.0) == 3.0
    assert tw_profile(TravelingWaveSolution(2, 1, 1), 0.0) == pytest.approx(math.sqrt(6), rel=1e-15)


def test_sinh_singular_at_zero():
    with pytest.raises(Singularity):
        tw_profile(TravelingWaveSolution(1, 1, 1, kind="sinh"), 0.0)
    with pytest.raises(Singularity):
        tw_field(TravelingWaveSolution(1, 1, 1, kind="sinh"), 2.0, 2.0)


def test_sinh_negative_base_for_even_root():
    with pytest.raises(NegativeBase):
        tw_profile(TravelingWaveSolution(2, 1, 1, kind=WaveKind.SINH), 1.0)
    # odd integer root of a negative base is fine
    assert tw_profile(TravelingWaveSolution(1, 1, 1, kind="sinh"), 1.0) < 0


def test_wave_needs_real_wavenumber():
    with pytest.raises(InputError):
        TravelingWaveSolution(1, 1, -1)


def test_tw_field_is_shifted_profile():
    assert tw_field(COSH, 1.0, 1.0) == 3.0
    x = np.linspace(-3, 3, 7)
    np.testing.assert_array_equal(tw_field(COSH, x, 0.0), tw_profile(COSH, x))


@settings(max_examples=50, deadline=None)
@given(n=st.sampled_from([1.0, 2.0, 3.0]), C=st.floats(-2.0, 2.0), d=st.floats(0.0, 3.0))
def test_cosh_profile_symmetric_about_peak(n, C, d):
    sol = TravelingWaveSolution(n, 1.0, 1.0, C)
    w0 = sol.peak
    assert tw_profile(sol, w0 + d) == pytest.approx(tw_profile(sol, w0 - d), rel=1e-12)


def test_cosh_discrete_residual_second_order():
    ode = catalog_reduction(4, n=1, eps=1, sigma=1)
    res = []
    for N in (200, 400, 800):
        g = make_grid(0, 10, N)
        res.append(discrete_residual(ode, g, tw_profile(COSH, g.nodes)))
    for r0, r1 in zip(res, res[1:]):
        assert 3.5 <= r0 / r1 <= 4.6


def test_cosh_pde_residual_second_order():
    eq = GKdVEquation(1, Constant(1.0))
    res = []
    for k in (40, 80, 160):
        x = np.linspace(-4, 4, k + 1)
        t = np.linspace(0, 1, k // 8 + 1)
        X, T = np.meshgrid(x, t, indexing="ij")
        res.append(pde_residual(eq, SpaceTimeField(x, t, tw_field(COSH, X, T)))[0])
    for r0, r1 in zip(res, res[1:]):
        assert 3.5 <= r0 / r1 <= 4.6


def test_constant_solution_factory():
    prof = constant_solution(0.5)(make_grid(0, 50, 100))
    assert prof.phi.shape == (101,) and np.all(prof.phi == 0.5)
    rho2 = catalog_reduction(1, n=1, eps=-1, rho=2)
    rho1 = catalog_reduction(1, n=1, eps=-1, rho=1)
    assert discrete_residual(rho2, prof.grid, prof.phi) == 0.0
    assert discrete_residual(rho1, prof.grid, prof.phi) == pytest.approx(0.5 / 3)


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

def test_oracle_constant():
    ivp = standard_ivp(rho=2, gamma=0.5)
    prof = rk_solve(ivp, make_grid(0, 50, 1000))
    assert np.max(np.abs(prof.phi - 0.5)) <= 1e-12


def test_oracle_reproduces_cosh_wave():
    ode = catalog_reduction(4, n=1, eps=1, sigma=1)
    ivp = ReducedIVP(ode, 3.0, (0.0, 5.0))
    g = make_grid(0, 5, 500)
    prof = rk_solve(ivp, g, initial_state=(3.0, 0.0, -1.5))
    assert np.max(np.abs(prof.phi - tw_profile(COSH, g.nodes))) <= 1e-8


def test_oracle_analytic_residual_of_cosh_wave():
    # phi''' from the ODE right-hand side against the closed form derivative
    ode = catalog_reduction(4, n=1, eps=1, sigma=1)
    w = np.linspace(0, 5, 201)
    z = 0.5 * w
    phi = 3 / np.cosh(z) ** 2
    d1 = -3 * np.tanh(z) / np.cosh(z) ** 2
    d2 = -1.5 * (1 - 2 * np.sinh(z) ** 2) / np.cosh(z) ** 4
    d3 = 3 * np.sinh(z) * (3 - np.cosh(z) ** 2) / np.cosh(z) ** 5
    assert np.max(np.abs(ode.rhs(w, phi, d1, d2) - d3)) <= 1e-8


def test_oracle_blow_up():
    with pytest.raises(BlowUp):
        rk_solve(standard_ivp(rho=-0.5), make_grid(0, 50, 1000))


def test_oracle_negative_base():
    ivp = ReducedIVP(GenericODE(1.0, 0.0, 1.0, 0.5, 0.0, 0.0, 0.0), -1.0, (0.0, 1.0))
    with pytest.raises(NegativeBase):
        rk_solve(ivp, make_grid(0, 1, 10))


def test_oracle_grid_must_match_domain():
    with pytest.raises(GridMismatch):
        rk_solve(standard_ivp(), make_grid(0, 10, 100))


def test_oracle_tolerance_refinement_is_monotone():
    ivp = standard_ivp()
    g = make_grid(0, 50, 20000)
    profs = [rk_solve(ivp, g, OracleConfig(rel_tol=tol, abs_tol=tol * 1e-2)) for tol in (1e-8, 5e-9, 2.5e-9)]
    d1 = compare_profiles(profs[0], profs[1])[0]
    d2 = compare_profiles(profs[1], profs[2])[0]
    assert d2 < d1


def test_fd_and_oracle_agree_better_with_refinement():
    ivp = standard_ivp()
    Nref = 100000
    ref = rk_solve(ivp, make_grid(0, 50, Nref))
    diffs = []
    for N in (25000, 50000, 100000):
        out = solve(ivp, SolverConfig(N=N))
        assert isinstance(out, Converged)
        diffs.append(np.max(np.abs(out.profile.phi - ref.phi[:: Nref // N])))
    assert diffs[0] / diffs[1] >= 1.5 and diffs[1] / diffs[2] >= 1.5


def test_fd_and_oracle_agree_on_benchmark():
    ivp = kdv_burgers_benchmark(2, 1, 10, 0.5)
    g = make_grid(0, 50, 50000)
    fd = solve(ivp, SolverConfig(N=50000)).profile
    rk = rk_solve(ivp, g)
    assert compare_profiles(rk, fd)[0] < 1e-3


def test_compare_profiles():
    g = make_grid(0, 1, 10)
    p = SolutionProfile(g, np.full(11, 0.5), 1, 0.0)
    assert compare_profiles(p, p) == (0.0, 0.0, 0)
    q = SolutionProfile(g, np.full(11, 0.5 + 1e-6), 1, 0.0)
    assert compare_profiles(p, q)[0] == pytest.approx(1e-6)
    with pytest.raises(GridMismatch):
        compare_profiles(p, SolutionProfile(make_grid(0, 1, 20), np.zeros(21), 1, 0.0))


def test_oracle_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(rel_tol=0)
