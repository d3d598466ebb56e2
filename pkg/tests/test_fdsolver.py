import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkdv.errors import BadGrid, NegativeBase, NonNestedGrids
from gkdv.fdsolver import (
    Converged,
    Diverged,
    MaxItersExceeded,
    SolverConfig,
    _delta,
    convergence_study,
    discrete_residual,
    format_convergence_csv,
    initial_iterate,
    lagged_nonlinearity,
    loglog_slope,
    make_grid,
    outcome_meta,
    read_profile_csv,
    solve,
    sweep,
    update_point,
    write_profile_csv,
)
from gkdv.reduce import GenericODE, ReducedIVP, standard_ivp

STD = standard_ivp()


def test_make_grid_reference():
    g = make_grid(0, 50, 100000)
    assert g.h == 5e-4
    assert g.nodes[0] == 0.0 and g.nodes[-1] == 50.0
    assert g.nodes.size == 100001


def test_make_grid_small():
    np.testing.assert_allclose(make_grid(0, 1, 10).nodes, np.linspace(0, 1, 11), atol=1e-15)


@pytest.mark.parametrize("a, b, N", [(1, 0, 10), (0, 1, 7), (0, 1, 8.5)])
def test_make_grid_rejects(a, b, N):
    with pytest.raises(BadGrid):
        make_grid(a, b, N)


# ---------------------------------------------------------------------------
# pointwise update
# ---------------------------------------------------------------------------

def test_update_point_flat_values():
    ode = GenericODE(2.0, 0.7, 1.0, 1.0, 0.3, 0.2, 0.5)
    h = 0.1
    assert update_point(ode, h, 1.0, 3.0, 3.0, 3.0, 3.0, 0.0) == pytest.approx(3.0 * (1 - 2 * h**3 * 0.5 / 2.0))


def test_update_point_reference_values():
    assert update_point(STD.ode, 0.5, 1.0, 0.5, 0.5, 0.5, 0.5, 0.0) == pytest.approx(11 / 24, rel=1e-15)


def test_update_point_pure_stencil():
    ode = GenericODE(1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0)
    assert update_point(ode, 0.3, 2.0, 1.0, 2.0, 3.0, 4.0, 0.0) == 5.0


def test_lagged_nonlinearity():
    ode = GenericODE(1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0)
    assert lagged_nonlinearity(ode, 0.5, 2.0, 7.0, 2.0) == 0.0
    assert lagged_nonlinearity(ode, 1.0, 0.0, 2.0, 1.0) == -2.0
    with pytest.raises(NegativeBase):
        lagged_nonlinearity(GenericODE(1.0, 0.0, 1.0, 0.5, 0.0, 0.0, 0.0), 1.0, 0.0, -1.0, 1.0)


def test_lagged_nonlinearity_integer_power_of_negative():
    ode = GenericODE(1.0, 0.0, 1.0, 3.0, 0.0, 0.0, 0.0)
    assert lagged_nonlinearity(ode, 1.0, 0.0, -2.0, 1.0) == 8.0


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def _constant_ivp(gamma, rho=2.0):
    return standard_ivp(rho=rho, gamma=gamma)


@pytest.mark.parametrize("lagged", [False, True])
def test_sweep_constant_fixed_point(lagged):
    ivp = _constant_ivp(0.7)
    g = make_grid(0, 50, 1000)
    out = sweep(ivp, g, np.full(1001, 0.7), lagged=lagged)
    assert np.all(out == 0.7)


@pytest.mark.parametrize("lagged", [False, True])
def test_first_sweep_first_new_value(lagged):
    g = make_grid(0, 50, 1000)
    out = sweep(STD, g, initial_iterate(0.5, 1000), lagged=lagged)
    h, r, a3 = g.h, STD.ode.r, STD.ode.a3
    assert out[3] == pytest.approx(0.5 * (1 - 2 * h**3 * r / a3), rel=1e-15)


def test_sweep_pure_recurrence():
    ivp = ReducedIVP(GenericODE(1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0), 1.0, (0.0, 1.0))
    g = make_grid(0, 1, 8)
    out = sweep(ivp, g, initial_iterate(1.0, 8))
    assert np.all(out == 1.0)


def test_sweep_shape_checked():
    with pytest.raises(BadGrid):
        sweep(STD, make_grid(0, 50, 100), np.zeros(50))


def test_sweep_negative_base():
    ivp = ReducedIVP(GenericODE(1.0, 0.0, 1.0, 0.5, 0.0, 0.0, 0.0), -1.0, (0.0, 1.0))
    with pytest.raises(NegativeBase):
        sweep(ivp, make_grid(0, 1, 10), initial_iterate(-1.0, 10))


@settings(max_examples=40, deadline=None)
@given(gamma=st.floats(-2.0, 2.0).filter(lambda v: abs(v) > 1e-3), seed=st.integers(0, 1000),
       lagged=st.booleans())
def test_sweep_keeps_boundary_triple(gamma, seed, lagged):
    rng = np.random.default_rng(seed)
    ivp = standard_ivp(gamma=gamma)
    g = make_grid(0, 5, 64)
    prev = rng.normal(size=65)
    prev[:3] = gamma
    out = sweep(ivp, g, prev, lagged=lagged)
    assert out[0] == gamma and out[1] == gamma and out[2] == gamma


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def test_solve_reference_converges_to_damped_oscillation():
    out = solve(STD, SolverConfig(N=100000))
    assert isinstance(out, Converged)
    phi = out.profile.phi
    assert np.all(phi[:3] == 0.5) and np.all(np.isfinite(phi))
    # oscillates about zero with shrinking envelope far out
    assert np.max(np.abs(phi[-20000:])) < np.max(np.abs(phi[20000:40000]))
    assert np.count_nonzero(np.diff(np.sign(phi[phi != 0]))) > 5


@pytest.mark.parametrize("gamma", [0.5, 2.0, -1.0])
def test_solve_constant(gamma):
    out = solve(_constant_ivp(gamma), SolverConfig(N=10000))
    assert isinstance(out, Converged)
    assert np.max(np.abs(out.profile.phi - gamma)) <= 1e-12
    assert out.profile.iterations <= 2


def test_solve_negative_rho_diverges():
    out = solve(standard_ivp(rho=-0.5), SolverConfig(N=100000))
    assert isinstance(out, Diverged)
    assert out.magnitude >= 1e12 or not np.isfinite(out.magnitude)
    assert outcome_meta(out)["status"] == "diverged"


def test_solve_max_iters():
    out = solve(STD, SolverConfig(N=1000, max_iters=3, lagged=True))
    assert isinstance(out, MaxItersExceeded)
    assert out.profile.iterations == 3


@pytest.mark.parametrize("lagged", [False, True])
def test_converged_profile_is_fixed_point(lagged):
    cfg = SolverConfig(N=20000, lagged=lagged)
    out = solve(STD, cfg)
    assert isinstance(out, Converged)
    g = out.profile.grid
    again = sweep(STD, g, out.profile.phi, lagged=lagged)
    assert _delta(again, out.profile.phi, g.N) <= cfg.tol


def test_solve_is_deterministic():
    cfg = SolverConfig(N=20000)
    a = solve(STD, cfg).profile.phi
    b = solve(STD, cfg).profile.phi
    assert a.tobytes() == b.tobytes()


def test_both_nonlinearity_modes_reach_the_same_profile():
    a = solve(STD, SolverConfig(N=20000)).profile.phi
    b = solve(STD, SolverConfig(N=20000, lagged=True)).profile.phi
    assert np.max(np.abs(a - b)) < 1e-7


@pytest.mark.parametrize("N", [10000, 100000])
def test_converged_residual_bound(N):
    cfg = SolverConfig(N=N)
    prof = solve(STD, cfg).profile
    assert discrete_residual(STD.ode, prof.grid, prof.phi) <= 100 * cfg.tol * np.max(np.abs(prof.phi))


def test_discrete_residual_of_constant_is_zero():
    ivp = _constant_ivp(0.5)
    g = make_grid(0, 50, 100)
    assert discrete_residual(ivp.ode, g, np.full(101, 0.5)) == 0.0
    # not a solution when r != 0
    assert discrete_residual(STD.ode, g, np.full(101, 0.5)) == pytest.approx(0.5 / 3)


# ---------------------------------------------------------------------------
# convergence study
# ---------------------------------------------------------------------------

def test_convergence_study_small():
    table = convergence_study(STD, [2500, 5000, 10000], 20000)
    errs = [e for _, e in table]
    assert errs[0] > errs[1] > errs[2]
    assert -1.4 <= loglog_slope(table) <= -0.6


def test_convergence_study_constant():
    table = convergence_study(_constant_ivp(0.5), [100, 200], 400)
    assert all(e <= 1e-12 for _, e in table)


def test_convergence_study_parallel_matches_serial():
    serial = convergence_study(STD, [1000, 2000], 4000)
    parallel = convergence_study(STD, [1000, 2000], 4000, workers=2)
    assert serial == parallel


@pytest.mark.parametrize("Ns, Nref", [([3000], 100000), ([2000], 2000)])
def test_convergence_study_non_nested(Ns, Nref):
    with pytest.raises(NonNestedGrids):
        convergence_study(STD, Ns, Nref)


def test_convergence_study_accepts_divisor():
    assert convergence_study(_constant_ivp(1.0), [2500], 100000)[0][0] == 2500


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------

def test_profile_csv_round_trip(tmp_path):
    out = solve(STD, SolverConfig(N=1000))
    path = tmp_path / "p.csv"
    write_profile_csv(path, out.profile, outcome_meta(out))
    text = path.read_text().splitlines()
    assert text[0] == "omega,phi"
    assert "# status=converged" in text
    w, phi, meta = read_profile_csv(path)
    assert np.array_equal(phi, out.profile.phi)
    assert np.array_equal(w, out.profile.omega)
    assert meta["status"] == "converged" and int(meta["iterations"]) == out.profile.iterations


def test_convergence_csv():
    assert format_convergence_csv([(10, 0.5)]).splitlines() == ["N,abs_error", "10,5.0000000000000000e-01"]
