"""Explicit finite-difference scheme with fixed-point iterations for reduced IVPs.

On the grid omega_i = a + (i-1) h, i = 1..N+1, the third-order ODE is
discretized with the second-order stencils

    phi'''  ~ (phi_{i+2} - 2 phi_{i+1} + 2 phi_{i-1} - phi_{i-2}) / (2 h^3)
    phi''   ~ (phi_{i+1} - 2 phi_i + phi_{i-1}) / h^2
    phi'    ~ (phi_{i+1} - phi_{i-1}) / (2 h)

and solved for phi_{i+2}.  The initial data fix phi_1 = phi_2 = phi_3 = gamma
and the ghost value phi_0 = phi_1.  The nonlinear term is supplied as
g_i = -h^2 p phi_i^m (phi_{i+1} - phi_{i-1}) and the system is iterated to a
fixed point.

Arrays are 0-based: ``phi[k]`` holds node k+1 of the 1-based numbering.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional, Union

import numba
import numpy as np

from .errors import BadGrid, NegativeBase, NonNestedGrids, NotConverged
from .reduce import GenericODE, ReducedIVP

MIN_N = 8

# kernel status codes
_OK, _OVERFLOW, _NEGBASE = 0, 1, 2


@dataclass(frozen=True)
class Grid:
    a: float
    b: float
    N: int

    def __post_init__(self):
        if not (self.a < self.b):
            raise BadGrid(f"need a < b, got [{self.a}, {self.b}]")
        if int(self.N) != self.N or self.N < MIN_N:
            raise BadGrid(f"need integer N >= {MIN_N}, got {self.N}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.N

    @cached_property
    def nodes(self) -> np.ndarray:
        return self.a + self.h * np.arange(self.N + 1)


def make_grid(a: float, b: float, N: int) -> Grid:
    return Grid(float(a), float(b), N)


@dataclass(frozen=True)
class SolverConfig:
    """Fixed-point solver settings.

    ``lagged=True`` evaluates the nonlinear term g_i entirely from the
    previous iterate.  The default evaluates it from the newest values,
    which are all available when phi_{i+2} is computed, so one sweep solves
    the discrete system and the second sweep confirms the fixed point.
    """

    N: int = 100000
    tol: float = 1e-8
    max_iters: int = 10000
    overflow_bound: float = 1e12
    lagged: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass(frozen=True, eq=False)
class SolutionProfile:
    grid: Grid
    phi: np.ndarray
    iterations: int
    final_delta: float

    @property
    def omega(self) -> np.ndarray:
        return self.grid.nodes


@dataclass(frozen=True)
class Converged:
    profile: SolutionProfile
    status = "converged"


@dataclass(frozen=True, eq=False)
class Diverged:
    at_iteration: int
    at_index: int
    magnitude: float
    partial: Optional[np.ndarray] = None  # iterate up to the overflowing node
    status = "diverged"


@dataclass(frozen=True)
class MaxItersExceeded:
    profile: SolutionProfile
    status = "max_iters"


SolveOutcome = Union[Converged, Diverged, MaxItersExceeded]


# ----------------------------------------------------------------------------
# kernels
# ----------------------------------------------------------------------------

@numba.njit(cache=True)
def _update(a3, a2, q, s, r, h, w, fm2, fm1, fi, fp1, g):
    return (2.0 * fp1 - 2.0 * fm1 + fm2
            - (2.0 * h / a3) * a2 * (fp1 - 2.0 * fi + fm1)
            - (h * h / a3) * (q * w + s) * (fp1 - fm1)
            - (2.0 * h * h * h * r / a3) * fi
            + g / a3)


@numba.njit(cache=True)
def _lag(p, m, m_int, h, fm1, fi, fp1):
    if p == 0.0:
        return 0.0, True
    if not m_int and fi <= 0.0:
        return 0.0, False
    return -h * h * p * fi**m * (fp1 - fm1), True


@numba.njit(cache=True)
def _sweep(prev, nxt, a, h, a3, a2, p, m, m_int, q, s, r, gamma, bound, lagged):
    n1 = prev.shape[0]
    nxt[0] = gamma
    nxt[1] = gamma
    nxt[2] = gamma
    for i in range(1, n1 - 2):
        src = prev if lagged else nxt
        g, ok = _lag(p, m, m_int, h, src[i - 1], src[i], src[i + 1])
        if not ok:
            return _NEGBASE, i
        fm2 = nxt[0] if i == 1 else nxt[i - 2]  # ghost phi_0 = phi_1
        v = _update(a3, a2, q, s, r, h, a + i * h, fm2, nxt[i - 1], nxt[i], nxt[i + 1], g)
        nxt[i + 2] = v
        if not abs(v) < bound:
            return _OVERFLOW, i + 2
    return _OK, -1


def _kernel_args(ode: GenericODE):
    return (ode.a3, ode.a2, ode.p, ode.m, float(ode.m).is_integer(), ode.q, ode.s, ode.r)


# ----------------------------------------------------------------------------
# public operations
# ----------------------------------------------------------------------------

def update_point(ode: GenericODE, h: float, omega_i: float, phi_im2: float, phi_im1: float,
                 phi_i: float, phi_ip1: float, g_lag: float) -> float:
    """phi_{i+2} from the four preceding values and the supplied nonlinear term."""
    return _update(ode.a3, ode.a2, ode.q, ode.s, ode.r, h, omega_i,
                   phi_im2, phi_im1, phi_i, phi_ip1, g_lag)


def lagged_nonlinearity(ode: GenericODE, h: float, phi_im1: float, phi_i: float, phi_ip1: float) -> float:
    """g_i = -h^2 p phi_i^m (phi_{i+1} - phi_{i-1})."""
    g, ok = _lag(ode.p, ode.m, float(ode.m).is_integer(), h, phi_im1, phi_i, phi_ip1)
    if not ok:
        raise NegativeBase(f"phi_i = {phi_i} raised to non-integer power {ode.m}")
    return g


def initial_iterate(gamma: float, N: int) -> np.ndarray:
    phi = np.zeros(N + 1)
    phi[:3] = gamma
    return phi


def sweep(ivp: ReducedIVP, grid: Grid, phi_prev: np.ndarray, lagged: bool = False,
          overflow_bound: float = np.inf) -> np.ndarray:
    """One fixed-point sweep; returns the new iterate."""
    phi_prev = np.ascontiguousarray(phi_prev, dtype=float)
    if phi_prev.shape != (grid.N + 1,):
        raise BadGrid(f"iterate has shape {phi_prev.shape}, grid needs {grid.N + 1}")
    nxt = np.empty_like(phi_prev)
    code, idx = _sweep(phi_prev, nxt, grid.a, grid.h, *_kernel_args(ivp.ode),
                       float(ivp.gamma), overflow_bound, lagged)
    if code == _NEGBASE:
        raise NegativeBase(f"non-positive phi at index {idx} with non-integer power {ivp.ode.m}")
    return nxt


def _delta(new: np.ndarray, old: np.ndarray, N: int) -> float:
    # nodes 1..N of the 1-based numbering; the last node is excluded
    num = np.max(np.abs(new[:N] - old[:N]))
    den = np.max(np.abs(new[:N]))
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return float(num / den)


def solve(ivp: ReducedIVP, cfg: SolverConfig = SolverConfig()) -> SolveOutcome:
    """Iterate sweeps from phi^0 = (gamma, gamma, gamma, 0, ..., 0) to a fixed point."""
    grid = make_grid(ivp.a, ivp.b, cfg.N)
    args = _kernel_args(ivp.ode)
    gamma = float(ivp.gamma)
    prev = initial_iterate(gamma, grid.N)
    nxt = np.empty_like(prev)
    delta = math.inf
    for k in range(1, cfg.max_iters + 1):
        code, idx = _sweep(prev, nxt, grid.a, grid.h, *args, gamma, cfg.overflow_bound, cfg.lagged)
        if code == _NEGBASE:
            raise NegativeBase(f"iteration {k}: non-positive phi at index {idx} "
                               f"with non-integer power {ivp.ode.m}")
        if code == _OVERFLOW:
            return Diverged(k, int(idx), float(abs(nxt[idx])), nxt[:idx].copy())
        delta = _delta(nxt, prev, grid.N)
        prev, nxt = nxt, prev
        if delta <= cfg.tol:
            return Converged(SolutionProfile(grid, prev, k, delta))
    return MaxItersExceeded(SolutionProfile(grid, prev, cfg.max_iters, delta))


def discrete_residual(ode: GenericODE, grid: Grid, phi: np.ndarray) -> float:
    """max |a3 D3 phi + a2 D2 phi + (p phi^m + q w + s) D1 phi + r phi| over nodes 3..N-1."""
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (grid.N + 1,):
        raise BadGrid("profile length does not match the grid")
    h = grid.h
    c = phi[2:-2]
    if ode.p != 0 and not float(ode.m).is_integer() and np.any(c <= 0):
        raise NegativeBase("non-positive phi with non-integer power")
    d3 = (phi[4:] - 2 * phi[3:-1] + 2 * phi[1:-3] - phi[:-4]) / (2 * h**3)
    d2 = (phi[3:-1] - 2 * c + phi[1:-3]) / h**2
    d1 = (phi[3:-1] - phi[1:-3]) / (2 * h)
    w = grid.nodes[2:-2]
    nonlin = ode.p * c**ode.m if ode.p != 0 else 0.0
    res = ode.a3 * d3 + ode.a2 * d2 + (nonlin + ode.q * w + ode.s) * d1 + ode.r * c
    return float(np.max(np.abs(res)))


def _solve_profile(ivp: ReducedIVP, cfg: SolverConfig) -> SolutionProfile:
    out = solve(ivp, cfg)
    if not isinstance(out, Converged):
        raise NotConverged(f"N={cfg.N}: solver returned {out.status}", out)
    return out.profile


def convergence_study(ivp: ReducedIVP, Ns, N_ref: int, cfg: SolverConfig = SolverConfig(),
                      workers: int | None = None) -> list[tuple[int, float]]:
    """Max-norm error of each N against the N_ref solution on the shared coarse nodes."""
    Ns = [int(N) for N in Ns]
    if N_ref <= max(Ns):
        raise NonNestedGrids(f"N_ref = {N_ref} must exceed every N in {Ns}")
    bad = [N for N in Ns if N_ref % N]
    if bad:
        raise NonNestedGrids(f"{bad} do not divide N_ref = {N_ref}")
    cfgs = [_with_N(cfg, N) for N in [N_ref] + Ns]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            profiles = list(pool.map(_solve_profile, [ivp] * len(cfgs), cfgs))
    else:
        profiles = [_solve_profile(ivp, c) for c in cfgs]
    ref = profiles[0].phi
    table = []
    for N, prof in zip(Ns, profiles[1:]):
        coarse_ref = ref[:: N_ref // N]
        table.append((N, float(np.max(np.abs(coarse_ref[:N] - prof.phi[:N])))))
    return table


def _with_N(cfg: SolverConfig, N: int) -> SolverConfig:
    return replace(cfg, N=N)


def loglog_slope(table) -> float:
    """Least-squares slope of log(error) against log(N)."""
    N = np.array([row[0] for row in table], dtype=float)
    e = np.array([row[1] for row in table], dtype=float)
    return float(np.polyfit(np.log(N), np.log(e), 1)[0])


# ----------------------------------------------------------------------------
# text formats
# ----------------------------------------------------------------------------

def format_profile_csv(omega, phi, meta: dict | None = None) -> str:
    lines = ["omega,phi"]
    lines += [f"{w:.16e},{v:.16e}" for w, v in zip(np.asarray(omega), np.asarray(phi))]
    for key, value in (meta or {}).items():
        lines.append(f"# {key}={value}")
    return "\n".join(lines) + "\n"


def outcome_meta(outcome: SolveOutcome) -> dict:
    if isinstance(outcome, Diverged):
        return {"status": outcome.status, "iterations": outcome.at_iteration,
                "at_index": outcome.at_index, "magnitude": repr(outcome.magnitude)}
    prof = outcome.profile
    return {"status": outcome.status, "iterations": prof.iterations, "final_delta": repr(prof.final_delta)}


def write_profile_csv(path, profile: SolutionProfile, meta: dict | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_profile_csv(profile.omega, profile.phi, meta))


def read_profile_csv(path) -> tuple[np.ndarray, np.ndarray, dict]:
    meta = {}
    rows = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "omega,phi":
            raise ValueError(f"unexpected header {header!r}")
        for line in fh:
            line = line.strip()
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = value
            elif line:
                w, v = line.split(",")
                rows.append((float(w), float(v)))
    arr = np.array(rows, dtype=float).reshape(-1, 2)
    return arr[:, 0], arr[:, 1], meta


def format_convergence_csv(table) -> str:
    return "N,abs_error\n" + "".join(f"{N},{e:.16e}\n" for N, e in table)
