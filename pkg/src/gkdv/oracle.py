"""Reference integrator for reduced IVPs: adaptive 8th-order Runge-Kutta with dense output.

Used to cross-check the finite-difference path. The two routes share only the
ODE coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import DOP853

from .errors import BlowUp, GridMismatch, NegativeBase
from .fdsolver import Grid, SolutionProfile
from .reduce import ReducedIVP

BLOWUP_BOUND = 1e12


@dataclass(frozen=True)
class OracleConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 10_000_000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


def _system(ivp: ReducedIVP):
    o = ivp.ode
    real_power = o.p != 0 and not float(o.m).is_integer()

    def f(w, y):
        phi, d1, d2 = y
        if real_power and phi <= 0:
            raise NegativeBase(f"phi = {phi} at omega = {w} with non-integer power {o.m}")
        nonlin = o.p * phi**o.m if o.p != 0 else 0.0
        d3 = -(o.a2 * d2 + (nonlin + o.q * w + o.s) * d1 + o.r * phi) / o.a3
        return np.array([d1, d2, d3])

    return f


def rk_solve(ivp: ReducedIVP, grid: Grid, cfg: OracleConfig = OracleConfig(),
             initial_state=None) -> SolutionProfile:
    """Integrate (phi, phi', phi'') from (gamma, 0, 0) and sample phi at the grid nodes.

    ``initial_state`` overrides the initial triple, e.g. for exact-solution checks.
    """
    if (grid.a, grid.b) != (ivp.a, ivp.b):
        raise GridMismatch(f"grid [{grid.a}, {grid.b}] differs from the IVP domain {ivp.domain}")
    y0 = np.array([ivp.gamma, 0.0, 0.0] if initial_state is None else initial_state, dtype=float)
    nodes = grid.nodes
    out = np.empty_like(nodes)
    out[0] = y0[0]
    solver = DOP853(_system(ivp), grid.a, y0, grid.b, rtol=cfg.rel_tol, atol=cfg.abs_tol)
    k = 1
    steps = 0
    while k < nodes.size:
        if solver.status != "running":
            raise BlowUp(f"integrator stopped at omega = {solver.t}: {solver.status}", omega=solver.t)
        msg = solver.step()
        steps += 1
        if msg is not None:
            raise BlowUp(f"integrator failed at omega = {solver.t}: {msg}", omega=solver.t)
        mag = float(np.max(np.abs(solver.y)))
        if not mag < BLOWUP_BOUND:
            raise BlowUp(f"|state| = {mag:g} at omega = {solver.t}", omega=solver.t, magnitude=mag)
        if steps > cfg.max_steps:
            raise BlowUp(f"step budget {cfg.max_steps} exhausted at omega = {solver.t}", omega=solver.t)
        hi = k + int(np.searchsorted(nodes[k:], solver.t, side="right"))
        if solver.status == "finished":
            hi = nodes.size
        if hi > k:
            dense = solver.dense_output()
            out[k:hi] = dense(nodes[k:hi])[0]
            k = hi
    return SolutionProfile(grid, out, steps, 0.0)


def compare_profiles(p1: SolutionProfile, p2: SolutionProfile) -> tuple[float, float, int]:
    """(max abs diff, max diff / max(1, max|p1|), 0-based index of the max abs diff)."""
    if p1.grid != p2.grid:
        raise GridMismatch(f"{p1.grid} vs {p2.grid}")
    d = np.abs(p1.phi - p2.phi)
    i = int(np.argmax(d))
    scale = max(1.0, float(np.max(np.abs(p1.phi))))
    return float(d[i]), float(d[i] / scale), i
