"""Map a solved profile phi(omega) back to u(x, t) and check the PDE on the result."""
from __future__ import annotations

import os
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BadTimeDomain, GridTooSmall, NegativeBase, OmegaOutOfRange
from .fdsolver import SolutionProfile
from .model import GKdVEquation, eval_coefficient
from .reduce import NEEDS_POSITIVE_T, Ansatz


@dataclass(frozen=True, eq=False)
class SpaceTimeField:
    x_nodes: np.ndarray
    t_nodes: np.ndarray
    u: np.ndarray  # u[i, k] = u(x_i, t_k)

    def __post_init__(self):
        if self.u.shape != (self.x_nodes.size, self.t_nodes.size):
            raise ValueError(f"u has shape {self.u.shape}, nodes give "
                             f"({self.x_nodes.size}, {self.t_nodes.size})")


def interpolate(profile: SolutionProfile, omega):
    """Piecewise-linear interpolation of the profile; exact at nodes, no extrapolation."""
    w = np.asarray(omega, dtype=float)
    g = profile.grid
    if np.any((w < g.a) | (w > g.b)) or np.any(np.isnan(w)):
        bad = w[(w < g.a) | (w > g.b) | np.isnan(w)].ravel()[0]
        raise OmegaOutOfRange(f"omega = {bad} outside [{g.a}, {g.b}]", omega=float(bad))
    s = (w - g.a) / g.h
    i = np.clip(np.floor(s).astype(np.int64), 0, g.N - 1)
    frac = s - i
    phi = profile.phi
    out = phi[i] + frac * (phi[i + 1] - phi[i])
    # node hits return the stored value even when the division rounds off the node
    near = np.clip(np.rint(s).astype(np.int64), 0, g.N)
    out = np.where(g.nodes[near] == w, phi[near], out)
    return float(out) if out.ndim == 0 else out


def reconstruct(ansatz: Ansatz, profile: SolutionProfile, x_nodes, t_nodes) -> SpaceTimeField:
    x = np.asarray(x_nodes, dtype=float)
    t = np.asarray(t_nodes, dtype=float)
    if isinstance(ansatz, NEEDS_POSITIVE_T) and np.any(t <= 0):
        raise BadTimeDomain(f"{type(ansatz).__name__} ansatz needs t > 0")
    X, T = np.meshgrid(x, t, indexing="ij")
    W = ansatz.omega(X, T)
    g = profile.grid
    out = (W < g.a) | (W > g.b)
    if np.any(out):
        i, k = np.argwhere(out)[0]
        raise OmegaOutOfRange(f"(x, t) = ({x[i]}, {t[k]}) maps to omega = {W[i, k]} "
                              f"outside [{g.a}, {g.b}]", x=x[i], t=t[k], omega=W[i, k])
    u = ansatz.prefactor(T) * interpolate(profile, W)
    return SpaceTimeField(x, t, u)


def _uniform_step(v: np.ndarray, what: str) -> float:
    d = np.diff(v)
    if not np.allclose(d, d[0], rtol=1e-9, atol=0):
        raise ValueError(f"{what} nodes must be uniformly spaced")
    return float(d[0])


def pde_residual(eq: GKdVEquation, field: SpaceTimeField) -> tuple[float, float]:
    """Max and RMS of u_t + u^n u_x + h u + g u_xxx by central differences at interior nodes."""
    x, t, u = field.x_nodes, field.t_nodes, field.u
    if x.size < 5 or t.size < 3:
        raise GridTooSmall("need at least 5 x-nodes and 3 t-nodes")
    dx = _uniform_step(x, "x")
    dt = _uniform_step(t, "t")
    c = u[2:-2, 1:-1]
    if not float(eq.n).is_integer() and np.any(c <= 0):
        raise NegativeBase(f"u <= 0 raised to non-integer power {eq.n}")
    ut = (u[2:-2, 2:] - u[2:-2, :-2]) / (2 * dt)
    ux = (u[3:-1, 1:-1] - u[1:-3, 1:-1]) / (2 * dx)
    uxxx = (u[4:, 1:-1] - 2 * u[3:-1, 1:-1] + 2 * u[1:-3, 1:-1] - u[:-4, 1:-1]) / (2 * dx**3)
    tc = t[1:-1]
    g = np.broadcast_to(eval_coefficient(eq.g, tc), tc.shape)
    h = np.broadcast_to(eval_coefficient(eq.h, tc), tc.shape)
    r = ut + c**eq.n * ux + h * c + g * uxxx
    return float(np.max(np.abs(r))), float(np.sqrt(np.mean(r**2)))


# ----------------------------------------------------------------------------
# exports
# ----------------------------------------------------------------------------

def format_field_csv(field: SpaceTimeField, clip: tuple[float, float] | None = None) -> str:
    """Long form, t outer and x inner. ``clip`` limits values for display only."""
    u = field.u if clip is None else np.clip(field.u, *clip)
    lines = ["x,t,u"]
    for k, tk in enumerate(field.t_nodes):
        lines += [f"{xi:.16e},{tk:.16e},{u[i, k]:.16e}" for i, xi in enumerate(field.x_nodes)]
    return "\n".join(lines) + "\n"


def write_field_csv(path, field: SpaceTimeField, clip=None) -> None:
    with open(path, "w") as fh:
        fh.write(format_field_csv(field, clip))


def read_field_csv(path) -> SpaceTimeField:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    t = np.unique(data[:, 1])
    x = data[data[:, 1] == t[0], 0]
    return SpaceTimeField(x, t, data[:, 2].reshape(t.size, x.size).T.copy())


def write_fence_slices(directory, ansatz: Ansatz, profile: SolutionProfile, x_nodes, t_values,
                       clip=None) -> list[str]:
    """One ``slice_t=<value>.csv`` per snapshot; t <= 0 is skipped for singular ansatzes."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for tv in t_values:
        if tv <= 0 and isinstance(ansatz, NEEDS_POSITIVE_T):
            warnings.warn(f"skipping slice t={tv:g}: ansatz is singular at t <= 0", stacklevel=2)
            continue
        f = reconstruct(ansatz, profile, x_nodes, [tv])
        path = os.path.join(directory, f"slice_t={tv:g}.csv")
        write_field_csv(path, f, clip)
        paths.append(path)
    return paths


def boundary_trace(field: SpaceTimeField) -> np.ndarray:
    """u(x_0, t) for every t."""
    return field.u[0, :]


