"""Closed-form solutions: solitary traveling waves and the constant profile."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InputError, NegativeBase, Singularity
from .fdsolver import Grid, SolutionProfile


class WaveKind(str, Enum):
    COSH = "cosh"
    SINH = "sinh"


@dataclass(frozen=True)
class TravelingWaveSolution:
    """phi(w) = (+-sigma (n+1)(n+2) / (2 f^2((n/2) sqrt(sigma/eps) w + C)))^(1/n), f = cosh or sinh.

    Solves eps phi''' + (phi^n - sigma) phi' = 0, so u(x, t) = phi(x - sigma t)
    solves u_t + u^n u_x + eps u_xxx = 0.
    """

    n: float
    sigma: float
    epsilon: float
    C: float = 0.0
    kind: WaveKind = WaveKind.COSH

    def __post_init__(self):
        if self.n == 0:
            raise InputError("n must be nonzero")
        if self.epsilon == 0 or not self.sigma / self.epsilon > 0:
            raise InputError("need sigma / epsilon > 0 for a real wave number")
        object.__setattr__(self, "kind", WaveKind(self.kind))

    @property
    def wavenumber(self) -> float:
        return 0.5 * self.n * math.sqrt(self.sigma / self.epsilon)

    @property
    def peak(self) -> float:
        """omega where the cosh argument vanishes."""
        return -self.C / self.wavenumber


def tw_profile(sol: TravelingWaveSolution, omega):
    z = sol.wavenumber * np.asarray(omega, dtype=float) + sol.C
    amp = sol.sigma * (sol.n + 1) * (sol.n + 2) / 2
    if sol.kind is WaveKind.COSH:
        base = amp / np.cosh(z) ** 2
    else:
        sh = np.sinh(z)
        if np.any(sh == 0):
            raise Singularity("sinh argument vanishes")
        base = -amp / sh**2
    inv = 1.0 / sol.n
    if not float(inv).is_integer() and np.any(base <= 0):
        raise NegativeBase(f"base {np.min(base):g} raised to non-integer power {inv:g}")
    out = base**inv
    return float(out) if np.ndim(out) == 0 else out


def tw_field(sol: TravelingWaveSolution, x, t):
    return tw_profile(sol, np.asarray(x, dtype=float) - sol.sigma * np.asarray(t, dtype=float))


def constant_solution(gamma: float):
    """Factory grid -> profile with phi identically gamma."""

    def make(grid: Grid) -> SolutionProfile:
        return SolutionProfile(grid, np.full(grid.N + 1, float(gamma)), 0, 0.0)

    return make
