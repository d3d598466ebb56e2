"""Shared helper for the one-parameter profile sweeps."""
from __future__ import annotations

import csv
import os

import numpy as np

from gkdv.fdsolver import Diverged, SolverConfig, make_grid, solve
from gkdv.reduce import standard_ivp


def sweep_profiles(param: str, values, out_path: str, N: int = 100000, stride: int = 50, **fixed) -> dict:
    """Solve the standard problem once per value of ``param`` and write a wide CSV.

    Divergent runs keep their partial iterate up to the overflowing node and NaN after it.
    Returns the outcome status per value.
    """
    columns, status = {}, {}
    omega = make_grid(*standard_ivp(**fixed).domain, N).nodes
    for v in values:
        ivp = standard_ivp(**{**fixed, param: v})
        out = solve(ivp, SolverConfig(N=N))
        if isinstance(out, Diverged):
            phi = np.full(N + 1, np.nan)
            if out.partial is not None:
                phi[: out.at_index] = out.partial[: out.at_index]
        else:
            phi = out.profile.phi
        columns[v] = phi[::stride]
        status[v] = out.status
    os.makedirs(os.path.dirname(out_path) or ".", exist_ok=True)
    with open(out_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["omega"] + [f"{param}={v:g}" for v in values])
        for k, om in enumerate(omega[::stride]):
            w.writerow([repr(float(om))] + [repr(float(columns[v][k])) for v in values])
    return status
