"""Fixed-time slices of the standard solution at t = 0, 0.2, ..., 2.

The t = 0 slice is skipped with a warning: the boundary datum t^(-1/3) is singular there.
"""
import argparse
from dataclasses import dataclass

import numpy as np

from gkdv.fdsolver import SolverConfig, solve
from gkdv.reconstruct import write_fence_slices
from gkdv.reduce import standard_ivp


@dataclass(frozen=True)
class Config:
    dt: float = 0.2
    n_slices: int = 11
    x_range: tuple = (0.0, 10.0)
    nx: int = 401
    clip: tuple = (-5.0, 5.0)
    N: int = 100000
    out_dir: str = "results/fig7"


def run(cfg: Config) -> list:
    ivp = standard_ivp()
    prof = solve(ivp, SolverConfig(N=cfg.N)).profile
    ts = [round(i * cfg.dt, 12) for i in range(cfg.n_slices)]
    return write_fence_slices(cfg.out_dir, ivp.ansatz, prof, np.linspace(*cfg.x_range, cfg.nx), ts, cfg.clip)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=Config.out_dir)
    print("\n".join(run(Config(out_dir=ap.parse_args().out_dir))))
