"""Space-time field u(x, t) of the standard solution, clipped for display."""
import argparse
import os
from dataclasses import dataclass

import numpy as np

from gkdv.fdsolver import SolverConfig, solve
from gkdv.reconstruct import reconstruct, write_field_csv
from gkdv.reduce import standard_ivp


@dataclass(frozen=True)
class Config:
    x_range: tuple = (0.0, 10.0)
    t_range: tuple = (0.1, 2.0)
    nx: int = 201
    nt: int = 40
    clip: tuple = (-5.0, 5.0)
    N: int = 100000
    out_dir: str = "results/fig6"


def run(cfg: Config) -> str:
    ivp = standard_ivp()
    prof = solve(ivp, SolverConfig(N=cfg.N)).profile
    field = reconstruct(ivp.ansatz, prof, np.linspace(*cfg.x_range, cfg.nx), np.linspace(*cfg.t_range, cfg.nt))
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, "field.csv")
    write_field_csv(path, field, clip=cfg.clip)
    return path


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=Config.out_dir)
    print(run(Config(out_dir=ap.parse_args().out_dir)))
