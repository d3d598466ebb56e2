"""Standard problem swept over the similarity exponent rho, in two panels."""
import argparse
import os
from dataclasses import dataclass

from _sweep import sweep_profiles


@dataclass(frozen=True)
class Config:
    low: tuple = (0.5, 0.25, 1.0)
    high: tuple = (1.2, 1.5, 1.75, 1.9, 2.0)
    N: int = 100000
    out_dir: str = "results/fig5"


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=Config.out_dir)
    cfg = Config(out_dir=ap.parse_args().out_dir)
    for label, values in (("low", cfg.low), ("high", cfg.high)):
        print(label, sweep_profiles("rho", values, os.path.join(cfg.out_dir, f"profiles_{label}.csv"), N=cfg.N))
