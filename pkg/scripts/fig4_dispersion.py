"""Standard problem swept over the third-derivative coefficient eps."""
import argparse
import os
from dataclasses import dataclass

from _sweep import sweep_profiles


@dataclass(frozen=True)
class Config:
    values: tuple = (-1.0, -2.0, -5.0)
    N: int = 100000
    out_dir: str = "results/fig4"


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=Config.out_dir)
    cfg = Config(out_dir=ap.parse_args().out_dir)
    print(sweep_profiles("eps", cfg.values, os.path.join(cfg.out_dir, "profiles.csv"), N=cfg.N))
