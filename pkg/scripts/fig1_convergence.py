"""Grid convergence of the standard solution: max error against a fine reference."""
import argparse
import os
from dataclasses import dataclass

from gkdv.fdsolver import convergence_study, format_convergence_csv, loglog_slope
from gkdv.reduce import standard_ivp


@dataclass(frozen=True)
class Config:
    Ns: tuple = (12500, 25000, 50000, 100000)
    N_ref: int = 200000
    out_dir: str = "results/fig1"


def run(cfg: Config) -> float:
    table = convergence_study(standard_ivp(), cfg.Ns, cfg.N_ref)
    os.makedirs(cfg.out_dir, exist_ok=True)
    with open(os.path.join(cfg.out_dir, "convergence.csv"), "w") as fh:
        fh.write(format_convergence_csv(table))
    return loglog_slope(table)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=Config.out_dir)
    slope = run(Config(out_dir=ap.parse_args().out_dir))
    print(f"log-log slope {slope:.3f}")
