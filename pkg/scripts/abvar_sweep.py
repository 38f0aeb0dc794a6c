"""Sweep the abelian-variety scenario over (p, l, b) and tabulate d and the verdict."""

from __future__ import annotations

import argparse
import itertools
import time
from dataclasses import dataclass, field

from lladic.errors import BadParameters
from lladic.sharpness import abvar_scenario


@dataclass
class SweepConfig:
    ps: list = field(default_factory=lambda: [2, 3])
    primes: list = field(default_factory=lambda: [3, 5, 7, 11])
    bs: list = field(default_factory=lambda: [0, 1])
    precision: int = 16


def main(cfg: SweepConfig):
    print(f"{'p':>2} {'l':>3} {'b':>2} {'d':>3}  verdict       time")
    for p, ell, b in itertools.product(cfg.ps, cfg.primes, cfg.bs):
        start = time.perf_counter()
        try:
            cert = abvar_scenario(p, ell, b, cfg.precision)
        except BadParameters as exc:
            print(f"{p:>2} {ell:>3} {b:>2}   -  skipped: {exc}")
            continue
        verdict = "obstructed" if cert.verified else "NOT obstructed"
        print(f"{p:>2} {ell:>3} {b:>2} {cert.d:>3}  {verdict:<12} {time.perf_counter() - start:5.2f}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ps", nargs="+", type=int, default=[2, 3])
    ap.add_argument("--primes", nargs="+", type=int, default=[3, 5, 7, 11])
    ap.add_argument("--bs", nargs="+", type=int, default=[0, 1])
    ap.add_argument("--precision", type=int, default=16)
    a = ap.parse_args()
    main(SweepConfig(a.ps, a.primes, a.bs, a.precision))
