"""Print the (r, j) Smith-exponent tables for the obstruction settings and their controls."""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field

from lladic.sharpness import build_counterexample, control_setting, no_perfect_pairing_oracle


@dataclass
class TableConfig:
    kinds: list = field(default_factory=lambda: ["Prop61", "Thm62", "Thm66"])
    primes: list = field(default_factory=lambda: [5, 7])
    p: int = 2
    precision: int = 24
    controls: bool = True


def show(cert, label):
    verdict = "obstructed" if cert.obstructed else f"perfect at r={cert.witness.r}, j={cert.witness.j}"
    print(f"== {label}: {verdict}")
    for c in cert.table:
        mark = "*" if c.perfect else ("." if c.integral else "x")
        print(f"  {mark} r={c.r:2d} j={c.j:3d} exponents={c.exponents}")
    if cert.mechanism:
        m = cert.mechanism
        print(f"  mechanism: min valuation {m['min_valuation']} >= {m['target']}: {m['holds']}")


def main(cfg: TableConfig):
    for kind in cfg.kinds:
        for ell in cfg.primes:
            start = time.perf_counter()
            setting = build_counterexample(kind, ell, cfg.p, precision=cfg.precision)
            show(no_perfect_pairing_oracle(setting), setting.setting_id)
            if cfg.controls:
                show(no_perfect_pairing_oracle(control_setting(setting)), f"control for {setting.setting_id}")
            print(f"  ({time.perf_counter() - start:.2f}s)")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kinds", nargs="+", default=TableConfig().kinds)
    ap.add_argument("--primes", nargs="+", type=int, default=TableConfig().primes)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--precision", type=int, default=24)
    ap.add_argument("--no-controls", action="store_true")
    a = ap.parse_args()
    main(TableConfig(a.kinds, a.primes, a.p, a.precision, not a.no_controls))
