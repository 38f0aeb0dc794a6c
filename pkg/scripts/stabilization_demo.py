"""Run the lattice stabilization loop from several starts and report the chains.

G-stable starts in the tensor setting are already fixpoints.  Shrinking part of
O_M keeps stability under the quaternion factor only, and the loop then grows
the lattice before stopping.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from lladic import linalg as la
from lladic.replib import is_stable
from lladic.sharpness import build_counterexample
from lladic.symplectify import reduce_embedding, stabilize_lattice


@dataclass
class DemoConfig:
    ell: int = 5
    p: int = 2
    precision: int = 24
    shrink: int = 1


def report(label, sp, rep):
    print(f"{label}: {sp.iterations} iteration(s)")
    print(f"  initial dual exponents {sp.initial_exponents}")
    print(f"  final dual exponents   {sp.dual_index_exponents}")
    print(f"  G-stable result: {is_stable(rep, sp.lattice)}")


def main(cfg: DemoConfig):
    s = build_counterexample("Thm62", cfg.ell, cfg.p, precision=cfg.precision)
    K = s.ring
    sp = stabilize_lattice(s.lattice, s.form, s.rep)
    report("S = T1 (x) O_M", sp, s.rep)
    emb = reduce_embedding(sp, s.rep)
    print(f"  residue blocks {emb.block_dims}, injective {emb.injective}, charpolys match {emb.charpolys_match}")

    m = s.algebra.n
    scale = la.block_diag([la.identity(K, 1), la.mat_scale(K.pi ** cfg.shrink, la.identity(K, m - 1))], K)
    start = s.lattice.apply(la.kron(la.identity(K, 2), scale))
    print(f"\nstart stable under G: {is_stable(s.rep, start)}")
    sp = stabilize_lattice(start, s.form)
    report("partially shrunk start", sp, s.rep)
    for i, t in enumerate(sp.chain):
        print(f"  step {i}: index in final lattice {sp.lattice.index(t)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--prime", type=int, default=5)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--precision", type=int, default=24)
    ap.add_argument("--shrink", type=int, default=1)
    a = ap.parse_args()
    main(DemoConfig(a.prime, a.p, a.precision, a.shrink))
