"""Acceptance criteria 1-10, one PASS/FAIL line each, with the required runtimes.

Runs at the default precision.  The lines are printed even without ``-s``.
"""

import random
import time

import pytest

from lladic import linalg as la
from lladic.cli import run
from lladic.cycalg import CyclotomicAlgebra
from lladic.errors import BadParameters, HypothesesUnmet
from lladic.latmod import BilinearForm, Lattice, dual_lattice, is_perfect, lattice_intersect, lattice_sum
from lladic.localring import base_ring, cyclotomic_ring
from lladic.replib import is_stable
from lladic.sharpness import (
    abvar_scenario,
    build_counterexample,
    control_setting,
    inverse_different_containment,
    inverse_different_exponent,
    no_perfect_pairing_oracle,
    no_residue_symplectic_embedding,
)
from lladic.symplectify import (
    cyclotomic_sign_representation,
    perfect_pairing,
    reduce_embedding,
    rigidity_check,
    stabilize_lattice,
)


@pytest.fixture
def report(capsys):
    def emit(number, title, limit, body):
        start = time.perf_counter()
        detail, ok = "", False
        try:
            detail = body() or ""
            ok = True
        except AssertionError as exc:
            detail = f"assertion failed: {exc}"
        elapsed = time.perf_counter() - start
        within = elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {status} {title} ({elapsed:.2f}s, limit {limit}s) {detail}")
        assert ok, detail
        assert within, f"took {elapsed:.2f}s, limit {limit}s"

    return emit


def test_criterion_01_sign_pairing(report):
    def body():
        out = []
        for ell in (5, 11):
            t0 = time.perf_counter()
            K = base_ring(ell)
            rep, f = cyclotomic_sign_representation(ell, K)
            assert rep.dim == ell - 1 and K.e == 1
            res = perfect_pairing(rep, f)
            g = res.form.gram
            assert la.mat_eq(la.transpose(g), la.mat_neg(g))
            assert all(g[i][i].is_zero() for i in range(rep.dim))
            assert all(res.form.is_invariant(rep.image(x)) for x in rep.group.elements)
            assert is_stable(rep, res.lattice)
            assert is_perfect(res.lattice, res.form).perfect
            dt = time.perf_counter() - t0
            assert dt < 1.0, f"l={ell} took {dt:.2f}s"
            out.append(f"l={ell}:{dt:.2f}s")
        return " ".join(out)

    report(1, "alternating invariant perfect pairing on O_K[zeta_l]", 2, body)


def test_criterion_02_stabilize_and_reduce(report):
    def body():
        s = build_counterexample("Thm62", 5, 2)
        K = s.ring
        assert 2 * K.e < K.prime - 1 and s.group.order == 40
        sp = stabilize_lattice(s.lattice, s.form, s.rep)
        t = sp.lattice
        assert is_stable(s.rep, t)
        assert t.contains(dual_lattice(t, s.form).scale(1))
        emb = reduce_embedding(sp, s.rep)
        k = K.residue_field
        assert emb.kernel == [s.group.identity] and emb.injective
        images = {g: tuple(map(tuple, emb.residue_images[g])) for g in s.group.elements}
        assert len(set(images.values())) == 40
        for g in s.group.elements:
            lifted = [c.residue() for c in la.charpoly(s.rep.image(g), K)]
            assert la.charpoly(emb.residue_images[g], k) == lifted
        return f"iterations={sp.iterations} exponents={sp.dual_index_exponents}"

    report(2, "stabilization fixpoint and injective residue embedding", 5, body)


def test_criterion_03_thm62_sharpness(report):
    def body():
        out = []
        for ell, construction in ((5, "split"), (7, "nonsplit")):
            s = build_counterexample("Thm62", ell, 2)
            assert s.params["construction"] == construction
            cert = no_perfect_pairing_oracle(s)
            assert cert.obstructed and not any(c.perfect for c in cert.table)
            ctl = no_perfect_pairing_oracle(control_setting(s))
            assert any(c.perfect for c in ctl.table)
            out.append(f"l={ell}:{len(cert.table)} cells")
        return " ".join(out)

    report(3, "alternating obstruction tables for l=5 and l=7, controls perfect", 30, body)


def test_criterion_04_prop61(report):
    def body():
        for ell in (5, 7):
            cert = no_perfect_pairing_oracle(build_counterexample("Prop61", ell))
            assert cert.obstructed and all(not c.perfect for c in cert.table)
        return "l=5,7 obstructed"

    report(4, "symmetric obstruction for l=5 and l=7", 5, body)


def test_criterion_05_cor64(report):
    def body():
        out = []
        for b in (1, 2):
            cert = no_perfect_pairing_oracle(build_counterexample("Cor64", 5, 2, b))
            sp = cert.splitting
            assert sp["holds"] and sp["cross_terms_vanish"] and sp["lattices_decompose"]
            assert cert.obstructed
            out.append(f"b={b}:{sp['forms_checked']} forms")
        return " ".join(out)

    report(5, "projector splitting with a trivial summand", 30, body)


def test_criterion_06_real_base_and_residue(report):
    def body():
        s = build_counterexample("Thm66", 5, 2)
        assert s.ring.e == 2 and s.ring.f == 1
        cert = no_perfect_pairing_oracle(s)
        assert cert.obstructed
        res = no_residue_symplectic_embedding(5, 2)
        assert res.field_size == 5 and res.method == "enumeration"
        assert res.all_degenerate and res.identity_1 and res.identity_2
        return f"{res.enumerated} residue forms enumerated"

    report(6, "ramified real base obstruction and residue degeneracy", 10, body)


def test_criterion_07_inverse_different(report):
    def body():
        rng = random.Random(7)
        checked = 0
        for ell in (5, 7, 11):
            alg = CyclotomicAlgebra(base_ring(ell))
            K = alg.base
            assert inverse_different_exponent(alg) == 2 - ell
            theta = alg.add(alg.zeta, alg.power(alg.zeta, ell - 1))
            boundary = alg.power(alg.eta, 3 - ell)
            samples = [alg.one(), boundary, alg.mul(boundary, theta)]
            for _ in range(4):
                u = alg.add(alg.scale(K.random_unit(rng), alg.one()),
                            alg.scale(K.random_integral(rng, digits=2), theta))
                samples.append(alg.mul(boundary, alg.mul(u, alg.power(alg.varpi, rng.randint(0, 2)))))
            for delta in samples:
                assert alg.conjugate(delta) == delta
                assert inverse_different_containment(delta, alg)["holds"]
                checked += 1
        return f"{checked} elements of M+ for l=5,7,11"

    report(7, "trace containments on full power bases", 1, body)


def _random_identity(rng):
    ell = rng.choice([5, 7, 11, 13])
    K = base_ring(ell, 12)
    n = rng.randint(1, 4)
    p = [[K.random_integral(rng, digits=2) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        p[i][i] = K.random_unit(rng)
        for j in range(i):
            p[i][j] = K.zero()
    # conjugating the identity by a unimodular matrix
    a = la.matmul(p, la.matmul(la.identity(K, n), la.inverse(p, K)))
    return a, K


def test_criterion_08_rigidity(report):
    def body():
        rng = random.Random(8)
        for _ in range(100):
            a, K = _random_identity(rng)
            for mode in ("a", "b"):
                res = rigidity_check(a, rng.randint(1, 6), mode, K)
                assert res.passed and la.mat_eq(a, la.identity(K, len(a)))
        flagged = 0
        K = base_ring(5, 12)
        neg = la.mat_neg(la.identity(K, 2))
        swap = [[K.zero(), K.one()], [K.one(), K.zero()]]
        for m, order, mode in ((neg, 2, "a"), (neg, 2, "b"), (swap, 2, "a"), (swap, 2, "b")):
            try:
                rigidity_check(m, order, mode, K)
            except HypothesesUnmet:
                flagged += 1
        K3 = base_ring(3, 12)
        try:
            rigidity_check(la.identity(K3, 2), 1, "a", K3)
        except HypothesesUnmet:
            flagged += 1
        try:
            rigidity_check(swap, 3, "a", K)
        except BadParameters:
            flagged += 1
        assert flagged == 6
        emb = reduce_embedding(*(lambda s: (stabilize_lattice(s.lattice, s.form, s.rep), s.rep))(
            build_counterexample("Thm62", 5, 2, precision=12)))
        assert emb.kernel == [emb.group.identity]
        return "100 identity passes, 6 violations flagged"

    report(8, "rigidity never passes a nontrivial automorphism", 5, body)


def test_criterion_09_abvar(report, tmp_path):
    def body():
        out = []
        for p, ell, b, d in ((2, 5, 0, 4), (2, 5, 2, 6), (3, 5, 0, 4)):
            path = tmp_path / f"abvar_{p}_{b}.json"
            code = run(["abvar", "--p", str(p), "--prime", str(ell), "--b", str(b), "--out", str(path)])
            assert code == 0
            assert run(["check", "certificate", str(path)]) == 0
            cert = abvar_scenario(p, ell, b)
            assert cert.verified and cert.d == d
            out.append(f"(p={p},b={b}):d={d}")
        return " ".join(out)

    report(9, "polarization certificates", 60, body)


def _random_lattice(K, n, rng):
    gens = [[K.random_integral(rng, digits=2) for _ in range(n)] for _ in range(rng.randint(1, n + 1))]
    gens += la.columns(la.mat_scale(K.pi ** rng.randint(0, 3), la.identity(K, n)))
    return Lattice.from_generators(K, gens)


def test_criterion_10_lattice_infrastructure(report):
    def body():
        rng = random.Random(10)
        rings = [base_ring(5, 12), cyclotomic_ring(base_ring(7, 4))]
        count = 0
        for K in rings:
            for _ in range(125):
                n = rng.randint(2, 3)
                g = la.identity(K, n)
                g[0][n - 1] = g[n - 1][0] = K.pi
                f = BilinearForm(K, g, "symmetric")
                a, b = _random_lattice(K, n, rng), _random_lattice(K, n, rng)
                s, i = lattice_sum(a, b), lattice_intersect(a, b)
                assert s.contains(a) and s.contains(b) and a.contains(i) and b.contains(i)
                da, ds, di = dual_lattice(a, f), dual_lattice(s, f), dual_lattice(i, f)
                assert dual_lattice(da, f) == a
                assert da.contains(ds) and di.contains(da)
                assert ds == lattice_intersect(da, dual_lattice(b, f))
                assert s.index(i) == s.index(a) + a.index(i)
                assert da.index(ds) == s.index(a)
                count += 2
        return f"{count} lattices over Z_5 and Z_7[zeta_7]"

    report(10, "lattice duality, inclusion reversal, index additivity", 60, body)
