"""JSON certificates: serialization, and re-verification from the embedded data.

Every number is a decimal string.  Ring elements are ``{"shift", "coeffs"}``
pairs read back with :meth:`RingDescriptor.element`; residue-field elements
are coefficient lists over ``F_p[u]/(modpoly)``.  A verifier never calls the
constructors that produced a certificate: it rebuilds the ring and group from
their spec strings and re-runs the exact checks on the stored matrices.
"""

from __future__ import annotations

import json
from typing import Any

from . import linalg as la
from .errors import BadSpec
from .ff import FiniteField
from .groups import build_group
from .latmod import BilinearForm, Lattice, dual_lattice, snf
from .localring import make_ring
from .replib import Representation

SCHEMA_VERSION = "1"


# ------------------------------------------------------------- encoding
def enc_elem(x) -> dict:
    return {"shift": str(x.shift), "coeffs": [str(c) for c in x.coeffs]}


def dec_elem(d: dict, ring):
    return ring.element([int(c) for c in d["coeffs"]], int(d["shift"]))


def enc_matrix(m) -> list:
    return [[enc_elem(x) for x in row] for row in m]


def dec_matrix(m, ring) -> list:
    return [[dec_elem(x, ring) for x in row] for row in m]


def enc_field(k: FiniteField) -> dict:
    return {"p": str(k.p), "modpoly": [str(c) for c in k.modpoly]}


def dec_field(d: dict) -> FiniteField:
    return FiniteField(int(d["p"]), [int(c) for c in d["modpoly"]])


def enc_ff_matrix(m) -> list:
    return [[[str(c) for c in x.coeffs] for x in row] for row in m]


def dec_ff_matrix(m, k: FiniteField) -> list:
    return [[k([int(c) for c in x]) for x in row] for row in m]


def enc_ints(xs) -> list:
    return [str(x) for x in xs]


def dec_ints(xs) -> list:
    return [int(x) for x in xs]


def envelope(claim: str, setting: dict, result: dict, precision: int, verified: bool, timing_ms: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "claim": claim,
        "setting": setting,
        "precision": str(precision),
        "verified": verified,
        "timing_ms": str(timing_ms),
        "result": result,
    }


def dumps(cert: dict) -> str:
    return json.dumps(cert, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------- rep payloads
def rep_payload(rep: Representation, group_spec: str) -> dict:
    return {
        "ring": rep.ring.spec,
        "group": group_spec,
        "generators": [enc_matrix(rep.images[s]) for s in rep.group.generators],
    }


def load_rep(payload: dict, precision: int) -> Representation:
    ring = make_ring(payload["ring"], precision)
    group = build_group(payload["group"])
    gens = [dec_matrix(m, ring) for m in payload["generators"]]
    if len(gens) != len(group.generators):
        raise BadSpec("generator count does not match the group")
    return Representation(group, ring, dict(zip(group.generators, gens)))


def _invariant(rep: Representation, gram: list) -> bool:
    return all(la.mat_eq(la.matmul(la.transpose(a), la.matmul(gram, a)), gram) for a in rep.images.values())


def _stable(rep: Representation, basis: list) -> bool:
    t = Lattice.from_basis_matrix(rep.ring, basis)
    return all(t.contains(t.apply(a)) for a in rep.images.values())


def _commutes(rep: Representation, m: list) -> bool:
    return all(la.mat_eq(la.matmul(a, m), la.matmul(m, a)) for a in rep.images.values())


def _alternating(g: list) -> bool:
    n = len(g)
    return all(g[i][i].is_zero() for i in range(n)) and la.mat_eq(la.transpose(g), la.mat_neg(g))


def _symmetric(g: list) -> bool:
    return la.mat_eq(la.transpose(g), g)


# ------------------------------------------------------------ obstruction
def obstruction_payload(setting, cert) -> dict:
    target = setting.core or setting
    out = {
        "representation": rep_payload(target.rep, target.group.name),
        "form": enc_matrix(target.form.gram),
        "symmetry": target.form.symmetry,
        "lattice": enc_matrix(target.lattice.basis_matrix()),
        "eta_action": enc_matrix(target.eta_action),
        "varpi_action": enc_matrix(target.varpi_action),
        "r_window": str(target.r_window),
        "varpi_det_valuation": str(cert.varpi_det_valuation),
        "table": [
            {"r": str(c.r), "j": str(c.j), "integral": c.integral, "exponents": enc_ints(c.exponents), "perfect": c.perfect}
            for c in cert.table
        ],
        "obstructed": cert.obstructed,
        "unit_invariance": [
            {"r": str(u["r"]), "j": str(u["j"]), "exponents": enc_ints(u["exponents"]), "equal": u["equal"]}
            for u in cert.unit_checks
        ],
    }
    if cert.mechanism is not None:
        m = cert.mechanism
        out["mechanism"] = {"j": str(m["j"]), "min_valuation": str(m["min_valuation"]), "target": str(m["target"]), "holds": m["holds"]}
    if setting.core is not None:
        split = setting.splitting
        out["splitting"] = {
            "representation": rep_payload(setting.rep, setting.group.name),
            "tau": enc_matrix(split["tau"]),
            "v_dim": str(split["v_dim"]),
            "forms": [enc_matrix(g) for g in setting.form_space],
            "checks": {k: (v if isinstance(v, bool) else str(v)) for k, v in cert.splitting.items()},
        }
    return out


def verify_obstruction(result: dict, precision: int) -> list[str]:
    """Re-run every exact check on an obstruction payload; return the failures."""
    problems = []
    rep = load_rep(result["representation"], precision)
    ring = rep.ring
    gram = dec_matrix(result["form"], ring)
    basis = dec_matrix(result["lattice"], ring)
    e = dec_matrix(result["eta_action"], ring)
    d = dec_matrix(result["varpi_action"], ring)
    n = rep.dim
    if not _invariant(rep, gram):
        problems.append("form is not invariant")
    sym_ok = _alternating(gram) if result["symmetry"] == "alternating" else _symmetric(gram)
    if not sym_ok:
        problems.append("form has the wrong symmetry")
    if not _stable(rep, basis):
        problems.append("reference lattice is not stable")
    if not (_commutes(rep, e) and _commutes(rep, d)):
        problems.append("eta or varpi does not commute with the group")
    dval = sum(snf(d, ring, transforms=False).exponents)
    if dval <= 0 or str(dval) != result["varpi_det_valuation"]:
        problems.append("varpi is not a non-unit of the recorded norm valuation")
    rows = result["table"]
    rs = sorted({int(c["r"]) for c in rows})
    if rs != list(range(int(result["r_window"]))):
        problems.append("r window incomplete")
    for c in rows:
        r, j = int(c["r"]), int(c["j"])
        br = la.matmul(la.mat_pow(e, r, ring), basis)
        dj = la.mat_pow(d, j, ring) if j >= 0 else la.mat_pow(la.inverse(d, ring), -j, ring)
        db = la.matmul(dj, br)
        g = la.matmul(la.transpose(db), la.matmul(gram, br))
        v = int(la.min_valuation(g))
        shift = min(v, 0)
        scaled = g if shift == 0 else la.mat_scale(ring.pi ** (-shift), g)
        exps = [x + shift for x in snf(scaled, ring, transforms=False).exponents]
        integral = v >= 0
        perfect = integral and len(exps) == n and all(x == 0 for x in exps)
        if exps != dec_ints(c["exponents"]) or integral != c["integral"] or perfect != c["perfect"]:
            problems.append(f"cell (r={r}, j={j}) does not reproduce")
    for r in rs:
        cells = sorted((int(c["j"]), c["integral"]) for c in rows if int(c["r"]) == r)
        flags = [flag for _, flag in cells]
        if flags != [False, True, True]:
            problems.append(f"j window at r={r} does not straddle the integrality threshold")
    obstructed = not any(c["perfect"] for c in rows)
    if obstructed != result["obstructed"]:
        problems.append("recorded conclusion disagrees with the table")
    split = result.get("splitting")
    if split is not None:
        problems.extend(_verify_splitting(split, rep, precision))
    return problems


def _verify_splitting(split: dict, core_rep: Representation, precision: int) -> list[str]:
    problems = []
    urep = load_rep(split["representation"], precision)
    ring = urep.ring
    tau = dec_matrix(split["tau"], ring)
    v = int(split["v_dim"])
    n = urep.dim
    if not la.mat_eq(la.matmul(tau, tau), tau):
        problems.append("tau is not idempotent")
    if not _commutes(urep, tau):
        problems.append("tau is not G-equivariant")
    for s in core_rep.group.generators:
        if not la.mat_eq(la.submatrix(urep.images[s], range(v), range(v)), core_rep.images[s]):
            problems.append("the V summand does not match the core representation")
            break
    vi, wi = range(v), range(v, n)
    for g in (dec_matrix(f, ring) for f in split["forms"]):
        if not (_alternating(g) and _invariant(urep, g)):
            problems.append("a solved form is not alternating and invariant")
        if not la.is_zero_matrix(la.submatrix(g, vi, wi)):
            problems.append("a solved form pairs T_1 with T_2")
    return problems


# ------------------------------------------------------------- residue
def residue_payload(cert) -> dict:
    return {
        "field": enc_field(cert.residue_field),
        "group": cert.group_name,
        "generators": [enc_ff_matrix(m) for m in cert.images.values()],
        "forms": [enc_ff_matrix(g) for g in cert.forms],
        "solution_dim": str(cert.solution_dim),
        "method": cert.method,
        "enumerated": str(cert.enumerated),
        "all_degenerate": cert.all_degenerate,
        "identity_1": cert.identity_1,
        "identity_2": cert.identity_2,
        "h_vanishes": cert.h_vanishes,
        "w0_symmetric_dim": str(cert.w0_symmetric_dim),
    }


def verify_residue(result: dict) -> list[str]:
    from itertools import product

    from .replib import invariant_forms

    problems = []
    k = dec_field(result["field"])
    group = build_group(result["group"])
    gens = [dec_ff_matrix(m, k) for m in result["generators"]]
    rep = Representation(group, k, dict(zip(group.generators, gens)))
    forms = [dec_ff_matrix(g, k) for g in result["forms"]]
    solved = invariant_forms(rep, "alternating")
    if len(solved) != int(result["solution_dim"]) or len(forms) != len(solved):
        problems.append("solution-space dimension does not reproduce")
    n = rep.dim
    t2 = n // 2
    top, bottom = range(t2), range(t2, n)
    for g in forms:
        if not (_alternating(g) and _invariant(rep, g)):
            problems.append("a stored form is not alternating and invariant")
        if not la.is_zero_matrix(la.submatrix(g, top, top)):
            problems.append("identity (1) fails")
        h = la.submatrix(g, top, bottom)
        if not la.mat_eq(h, la.transpose(h)):
            problems.append("identity (2) fails")
        if not la.is_zero_matrix(h):
            problems.append("h is nonzero")
    elems = list(k.elements())
    if k.q ** len(forms) <= 10**6:
        for coeffs in product(elems, repeat=len(forms)):
            g = la.zeros(k, n)
            for c, b in zip(coeffs, forms):
                g = la.mat_add(g, la.mat_scale(c, b))
            if not la.det(g, k).is_zero():
                problems.append("a nondegenerate invariant form exists")
                break
    return problems


# ------------------------------------------------------ pairings / embeddings
def pairing_payload(rep: Representation, group_spec: str, result) -> dict:
    return {
        "representation": rep_payload(rep, group_spec),
        "lattice": enc_matrix(result.lattice.basis_matrix()),
        "form": enc_matrix(result.form.gram),
        "gram_on_lattice": enc_matrix(result.form.gram_on(result.lattice)),
        "exponents": enc_ints(result.exponents),
        "perfect": result.perfect,
        "hypotheses_met": result.hypotheses_met,
        "steps": list(result.steps),
    }


def verify_pairing(result: dict, precision: int) -> list[str]:
    problems = []
    rep = load_rep(result["representation"], precision)
    ring = rep.ring
    gram = dec_matrix(result["form"], ring)
    basis = dec_matrix(result["lattice"], ring)
    if not _alternating(gram):
        problems.append("form is not alternating")
    if not _invariant(rep, gram):
        problems.append("form is not invariant")
    if not _stable(rep, basis):
        problems.append("lattice is not stable")
    g = la.matmul(la.transpose(basis), la.matmul(gram, basis))
    integral = la.min_valuation(g) >= 0
    exps = snf(g, ring, transforms=False).exponents if integral else None
    perfect = integral and len(exps) == rep.dim and all(x == 0 for x in exps)
    if perfect != result["perfect"]:
        problems.append("perfectness does not reproduce")
    return problems


def stabilize_payload(rep: Representation, group_spec: str, sp) -> dict:
    return {
        "representation": rep_payload(rep, group_spec),
        "form": enc_matrix(sp.form.gram),
        "initial": enc_matrix(sp.initial.basis_matrix()),
        "initial_exponents": enc_ints(sp.initial_exponents),
        "lattice": enc_matrix(sp.lattice.basis_matrix()),
        "dual_index_exponents": enc_ints(sp.dual_index_exponents),
        "iterations": str(sp.iterations),
    }


def verify_stabilize(result: dict, precision: int) -> list[str]:
    problems = []
    rep = load_rep(result["representation"], precision)
    ring = rep.ring
    f = BilinearForm(ring, dec_matrix(result["form"], ring), "alternating", check=False)
    t = Lattice.from_basis_matrix(ring, dec_matrix(result["lattice"], ring))
    s = Lattice.from_basis_matrix(ring, dec_matrix(result["initial"], ring))
    if not all(t.contains(t.apply(a)) for a in rep.images.values()):
        problems.append("T is not stable")
    if not t.contains(s):
        problems.append("T does not contain the start lattice")
    if la.min_valuation(f.gram_on(t)) < 0:
        problems.append("f(T, T) is not integral")
    t_dual = dual_lattice(t, f)
    if not t.contains(t_dual.scale(1)):
        problems.append("pi T* is not contained in T")
    if sorted(t_dual.index_exponents(t)) != dec_ints(result["dual_index_exponents"]):
        problems.append("dual-index exponents do not reproduce")
    return problems


def reduce_payload(rep: Representation, group_spec: str, sp, emb) -> dict:
    k = rep.ring.residue_field
    out = stabilize_payload(rep, group_spec, sp)
    out.update({
        "field": enc_field(k),
        "block_dims": enc_ints(emb.block_dims),
        "change_of_basis": enc_matrix(emb.change_of_basis),
        "residue_generators": [enc_ff_matrix(emb.residue_images[s]) for s in rep.group.generators],
        "residue_forms": [enc_ff_matrix(m) for m in emb.residue_forms],
        "charpolys": [enc_ff_matrix([cp]) for cp in (emb.charpoly_table[g] for g in rep.group.elements)],
        "injective": emb.injective,
        "kernel_size": str(len(emb.kernel)),
        "hypotheses_met": emb.hypotheses_met,
        "charpolys_match": emb.charpolys_match,
    })
    return out


def verify_reduce(result: dict, precision: int) -> list[str]:
    problems = verify_stabilize(result, precision)
    rep = load_rep(result["representation"], precision)
    ring = rep.ring
    k = dec_field(result["field"])
    w = dec_matrix(result["change_of_basis"], ring)
    winv = la.inverse(w, ring)
    dims = dec_ints(result["block_dims"])
    idx = [range(dims[0]), range(dims[0], dims[0] + dims[1])]
    gens = [dec_ff_matrix(m, k) for m in result["residue_generators"]]
    for s, psi in zip(rep.group.generators, gens):
        a = la.matmul(winv, la.matmul(rep.images[s], w))
        if la.min_valuation(a) < 0:
            problems.append("generator does not preserve the adapted basis")
            continue
        for ix in idx:
            if not ix:
                continue
            blk = la.submatrix(a, ix, ix)
            red = [[k(x.residue().coeffs) for x in row] for row in blk]
            if not la.mat_eq(red, la.submatrix(psi, ix, ix)):
                problems.append("residue image does not reproduce")
    try:
        psi_rep = Representation(rep.group, k, dict(zip(rep.group.generators, gens)))
    except Exception as exc:  # relation failure means psi is not a homomorphism
        return problems + [f"residue images are not a homomorphism: {exc}"]
    ident = la.identity(k, rep.dim)
    kernel = [g for g in rep.group.elements if la.mat_eq(psi_rep.image(g), ident)]
    if (len(kernel) == 1) != result["injective"]:
        problems.append("injectivity does not reproduce")
    match = all(
        la.charpoly(psi_rep.image(g), k) == [c.residue() for c in la.charpoly(rep.image(g), ring)]
        for g in rep.group.elements
    )
    if match != result["charpolys_match"]:
        problems.append("characteristic-polynomial comparison does not reproduce")
    for m in (dec_ff_matrix(f, k) for f in result["residue_forms"]):
        if m and la.det(m, k).is_zero():
            problems.append("a residue form is degenerate")
    return problems


def ring_payload(ring) -> dict:
    return json.loads(json.dumps(ring.describe(), default=str), parse_int=str)


# ------------------------------------------------------------ dispatcher
def verify_certificate(cert: dict) -> list[str]:
    """Failures found while re-verifying ``cert`` (empty list means verified)."""
    if cert.get("schema_version") != SCHEMA_VERSION:
        return [f"unknown schema version {cert.get('schema_version')!r}"]
    claim = cert["claim"]
    precision = int(cert["precision"])
    result: dict[str, Any] = cert["result"]
    if claim.endswith("-obstruction"):
        problems = verify_obstruction(result, precision)
        if not result["obstructed"]:
            problems.append("no obstruction recorded")
    elif claim == "thm7.1-polarization":
        problems = verify_obstruction(result["obstruction"], precision)
        s = cert["setting"]
        if int(s["d"]) != int(s["r"]) * (int(s["l"]) - 1) + int(s["b"]):
            problems.append("d does not equal r(l-1) + b")
        if not result["obstruction"]["obstructed"]:
            problems.append("no obstruction recorded")
    elif claim == "thm6.5-residue":
        problems = verify_residue(result)
    elif claim == "thm4.3-pairing":
        problems = verify_pairing(result, precision)
    elif claim == "thm5.1-stabilization":
        problems = verify_stabilize(result, precision)
    elif claim == "thm5.1-embedding":
        problems = verify_reduce(result, precision)
    elif claim == "oracle-control":
        problems = verify_obstruction(result, precision)
        if result["obstructed"]:
            problems.append("the control found no perfect cell")
    elif claim == "ring-info":
        ring = make_ring(result["spec"], precision)
        problems = [] if ring_payload(ring) == result else ["ring description does not reproduce"]
    else:
        problems = [f"unknown claim {claim!r}"]
    if not problems and not cert["verified"]:
        problems.append("certificate records verified = false")
    return problems
