"""Command-line front end; every subcommand writes one JSON certificate.

Exit codes: 0 claim verified, 2 claim refuted or obstruction absent,
3 hypotheses unmet, 4 precision exhausted, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time

from . import certificates as certs
from .config import default_precision
from .errors import (
    BadParameters,
    BadSpec,
    HypothesesUnmet,
    OracleRefuted,
    PreconditionFailed,
    PrecisionExhausted,
    UnsupportedFamily,
)
from .localring import base_ring, make_ring
from .replib import quaternion_module
from .sharpness import (
    abvar_scenario,
    build_counterexample,
    control_setting,
    no_perfect_pairing_oracle,
    no_residue_symplectic_embedding,
)
from .symplectify import cyclotomic_sign_representation, perfect_pairing, reduce_embedding, stabilize_lattice

EXIT_OK, EXIT_REFUTED, EXIT_HYPOTHESES, EXIT_PRECISION, EXIT_USAGE = 0, 2, 3, 4, 64

SHARPNESS_KINDS = {
    "prop61": ("Prop61", "prop6.1-obstruction"),
    "thm62": ("Thm62", "thm6.2-obstruction"),
    "cor64": ("Cor64", "cor6.4-obstruction"),
    "thm65": ("Thm65Residue", "thm6.5-residue"),
    "thm66": ("Thm66", "thm6.6-obstruction"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser):
    p.add_argument("--prime", "-l", type=int, default=5, help="the prime l")
    p.add_argument("--p", type=int, default=2, help="residue characteristic of the inertia setting")
    p.add_argument("--precision", type=int, default=None, help="l-adic digits (default 32, or LLADIC_PRECISION)")
    p.add_argument("--b", type=int, default=0, help="half-dimension of the trivial summand")
    p.add_argument("--group", default=None, help="group spec such as Q2, mu5xC2, Q2xmu5")
    p.add_argument("--out", default=None, help="certificate path (stdout if omitted)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized spot checks")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lladic", description="exact l-adic lattice certificates")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    ring = sub.add_parser("ring").add_subparsers(dest="action", parser_class=_Parser)
    info = ring.add_parser("info")
    info.add_argument("spec", nargs="?", default=None, help="ring spec, e.g. Q5, unr(7,4), cyc(Q5), real(Q5)")
    _common(info)
    pairing = sub.add_parser("pairing").add_subparsers(dest="action", parser_class=_Parser)
    _common(pairing.add_parser("construct"))
    for name in ("stabilize", "reduce"):
        p = sub.add_parser(name)
        _common(p)
        p.add_argument("--real", action="store_true", help="use the real cyclotomic base ring")
    sharp = sub.add_parser("sharpness").add_subparsers(dest="action", parser_class=_Parser)
    verify = sharp.add_parser("verify")
    _common(verify)
    verify.add_argument("--kind", required=True, choices=sorted(SHARPNESS_KINDS))
    verify.add_argument("--control", action="store_true", help="run the positive control instead")
    verify.add_argument("--extension", type=int, default=1, help="degree of L over F_l (thm65)")
    _common(sub.add_parser("abvar"))
    check = sub.add_parser("check").add_subparsers(dest="action", parser_class=_Parser)
    c = check.add_parser("certificate")
    c.add_argument("path")
    return parser


# ------------------------------------------------------------- handlers
def _precision(args) -> int:
    return args.precision or default_precision()


_QUAT = re.compile(r"^Q(\d+)$")
_SIGN = re.compile(r"^mu(\d+)xC2$")
_TENSOR = re.compile(r"^Q(\d+)xmu(\d+)$")


def _pairing_rep(args):
    group = args.group or "Q2"
    n = _precision(args)
    if m := _QUAT.match(group):
        rep, form = quaternion_module(args.prime, int(m.group(1)), n)
        return rep, form, group
    if m := _SIGN.match(group):
        ell = int(m.group(1))
        rep, form = cyclotomic_sign_representation(ell, base_ring(ell, n))
        return rep, form, group
    if m := _TENSOR.match(group):
        s = build_counterexample("Thm62", int(m.group(2)), int(m.group(1)), precision=n)
        return s.rep, s.form, group
    raise BadSpec(f"no built-in representation for group {group!r}")


def _tensor_setting(args):
    group = args.group or f"Q{args.p}xmu{args.prime}"
    m = _TENSOR.match(group)
    if not m:
        raise BadSpec(f"stabilize/reduce expect a group of the form Q<p>xmu<l>, got {group!r}")
    kind = "Thm66" if args.real else "Thm62"
    s = build_counterexample(kind, int(m.group(2)), int(m.group(1)), precision=_precision(args))
    return s, group


def cmd_ring_info(args):
    spec = args.spec or f"Q{args.prime}"
    ring = make_ring(spec, _precision(args))
    result = certs.ring_payload(ring)
    return "ring-info", {"spec": spec}, result, ring.precision, True, EXIT_OK


def cmd_pairing(args):
    rep, form, group = _pairing_rep(args)
    res = perfect_pairing(rep, form)
    payload = certs.pairing_payload(rep, group, res)
    code = EXIT_OK if res.perfect else (EXIT_HYPOTHESES if not res.hypotheses_met else EXIT_REFUTED)
    setting = {"group": group, "l": str(rep.ring.prime), "ring": rep.ring.spec}
    return "thm4.3-pairing", setting, payload, rep.ring.precision, res.perfect, code


def cmd_stabilize(args):
    s, group = _tensor_setting(args)
    sp = stabilize_lattice(s.lattice, s.form, s.rep)
    payload = certs.stabilize_payload(s.rep, group, sp)
    setting = {"group": group, "l": str(s.ring.prime), "ring": s.ring.spec}
    return "thm5.1-stabilization", setting, payload, s.ring.precision, True, EXIT_OK


def cmd_reduce(args):
    s, group = _tensor_setting(args)
    sp = stabilize_lattice(s.lattice, s.form, s.rep)
    emb = reduce_embedding(sp, s.rep)
    payload = certs.reduce_payload(s.rep, group, sp, emb)
    ok = emb.injective and emb.charpolys_match and emb.forms_nondegenerate and emb.symmetry_ok
    code = EXIT_OK if ok else EXIT_REFUTED
    if not emb.hypotheses_met:
        code = EXIT_HYPOTHESES
    setting = {"group": group, "l": str(s.ring.prime), "ring": s.ring.spec, "e": str(s.ring.e)}
    return "thm5.1-embedding", setting, payload, s.ring.precision, ok and emb.hypotheses_met, code


def cmd_sharpness(args):
    kind, claim = SHARPNESS_KINDS[args.kind]
    setting_rec = {"kind": kind, "l": str(args.prime), "p": str(args.p)}
    if kind == "Thm65Residue":
        cert = no_residue_symplectic_embedding(args.prime, args.p, args.extension, precision=_precision(args))
        setting_rec["L"] = f"F_{cert.field_size}"
        code = EXIT_OK if cert.verified else EXIT_REFUTED
        return claim, setting_rec, certs.residue_payload(cert), _precision(args), cert.verified, code
    b = args.b if kind == "Cor64" else 0
    if kind == "Cor64":
        b = b or 1
        setting_rec["b"] = str(b)
    setting = build_counterexample(kind, args.prime, args.p, b, _precision(args))
    if args.control:
        setting = control_setting(setting)
        cert = no_perfect_pairing_oracle(setting, seed=args.seed)
        ok = not cert.obstructed
        setting_rec["control"] = "true"
        payload = certs.obstruction_payload(setting, cert)
        return "oracle-control", setting_rec, payload, setting.ring.precision, ok, EXIT_OK if ok else EXIT_REFUTED
    cert = no_perfect_pairing_oracle(setting, seed=args.seed)
    setting_rec["id"] = cert.setting_id
    payload = certs.obstruction_payload(setting, cert)
    return claim, setting_rec, payload, setting.ring.precision, cert.obstructed, EXIT_OK


def cmd_abvar(args):
    cert = abvar_scenario(args.p, args.prime, args.b, _precision(args))
    setting = {"p": str(cert.p), "l": str(cert.ell), "b": str(cert.b), "r": str(cert.r), "d": str(cert.d)}
    payload = {"claim_text": cert.claim, "obstruction": certs.obstruction_payload(cert.setting, cert.oracle)}
    code = EXIT_OK if cert.verified else EXIT_REFUTED
    return "thm7.1-polarization", setting, payload, cert.oracle.precision, cert.verified, code


def cmd_check(args):
    with open(args.path) as fh:
        cert = json.load(fh)
    problems = certs.verify_certificate(cert)
    for msg in problems:
        print(f"FAIL: {msg}", file=sys.stderr)
    if not problems:
        print(f"verified: {cert['claim']}")
    return EXIT_OK if not problems else EXIT_REFUTED


HANDLERS = {
    ("ring", "info"): cmd_ring_info,
    ("pairing", "construct"): cmd_pairing,
    ("stabilize", None): cmd_stabilize,
    ("reduce", None): cmd_reduce,
    ("sharpness", "verify"): cmd_sharpness,
    ("abvar", None): cmd_abvar,
}


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        build_parser().print_help(sys.stderr)
        return EXIT_USAGE
    action = getattr(args, "action", None)
    if args.command == "check":
        if action != "certificate":
            print("usage error: expected `check certificate PATH`", file=sys.stderr)
            return EXIT_USAGE
        try:
            return cmd_check(args)
        except (OSError, ValueError, KeyError) as exc:
            print(f"usage error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    handler = HANDLERS.get((args.command, action))
    if handler is None:
        print(f"usage error: incomplete command {args.command!r}", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        claim, setting, result, precision, verified, code = handler(args)
    except (BadSpec, UnsupportedFamily) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BadParameters, HypothesesUnmet) as exc:
        print(f"hypotheses unmet: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESES
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (OracleRefuted, PreconditionFailed) as exc:
        print(f"refuted: {exc}", file=sys.stderr)
        return EXIT_REFUTED
    ms = int((time.perf_counter() - start) * 1000)
    text = certs.dumps(certs.envelope(claim, setting, result, precision, verified, ms))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"{claim}: {'verified' if verified else 'not verified'} (exit {code}) -> {args.out}")
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
