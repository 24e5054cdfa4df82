"""Command-line front end: ``spanstruct <subcommand> [options]``.

Exit codes: 0 success, 1 input or resource error, 2 certification failure
(``thm1 --require-cert``), 64 usage error.
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from fractions import Fraction

from . import __version__, reports
from .dissociation import (
    MITM_CAP,
    SPAN_ENUM_CAP,
    is_dissociated,
    max_dissociated_greedy,
    span_contains,
    span_enumerate,
    span_intersect,
)
from .errors import SpanStructError
from .fourier import (
    DEFAULT_MAX_GROUP,
    MarginReport,
    dft,
    energy_via_l4,
    fourier_view,
    hausdorff_young_check,
    logconvexity_check,
    parseval_residual,
    rudin_probe,
    theta_for,
)
from .generators import KINDS, RNG_ALGORITHM, generate
from .group import canon
from .peeling import bourgain_peel, peel_error_norm
from .setfile import read_set_file, serialize_set
from .setops import additive_energy, doubling, sumset
from .structure import cover_structure, energy_structure, thm2_chain_check

EXIT_OK, EXIT_INPUT, EXIT_CERT, EXIT_USAGE = 0, 1, 2, 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected <num>/<den>, got {text!r}") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dedupe", action="store_true", help="drop duplicate elements instead of failing")
    p.add_argument("--max-group", type=int, default=DEFAULT_MAX_GROUP, help="DFT size cap")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="spanstruct", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"spanstruct {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add(name, help_text, setfile=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if setfile:
            sp.add_argument("setfile")
        return sp

    add("energy", "additive energy and c = E/|A|^3")
    add("doubling", "doubling constant K = |A+A|/|A|")
    sp = add("dissociate", "dissociativity verdict and greedy maximal dissociated subset")
    sp.add_argument("--strategy", choices=("auto", "brute", "mitm"), default="auto")
    sp = add("span", "span of a basis (default: greedy maximal dissociated subset) against A")
    sp.add_argument("--basis", help="set file holding the basis")
    sp.add_argument("--contains", help="comma-separated element to test for membership")
    sp = add("peel", "iterative dissociated-layer peeling")
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--mode", choices=("greedy", "exact"), default="greedy")
    sp.add_argument("--p", type=float, action="append", help="exponent(s) for the error norm")
    sp = add("thm1", "energy pipeline with certified span intersection")
    sp.add_argument("--l", type=int, help="initial layer size (default ceil(C1 ln|A| / c))")
    sp.add_argument("--l-const", type=float, default=1.0)
    sp.add_argument("--c", type=_fraction, help="energy constant override <num>/<den>")
    sp.add_argument("--adaptive", action=argparse.BooleanOptionalAction, default=True)
    sp.add_argument("--mode", choices=("greedy", "exact"), default="greedy")
    sp.add_argument("--require-cert", action="store_true")
    sp = add("thm2", "doubling pipeline: full span cover and dual-norm chain")
    sp.add_argument("--p-prime", type=float, action="append")
    sp = add("fourier-check", "Parseval, L4 energy, Hausdorff-Young and Rudin probes")
    sp.add_argument("--p", type=float, help="exponent (default 2 + ln|A|)")
    sp.add_argument("--rudin-trials", type=int, default=0)
    sp = add("gen", "deterministic set generator", setfile=False)
    sp.add_argument("kind", choices=KINDS)
    sp.add_argument("params", nargs="*", type=int)
    sp.add_argument("--output", "-o", help="also write the set file here")
    return parser


def _cmd_energy(args, A):
    cert = additive_energy(A)
    K = doubling(A)
    res = reports.energy_payload(cert)
    res["cauchy_schwarz"] = {"K": reports.frac(K), "c_ge_inv_K": cert.c >= 1 / K}
    return res, {}


def _cmd_doubling(args, A):
    S = sumset(A, A)
    return {"size": len(A), "sumset_size": len(S), "K": reports.frac(doubling(A))}, {}


def _greedy_rejection_witness(A, L):
    """Signs over A from the first element the greedy scan rejected, or None if L == A."""
    chosen = {x.coords for x in L}
    for a in A:
        if a.coords in chosen:
            continue
        sv = span_contains(L, a)
        by_elem = dict(zip((x.coords for x in sv.support), sv.signs))
        return [-1 if x.coords == a.coords else by_elem.get(x.coords, 0) for x in A]
    return None


def _cmd_dissociate(args, A):
    L = max_dissociated_greedy(A)
    if len(A) <= MITM_CAP:
        v = is_dissociated(A, args.strategy)
        verdict, witness, rule = v.dissociated, None if v.witness is None else list(v.witness.signs), "least"
    else:
        # the greedy scan keeps only elements outside the span of those kept
        witness = _greedy_rejection_witness(A, L)
        verdict, rule = witness is None, "first-greedy-rejection"
    return {
        "verdict": "DISSOCIATED" if verdict else "NOT",
        "witness": witness,
        "witness_rule": rule,
        "greedy_maximal": reports.gset(L),
    }, {"strategy": args.strategy}


def _cmd_span(args, A):
    L = read_set_file(args.basis, args.dedupe) if args.basis else max_dissociated_greedy(A)
    inter = span_intersect(L, A)
    res = {
        "basis": reports.gset(L),
        "intersect_size": len(inter),
        "covers_input": len(inter) == len(A),
        "span_size": len(span_enumerate(L)) if len(L) <= SPAN_ENUM_CAP else None,
    }
    params = {"basis": "file" if args.basis else "greedy"}
    if args.contains is not None:
        x = canon([int(t) for t in args.contains.split(",")], A.spec)
        sv = span_contains(L, x)
        res["contains"] = {"element": list(x.coords), "witness": None if sv is None else list(sv.signs)}
        params["contains"] = list(x.coords)
    return res, params


def _cmd_peel(args, A):
    trace = bourgain_peel(A, args.l, args.mode)
    ps = args.p or [4.0, 2 + math.log(max(len(A), 2))]
    res = reports.trace_payload(trace)
    res["errors"] = [reports.peel_error_payload(peel_error_norm(trace, p, args.max_group)) for p in ps]
    return res, {"l": args.l, "mode": args.mode, "p": ps}


def _cmd_thm1(args, A):
    r = energy_structure(
        A,
        c_override=args.c,
        l_const=args.l_const,
        adaptive=args.adaptive,
        mode=args.mode,
        l_init=args.l,
        max_group=args.max_group,
    )
    params = {
        "c": None if args.c is None else reports.frac(args.c),
        "l": args.l,
        "l_const": args.l_const,
        "adaptive": args.adaptive,
        "mode": args.mode,
        "require_cert": args.require_cert,
    }
    return reports.structure_payload(r), params


def _cmd_thm2(args, A):
    cover = cover_structure(A, args.max_group)
    res = reports.cover_payload(cover)
    res["chains"] = [reports.chain_payload(thm2_chain_check(A, pp, args.max_group)) for pp in (args.p_prime or [None])]
    return res, {"p_prime": args.p_prime}


def _cmd_fourier(args, A):
    B, emb = fourier_view(A, args.max_group)
    p = args.p if args.p is not None else 2 + math.log(max(len(A), 2))
    exact = additive_energy(A).energy
    F = dft(B, B.spec, args.max_group)
    res = {
        "group": str(B.spec),
        "embedded": emb is not None,
        "shift": None if emb is None else list(emb.shift),
        "parseval_residual": reports.real(parseval_residual(B, B.spec, args.max_group)),
        "energy_exact": exact,
        "energy_via_l4": reports.real(energy_via_l4(B, args.max_group)),
        "tolerance": 1e-9,
    }
    hy = hausdorff_young_check(B, max(p, 2.0), args.max_group)
    checks = [hy.holder, hy.parseval_hy]
    if p > 4:
        checks.append(logconvexity_check(F, 2.0, p, theta_for(4.0, 2.0, p)))
    checks.append(MarginReport("energy via L4 relative gap", abs(res["energy_via_l4"] - exact) / exact, 1e-6, 0.0))
    res["checks"] = [reports.margin(m) for m in checks]
    if args.rudin_trials > 0:
        res["rudin"] = None
        # dissociativity is decided on the original set; the torus copy is a translate
        if len(A) <= MITM_CAP and is_dissociated(A):
            stats = rudin_probe(B, max(p, 2.0), args.rudin_trials, args.seed, args.max_group, assume_dissociated=True)
            res["rudin"] = reports.rudin_payload(stats)
    return res, {"p": p, "rudin_trials": args.rudin_trials, "seed": args.seed}


COMMANDS = {
    "energy": _cmd_energy,
    "doubling": _cmd_doubling,
    "dissociate": _cmd_dissociate,
    "span": _cmd_span,
    "peel": _cmd_peel,
    "thm1": _cmd_thm1,
    "thm2": _cmd_thm2,
    "fourier-check": _cmd_fourier,
}


def _text(obj, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    for key, val in obj.items():
        if isinstance(val, dict) and set(val) == {"num", "den"}:
            lines.append(f"{pad}{key}: {val['num']}/{val['den']}")
        elif isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_text(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}:")
            for item in val:
                body = _text(item, indent + 2) or ["{}"]
                # first line of each item carries a "- " marker, yaml style
                lines.append(f"{pad}  - {body[0].lstrip()}")
                lines.extend(body[1:])
        else:
            lines.append(f"{pad}{key}: {val}")
    return lines


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        if args.command == "gen":
            A = generate(args.kind, args.params, args.seed)
            text = serialize_set(A)
            if args.output:
                with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(text)
            if args.format == "text":
                stdout.write(text)
                return EXIT_OK
            result = {"kind": args.kind, "set": reports.gset(A), "setfile": text}
            params = {"kind": args.kind, "params": args.params, "seed": args.seed, "generator": RNG_ALGORITHM}
            digest = None
        else:
            A = read_set_file(args.setfile, args.dedupe)
            result, params = COMMANDS[args.command](args, A)
            params = {"max_group": args.max_group, **params}
            digest = reports.digest(A)
    except (SpanStructError, ValueError, OSError) as exc:
        sys.stderr.write(f"spanstruct {args.command}: {exc}\n")
        return EXIT_INPUT
    report = reports.run_report(args.command, digest, params, result, time.perf_counter() - start)
    if args.format == "json":
        stdout.write(reports.dumps(report) + "\n")
    else:
        stdout.write("\n".join(_text({"subcommand": args.command, **result})) + "\n")
    if args.command == "thm1" and args.require_cert and not result["certified"]:
        return EXIT_CERT
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
