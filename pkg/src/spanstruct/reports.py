"""JSON payloads for run reports.

Exact quantities are integers or ``{"num", "den"}`` pairs; floating-point
Fourier quantities travel with an explicit ``tolerance``.
"""
from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction
from importlib import resources

from . import __version__
from .fourier import MarginReport, RudinStats
from .group import GSet
from .peeling import PeelError, PeelingTrace
from .setfile import serialize_set
from .setops import EnergyCertificate
from .structure import CoverReport, StructureReport, Thm2Chain

SCHEMA_VERSION = 1
TOOL = "spanstruct"


def frac(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def real(x):
    """Floats as JSON numbers; non-finite values as strings."""
    if x is None:
        return None
    x = float(x)
    if math.isfinite(x):
        return x
    return "inf" if x > 0 else ("-inf" if x < 0 else "nan")


def gset(A: GSet) -> dict:
    return {"group": str(A.spec), "size": len(A), "elements": A.to_list()}


def digest(A: GSet) -> str:
    return "sha256:" + hashlib.sha256(serialize_set(A).encode()).hexdigest()


def energy_payload(cert: EnergyCertificate) -> dict:
    return {"size": cert.size, "energy": cert.energy, "c": frac(cert.c)}


def margin(m: MarginReport) -> dict:
    d = m.as_dict()
    return {k: real(v) if isinstance(v, float) else v for k, v in d.items()}


def trace_payload(t: PeelingTrace) -> dict:
    return {
        "l": t.l,
        "mode": t.mode,
        "selection": t.selection,
        "s": t.s,
        "layers": [gset(L) for L in t.layers],
        "residual": gset(t.residual),
    }


def peel_error_payload(e: PeelError) -> dict:
    return {"p": real(e.p), "lhs": real(e.lhs), "layer_bound": real(e.layer_bound), "tolerance": 1e-9, "holds": e.holds}


def structure_payload(r: StructureReport) -> dict:
    return {
        "energy": energy_payload(r.cert),
        "c_used": frac(r.c_used),
        "p": real(r.p),
        "log_base": r.log_base,
        "l_trajectory": list(r.l_trajectory),
        "l_reference": real(r.l_reference),
        "trace": trace_payload(r.trace),
        "span_set": gset(r.span_set),
        "intersect_size": r.intersect_size,
        "residual_size": r.residual_size,
        "error_lhs": real(r.error_lhs),
        "error_rhs": real(r.error_rhs),
        "layer_bound": real(r.layer_bound),
        "residual_lb": real(r.residual_lb),
        "quarter_bound": real(r.quarter_bound),
        "lp_norm_A": real(r.lp_norm_A),
        "lower_1A": real(r.lower_1A),
        "lower_1A_holds": r.lower_1A_holds,
        "certified": r.certified,
        "reason": r.reason,
        "tolerance": 1e-9,
        "margins": [margin(m) for m in r.margins],
    }


def cover_payload(r: CoverReport) -> dict:
    f = r.f_diag
    return {
        "K": frac(r.K),
        "span_set": gset(r.span_set),
        "span_basis_size": len(r.span_set),
        "covered": r.covered,
        "bound_ratio": real(r.bound_ratio),
        "log_base": r.log_base,
        "f_diag": {
            "min_over_A": f.min_over_A,
            "pointwise_exact": f.pointwise_exact,
            "sup": f.sup,
            "mass": f.mass,
            "l2_squared": f.l2_squared,
            "dual_l1": real(f.dual_l1),
            "tolerance": 1e-6,
        },
    }


def chain_payload(c: Thm2Chain) -> dict:
    return {
        "p_prime": real(c.p_prime),
        "p": real(c.p),
        "l2_exact": c.l2_exact,
        "f_l2_on_L": real(c.f_l2_on_L),
        "effective_constant": real(c.effective_constant),
        "pairing_lhs": real(c.pairing_lhs),
        "pairing_rhs": real(c.pairing_rhs),
        "rudin_ratio": real(c.rudin_ratio),
        "tolerance": 1e-6,
        "margins": [margin(m) for m in c.margins],
    }


def rudin_payload(r: RudinStats) -> dict:
    return {
        "p": real(r.p),
        "trials": r.trials,
        "seed": r.seed,
        "generator": r.generator,
        "max_ratio": real(r.max_ratio),
        "mean_ratio": real(r.mean_ratio),
        "max_rademacher": real(r.max_rademacher),
        "max_gaussian": real(r.max_gaussian),
    }


def run_report(subcommand: str, input_digest, parameters: dict, result: dict, seconds: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": TOOL,
        "version": __version__,
        "subcommand": subcommand,
        "input_digest": input_digest,
        "parameters": parameters,
        "result": result,
        "timing": {"seconds": seconds},
    }


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False)


def load_schema() -> dict:
    """The published JSON schema every run report conforms to."""
    text = resources.files("spanstruct").joinpath("schema/run_report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)
