"""The two structure pipelines: large energy gives a large spanned piece, small doubling a full cover."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .dissociation import max_dissociated_greedy, span_contains, span_intersect
from .errors import CertificateError, EmptyInputError, PreconditionError, ResourceError
from .fourier import (
    DEFAULT_MAX_GROUP,
    MarginReport,
    conjugate_exponent,
    dft,
    fourier_view,
    hausdorff_young_check,
    logconvexity_check,
    lp_dual_norm,
    theta_for,
)
from .group import GSet, row_isin
from .peeling import PeelingTrace, bourgain_peel, peel_error_norm
from .setops import EnergyCertificate, additive_energy, convolution_counts, doubling, sumset

LOG_BASE = "e"


@dataclass(frozen=True)
class Thresholds:
    rhs_lemma_error: float
    lower_1A: float
    residual_lb: float
    quarter_bound: float


def thm1_thresholds(c, p: float, n: int) -> Thresholds:
    """Error threshold c^((p-2)/2p) n^((p-1)/p) / 2 and the residual lower bounds it implies."""
    c = float(c)
    if not 0 < c <= 1:
        raise ValueError(f"c must lie in (0, 1], got {c}")
    if not p > 2:
        raise ValueError(f"p must exceed 2, got {p}")
    if n < 1:
        raise ValueError("n must be positive")
    lower = c ** ((p - 2) / (2 * p)) * n ** ((p - 1) / p)
    residual = c ** ((p - 2) / (2 * (p - 1))) * 2 ** (-p / (p - 1)) * n
    quarter = math.sqrt(c) * n / 4
    if residual < quarter * (1 - 1e-12):
        raise CertificateError("residual bound fell below c^(1/2) n / 4")
    return Thresholds(lower / 2, lower, residual, quarter)


@dataclass
class StructureReport:
    input: GSet
    cert: EnergyCertificate
    c_used: Fraction
    p: float
    l_trajectory: list[int]
    trace: PeelingTrace
    span_set: GSet
    intersect_size: int
    error_lhs: float | None
    error_rhs: float
    layer_bound: float | None
    residual_lb: float
    quarter_bound: float
    lp_norm_A: float | None
    lower_1A: float
    lower_1A_holds: bool | None
    certified: bool
    reason: str
    l_reference: float
    log_base: str = LOG_BASE
    margins: list[MarginReport] = field(default_factory=list)

    @property
    def residual_size(self) -> int:
        return len(self.trace.residual)

    @property
    def final_l(self) -> int:
        return self.l_trajectory[-1]


def _fourier_or_none(A: GSet, max_group: int):
    try:
        return fourier_view(A, max_group)
    except ResourceError:
        return None


def energy_structure(
    A: GSet,
    c_override=None,
    l_const: float = 1.0,
    adaptive: bool = True,
    mode: str = "greedy",
    l_init: int | None = None,
    max_group: int = DEFAULT_MAX_GROUP,
) -> StructureReport:
    """Find dissociated L inside a peeled residual A' and certify |A n Span(L)| from below.

    l starts at ceil(l_const * ln|A| / c) and doubles while the measured
    ||1_A^ - 1_A'^||_p exceeds the threshold; once no layer of size l exists
    the error is 0, so the loop ends.
    """
    if len(A) < 2:
        raise EmptyInputError("energy_structure needs |A| >= 2")
    cert = additive_energy(A)
    c = cert.c
    if c_override is not None:
        c_override = Fraction(c_override)
        if not 0 < c_override <= c:
            raise PreconditionError(f"c override {c_override} must lie in (0, {c}]")
        c = c_override
    n = len(A)
    p = 2 + math.log(n)
    th = thm1_thresholds(c, p, n)
    l_ref = math.log(n) / float(c)
    l = l_init if l_init is not None else max(1, math.ceil(l_const * l_ref))
    if l < 1:
        raise ValueError("l must be a positive integer")

    view = _fourier_or_none(A, max_group)
    trajectory = []
    err = None
    while True:
        trajectory.append(l)
        trace = bourgain_peel(A, l, mode)
        if view is None:
            break
        err = peel_error_norm(trace, p, max_group)
        if err.lhs <= th.rhs_lemma_error or not adaptive or trace.s == 0:
            break
        l *= 2

    residual = trace.residual
    L = max_dissociated_greedy(residual)
    inter = len(span_intersect(L, A))
    margins = []
    lp_A = None
    lower_holds = None
    if view is None:
        certified = False
        reason = f"group too large for the DFT cap {max_group}"
    else:
        B, emb = view
        FA = dft(B, B.spec, max_group)
        lp_A = lp_dual_norm(FA, p)
        lower_holds = bool(lp_A >= th.lower_1A * (1 - 1e-12))
        margins.append(MarginReport("energy lower bound on ||1_A^||_p", th.lower_1A, lp_A))
        if p > 4:
            margins.append(logconvexity_check(FA, 2.0, p, theta_for(4.0, 2.0, p)))
        if len(residual):
            hy = hausdorff_young_check(emb.apply(residual) if emb else residual, p, max_group)
            margins.extend([hy.holder, hy.parseval_hy])
        margins.append(MarginReport("peel triangle inequality", err.lhs, err.layer_bound))
        certified = err.lhs <= th.rhs_lemma_error
        reason = "error within threshold" if certified else "error above threshold"
        if certified and not lower_holds:
            reason = "error within threshold; energy lower bound fails for p < 4"
    report = StructureReport(
        input=A,
        cert=cert,
        c_used=c,
        p=p,
        l_trajectory=trajectory,
        trace=trace,
        span_set=L,
        intersect_size=inter,
        error_lhs=None if err is None else err.lhs,
        error_rhs=th.rhs_lemma_error,
        layer_bound=None if err is None else err.layer_bound,
        residual_lb=th.residual_lb,
        quarter_bound=th.quarter_bound,
        lp_norm_A=lp_A,
        lower_1A=th.lower_1A,
        lower_1A_holds=lower_holds,
        certified=certified,
        reason=reason,
        l_reference=l_ref,
        margins=margins,
    )
    if certified and lower_holds:
        check_certified_chain(report)
    return report


def check_certified_chain(report: StructureReport) -> None:
    """intersect_size >= |A'| >= residual bound >= c^(1/2)|A|/4 on a certified report."""
    a_res = report.residual_size
    if not report.intersect_size >= a_res:
        raise CertificateError(f"span covers {report.intersect_size} < |A'| = {a_res}")
    if not a_res >= report.residual_lb:
        raise CertificateError(f"|A'| = {a_res} below the residual bound {report.residual_lb}")
    if not report.residual_lb >= report.quarter_bound * (1 - 1e-12):
        raise CertificateError("residual bound below c^(1/2)|A|/4")


@dataclass(frozen=True)
class FDiagnostics:
    """f = 1_{A+A} * 1_{-A}; exact integer fields plus the dual L^1 norm."""

    min_over_A: int
    pointwise_exact: bool
    sup: int
    mass: int
    l2_squared: int
    dual_l1: float | None


@dataclass
class CoverReport:
    input: GSet
    K: Fraction
    span_set: GSet
    covered: bool
    bound_ratio: float
    f_diag: FDiagnostics
    log_base: str = LOG_BASE


def _f_values(A: GSet):
    """Support rows and values of 1_{A+A} * 1_{-A}, plus the values at each a in A."""
    S = sumset(A, A)
    rows, counts = convolution_counts(S, A.negate())
    on_A = row_isin(rows, A.coords, A.spec)
    return S, rows, counts, counts[on_A], int(on_A.sum())


def _f_dual(A: GSet, max_group: int):
    view = _fourier_or_none(A, max_group)
    if view is None:
        return None
    B, _ = view
    S = sumset(B, B)
    return dft(S, B.spec, max_group) * dft(B.negate(), B.spec, max_group)


def f_diagnostics(A: GSet, max_group: int = DEFAULT_MAX_GROUP) -> FDiagnostics:
    S, _, counts, on_A, hits = _f_values(A)
    n = len(A)
    F = _f_dual(A, max_group)
    return FDiagnostics(
        min_over_A=int(on_A.min()) if hits == n else 0,
        pointwise_exact=hits == n and bool((on_A == n).all()),
        sup=int(counts.max()),
        mass=int(counts.sum()),
        l2_squared=int(np.dot(counts, counts)),
        dual_l1=None if F is None else lp_dual_norm(F, 1),
    )


def cover_structure(A: GSet, max_group: int = DEFAULT_MAX_GROUP) -> CoverReport:
    """Greedy maximal dissociated L with every element of A checked inside Span(L)."""
    if len(A) < 2:
        raise EmptyInputError("cover_structure needs |A| >= 2")
    K = doubling(A)
    L = max_dissociated_greedy(A)
    covered = all(span_contains(L, a) is not None for a in A)
    if not covered:
        raise CertificateError("greedy maximal dissociated subset fails to span A")
    ratio = len(L) / (float(K) * math.log(len(A)))
    return CoverReport(A, K, L, covered, ratio, f_diagnostics(A, max_group))


@dataclass
class Thm2Chain:
    p_prime: float
    p: float
    K: Fraction
    span_set: GSet
    margins: list[MarginReport]
    l2_exact: bool
    f_l2_on_L: float
    effective_constant: float
    pairing_lhs: float
    pairing_rhs: float
    rudin_ratio: float

    def margin(self, name: str) -> MarginReport:
        for m in self.margins:
            if m.name == name:
                return m
        raise KeyError(name)


def thm2_chain_check(A: GSet, p_prime: float | None = None, max_group: int = DEFAULT_MAX_GROUP) -> Thm2Chain:
    """Evaluate the dual-norm bounds on f = 1_{A+A} * 1_{-A} and the pairing with f 1_L.

    Reports both the interpolated bound as literally stated,
    sqrt(K)|A|^((p'+1)/2), and the bound log-convexity between L^1 and L^2
    actually yields, sqrt(K)|A|^(2-1/p').
    """
    if len(A) < 2:
        raise EmptyInputError("thm2_chain_check needs |A| >= 2")
    n = len(A)
    if p_prime is None:
        p_prime = conjugate_exponent(2 + math.log(n))
    if not 1 < p_prime <= 2:
        raise ValueError("p' must lie in (1, 2]")
    p = conjugate_exponent(p_prime)
    K = doubling(A)
    sK = math.sqrt(float(K))
    S, rows, counts, _, _ = _f_values(A)
    l2_sq = int(np.dot(counts, counts))
    # ||f||_2^2 <= ||f||_inf ||f||_1 <= |A|^2 |A+A| = K |A|^3
    l2_exact = l2_sq <= int(counts.max()) * int(counts.sum()) <= n * n * len(S)

    view = _fourier_or_none(A, max_group)
    if view is None:
        raise ResourceError(f"group too large for the DFT cap {max_group}", max_group)
    B, emb = view
    F = dft(sumset(B, B), B.spec, max_group) * dft(B.negate(), B.spec, max_group)
    tol = 1e-6
    margins = [
        MarginReport("L1 bound", lp_dual_norm(F, 1), sK * n, tol),
        MarginReport("L2 bound", lp_dual_norm(F, 2) ** 2, float(K) * n**3, tol),
        MarginReport("parseval on f", abs(lp_dual_norm(F, 2) ** 2 - l2_sq), tol * l2_sq, 0.0),
        MarginReport("Lp' bound as stated", lp_dual_norm(F, p_prime), sK * n ** ((p_prime + 1) / 2), tol),
        MarginReport("Lp' bound by log-convexity", lp_dual_norm(F, p_prime), sK * n ** (2 - 1 / p_prime), tol),
    ]

    L = max_dissociated_greedy(A)
    LB = emb.apply(L) if emb else L
    # f(a) = |A| on every a in A, so f 1_L is |A| times the indicator of L
    f_l2_L = n * math.sqrt(len(L))
    FL = dft(LB, B.spec, max_group)
    FL = type(FL)(FL.spec, FL.values * n)
    # <(f 1_L)^, f^> over the uniform measure; the translation phases cancel
    pairing = float(np.real(np.mean(FL.values * np.conj(F.values))))
    lp_fl = lp_dual_norm(FL, p)
    lpp_f = lp_dual_norm(F, p_prime)
    margins.append(MarginReport("pairing by Holder", pairing, lp_fl * lpp_f, tol))
    return Thm2Chain(
        p_prime=p_prime,
        p=p,
        K=K,
        span_set=L,
        margins=margins,
        l2_exact=bool(l2_exact),
        f_l2_on_L=f_l2_L,
        effective_constant=f_l2_L**2 / (f_l2_L * math.sqrt(p) * lpp_f),
        pairing_lhs=pairing,
        pairing_rhs=lp_fl * lpp_f,
        rudin_ratio=lp_fl / (math.sqrt(p) * f_l2_L),
    )
