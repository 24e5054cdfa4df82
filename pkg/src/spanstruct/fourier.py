"""Discrete Fourier analysis on finite products of cyclic groups.

The transform is f^(t) = sum_x f(x) exp(-2 pi i sum_j t_j x_j / m_j), and dual
norms use the uniform probability measure on characters. Every analytic
inequality is reported as a margin with a relative tolerance rather than a
bare boolean.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .dissociation import is_dissociated
from .errors import PreconditionError, RequiresEmbeddingError, ResourceError
from .group import Element, GroupSpec, GSet, embed_to_torus
from .setops import additive_energy

DEFAULT_MAX_GROUP = 2**20
NAIVE_CAP = 4096
REL_TOL = 1e-9
RNG_ALGORITHM = "numpy.random.PCG64"

FunctionLike = Union[GSet, Mapping[Element, complex], np.ndarray]


@dataclass(frozen=True, eq=False)
class DualFunction:
    spec: GroupSpec
    values: np.ndarray

    def __post_init__(self):
        if tuple(self.values.shape) != self.spec.factors:
            raise ValueError(f"values of shape {self.values.shape} do not index {self.spec}")

    def __sub__(self, other: DualFunction) -> DualFunction:
        return DualFunction(self.spec, self.values - other.values)

    def __add__(self, other: DualFunction) -> DualFunction:
        return DualFunction(self.spec, self.values + other.values)

    def __mul__(self, other: DualFunction) -> DualFunction:
        return DualFunction(self.spec, self.values * other.values)

    def norm(self, p) -> float:
        return lp_dual_norm(self, p)


@dataclass(frozen=True)
class MarginReport:
    """lhs <= rhs, accepted up to ``rel_tol * max(|rhs|, tiny)``."""

    name: str
    lhs: float
    rhs: float
    rel_tol: float = REL_TOL

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + self.rel_tol * max(abs(self.rhs), 1e-300)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "tolerance": self.rel_tol,
            "holds": self.holds,
        }


def _require_finite(spec: GroupSpec, max_group: int) -> None:
    if not spec.is_finite:
        raise RequiresEmbeddingError(f"{spec} has an unbounded factor; embed it into a torus first")
    if spec.order > max_group:
        raise ResourceError(f"group of order {spec.order} exceeds the DFT cap of {max_group}", max_group)


def dense(f: FunctionLike, spec: GroupSpec, max_group: int = DEFAULT_MAX_GROUP) -> np.ndarray:
    """Dense complex array of shape ``spec.factors`` holding f."""
    _require_finite(spec, max_group)
    if isinstance(f, np.ndarray):
        if tuple(f.shape) != spec.factors:
            raise ValueError(f"array of shape {f.shape} does not index {spec}")
        return f.astype(complex)
    out = np.zeros(spec.factors, dtype=complex)
    if isinstance(f, GSet):
        if f.spec != spec:
            raise ValueError("set spec differs from transform spec")
        out[tuple(f.coords.T)] = 1.0
        return out
    for x, v in f.items():
        if x.spec != spec:
            raise ValueError("function support lies in another spec")
        out[x.coords] += v
    return out


def dft(f: FunctionLike, spec: GroupSpec, max_group: int = DEFAULT_MAX_GROUP) -> DualFunction:
    return DualFunction(spec, np.fft.fftn(dense(f, spec, max_group)))


def naive_dft(f: FunctionLike, spec: GroupSpec) -> DualFunction:
    """Direct character sums, O(|G|^2); an independent check on :func:`dft`."""
    arr = dense(f, spec, NAIVE_CAP)
    grid = np.indices(spec.factors).reshape(spec.dim, -1).T
    phase = np.zeros((grid.shape[0], grid.shape[0]))
    for j, m in enumerate(spec.factors):
        phase += np.outer(grid[:, j], grid[:, j]) / m
    chars = np.exp(-2j * np.pi * phase)
    return DualFunction(spec, (chars @ arr.reshape(-1)).reshape(spec.factors))


def lp_dual_norm(F: DualFunction | np.ndarray, p) -> float:
    """(mean_t |F(t)|^p)^(1/p); the max for p = inf."""
    vals = np.abs(F.values if isinstance(F, DualFunction) else F).reshape(-1)
    if p == math.inf:
        return float(vals.max())
    p = float(p)
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    top = vals.max()
    if top == 0:
        return 0.0
    return float(top * np.mean((vals / top) ** p) ** (1.0 / p))


def parseval_residual(f: FunctionLike, spec: GroupSpec, max_group: int = DEFAULT_MAX_GROUP) -> float:
    arr = dense(f, spec, max_group)
    l2 = float(np.sum(np.abs(arr) ** 2))
    dual = lp_dual_norm(np.fft.fftn(arr), 2) ** 2
    return abs(dual - l2) / max(1.0, l2)


def energy_via_l4(A: GSet, max_group: int = DEFAULT_MAX_GROUP) -> float:
    return lp_dual_norm(dft(A, A.spec, max_group), 4) ** 4


def conjugate_exponent(p: float) -> float:
    if p == math.inf:
        return 1.0
    if p == 1:
        return math.inf
    return p / (p - 1)


def logconvexity_check(F: DualFunction, p0: float, p1: float, theta: float) -> MarginReport:
    """||F||_p <= ||F||_p0^(1-theta) ||F||_p1^theta where 1/p = (1-theta)/p0 + theta/p1."""
    if not (1 <= p0 < p1):
        raise ValueError("need 1 <= p0 < p1")
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    inv = (1 - theta) / p0 + (theta / p1 if p1 != math.inf else 0.0)
    p = 1.0 / inv
    rhs = lp_dual_norm(F, p0) ** (1 - theta) * lp_dual_norm(F, p1) ** theta
    return MarginReport(f"log-convexity p={p:.6g} between {p0:.6g} and {p1:.6g}", lp_dual_norm(F, p), rhs)


def theta_for(p: float, p0: float, p1: float) -> float:
    """Interpolation weight placing 1/p between 1/p0 and 1/p1."""
    inv1 = 0.0 if p1 == math.inf else 1.0 / p1
    return (1.0 / p0 - 1.0 / p) / (1.0 / p0 - inv1)


@dataclass(frozen=True)
class HausdorffYoungReport:
    p: float
    lp_norm: float
    interpolated: float
    size_bound: float
    holder: MarginReport
    parseval_hy: MarginReport

    @property
    def holds(self) -> bool:
        return self.holder.holds and self.parseval_hy.holds


def hausdorff_young_check(A: GSet, p: float, max_group: int = DEFAULT_MAX_GROUP) -> HausdorffYoungReport:
    """||1_A^||_p <= ||1_A^||_2^(2/p) ||1_A^||_inf^((p-2)/p) <= |A|^((p-1)/p)."""
    if p < 2:
        raise ValueError("p must be >= 2")
    F = dft(A, A.spec, max_group)
    lp = lp_dual_norm(F, p)
    mid = lp_dual_norm(F, 2) ** (2 / p) * lp_dual_norm(F, math.inf) ** ((p - 2) / p)
    top = float(len(A)) ** ((p - 1) / p)
    return HausdorffYoungReport(
        p, lp, mid, top, MarginReport("holder", lp, mid), MarginReport("parseval+hausdorff-young", mid, top)
    )


def character_matrix(L: GSet, spec: GroupSpec | None = None) -> np.ndarray:
    """(|G|, |L|) matrix of conj(gamma_t(x)) for t over the flattened dual group."""
    spec = spec or L.spec
    grid = np.indices(spec.factors).reshape(spec.dim, -1).T
    phase = np.zeros((grid.shape[0], len(L)))
    for j, m in enumerate(spec.factors):
        phase += np.outer(grid[:, j], L.coords[:, j]) / m
    return np.exp(-2j * np.pi * phase)


@dataclass(frozen=True)
class RudinStats:
    p: float
    trials: int
    seed: int
    max_ratio: float
    mean_ratio: float
    max_rademacher: float
    max_gaussian: float
    generator: str = RNG_ALGORITHM


def rudin_probe(
    L: GSet,
    p: float,
    trials: int,
    seed: int = 0,
    max_group: int = DEFAULT_MAX_GROUP,
    assume_dissociated: bool = False,
) -> RudinStats:
    """Empirical ||f^||_p / (sqrt(p) ||f||_2) for random f supported on a dissociated L.

    Each trial draws one Rademacher and one complex Gaussian coefficient vector.
    The ratios are translation invariant, so a caller holding a torus translate
    of a set already known to be dissociated may pass ``assume_dissociated``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if p < 2:
        raise ValueError("p must be >= 2")
    _require_finite(L.spec, max_group)
    if not assume_dissociated and not is_dissociated(L):
        raise PreconditionError("rudin_probe needs a dissociated set")
    rng = np.random.Generator(np.random.PCG64(seed))
    k = len(L)
    rad = rng.choice(np.array([-1.0, 1.0]), size=(k, trials))
    gauss = (rng.standard_normal((k, trials)) + 1j * rng.standard_normal((k, trials))) / math.sqrt(2)
    chars = character_matrix(L)

    def ratios(coef):
        vals = chars @ coef
        l2 = np.sqrt(np.sum(np.abs(coef) ** 2, axis=0))
        norms = np.array([lp_dual_norm(vals[:, j], p) for j in range(coef.shape[1])])
        return norms / (math.sqrt(p) * l2)

    r_rad, r_gauss = ratios(rad), ratios(gauss)
    both = np.concatenate([r_rad, r_gauss])
    return RudinStats(
        p=float(p),
        trials=trials,
        seed=seed,
        max_ratio=float(both.max()),
        mean_ratio=float(both.mean()),
        max_rademacher=float(r_rad.max()),
        max_gaussian=float(r_gauss.max()),
    )


def fourier_view(A: GSet, max_group: int = DEFAULT_MAX_GROUP):
    """Return (A over a finite spec, embedding or None), raising if over the cap."""
    if A.spec.is_finite:
        _require_finite(A.spec, max_group)
        return A, None
    B, emb = embed_to_torus(A, headroom=1)
    _require_finite(B.spec, max_group)
    return B, emb


def energy_check(A: GSet, max_group: int = DEFAULT_MAX_GROUP) -> MarginReport:
    """Relative gap between the L^4 route and the exact count, as a margin against 1e-6."""
    B, _ = fourier_view(A, max_group)
    exact = additive_energy(A).energy
    via = energy_via_l4(B, max_group)
    return MarginReport("energy via L4", abs(via - exact) / exact, 1e-6, 0.0)
