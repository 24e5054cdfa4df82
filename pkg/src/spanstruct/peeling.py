"""Iterative removal of disjoint dissociated layers of a fixed size."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dissociation import EXACT_CAP, find_dissociated_of_size
from .errors import ResourceError
from .fourier import DEFAULT_MAX_GROUP, dft, fourier_view, lp_dual_norm
from .group import GSet, row_isin


@dataclass(frozen=True)
class PeelingTrace:
    """Layers L_0..L_{s-1} and residual A' partitioning ``source``.

    In greedy mode the residual only certifies that a greedy scan of it stalls
    below ``l``; in exact mode no dissociated subset of size ``l`` exists in it.
    Layers are always the first ``l`` elements of a greedy scan when one exists.
    """

    l: int
    layers: tuple[GSet, ...]
    residual: GSet
    mode: str
    source: GSet
    selection: str = "greedy-prefix"

    @property
    def s(self) -> int:
        return len(self.layers)


def bourgain_peel(A: GSet, l: int, mode: str = "greedy") -> PeelingTrace:
    if l < 1:
        raise ValueError("l must be a positive integer")
    mode = mode.lower()
    if mode == "exact" and len(A) > EXACT_CAP:
        raise ResourceError(f"exact peeling of {len(A)} elements exceeds the cap of {EXACT_CAP}", EXACT_CAP)
    layers = []
    current = A
    while True:
        layer = find_dissociated_of_size(current, l, mode)
        if layer is None:
            break
        layers.append(layer)
        current = current.subset(~row_isin(current.coords, layer.coords, A.spec))
    return PeelingTrace(l, tuple(layers), current, mode, A)


@dataclass(frozen=True)
class PeelError:
    p: float
    lhs: float
    layer_bound: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.layer_bound + 1e-9 * self.layer_bound


def peel_error_norm(trace: PeelingTrace, p: float, max_group: int = DEFAULT_MAX_GROUP) -> PeelError:
    """||1_A^ - 1_A'^||_p against the triangle-inequality sum over layers.

    Unbounded specs are embedded first; the translation it applies leaves
    every |Fourier| value unchanged.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    src, emb = fourier_view(trace.source, max_group)
    move = (lambda S: emb.apply(S)) if emb is not None else (lambda S: S)
    spec = src.spec
    lhs = lp_dual_norm(dft(src, spec, max_group) - dft(move(trace.residual), spec, max_group), p)
    bound = float(sum(lp_dual_norm(dft(move(L), spec, max_group), p) for L in trace.layers))
    return PeelError(float(p), lhs, bound)
