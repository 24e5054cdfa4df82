"""Sumsets, indicator convolution, additive energy and doubling, all in exact arithmetic."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import DimensionError
from .group import Element, GSet, RowCodec, canon_rows

__all__ = [
    "GSet",
    "EnergyCertificate",
    "sumset",
    "convolve_indicators",
    "convolution_counts",
    "additive_energy",
    "doubling",
    "interval_energy",
]


@dataclass(frozen=True)
class EnergyCertificate:
    energy: int
    size: int
    c: Fraction

    def __post_init__(self):
        n = self.size
        if not n * n <= self.energy <= n**3:
            raise AssertionError(f"energy {self.energy} outside [{n * n}, {n**3}]")


def _check(A: GSet, B: GSet) -> None:
    if A.spec != B.spec:
        raise DimensionError(f"spec mismatch: {A.spec} vs {B.spec}")


def _pair_sums(A: GSet, B: GSet) -> np.ndarray:
    rows = (A.coords[:, None, :] + B.coords[None, :, :]).reshape(-1, A.spec.dim)
    return canon_rows(rows, A.spec)


def convolution_counts(A: GSet, B: GSet) -> tuple[np.ndarray, np.ndarray]:
    """Distinct sums a+b (sorted rows) and their representation counts."""
    _check(A, B)
    if len(A) == 0 or len(B) == 0:
        return np.zeros((0, A.spec.dim), dtype=np.int64), np.zeros(0, dtype=np.int64)
    rows = _pair_sums(A, B)
    codec = RowCodec(A.spec, np.abs(rows).max(axis=0))
    if codec.fits:
        keys = codec.encode(rows)
        uniq, first, counts = np.unique(keys, return_index=True, return_counts=True)
        return rows[first], counts.astype(np.int64)
    uniq, counts = np.unique(rows, axis=0, return_counts=True)
    return uniq, counts.astype(np.int64)


def sumset(A: GSet, B: GSet) -> GSet:
    rows, _ = convolution_counts(A, B)
    return GSet.from_sorted_unique(A.spec, rows)


def convolve_indicators(A: GSet, B: GSet) -> dict[Element, int]:
    """Sparse map x -> #{(a, b) in A x B : a + b = x}."""
    rows, counts = convolution_counts(A, B)
    spec = A.spec
    return {Element(spec, tuple(int(v) for v in r)): int(c) for r, c in zip(rows, counts)}


def _energy_count(A: GSet) -> int:
    rows = _pair_sums(A, A)
    codec = RowCodec(A.spec, np.abs(rows).max(axis=0))
    if codec.fits:
        counts = _kernels.sorted_run_lengths(codec.encode(rows))
    else:
        _, counts = np.unique(rows, axis=0, return_counts=True)
    return int(np.dot(counts.astype(np.int64), counts.astype(np.int64)))


def additive_energy(A: GSet) -> EnergyCertificate:
    """E(A) = sum_x r(x)^2 = #{a+b=c+d}, with c = E/|A|^3."""
    A.require_nonempty("energy input")
    n = len(A)
    e = _energy_count(A)
    return EnergyCertificate(e, n, Fraction(e, n**3))


def doubling(A: GSet) -> Fraction:
    A.require_nonempty("doubling input")
    return Fraction(len(sumset(A, A)), len(A))


def interval_energy(n: int) -> int:
    """Closed form for E({0, ..., n-1}) in Z."""
    return n * n + n * (n - 1) * (2 * n - 1) // 3
