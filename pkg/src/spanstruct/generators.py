"""Deterministic set generators for exercising the pipelines."""
from __future__ import annotations

import numpy as np

from .group import GroupSpec, GSet

RNG_ALGORITHM = "numpy.random.PCG64(SeedSequence)"
KINDS = ("ap", "box_random", "geo", "sidon_greedy", "subgroup_union")


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def ap(n: int, d: int = 1, s: int = 0) -> GSet:
    if n < 1:
        raise ValueError("ap needs n >= 1")
    if d == 0 and n > 1:
        raise ValueError("ap with difference 0 repeats its start")
    return GSet.of(s + d * i for i in range(n))


def geo(n: int) -> GSet:
    if n < 1:
        raise ValueError("geo needs n >= 1")
    return GSet.of(2**i for i in range(n))


def box_random(n: int, w: int, dim: int = 1, seed: int = 0) -> GSet:
    """n distinct uniform points of [0, w)^dim."""
    if n < 1 or w < 1 or dim < 1:
        raise ValueError("box_random needs positive n, w, dim")
    cells = w**dim
    if n > cells:
        raise ValueError(f"cannot draw {n} distinct points from a box of {cells} cells")
    flat = rng_for(seed).choice(cells, size=n, replace=False)
    pts = np.stack(np.unravel_index(flat, (w,) * dim), axis=1)
    return GSet(GroupSpec.integers(dim), pts)


def sidon_greedy(n: int) -> GSet:
    """Least-first greedy Sidon set: 0, 1, 3, 7, 12, 20, ..."""
    if n < 1:
        raise ValueError("sidon_greedy needs n >= 1")
    elems, diffs = [0], set()
    x = 0
    while len(elems) < n:
        x += 1
        new = {x - a for a in elems}
        # pairwise sums stay distinct iff all positive differences stay distinct
        if new & diffs:
            continue
        diffs |= new
        elems.append(x)
    return GSet.of(elems)


def subgroup_union(k: int, r: int, t: int, seed: int = 0) -> GSet:
    """Union of t random cosets of the span of the first r basis vectors in Z_2^k."""
    if not 0 <= r <= k or k < 1:
        raise ValueError("subgroup_union needs 0 <= r <= k and k >= 1")
    n_cosets = 2 ** (k - r)
    if not 1 <= t <= n_cosets:
        raise ValueError(f"t must lie in [1, {n_cosets}]")
    reps = rng_for(seed).choice(n_cosets, size=t, replace=False)
    sub = np.array([[(i >> (r - 1 - j)) & 1 for j in range(r)] for i in range(2**r)], dtype=np.int64).reshape(2**r, r)
    rows = []
    for c in sorted(int(v) for v in reps):
        tail = np.array([(c >> (k - r - 1 - j)) & 1 for j in range(k - r)], dtype=np.int64)
        rows.append(np.hstack([sub, np.broadcast_to(tail, (2**r, k - r))]))
    return GSet(GroupSpec((2,) * k), np.vstack(rows))


def generate(kind: str, params: list[int], seed: int = 0) -> GSet:
    try:
        if kind == "ap":
            return ap(*params)
        if kind == "geo":
            return geo(*params)
        if kind == "box_random":
            return box_random(*params, seed=seed)
        if kind == "sidon_greedy":
            return sidon_greedy(*params)
        if kind == "subgroup_union":
            return subgroup_union(*params, seed=seed)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {kind}: {exc}") from None
    raise ValueError(f"unknown generator kind {kind!r}; choose from {', '.join(KINDS)}")
