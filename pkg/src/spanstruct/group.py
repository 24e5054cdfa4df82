"""Ambient groups Z^a x Z_m1 x ... , their elements, and finite sets of them.

A factor is stored as an integer modulus; ``UNBOUNDED`` (0) stands for the
integers. Canonical coordinates for a finite factor lie in ``[0, m)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, EmptyInputError

UNBOUNDED = 0

# Keeps every signed sum of up to 2**14 coordinates inside int64.
COORD_LIMIT = 2**48


@dataclass(frozen=True)
class GroupSpec:
    factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(m) for m in self.factors)
        if not factors:
            raise DimensionError("a group spec needs at least one factor")
        for m in factors:
            if m != UNBOUNDED and not 2 <= m <= COORD_LIMIT:
                raise DimensionError(f"invalid modulus {m}; finite factors need 2 <= m <= 2**48")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def integers(cls, d: int = 1) -> GroupSpec:
        return cls((UNBOUNDED,) * d)

    @classmethod
    def cyclic(cls, *moduli: int) -> GroupSpec:
        return cls(tuple(moduli))

    @classmethod
    def parse(cls, text: str) -> GroupSpec:
        """Parse ``Z``, ``Z^3``, or ``x``-separated factors such as ``Z_4 x Z_4``."""
        text = text.strip()
        m = re.fullmatch(r"Z\^(\d+)", text)
        if m:
            return cls.integers(int(m.group(1)))
        factors = []
        for part in text.split("x"):
            part = part.strip()
            if part == "Z":
                factors.append(UNBOUNDED)
                continue
            m = re.fullmatch(r"Z_(\d+)", part)
            if not m:
                raise DimensionError(f"cannot parse group factor {part!r}")
            factors.append(int(m.group(1)))
        return cls(tuple(factors))

    @property
    def dim(self) -> int:
        return len(self.factors)

    @property
    def is_finite(self) -> bool:
        return UNBOUNDED not in self.factors

    @property
    def order(self) -> int | None:
        if not self.is_finite:
            return None
        return int(np.prod(self.factors, dtype=object))

    @property
    def moduli(self) -> np.ndarray:
        return np.asarray(self.factors, dtype=np.int64)

    def __str__(self):
        if all(m == UNBOUNDED for m in self.factors):
            return "Z" if self.dim == 1 else f"Z^{self.dim}"
        return " x ".join("Z" if m == UNBOUNDED else f"Z_{m}" for m in self.factors)


def _check_range(arr: np.ndarray) -> None:
    if arr.size and np.abs(arr).max() > COORD_LIMIT:
        raise DimensionError("coordinates must satisfy |x| <= 2**48")


def canon_rows(rows, spec: GroupSpec) -> np.ndarray:
    """Canonicalise an (n, d) integer array under ``spec``."""
    arr = np.array(rows, dtype=np.int64, copy=True)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if spec.dim == 1 else arr.reshape(1, -1)
    if arr.shape[1] != spec.dim:
        raise DimensionError(f"expected {spec.dim} coordinates, got {arr.shape[1]}")
    mods = spec.moduli
    finite = mods > 0
    if finite.any():
        arr[:, finite] %= mods[finite]
    return arr


@total_ordering
@dataclass(frozen=True, eq=False)
class Element:
    spec: GroupSpec
    coords: tuple[int, ...]

    def _same_spec(self, other: Element) -> None:
        if not isinstance(other, Element):
            raise TypeError(f"cannot compare Element with {type(other).__name__}")
        if other.spec != self.spec:
            raise DimensionError(f"elements of {self.spec} and {other.spec} are not comparable")

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._same_spec(other)
        return self.coords == other.coords

    def __lt__(self, other):
        self._same_spec(other)
        return self.coords < other.coords

    def __hash__(self):
        return hash((self.spec, self.coords))

    def __add__(self, other):
        return group_arith(self, other, "add")

    def __sub__(self, other):
        return group_arith(self, other, "sub")

    def __neg__(self):
        return group_arith(self, self, "neg")

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self):
        c = self.coords[0] if len(self.coords) == 1 else list(self.coords)
        return f"Element({c} in {self.spec})"


def canon(raw: Sequence[int] | int, spec: GroupSpec) -> Element:
    """Reduce finite coordinates modulo their factor; integer coordinates pass through."""
    if isinstance(raw, (int, np.integer)):
        raw = (int(raw),)
    raw = [int(v) for v in raw]
    if len(raw) != spec.dim:
        raise DimensionError(f"expected {spec.dim} coordinates, got {len(raw)}")
    coords = tuple(v % m if m else v for v, m in zip(raw, spec.factors))
    if any(abs(v) > COORD_LIMIT for v in coords):
        raise DimensionError("coordinates must satisfy |x| <= 2**48")
    return Element(spec, coords)


def group_arith(a: Element, b: Element, op: str) -> Element:
    """Componentwise ``add``, ``sub`` or ``neg`` (which ignores ``b``), then canonicalise."""
    if a.spec != b.spec:
        raise DimensionError(f"spec mismatch: {a.spec} vs {b.spec}")
    op = op.lower()
    if op == "add":
        raw = [x + y for x, y in zip(a.coords, b.coords)]
    elif op == "sub":
        raw = [x - y for x, y in zip(a.coords, b.coords)]
    elif op == "neg":
        raw = [-x for x in a.coords]
    else:
        raise ValueError(f"unknown op {op!r}")
    return canon(raw, a.spec)


def zero(spec: GroupSpec) -> Element:
    return Element(spec, (0,) * spec.dim)


@dataclass(frozen=True, eq=False)
class GSet:
    """Finite set of canonical elements, sorted lexicographically, no duplicates.

    ``coords`` is a read-only (n, d) int64 array, the working representation
    for every numeric routine.
    """

    spec: GroupSpec
    coords: np.ndarray = field(repr=False)

    def __init__(self, spec: GroupSpec, elems=(), *, _trusted: bool = False):
        object.__setattr__(self, "spec", spec)
        if _trusted:
            arr = elems
        else:
            if isinstance(elems, np.ndarray):
                rows = elems
            else:
                elems = list(elems)
                rows = [e.coords if isinstance(e, Element) else e for e in elems]
                if any(isinstance(e, Element) and e.spec != spec for e in elems):
                    raise DimensionError("element spec differs from set spec")
                if not rows:
                    rows = np.zeros((0, spec.dim), dtype=np.int64)
            arr = canon_rows(rows, spec)
            _check_range(arr)
            if arr.shape[0] > 1:
                arr = np.unique(arr, axis=0)
        arr = np.ascontiguousarray(arr, dtype=np.int64).reshape(-1, spec.dim)
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @classmethod
    def of(cls, values: Iterable, spec: GroupSpec | None = None) -> GSet:
        """Convenience constructor; defaults to the integers."""
        return cls(spec or GroupSpec.integers(1), list(values))

    @classmethod
    def from_sorted_unique(cls, spec: GroupSpec, arr: np.ndarray) -> GSet:
        return cls(spec, arr, _trusted=True)

    def __len__(self):
        return self.coords.shape[0]

    def __iter__(self):
        for row in self.coords:
            yield Element(self.spec, tuple(int(v) for v in row))

    def __getitem__(self, i) -> Element:
        return Element(self.spec, tuple(int(v) for v in self.coords[i]))

    def __contains__(self, x: Element) -> bool:
        if x.spec != self.spec:
            raise DimensionError("element spec differs from set spec")
        return bool((self.coords == np.asarray(x.coords)).all(axis=1).any())

    def __eq__(self, other):
        if not isinstance(other, GSet):
            return NotImplemented
        if other.spec != self.spec:
            raise DimensionError(f"sets over {self.spec} and {other.spec} are not comparable")
        return self.coords.shape == other.coords.shape and bool((self.coords == other.coords).all())

    def __hash__(self):
        return hash((self.spec, self.coords.tobytes()))

    def __repr__(self):
        items = self.to_list()
        shown = items if len(items) <= 12 else items[:12] + ["..."]
        return f"GSet({shown}, spec={self.spec})"

    def to_list(self) -> list:
        """Plain ints for one-dimensional sets, lists of ints otherwise."""
        if self.spec.dim == 1:
            return [int(v) for v in self.coords[:, 0]]
        return [[int(v) for v in row] for row in self.coords]

    def subset(self, mask_or_index) -> GSet:
        return GSet.from_sorted_unique(self.spec, self.coords[mask_or_index])

    def union(self, other: GSet) -> GSet:
        _require_same(self, other)
        return GSet(self.spec, np.vstack([self.coords, other.coords]))

    def difference(self, other: GSet) -> GSet:
        _require_same(self, other)
        return self.subset(~row_isin(self.coords, other.coords, self.spec))

    def negate(self) -> GSet:
        return GSet(self.spec, -self.coords)

    def translate(self, t: Element) -> GSet:
        if t.spec != self.spec:
            raise DimensionError("translate by an element of another spec")
        return GSet(self.spec, self.coords + np.asarray(t.coords, dtype=np.int64))

    def contains_zero(self) -> bool:
        return bool((~self.coords.any(axis=1)).any())

    def require_nonempty(self, what: str = "set") -> None:
        if len(self) == 0:
            raise EmptyInputError(f"{what} must be nonempty")


def _require_same(a: GSet, b: GSet) -> None:
    if a.spec != b.spec:
        raise DimensionError(f"spec mismatch: {a.spec} vs {b.spec}")


class RowCodec:
    """Exact injective int64 keys for canonical rows with bounded integer coordinates.

    Finite factors use radix m; an unbounded factor uses radix 2*bound+1 after
    shifting by ``bound``. ``fits`` is False when the radix product overflows,
    in which case callers fall back to row-wise unique.
    """

    LIMIT = 2**62

    def __init__(self, spec: GroupSpec, bound):
        bound = np.broadcast_to(np.asarray(bound, dtype=object), (spec.dim,))
        radices, offsets = [], []
        for m, b in zip(spec.factors, bound):
            if m:
                radices.append(int(m))
                offsets.append(0)
            else:
                b = int(b)
                radices.append(2 * b + 1)
                offsets.append(b)
        total = 1
        for r in radices:
            total *= r
        self.fits = total < self.LIMIT
        self.offsets = np.asarray(offsets, dtype=np.int64) if self.fits else None
        self.radices = radices
        if self.fits:
            strides = np.ones(spec.dim, dtype=np.int64)
            for i in range(spec.dim - 2, -1, -1):
                strides[i] = strides[i + 1] * radices[i + 1]
            self.strides = strides
            self.radix_arr = np.asarray(radices, dtype=np.int64)

    def in_range(self, rows: np.ndarray) -> np.ndarray:
        shifted = rows + self.offsets
        return ((shifted >= 0) & (shifted < self.radix_arr)).all(axis=1)

    def encode(self, rows: np.ndarray) -> np.ndarray:
        """Keys for rows; rows outside the codec range get key -1."""
        shifted = rows + self.offsets
        keys = shifted @ self.strides
        ok = ((shifted >= 0) & (shifted < self.radix_arr)).all(axis=1)
        return np.where(ok, keys, -1)


def coord_bound(coords: np.ndarray, spec: GroupSpec, scale: int = 1) -> np.ndarray:
    """Per-coordinate bound on |sum| of up to ``scale`` signed rows (full sum for scale=None)."""
    if coords.shape[0] == 0:
        return np.zeros(spec.dim, dtype=object)
    if scale is None:
        return np.abs(coords).astype(object).sum(axis=0)
    return np.abs(coords).astype(object).max(axis=0) * scale


def row_isin(rows: np.ndarray, pool: np.ndarray, spec: GroupSpec) -> np.ndarray:
    """Boolean mask of ``rows`` that appear in ``pool`` (both canonical)."""
    if rows.shape[0] == 0 or pool.shape[0] == 0:
        return np.zeros(rows.shape[0], dtype=bool)
    both = np.vstack([rows, pool])
    codec = RowCodec(spec, np.abs(both).max(axis=0))
    if codec.fits:
        return np.isin(codec.encode(rows), codec.encode(pool))
    _, inv = np.unique(both, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    return np.isin(inv[: rows.shape[0]], inv[rows.shape[0]:])


def unique_rows(rows: np.ndarray, spec: GroupSpec) -> np.ndarray:
    """Lexicographically sorted distinct rows."""
    if rows.shape[0] <= 1:
        return rows.copy()
    codec = RowCodec(spec, np.abs(rows).max(axis=0))
    if codec.fits:
        _, idx = np.unique(codec.encode(rows), return_index=True)
        # radix order with nonnegative shifted digits is lexicographic order
        return rows[idx]
    return np.unique(rows, axis=0)


@dataclass(frozen=True)
class TorusEmbedding:
    """Record of an integer-to-torus embedding: x -> (x + shift) mod N per coordinate.

    ``word_length`` is the number of signed summands guaranteed not to wrap.
    Translation changes spans and dissociativity, so only translation-invariant
    quantities (energy, sumset sizes, Fourier magnitudes) transfer.
    """

    source: GroupSpec
    target: GroupSpec
    shift: tuple[int, ...]
    headroom: int
    word_length: int

    def apply(self, A: GSet) -> GSet:
        if A.spec != self.source:
            raise DimensionError(f"embedding is for {self.source}, got {A.spec}")
        return GSet(self.target, A.coords + np.asarray(self.shift, dtype=np.int64))

    def invert(self, B: GSet) -> GSet:
        """Undo the shift; valid for images of sets the embedding was built for."""
        if B.spec != self.target:
            raise DimensionError(f"expected a set over {self.target}")
        rows = B.coords - np.asarray(self.shift, dtype=np.int64)
        finite = np.asarray(self.source.factors) > 0
        if finite.any():
            rows[:, finite] %= self.source.moduli[finite]
        return GSet(self.source, rows)


def embed_to_torus(A: GSet, headroom: int = 1) -> tuple[GSet, TorusEmbedding]:
    """Embed the unbounded coordinates of ``A`` into power-of-two cyclic factors.

    Unbounded coordinate i is shifted to start at 0 and placed in Z_N with N the
    smallest power of two strictly above 2 * headroom * (|A| + 2) * W_i, where
    W_i (clamped to at least 1) is the largest shifted coordinate.
    """
    A.require_nonempty("embedded set")
    if headroom < 1:
        raise ValueError("headroom must be >= 1")
    word = headroom * (len(A) + 2)
    factors, shift = [], []
    for i, m in enumerate(A.spec.factors):
        if m:
            factors.append(m)
            shift.append(0)
            continue
        col = A.coords[:, i]
        lo = int(col.min())
        width = max(1, int(col.max()) - lo)
        limit = 2 * word * width
        n = 1
        while n <= limit:
            n *= 2
        factors.append(n)
        shift.append(-lo)
    emb = TorusEmbedding(A.spec, GroupSpec(tuple(factors)), tuple(shift), headroom, word)
    return emb.apply(A), emb
