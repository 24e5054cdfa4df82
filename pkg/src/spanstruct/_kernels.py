"""Hot loops: signed-combination enumeration, zero-relation search, run counting.

Each kernel has a loop version compiled with numba and a vectorised numpy
version. The public names dispatch on ``_accel.HAVE_NUMBA``; both variants are
importable under ``*_numba`` / ``*_numpy`` for testing and benchmarking.

Sign digits: index ``idx`` of a combination over ``k`` elements is read in
base 3 with the first element most significant; digit 0, 1, 2 means sign
0, +1, -1. Ascending index order is therefore lexicographic order on sign
vectors with 0 < +1 < -1.
"""
import numpy as np

from ._accel import HAVE_NUMBA, njit

SIGN_OF_DIGIT = (0, 1, -1)


def _reduce_rows_numpy(rows, moduli):
    finite = moduli > 0
    if finite.any():
        rows[:, finite] %= moduli[finite]
    return rows


def signed_sums_numpy(X, moduli):
    """All 3**k signed sums of the rows of ``X`` in index order, shape (3**k, d)."""
    k, d = X.shape
    out = np.zeros((1, d), dtype=np.int64)
    for j in range(k):
        step = np.stack([np.zeros(d, dtype=np.int64), X[j], -X[j]])
        out = (out[:, None, :] + step[None, :, :]).reshape(-1, d)
        _reduce_rows_numpy(out, moduli)
    return out


def _signed_sums_loop(X, moduli):
    k, d = X.shape
    total = 3**k
    out = np.zeros((total, d), dtype=np.int64)
    size = 1
    for j in range(k):
        # expand backwards so unread rows are never overwritten
        for i in range(size - 1, -1, -1):
            for c in range(d):
                base = out[i, c]
                plus = base + X[j, c]
                minus = base - X[j, c]
                m = moduli[c]
                if m > 0:
                    plus %= m
                    minus %= m
                out[3 * i, c] = base
                out[3 * i + 1, c] = plus
                out[3 * i + 2, c] = minus
        size *= 3
    return out


def first_zero_combination_numpy(X, moduli):
    """Smallest nonzero index whose signed sum is the identity, or -1."""
    sums = signed_sums_numpy(X, moduli)
    hits = np.flatnonzero(~sums[1:].any(axis=1))
    return int(hits[0]) + 1 if hits.size else -1


def _first_zero_combination_loop(X, moduli):
    k, d = X.shape
    digits = np.zeros(k, dtype=np.int64)
    acc = np.zeros(d, dtype=np.int64)
    total = 3**k
    for idx in range(1, total):
        # odometer increment from the least significant (last) element
        j = k - 1
        while True:
            dg = digits[j]
            if dg == 0:
                digits[j] = 1
                for c in range(d):
                    acc[c] += X[j, c]
                break
            elif dg == 1:
                digits[j] = 2
                for c in range(d):
                    acc[c] -= 2 * X[j, c]
                break
            else:
                digits[j] = 0
                for c in range(d):
                    acc[c] += X[j, c]
                j -= 1
        zero = True
        for c in range(d):
            m = moduli[c]
            if m > 0:
                acc[c] %= m
            if acc[c] != 0:
                zero = False
        if zero:
            return idx
    return -1


def sorted_run_lengths_numpy(keys):
    """Multiplicities of the distinct values of ``keys``, in ascending value order."""
    _, counts = np.unique(keys, return_counts=True)
    return counts.astype(np.int64)


def _run_lengths_loop(s):
    n = s.shape[0]
    out = np.zeros(n, dtype=np.int64)
    if n == 0:
        return out
    r = 0
    out[0] = 1
    for i in range(1, n):
        if s[i] == s[i - 1]:
            out[r] += 1
        else:
            r += 1
            out[r] = 1
    return out[: r + 1]


if HAVE_NUMBA:
    signed_sums_numba = njit(cache=True)(_signed_sums_loop)
    first_zero_combination_numba = njit(cache=True)(_first_zero_combination_loop)
    _run_lengths_numba = njit(cache=True)(_run_lengths_loop)

    def sorted_run_lengths_numba(keys):
        # numpy's sort is much faster than numba's; only the run scan is compiled
        return _run_lengths_numba(np.sort(keys))

    signed_sums = signed_sums_numba
    first_zero_combination = first_zero_combination_numba
    sorted_run_lengths = sorted_run_lengths_numba
else:
    signed_sums_numba = first_zero_combination_numba = sorted_run_lengths_numba = None
    signed_sums = signed_sums_numpy
    first_zero_combination = first_zero_combination_numpy
    sorted_run_lengths = sorted_run_lengths_numpy


def index_to_signs(idx, k):
    """Decode a combination index into a tuple of k signs."""
    signs = [0] * k
    for j in range(k - 1, -1, -1):
        idx, dg = divmod(idx, 3)
        signs[j] = SIGN_OF_DIGIT[dg]
    return tuple(signs)
