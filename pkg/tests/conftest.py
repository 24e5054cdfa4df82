import itertools
import os
import sys

import numpy as np
import pytest

from spanstruct.group import GroupSpec, GSet

Z = GroupSpec.integers(1)


def brute_energy(A: GSet) -> int:
    """O(|A|^4) count of quadruples with a + b = c + d."""
    pts = [e for e in A]
    count = 0
    for a, b, c, d in itertools.product(pts, repeat=4):
        if a + b == c + d:
            count += 1
    return count


def brute_relations(L: GSet):
    """Sign vectors in lexicographic order 0 < +1 < -1, first position most significant."""
    rows = L.coords
    mods = L.spec.moduli
    for signs in itertools.product((0, 1, -1), repeat=len(L)):
        total = (np.asarray(signs, dtype=np.int64)[:, None] * rows).sum(axis=0) if len(L) else np.zeros(L.spec.dim, dtype=np.int64)
        finite = mods > 0
        total[finite] %= mods[finite]
        yield signs, total


def brute_witness(L: GSet):
    for signs, total in brute_relations(L):
        if any(signs) and not total.any():
            return signs
    return None


def brute_span(L: GSet) -> set:
    return {tuple(int(v) for v in total) for _, total in brute_relations(L)}


def random_set(rng, n, lo, hi, spec=Z):
    n = min(n, hi - lo)
    vals = rng.choice(np.arange(lo, hi), size=n, replace=False)
    return GSet(spec, vals.reshape(-1, 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)


def pytest_report_header(config):
    from spanstruct._accel import BACKEND

    return f"spanstruct kernel backend: {BACKEND}"


sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
