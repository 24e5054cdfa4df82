import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spanstruct.errors import PreconditionError, RequiresEmbeddingError, ResourceError
from spanstruct.fourier import (
    DualFunction,
    dft,
    energy_via_l4,
    hausdorff_young_check,
    logconvexity_check,
    lp_dual_norm,
    naive_dft,
    parseval_residual,
    rudin_probe,
    theta_for,
)
from spanstruct.group import GroupSpec, GSet, canon
from spanstruct.setops import additive_energy, convolve_indicators

Z8 = GroupSpec.cyclic(8)


def test_dft_examples():
    delta = {canon(0, Z8): 1.0}
    np.testing.assert_allclose(dft(delta, Z8).values, np.ones(8), atol=1e-12)
    full = GSet(Z8, range(8))
    expected = np.zeros(8)
    expected[0] = 8
    np.testing.assert_allclose(dft(full, Z8).values, expected, atol=1e-12)
    Z5 = GroupSpec.cyclic(5)
    assert abs(dft(GSet(Z5, [0, 1, 3]), Z5).values[0]) == pytest.approx(3)


def test_dft_errors():
    with pytest.raises(RequiresEmbeddingError):
        dft(GSet.of([1, 2]), GroupSpec.integers())
    big = GroupSpec.cyclic(2**11, 2**10)
    with pytest.raises(ResourceError):
        dft(GSet(big, [[0, 0]]), big)


def test_dft_matches_character_sums(rng):
    for spec in (GroupSpec.cyclic(12), GroupSpec.cyclic(6, 10), GroupSpec.cyclic(2, 3, 4)):
        vals = rng.standard_normal(spec.factors) + 1j * rng.standard_normal(spec.factors)
        np.testing.assert_allclose(dft(vals, spec).values, naive_dft(vals, spec).values, rtol=1e-9, atol=1e-9)


def test_lp_examples():
    ones = DualFunction(Z8, np.ones(8, dtype=complex))
    for p in (1, 1.5, 2, 7.3, math.inf):
        assert lp_dual_norm(ones, p) == pytest.approx(1.0)
    for N in (4, 16, 64):
        spec = GroupSpec.cyclic(N)
        F = dft(GSet(spec, range(N)), spec)
        for p in (1, 2, 3.5, 8):
            assert lp_dual_norm(F, p) == pytest.approx(N ** ((p - 1) / p), rel=1e-12)
    Z5 = GroupSpec.cyclic(5)
    assert lp_dual_norm(dft(GSet(Z5, [0, 1, 3]), Z5), 2) == pytest.approx(math.sqrt(3), rel=1e-12)
    with pytest.raises(ValueError):
        lp_dual_norm(ones, 0.5)


def test_parseval_examples(rng):
    assert parseval_residual({canon(0, Z8): 1.0}, Z8) == pytest.approx(0, abs=1e-15)
    Z5 = GroupSpec.cyclic(5)
    assert parseval_residual(GSet(Z5, [0, 1, 3]), Z5) < 1e-12
    Z64 = GroupSpec.cyclic(64)
    f = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    assert parseval_residual(f, Z64) < 1e-9


@pytest.mark.parametrize("values, energy", [([0], 1), ([0, 1, 3], 15), ([0, 1, 2], 19)])
def test_energy_via_l4_examples(values, energy):
    spec = Z8 if values == [0] else GroupSpec.cyclic(32)
    assert energy_via_l4(GSet(spec, values)) == pytest.approx(energy, rel=1e-9)


def test_energy_via_l4_random_sets(rng):
    for spec in (GroupSpec.cyclic(64), GroupSpec.cyclic(128), GroupSpec.cyclic(8, 8)):
        for _ in range(15):
            n = int(rng.integers(1, 40))
            A = GSet(spec, rng.integers(0, 128, size=(n, spec.dim)))
            exact = additive_energy(A).energy
            assert abs(energy_via_l4(A) - exact) <= 1e-6 * exact


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(64,), (8, 8), (3, 7), (100,)]))
def test_norm_monotone_in_p(seed, shape):
    r = np.random.default_rng(seed)
    F = DualFunction(GroupSpec.cyclic(*shape), r.standard_normal(shape) + 1j * r.standard_normal(shape))
    norms = [lp_dual_norm(F, p) for p in (1, 2, 4, 8, math.inf)]
    assert all(a <= b * (1 + 1e-12) for a, b in zip(norms, norms[1:]))


def test_linearity(rng):
    spec = GroupSpec.cyclic(6, 10)
    f, g = (rng.standard_normal(spec.factors) for _ in range(2))
    a, b = 2.5 - 1j, -0.75
    lhs = dft(a * f + b * g, spec).values
    rhs = a * dft(f, spec).values + b * dft(g, spec).values
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-9)


def test_convolution_identity(rng):
    spec = GroupSpec.cyclic(64)
    for _ in range(10):
        A = GSet(spec, rng.integers(0, 64, size=int(rng.integers(1, 20))))
        B = GSet(spec, rng.integers(0, 64, size=int(rng.integers(1, 20))))
        conv = dft(convolve_indicators(A, B), spec).values
        prod = dft(A, spec).values * dft(B, spec).values
        np.testing.assert_allclose(conv, prod, rtol=1e-9, atol=1e-9 * np.abs(prod).max())


def test_logconvexity_examples(rng):
    ones = DualFunction(Z8, np.ones(8, dtype=complex))
    rep = logconvexity_check(ones, 2, 6, 0.3)
    assert rep.holds and rep.slack == pytest.approx(0, abs=1e-12)

    spec = GroupSpec.cyclic(256)
    A = GSet(spec, rng.choice(256, size=40, replace=False))
    p = 2 + math.log(len(A))
    F = dft(A, spec)
    rep = logconvexity_check(F, 2, p, theta_for(4, 2, p))
    assert rep.holds
    # same inequality written with the exponents of the energy step
    lhs = lp_dual_norm(F, 4) ** 4
    rhs = lp_dual_norm(F, 2) ** ((2 * p - 8) / (p - 2)) * lp_dual_norm(F, p) ** (2 * p / (p - 2))
    assert lhs <= rhs * (1 + 1e-9)
    assert lp_dual_norm(F, 2) == pytest.approx(math.sqrt(len(A)))

    Z64 = GroupSpec.cyclic(64)
    for _ in range(20):
        G = DualFunction(Z64, rng.standard_normal(64) + 1j * rng.standard_normal(64))
        assert logconvexity_check(G, 1, 3, 0.5).holds
    with pytest.raises(ValueError):
        logconvexity_check(ones, 3, 2, 0.5)


def test_hausdorff_young_examples(rng):
    rep = hausdorff_young_check(GSet(Z8, [0]), 3.0)
    assert rep.lp_norm == pytest.approx(1) and rep.interpolated == pytest.approx(1) and rep.size_bound == 1
    Z32 = GroupSpec.cyclic(32)
    rep = hausdorff_young_check(GSet(Z32, [0, 1, 3]), 4)
    assert rep.holds and rep.size_bound == pytest.approx(3**0.75)
    Z128 = GroupSpec.cyclic(128)
    for _ in range(10):
        A = GSet(Z128, rng.choice(128, size=int(rng.integers(2, 60)), replace=False))
        assert hausdorff_young_check(A, 2 + math.log(len(A))).holds


def test_rudin_singleton_ratio():
    L = GSet(GroupSpec.cyclic(16), [5])
    for p in (2, 4, 9.5):
        stats = rudin_probe(L, p, 20, seed=1)
        assert stats.max_ratio == pytest.approx(1 / math.sqrt(p), rel=1e-12)
        assert stats.mean_ratio == pytest.approx(1 / math.sqrt(p), rel=1e-12)


def test_rudin_lacunary_regression():
    spec = GroupSpec.cyclic(8192)
    L = GSet(spec, [2**i for i in range(12)])
    for p in (4, 8, 16):
        a = rudin_probe(L, p, 200, seed=7)
        b = rudin_probe(L, p, 200, seed=7)
        assert a == b
        assert a.max_ratio <= 3.0
        assert a.max_ratio >= a.mean_ratio > 0


def test_rudin_rejects_non_dissociated():
    with pytest.raises(PreconditionError):
        rudin_probe(GSet(Z8, [1, 2, 3]), 4, 10)
