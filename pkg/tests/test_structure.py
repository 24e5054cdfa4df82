import math
from fractions import Fraction

import mpmath
import pytest

from spanstruct.dissociation import is_dissociated, span_contains
from spanstruct.errors import EmptyInputError, PreconditionError
from spanstruct.generators import geo
from spanstruct.group import GroupSpec, GSet
from spanstruct.setops import interval_energy, sumset
from spanstruct.structure import cover_structure, energy_structure, thm1_thresholds, thm2_chain_check


def _oracle(c, p, n):
    mpmath.mp.dps = 50
    c, p, n = mpmath.mpf(c), mpmath.mpf(p), mpmath.mpf(n)
    rhs = c ** ((p - 2) / (2 * p)) * n ** ((p - 1) / p) / 2
    res = c ** ((p - 2) / (2 * (p - 1))) * mpmath.power(2, -p / (p - 1)) * n
    return float(rhs), float(res)


def test_thresholds_against_high_precision():
    th = thm1_thresholds(Fraction(1, 4), 6.0, 100)
    assert th.rhs_lemma_error == pytest.approx(14.62, abs=5e-3)
    for c, p, n in [(0.25, 6.0, 100), (1.0, 2.5, 17), (0.01, 40.0, 5000), (0.9, 2.0001, 3)]:
        th = thm1_thresholds(c, p, n)
        rhs, res = _oracle(c, p, n)
        assert th.rhs_lemma_error == pytest.approx(rhs, rel=1e-12)
        assert th.lower_1A == pytest.approx(2 * rhs, rel=1e-12)
        assert th.residual_lb == pytest.approx(res, rel=1e-12)
        assert th.residual_lb >= math.sqrt(c) * n / 4


def test_threshold_limits():
    n = 50
    th = thm1_thresholds(1.0, 2 + 1e-12, n)
    assert th.lower_1A == pytest.approx(math.sqrt(n), rel=1e-9)
    assert th.residual_lb == pytest.approx(n / 4, rel=1e-9)
    c = 0.3
    th = thm1_thresholds(c, 1e9, n)
    assert th.residual_lb == pytest.approx(math.sqrt(c) * n / 2, rel=1e-6)
    with pytest.raises(ValueError):
        thm1_thresholds(0, 3, 5)
    with pytest.raises(ValueError):
        thm1_thresholds(0.5, 2, 5)


def _assert_chain(r):
    if r.certified and r.lower_1A_holds:
        assert r.error_lhs <= r.error_rhs
        assert r.intersect_size >= r.residual_size >= r.residual_lb >= math.sqrt(float(r.c_used)) * len(r.input) / 4


def test_interval_pipeline():
    for n in (16, 40):
        A = GSet.of(range(1, n + 1))
        r = energy_structure(A)
        assert r.cert.energy == interval_energy(n)
        assert r.c_used >= Fraction(2, 3) - Fraction(1, n)
        assert r.certified and r.lower_1A_holds
        assert is_dissociated(r.span_set)
        assert len(r.span_set) <= r.final_l
        assert r.intersect_size >= math.sqrt(float(r.c_used)) * n / 4
        _assert_chain(r)


def test_dissociated_input_peels_to_nothing():
    A = geo(9)
    r = energy_structure(A)
    assert r.certified
    assert r.trace.s == 0 and r.residual_size == len(A)
    assert r.error_lhs == 0
    assert r.intersect_size == len(A)


def test_pair_by_hand():
    r = energy_structure(GSet.of([0, 1]))
    assert r.cert.energy == 6 and r.cert.c == Fraction(6, 8)
    assert r.certified
    assert r.intersect_size >= math.sqrt(6 / 8) * 2 / 4


def test_override_and_errors():
    A = GSet.of(range(1, 20))
    r = energy_structure(A, c_override=Fraction(1, 3))
    assert r.c_used == Fraction(1, 3)
    _assert_chain(r)
    with pytest.raises(PreconditionError):
        energy_structure(A, c_override=Fraction(1, 1))
    with pytest.raises(EmptyInputError):
        energy_structure(GSet.of([3]))


def test_non_adaptive_and_uncertifiable():
    A = GSet.of(range(1, 33))
    r = energy_structure(A, adaptive=False, l_init=1)
    assert r.l_trajectory == [1]
    r = energy_structure(GSet.of([0, 10**6, 3]), max_group=1024)
    assert not r.certified and r.error_lhs is None
    assert r.intersect_size >= r.residual_size >= 1


def test_cover_examples():
    r = cover_structure(GSet.of(range(1, 17)))
    assert r.K == Fraction(31, 16)
    assert r.span_set.to_list() == [1, 2, 4, 8, 16]
    assert r.covered
    r = cover_structure(GSet.of([0, 1]))
    assert r.K == Fraction(3, 2) and r.span_set.to_list() == [1] and r.covered
    A = geo(7)
    r = cover_structure(A)
    assert r.span_set == A and r.covered and math.isfinite(r.bound_ratio)


def test_f_diagnostics_identities():
    spec = GroupSpec.cyclic(11)
    for A in (GSet.of(range(1, 17)), geo(6), GSet(spec, [0, 2, 3, 7]), GSet.of([-5, 0, 9, 30])):
        r = cover_structure(A)
        n = len(A)
        f = r.f_diag
        assert f.pointwise_exact and f.min_over_A == n
        assert f.sup <= n
        assert f.mass == n * len(sumset(A, A))
        assert f.dual_l1 <= math.sqrt(float(r.K)) * n * (1 + 1e-6)


def test_thm2_chain_examples():
    c = thm2_chain_check(GSet.of([0, 1]), 2.0)
    for name in ("L1 bound", "L2 bound", "Lp' bound as stated", "Lp' bound by log-convexity", "pairing by Holder"):
        assert c.margin(name).holds
    assert c.l2_exact
    A = GSet.of(range(1, 65))
    c = thm2_chain_check(A)
    assert c.p == pytest.approx(2 + math.log(64))
    assert c.margin("L1 bound").holds and c.margin("L2 bound").holds
    assert c.margin("Lp' bound by log-convexity").holds
    assert c.pairing_lhs == pytest.approx(64**2 * 7, rel=1e-9)
    assert c.effective_constant > 0


def test_stated_interpolation_is_not_log_convexity():
    # (p'+1)/2 lies below 2 - 1/p' strictly inside (1, 2)
    for pp in (1.1, 1.25, 1.5, 1.9):
        assert (pp + 1) / 2 < 2 - 1 / pp
    c = thm2_chain_check(GSet.of(range(1, 65)), 1.5)
    assert not c.margin("Lp' bound as stated").holds
    assert c.margin("Lp' bound by log-convexity").holds
