import math

import pytest

from gwel.errors import ParameterError, ResourceGuardError
from gwel.growth import (
    abelian_zero_sphere_counts,
    ball_counts,
    critical_exponent,
    grigorchuk_delta,
    half_growth_bound,
    kernel_sphere_counts,
    sphere_counts,
)
from gwel.quotients import (
    AbelianRep,
    TrivialRep,
    coset_enumerate,
    from_point_permutations,
    in_kernel,
)
from gwel.words import parse_word, sphere

KLEIN = ("aa", "bb", "abab")
S3 = ("aa", "bb", "ababab")


def enumerate_quotient(texts, rank=2):
    return coset_enumerate(rank, [parse_word(t, rank) for t in texts])


def test_ball_and_sphere_series():
    assert ball_counts(2, 3).counts == (1, 5, 17, 53)
    assert sphere_counts(2, 4).counts == (1, 4, 12, 36, 108)
    assert ball_counts(3, 2).counts == (1, 7, 37)
    rows = ball_counts(2, 3).rows()
    assert rows[0] == (0, 1, None)  # log 1 / 0 is reported as missing
    assert rows[3][2] == pytest.approx(math.log(53) / 3)


def test_kernel_counts_transfer_equals_brute():
    for texts in (KLEIN, S3):
        rep = enumerate_quotient(texts)
        both = kernel_sphere_counts(2, rep, 10, method="both")
        assert both.counts == kernel_sphere_counts(2, rep, 10).counts
    rep = from_point_permutations(2, {1: (1, 0, 2), 2: (0, 2, 1)})
    assert (
        kernel_sphere_counts(2, rep, 9, method="transfer").counts
        == kernel_sphere_counts(2, rep, 9, method="brute").counts
    )


def test_kernel_counts_against_sphere_scan():
    rep = enumerate_quotient(KLEIN)
    counts = kernel_sphere_counts(2, rep, 7).counts
    for n in range(8):
        assert counts[n] == sum(1 for w in sphere(2, n) if in_kernel(w, rep))


def test_trivial_quotient_kernel_is_everything():
    rep = TrivialRep(2)
    assert kernel_sphere_counts(2, rep, 5).counts == (1, 4, 12, 36, 108, 324)


def test_abelian_zero_sphere_counts_against_scan():
    ab = AbelianRep(2)
    counts = abelian_zero_sphere_counts(2, 8)
    assert counts[0] == 1
    for n in range(9):
        assert counts[n] == sum(1 for w in sphere(2, n) if in_kernel(w, ab))
    # commutator words first appear at length 4: the 8 rotations and
    # inverses of abAB
    assert counts[1] == counts[2] == counts[3] == 0
    assert counts[4] == 8


def test_abelian_budget_truncates():
    counts = abelian_zero_sphere_counts(2, 40, work_budget=10**4)
    assert len(counts) < 41
    full = abelian_zero_sphere_counts(2, len(counts) - 1)
    assert tuple(counts) == tuple(full)


def test_critical_exponent_finite_quotients():
    # every finite-index kernel has full growth rate log(2d-1)
    for texts in (KLEIN, S3):
        rep = enumerate_quotient(texts)
        assert critical_exponent(2, rep) == pytest.approx(math.log(3), abs=1e-9)
    assert critical_exponent(2, TrivialRep(2)) == pytest.approx(math.log(3), abs=1e-9)
    assert critical_exponent(3, TrivialRep(3)) == pytest.approx(math.log(5), abs=1e-9)


def test_critical_exponent_at_least_half_growth():
    for texts in (KLEIN, S3, ("aaaa", "aaBB", "Baba")):
        rep = enumerate_quotient(texts)
        assert critical_exponent(2, rep) >= half_growth_bound(2) - 1e-9


def test_grigorchuk_endpoints():
    assert grigorchuk_delta(1.0, 2) == pytest.approx(math.log(3), abs=1e-12)
    assert grigorchuk_delta(math.sqrt(3) / 2, 2) == pytest.approx(
        0.5 * math.log(3), abs=1e-12
    )
    assert grigorchuk_delta(1.0, 3) == pytest.approx(math.log(5), abs=1e-12)
    # monotone in rho on the valid range
    lo = grigorchuk_delta(math.sqrt(3) / 2, 2)
    mid = grigorchuk_delta(0.95, 2)
    hi = grigorchuk_delta(1.0, 2)
    assert lo < mid < hi
    with pytest.raises(ParameterError):
        grigorchuk_delta(0.5, 2)  # below the Kesten floor
    with pytest.raises(ParameterError):
        grigorchuk_delta(1.5, 2)


def test_brute_guard_trips():
    rep = enumerate_quotient(KLEIN)
    with pytest.raises(ResourceGuardError):
        kernel_sphere_counts(2, rep, 60, method="brute")
