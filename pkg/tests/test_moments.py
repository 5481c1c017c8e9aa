"""Exact moment recurrences for both destruction variants.

Claims covered:
    - hand-computed small cases (one-sided ordered alpha=0 mean 11/4 with
      the default size-1 cost; two-sided Cayley alpha=1 mean 8 at n=3)
    - exhaustive brute-force equivalence on all trees x cut sequences
    - the alpha=0 two-sided degeneracy: cost is exactly n-1 under the
      edges-only boundary and exactly 2n-1 under the default; the two
      conventions differ by the deterministic shift n * t1
    - folded (symmetry-exploiting) inner sums equal the direct ones
    - float tables track rational tables to ~1e-12
    - Jensen, toll monotonicity, one-sided <= two-sided means
    - shifted moments by binomial expansion, exact in rational mode
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from treecut.bruteforce import family_moments
from treecut.counts import compute_counts
from treecut.errors import ConfigError, OutOfRange
from treecut.family import binary, cayley, ordered
from treecut.moments import (
    ONE_SIDED,
    TWO_SIDED,
    TollSpec,
    one_sided_moments,
    shifted_moments,
    two_sided_moments,
)

FAMILIES = [cayley(), binary(), ordered()]


@pytest.fixture(scope="module")
def tables():
    return {spec.kind: compute_counts(spec, 200, exact_cutoff=200) for spec in FAMILIES}


def test_one_sided_hand_values(tables):
    table = one_sided_moments(tables["C"], TollSpec(alpha=0), 5, 2, mode="rational")
    # Y_1 = 1, Y_2 = 2, mu_3 = 1 + (1/4)*1 + (3/4)*2
    assert table.moment(2, 1) == 2
    assert table.moment(3, 1) == Fraction(11, 4)
    cay = one_sided_moments(tables["A"], TollSpec(alpha=0), 3, 2, mode="rational")
    assert cay.moment(2, 2) == 4  # Y_2 == 2 deterministically


def test_two_sided_hand_values(tables):
    table = two_sided_moments(tables["A"], TollSpec(alpha=1), 4, 2, mode="rational")
    assert table.moment(2, 1) == 4  # X_2 = 2 + X_1 + X_1*
    assert table.moment(3, 1) == 8


def test_zeroth_moment_and_boundary(tables):
    for variant_maker in (one_sided_moments, two_sided_moments):
        table = variant_maker(tables["B"], TollSpec(alpha=2), 30, 3, mode="rational")
        assert all(table.moment(n, 0) == 1 for n in range(1, 31))
        assert table.moment(1, 3) == 1  # t_1^s


@pytest.mark.parametrize("alpha", [0, 1, 2])
@pytest.mark.parametrize("size_one", [None, 0])
def test_bruteforce_equivalence_small(tables, alpha, size_one):
    toll = TollSpec(alpha=alpha, size_one_cost=size_one)
    for spec in (ordered(), cayley()):
        counts = tables[spec.kind]
        one = one_sided_moments(counts, toll, 4, 2, mode="rational")
        two = two_sided_moments(counts, toll, 4, 2, mode="rational")
        for n in range(1, 5):
            oracle_one = family_moments(spec, n, toll, 2, ONE_SIDED)
            oracle_two = family_moments(spec, n, toll, 2, TWO_SIDED)
            for s in range(3):
                assert one.moment(n, s) == oracle_one[s]
                assert two.moment(n, s) == oracle_two[s]


@pytest.mark.parametrize("spec", FAMILIES, ids=lambda s: s.label())
def test_alpha0_two_sided_degeneracy(spec, tables):
    counts = tables[spec.kind]
    edges_only = two_sided_moments(counts, TollSpec(alpha=0, size_one_cost=0), 120, 2, mode="rational")
    default = two_sided_moments(counts, TollSpec(alpha=0), 120, 2, mode="rational")
    for n in range(1, 121):
        assert edges_only.moment(n, 1) == n - 1
        assert edges_only.moment(n, 2) == (n - 1) ** 2  # zero variance
        assert default.moment(n, 1) == 2 * n - 1  # extra n * t1
    # the boundary charge is a deterministic shift: central moments agree
    central_edges = shifted_moments(edges_only, lambda n: n - 1, 2)
    central_default = shifted_moments(default, lambda n: 2 * n - 1, 2)
    assert central_edges == central_default == [0] * 120


def test_one_sided_boundary_shift(tables):
    # one-sided costs differ between the conventions by exactly t1
    counts = tables["C"]
    a = one_sided_moments(counts, TollSpec(alpha=1), 50, 1, mode="rational")
    b = one_sided_moments(counts, TollSpec(alpha=1, size_one_cost=0), 50, 1, mode="rational")
    assert all(a.moment(n, 1) - b.moment(n, 1) == 1 for n in range(1, 51))


@pytest.mark.parametrize("variant_maker", [one_sided_moments, two_sided_moments])
def test_float_matches_rational(tables, variant_maker):
    counts = tables["C"]
    toll = TollSpec(alpha=1)
    exact = variant_maker(counts, toll, 200, 3, mode="rational")
    floats = variant_maker(counts, toll, 200, 3, mode="float")
    worst = max(
        abs(floats.moment(n, s) / float(exact.moment(n, s)) - 1)
        for n in range(1, 201)
        for s in range(4)
    )
    assert worst < 1e-12


def test_paired_equals_direct(tables):
    counts = tables["A"]
    toll = TollSpec(alpha=2)
    paired = two_sided_moments(counts, toll, 60, 3, mode="rational", method="paired")
    direct = two_sided_moments(counts, toll, 60, 3, mode="rational", method="direct")
    assert all(
        paired.moment(n, s) == direct.moment(n, s) for n in range(1, 61) for s in range(4)
    )
    pf = two_sided_moments(counts, toll, 150, 3, mode="float", method="paired")
    df = two_sided_moments(counts, toll, 150, 3, mode="float", method="direct")
    assert np.allclose(pf.row(3)[1:], df.row(3)[1:], rtol=1e-12)


def test_jensen_inequality(tables):
    for spec in FAMILIES:
        for alpha in (0.0, 0.5, 1.0, 2.0):
            for maker in (one_sided_moments, two_sided_moments):
                table = maker(tables[spec.kind], TollSpec(alpha=alpha), 200, 2, mode="float")
                mu1 = table.row(1)[1:]
                mu2 = table.row(2)[1:]
                assert np.all(mu2 >= mu1**2 * (1 - 1e-12))


def test_mean_monotone_in_alpha(tables):
    grid = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0]
    for maker in (one_sided_moments, two_sided_moments):
        for n in (10, 50, 200):
            values = [
                maker(tables["C"], TollSpec(alpha=a), n, 1, mode="float").moment(n, 1)
                for a in grid
            ]
            assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))


def test_two_sided_dominates_one_sided(tables):
    for spec in FAMILIES:
        for alpha in (0.0, 1.0):
            toll = TollSpec(alpha=alpha)
            one = one_sided_moments(tables[spec.kind], toll, 150, 1, mode="float")
            two = two_sided_moments(tables[spec.kind], toll, 150, 1, mode="float")
            assert all(two.moment(n, 1) >= one.moment(n, 1) - 1e-9 for n in range(1, 151))


def test_shifted_moments_identities(tables):
    table = one_sided_moments(tables["C"], TollSpec(alpha=0), 10, 2, mode="rational")
    raw = shifted_moments(table, lambda n: 0, 2)
    assert raw == [table.moment(n, 2) for n in range(1, 11)]
    variance = shifted_moments(table, lambda n: table.moment(n, 1), 2)
    assert variance[2] == table.moment(3, 2) - Fraction(11, 4) ** 2
    assert all(v >= 0 for v in variance)
    with pytest.raises(OutOfRange):
        shifted_moments(table, lambda n: 0, 3)


def test_toll_spec_validation():
    with pytest.raises(ConfigError):
        TollSpec(alpha=-1)
    with pytest.raises(ConfigError):
        TollSpec(override=())
    with pytest.raises(ConfigError):
        TollSpec(override=(1.0, math.inf))
    toll = TollSpec(override=(1, 4, 9), size_one_cost=None)
    assert toll.t1 == 1 and toll.exact_value(3) == 9 and toll.is_rational
    with pytest.raises(OutOfRange):
        toll.exact_value(4)
    assert not TollSpec(alpha=0.5).is_rational
    assert TollSpec(alpha=2.0).is_rational
    values = TollSpec(alpha=2).float_values(4)
    assert list(values[1:]) == [1.0, 4.0, 9.0, 16.0]


def test_rational_mode_requires_rational_toll(tables):
    with pytest.raises(ConfigError):
        one_sided_moments(tables["C"], TollSpec(alpha=0.5), 10, 1, mode="rational")
    short = compute_counts(ordered(), 50, exact_cutoff=20)
    with pytest.raises(ConfigError):
        one_sided_moments(short, TollSpec(alpha=1), 50, 1, mode="rational")
    # auto quietly picks float in both cases
    assert one_sided_moments(tables["C"], TollSpec(alpha=0.5), 10, 1).mode == "float"
    assert one_sided_moments(short, TollSpec(alpha=1), 50, 1).mode == "float"


def test_override_table_drives_the_dp(tables):
    # constant toll via override == alpha 0
    toll = TollSpec(override=tuple([1] * 30))
    a = one_sided_moments(tables["C"], toll, 30, 2, mode="rational")
    b = one_sided_moments(tables["C"], TollSpec(alpha=0), 30, 2, mode="rational")
    assert all(a.moment(n, s) == b.moment(n, s) for n in range(1, 31) for s in range(3))


def test_extended_precision_mode(tables):
    toll = TollSpec(alpha=1)
    base = two_sided_moments(tables["C"], toll, 120, 2, mode="float")
    wide = two_sided_moments(tables["C"], toll, 120, 2, mode="float", dtype=np.longdouble)
    assert wide.rows.dtype == np.longdouble
    assert np.allclose(wide.row(2)[1:], base.row(2)[1:], rtol=1e-10)
