from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surdbits.construction import build_construction
from surdbits.exactcore import (
    BitSequence,
    PrecisionError,
    VerificationError,
    complement,
    isqrt,
    sqrt_bits,
)
from surdbits.stats import (
    SubsequenceSpec,
    complement_pair_check,
    default_checkpoints,
    frequency,
    frequency_curve,
    frequency_from_square,
    frequency_relation_report,
    limsup_estimate,
    ones_count_prefix,
    sqrt_interval_bits,
)

from oracles import NON_SQUARES_TO_50, naive_ones_in_prefix


# --- counting ------------------------------------------------------------------

def test_ones_count_examples():
    b = BitSequence.from_string("0.10110")
    assert [ones_count_prefix(b, n) for n in range(6)] == [0, 1, 1, 2, 3, 3]


def test_ones_count_requires_enough_digits():
    b = BitSequence.from_string("0.101")
    with pytest.raises(PrecisionError):
        ones_count_prefix(b, 4)


def test_ones_count_ignores_integer_digits():
    b = BitSequence.from_string("11.0001")
    assert ones_count_prefix(b, 4) == 1


def test_ones_count_against_string_oracle():
    b = sqrt_bits(2, 2048)
    text = str(b).split(".")[1]
    for n in (1, 2, 100, 511, 1000, 2048):
        assert ones_count_prefix(b, n) == naive_ones_in_prefix(text, n)


@given(st.integers(1, 300), st.integers(0, 300), st.data())
def test_ones_count_chunk_additive(n1, extra, data):
    length = n1 + extra
    value = data.draw(st.integers(0, (1 << length) - 1))
    b = BitSequence(0, length, value)
    total = ones_count_prefix(b, length)
    first = ones_count_prefix(b, n1)
    rest = bin(b.frac_window(n1 + 1, extra)).count("1") if extra else 0
    assert total == first + rest


def test_frequency_examples():
    assert frequency(sqrt_bits(2, 4), 4) == Fraction(1, 2)
    periodic = BitSequence.from_string("0.101010")
    for n in (2, 4, 6):
        assert frequency(periodic, n) == Fraction(1, 2)
    assert frequency(periodic, 1) == 1


# --- curves ----------------------------------------------------------------------

def test_frequency_curve_points():
    b = sqrt_bits(2, 64)
    curve = frequency_curve(b, [4, 16, 64])
    assert [p.n for p in curve.points] == [4, 16, 64]
    assert curve.points[0].ones == 2
    assert curve.points[0].value == Fraction(1, 2)
    assert curve.points[1].value == Fraction(6, 16)


def test_frequency_curve_validates_checkpoints():
    b = sqrt_bits(2, 16)
    with pytest.raises(ValueError):
        frequency_curve(b, [])
    with pytest.raises(ValueError):
        frequency_curve(b, [4, 4])
    with pytest.raises(ValueError):
        frequency_curve(b, [8, 4])
    with pytest.raises(ValueError):
        frequency_curve(b, [0, 4])
    with pytest.raises(PrecisionError):
        frequency_curve(b, [4, 32])


def test_default_checkpoints():
    assert default_checkpoints(4096) == [16, 32, 64, 128, 256, 512, 1024, 2048, 4096]
    assert default_checkpoints(100) == [16, 32, 64]
    assert default_checkpoints(10) == [10]


# --- complement identities ---------------------------------------------------------

def test_complement_frequency_identity():
    b = sqrt_bits(7, 256)
    cb = complement(b)
    for n in (1, 17, 256):
        assert frequency(b, n) + frequency(cb, n) == 1


def test_complement_pair_check_and_precondition():
    b = sqrt_bits(2, 64)
    assert complement_pair_check(b, 64)
    with pytest.raises(PrecisionError):
        complement_pair_check(b, 65)


def test_omega2_window_frequency_equals_root_frequency():
    # the shifted pipeline means counting 1s in omega2 positions
    # l+1..l+n is the same as counting them in root positions 1..n
    cs = build_construction(5, None, 256)
    root = sqrt_bits(5, 256)
    l = cs.l
    for n in (1, 50, 200):
        window = cs.omega2.frac_window(l + 1, n)
        assert window == root.frac_window(1, n)
        assert Fraction(window.bit_count(), n) == frequency(root, n)


def test_omega1_aligned_complement_counts():
    # omega1 is the digitwise complement of sqrt(s)/2^(2l), so the two
    # one-counts tile every prefix exactly
    cs = build_construction(2, 2, 128)
    shifted = BitSequence(0, 128, isqrt(2 << (2 * (128 - 4))))
    assert cs.omega1.value == shifted.value ^ ((1 << 128) - 1)
    for n in (1, 5, 64, 128):
        assert ones_count_prefix(cs.omega1, n) + ones_count_prefix(shifted, n) == n


# --- subsequences -------------------------------------------------------------------

def test_arithmetic_subsequence():
    spec = SubsequenceSpec.arithmetic(4, 4)
    assert spec.generate(20) == [4, 8, 12, 16, 20]
    assert spec.describe() == "arithmetic(start=4, step=4)"


def test_geometric_subsequence_power_of_two():
    spec = SubsequenceSpec.geometric(16, 2)
    assert spec.generate(256) == [16, 32, 64, 128, 256]


def test_geometric_subsequence_fractional_ratio():
    spec = SubsequenceSpec.geometric(16, Fraction(3, 2))
    # round-half-to-even at 121.5; exact fractions everywhere else
    assert spec.generate(1000) == [16, 24, 36, 54, 81, 122, 182, 273, 410, 615, 923]


def test_explicit_subsequence():
    spec = SubsequenceSpec.explicit([1, 4, 8, 100])
    assert spec.generate(50) == [1, 4, 8]
    with pytest.raises(ValueError):
        SubsequenceSpec.explicit([4, 4])
    with pytest.raises(ValueError):
        SubsequenceSpec.explicit([])


def test_subsequence_validation():
    with pytest.raises(ValueError):
        SubsequenceSpec.geometric(16, 1)
    with pytest.raises(ValueError):
        SubsequenceSpec.arithmetic(0, 4)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 50), st.sampled_from(["3/2", "2", "5/3", "7/4"]), st.integers(100, 5000))
def test_geometric_strictly_increasing(start, ratio, limit):
    out = SubsequenceSpec.geometric(start, Fraction(ratio)).generate(limit)
    assert all(b > a for a, b in zip(out, out[1:]))
    assert all(v <= limit for v in out)


# --- limsup surrogate ---------------------------------------------------------------

def test_limsup_periodic_collapses():
    b = BitSequence.from_string("0." + "1100" * 8)
    est = limsup_estimate(b, SubsequenceSpec.arithmetic(4, 4), burn_in=0)
    assert est.sup_observed == est.inf_observed == Fraction(1, 2)
    assert est.k_range == (0, 7)


def test_limsup_attained_extremes():
    b = BitSequence.from_string("0.11001100")
    est = limsup_estimate(b, SubsequenceSpec.explicit([1, 4, 8]), burn_in=0)
    assert est.sup_observed == 1
    assert est.inf_observed == Fraction(1, 2)


def test_limsup_burn_in_discards_prefix():
    b = BitSequence.from_string("0.11001100")
    est = limsup_estimate(b, SubsequenceSpec.explicit([1, 4, 8]), burn_in=1)
    assert est.sup_observed == Fraction(1, 2)
    assert est.k_range == (1, 2)


def test_limsup_requires_enough_indices():
    b = sqrt_bits(2, 64)
    with pytest.raises(PrecisionError):
        limsup_estimate(b, SubsequenceSpec.geometric(16, 2), burn_in=4)


def test_limsup_interval_widens_with_more_data():
    spec = SubsequenceSpec.geometric(16, 2)
    small = limsup_estimate(sqrt_bits(2, 1 << 12), spec, burn_in=4)
    large = limsup_estimate(sqrt_bits(2, 1 << 16), spec, burn_in=4)
    assert large.sup_observed >= small.sup_observed
    assert large.inf_observed <= small.inf_observed
    assert large.k_range[1] > small.k_range[1]


def test_limsup_million_digit_spread():
    # frozen truth: over geometric checkpoints with burn-in 4 the spread
    # is 13/512, set by n=256 and n=1024 and permanent from then on;
    # only from burn-in 8 does the observed spread drop inside 1%
    b = sqrt_bits(2, 10 ** 6)
    spec = SubsequenceSpec.geometric(16, 2)
    early = limsup_estimate(b, spec, burn_in=4)
    assert early.k_range == (4, 15)
    assert early.sup_observed == Fraction(33, 64)
    assert early.inf_observed == Fraction(251, 512)
    assert early.sup_observed - early.inf_observed == Fraction(13, 512)
    late = limsup_estimate(b, spec, burn_in=8)
    assert late.sup_observed - late.inf_observed < Fraction(1, 100)


# --- forced root digits ----------------------------------------------------------------

def test_sqrt_interval_examples():
    prefix, forced = sqrt_interval_bits(BitSequence.from_string("0.01"))
    assert (str(prefix), forced) == ("0.10", 2)
    prefix, forced = sqrt_interval_bits(BitSequence.from_string("0.10010000"))
    assert (str(prefix), forced) == ("0.11000000", 8)   # sqrt(9/16) = 3/4
    prefix, forced = sqrt_interval_bits(BitSequence.from_string("0.1"))
    assert (str(prefix), forced) == ("0.1", 1)
    # nothing is forced by x in [0, 1/2): the root straddles 0.1
    prefix, forced = sqrt_interval_bits(BitSequence.from_string("0.0"))
    assert forced == 0


def test_sqrt_interval_rejects_integer_part():
    with pytest.raises(ValueError):
        sqrt_interval_bits(BitSequence.from_string("1.01"))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 200), st.data())
def test_sqrt_interval_forced_digits_are_true_digits(m, data):
    full = data.draw(st.integers(1, (1 << (2 * m)) - 1))
    # truncate a 2m-digit value to m digits; forced digits of the root
    # must agree with the root of the better-known value
    truncated = BitSequence(0, m, full >> m)
    prefix, forced = sqrt_interval_bits(truncated)
    true_root = isqrt(full << (2 * m))          # root of full at 2m digits
    assert forced <= 2 * m
    if forced:
        assert true_root >> (2 * m - forced) == prefix.frac_value


def test_sqrt_interval_forces_nothing_when_straddling():
    # x in [1/4, 1/2) has root in [1/2, 0.10111...): first digit forced,
    # and widening the interval to [0, 1) forces none
    prefix, forced = sqrt_interval_bits(BitSequence.from_string("0.01"))
    assert forced >= 1


def test_frequency_from_square_matches_direct_pipeline():
    cs = build_construction(2, 2, 64)
    for n in (1, 10, 20, 40):
        assert frequency_from_square(cs.nu2, n) == frequency(cs.omega2, n)
        assert frequency_from_square(cs.nu1, n) == frequency(cs.omega1, n)


def test_frequency_from_square_needs_longer_prefix():
    cs = build_construction(2, 2, 64)
    with pytest.raises(PrecisionError):
        frequency_from_square(cs.nu2, 60)


def test_frequency_from_square_dyadic_square():
    # x = 1/4 exactly: the interval [1/4, 1/4 + 2^-m] forces a long run
    # of the digits of 1/2
    prefix = BitSequence(0, 32, 1 << 30)
    assert frequency_from_square(prefix, 16) == Fraction(1, 16)


# --- relation report ---------------------------------------------------------------------

def test_relation_report_rows():
    rep = frequency_relation_report(2, 2, 512)
    assert rep.subsequence == "geometric(start=16, ratio=2)"
    assert [row.n_k for row in rep.rows] == [16, 32, 64, 128, 256, 512]
    for row in rep.rows:
        assert row.f_sum == row.f_omega1 + row.f_omega2
        assert row.deviation == abs(row.f_sum - 1)
        assert row.bound == Fraction(6, row.n_k)
        # forced-root columns reproduce the direct pipelines wherever defined
        if row.f_from_nu1 is not None:
            assert row.f_from_nu1 == row.f_omega1
        if row.f_from_nu2 is not None:
            assert row.f_from_nu2 == row.f_omega2
    assert rep.forced_from_nu1 == 511
    assert rep.forced_from_nu2 == 509


def test_relation_sum_bound_across_range():
    # |f_n(omega1) + f_n(omega2) - 1| <= 3l/n for every n >= 2l: the
    # discrepancy is one l-digit window slip plus the root's integer bits
    for s in (2, 3, 10, 17, 20):
        cs = build_construction(s, None, 512)
        l = cs.l
        for n in range(2 * l, 513, 7):
            dev = abs(frequency(cs.omega1, n) + frequency(cs.omega2, n) - 1)
            assert dev <= Fraction(3 * l, n), (s, n)


def test_relation_report_rejects_squares():
    from surdbits.exactcore import PerfectSquareError
    with pytest.raises(PerfectSquareError):
        frequency_relation_report(16, None, 256)
