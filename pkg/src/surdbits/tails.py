"""Structural digit-tail verification for constructed prefixes.

All comparisons are whole-window integer equalities, never digitwise
loops, so a 4096-digit verification is a handful of shifts. The final
digit of each prefix is excluded from every matched window (guard digit):
the values themselves are exact, but windows are kept to positions that
any downstream truncation-based consumer could also certify.
"""

from __future__ import annotations

from dataclasses import dataclass

from .construction import ConstructionSet
from .exactcore import (
    BitSequence,
    PrecisionError,
    VerificationError,
    isqrt,
    sqrt_bits,
)

GUARD_DIGITS = 1


@dataclass(frozen=True)
class TailMatch:
    """A verified relation between fractional tails of two sequences.

    ``offset_a`` / ``offset_b`` are the 1-based fractional positions
    where the matched tails begin; ``alignment_index`` is the position in
    the second sequence (the root-digit index when B is a sqrt digit
    string), and ``relation`` is "equal" or "complement".
    """

    offset_a: int
    offset_b: int
    relation: str
    verified_length: int
    alignment_index: int | None = None


@dataclass(frozen=True)
class AlignmentReport:
    s: int
    l: int
    shift: int
    equal_from: int
    nu1_match: TailMatch
    nu2_match: TailMatch
    common_position: int
    common_r: int


def find_tail_match(
    a: BitSequence,
    b: BitSequence,
    relation: str = "equal",
    max_offset: int = 64,
    min_length: int = 8,
) -> TailMatch | None:
    """Search for the offset pair with minimal offset_a + offset_b (ties:
    smaller offset_a) at which the tail of ``a`` equals, or complements,
    the tail of ``b`` over their full shared overlap.

    Only pairs whose overlap reaches ``min_length`` are considered.
    Returns None when no pair up to ``max_offset`` verifies.
    """
    if relation not in ("equal", "complement"):
        raise ValueError(f"unknown relation {relation!r}")
    if max_offset < 1 or min_length < 1:
        raise ValueError("max_offset and min_length must be positive")
    for total in range(2, 2 * max_offset + 1):
        lo = max(1, total - max_offset)
        hi = min(max_offset, total - 1)
        for oa in range(lo, hi + 1):
            ob = total - oa
            overlap = min(a.frac_length - oa, b.frac_length - ob) + 1
            if overlap < min_length:
                continue
            wa = a.frac_window(oa, overlap)
            wb = b.frac_window(ob, overlap)
            if relation == "complement":
                wb ^= (1 << overlap) - 1
            if wa == wb:
                return TailMatch(oa, ob, relation, overlap, alignment_index=ob)
    return None


def _require_verification_precision(cs: ConstructionSet) -> None:
    if cs.n < 8 * cs.l:
        raise PrecisionError(
            f"tail verification needs n >= 8l = {8 * cs.l}, got {cs.n}"
        )


def _mismatch_position(wa: int, wb: int, length: int, start: int) -> int:
    return start + (length - (wa ^ wb).bit_length())


def verify_nu_tail_equality(cs: ConstructionSet, min_length: int = 1) -> TailMatch:
    """Certify that nu1 and nu2 carry identical digits from position k+1
    through the guard boundary, where k is the number of fractional bits
    of their exact rational difference, and that those digits are the
    complement of the sqrt(s) digits shifted by 2l - 1.

    The begin position is derived, not searched: past position k the
    rational difference contributes nothing, so the tails must agree.
    """
    _require_verification_precision(cs)
    g = cs.n - GUARD_DIGITS
    term1, term2 = cs.rational_terms
    diff = term1 - term2
    begin = diff.log_denominator + 1
    length = g - begin + 1
    if length < min_length:
        raise PrecisionError(
            f"usable equal-tail window is {length} digits, below {min_length}"
        )

    w1 = cs.nu1.frac_window(begin, length)
    w2 = cs.nu2.frac_window(begin, length)
    if w1 != w2:
        raise VerificationError(
            "nu1 and nu2 disagree inside the derived equal tail",
            position=_mismatch_position(w1, w2, length, begin),
        )
    if begin > 1 and cs.nu1.digit(begin - 1) == cs.nu2.digit(begin - 1):
        # the rational difference has an odd numerator at scale k, so the
        # digit just before the tail must differ
        raise VerificationError(
            f"nu tails already agree at position {begin - 1}; "
            f"the derived begin position is not minimal",
            position=begin - 1,
        )

    shift = 2 * cs.l - 1
    r_start = begin - shift
    if r_start < 1:
        raise VerificationError(
            f"derived root alignment index {r_start} is not positive"
        )
    root = sqrt_bits(cs.s, r_start + length - 1)
    expected = root.frac_window(r_start, length) ^ ((1 << length) - 1)
    if w2 != expected:
        raise VerificationError(
            "nu tail is not the complement of the aligned root digits",
            position=_mismatch_position(w2, expected, length, begin),
        )
    return TailMatch(begin, begin, "equal", length, alignment_index=r_start)


def verify_omega1_complement(cs: ConstructionSet) -> TailMatch:
    """Certify omega1 digit j = 1 - (digit j of sqrt(s)/2^(2l)) at every
    fractional position up to the guard boundary.

    As a TailMatch against the root digit string proper the relation
    reads: complement, offsets (2l + 1, 1). Positions 1..2l (which face
    the shifted-in integer digits of sqrt(s)) are verified too.
    """
    _require_verification_precision(cs)
    g = cs.n - GUARD_DIGITS
    c = 2 * cs.l
    om = cs.omega1.frac_window(1, g)
    shifted = isqrt(cs.s << (2 * (g - c)))   # floor(sqrt(s) * 2^(g - c))
    expected = shifted ^ ((1 << g) - 1)
    if om != expected:
        raise VerificationError(
            "omega1 is not the digitwise complement of the shifted root",
            position=_mismatch_position(om, expected, g, 1),
        )
    return TailMatch(c + 1, 1, "complement", g - c, alignment_index=1)


def verify_omega2_shift(cs: ConstructionSet) -> TailMatch:
    """Certify omega2 digit l+j = root digit j for every j up to the
    guard boundary, and that the l head digits spell isqrt(s) - 1.

    Equal-relation TailMatch against the root digits: offsets (l + 1, 1).
    """
    _require_verification_precision(cs)
    g = cs.n - GUARD_DIGITS
    l = cs.l
    length = g - l
    root = sqrt_bits(cs.s, length)
    tail = cs.omega2.frac_window(l + 1, length)
    if tail != root.frac_value:
        raise VerificationError(
            "omega2 tail does not reproduce the root digits",
            position=_mismatch_position(tail, root.frac_value, length, l + 1),
        )
    head = cs.omega2.frac_window(1, l)
    if head != isqrt(cs.s) - 1:
        raise VerificationError(
            f"omega2 head digits spell {head:0{l}b}, expected isqrt(s) - 1",
            position=1,
        )
    return TailMatch(l + 1, 1, "equal", length, alignment_index=1)


def alignment_report(cs: ConstructionSet) -> AlignmentReport:
    """Locate both nu tails against the root digits independently (generic
    minimal-offset search, not the derived positions), check that they
    land on one common shift, and report the single root index r from
    which both complement windows are simultaneously active.
    """
    _require_verification_precision(cs)
    g = cs.n - GUARD_DIGITS
    equal = verify_nu_tail_equality(cs)

    max_offset = 4 * cs.l + 3
    min_length = g - max_offset   # matches must reach the guard boundary
    if min_length < 1:
        raise PrecisionError("precision leaves no usable alignment window")
    root = sqrt_bits(cs.s, g)
    m1 = find_tail_match(cs.nu1, root, "complement", max_offset, min_length)
    m2 = find_tail_match(cs.nu2, root, "complement", max_offset, min_length)
    if m1 is None or m2 is None:
        raise VerificationError(
            "misalignment: a nu tail has no complement window against the "
            "root digits within the expected offset range"
        )
    shift1 = m1.offset_a - m1.offset_b
    shift2 = m2.offset_a - m2.offset_b
    if shift1 != shift2:
        raise VerificationError(
            f"misalignment: nu1 sits at shift {shift1} but nu2 at {shift2}; "
            f"the two squares must share one shift"
        )
    common_position = max(m1.offset_a, m2.offset_a, equal.offset_a)
    return AlignmentReport(
        s=cs.s,
        l=cs.l,
        shift=shift1,
        equal_from=equal.offset_a,
        nu1_match=m1,
        nu2_match=m2,
        common_position=common_position,
        common_r=common_position - shift1,
    )
