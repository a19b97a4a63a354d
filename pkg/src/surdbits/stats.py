"""Digit-frequency functionals over exact prefixes.

f_n is the fraction of 1s among the first n fractional digits, kept as an
exact Fraction throughout. Nothing here estimates a limit: subsequence
behaviour is summarised by the attained sup/inf over a recorded k-range,
and callers are expected to surface that caveat.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .construction import ConstructionSet, build_construction
from .exactcore import (
    BitSequence,
    PrecisionError,
    VerificationError,
    complement,
    isqrt,
    sqrt_bits,
)


def ones_count_prefix(b: BitSequence, n: int) -> int:
    """Number of 1s among fractional digits 1..n."""
    if not 0 <= n <= b.frac_length:
        raise PrecisionError(
            f"prefix of {n} digits requested, {b.frac_length} available"
        )
    return (b.frac_value >> (b.frac_length - n)).bit_count()


def frequency(b: BitSequence, n: int) -> Fraction:
    """f_n: exact fraction of 1s among the first n fractional digits."""
    if n < 1:
        raise ValueError("f_n needs n >= 1")
    return Fraction(ones_count_prefix(b, n), n)


@dataclass(frozen=True)
class FrequencyPoint:
    n: int
    ones: int
    value: Fraction


@dataclass(frozen=True)
class FrequencyCurve:
    points: tuple[FrequencyPoint, ...]


def default_checkpoints(limit: int) -> list[int]:
    """Powers of two from 16 up to limit (just [limit] when limit < 16)."""
    out = [1 << k for k in range(4, limit.bit_length()) if (1 << k) <= limit]
    return out or [limit]


def frequency_curve(b: BitSequence, checkpoints: list[int]) -> FrequencyCurve:
    if not checkpoints:
        raise ValueError("checkpoint list must be non-empty")
    if any(c2 <= c1 for c1, c2 in zip(checkpoints, checkpoints[1:])):
        raise ValueError("checkpoints must be strictly increasing")
    if checkpoints[0] < 1:
        raise ValueError("checkpoints must be positive")
    points = []
    for n in checkpoints:
        ones = ones_count_prefix(b, n)
        points.append(FrequencyPoint(n, ones, Fraction(ones, n)))
    return FrequencyCurve(tuple(points))


@dataclass(frozen=True)
class SubsequenceSpec:
    """Strictly increasing index sequence n_k, k = 0, 1, 2, ...

    kinds: "arithmetic" (start, start+step, ...), "geometric"
    (round(start * ratio^k) with exact Fraction arithmetic, duplicates
    collapsed), "explicit" (given values).
    """

    kind: str
    start: int = 0
    step: int = 0
    ratio: Fraction = Fraction(0)
    values: tuple[int, ...] = ()

    @classmethod
    def arithmetic(cls, start: int, step: int) -> "SubsequenceSpec":
        if start < 1 or step < 1:
            raise ValueError("arithmetic spec needs start >= 1 and step >= 1")
        return cls("arithmetic", start=start, step=step)

    @classmethod
    def geometric(cls, start: int, ratio: Fraction | int | str) -> "SubsequenceSpec":
        ratio = Fraction(ratio)
        if start < 1 or ratio <= 1:
            raise ValueError("geometric spec needs start >= 1 and ratio > 1")
        return cls("geometric", start=start, ratio=ratio)

    @classmethod
    def explicit(cls, values: list[int] | tuple[int, ...]) -> "SubsequenceSpec":
        values = tuple(values)
        if not values or values[0] < 1:
            raise ValueError("explicit spec needs positive indices")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("explicit indices must be strictly increasing")
        return cls("explicit", values=values)

    def generate(self, limit: int) -> list[int]:
        """All indices <= limit, strictly increasing."""
        if self.kind == "arithmetic":
            return list(range(self.start, limit + 1, self.step))
        if self.kind == "geometric":
            out: list[int] = []
            power = Fraction(self.start)
            while True:
                nk = round(power)
                if nk > limit:
                    break
                if not out or nk > out[-1]:
                    out.append(nk)
                power *= self.ratio
            return out
        if self.kind == "explicit":
            return [v for v in self.values if v <= limit]
        raise ValueError(f"unknown subsequence kind {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "arithmetic":
            return f"arithmetic(start={self.start}, step={self.step})"
        if self.kind == "geometric":
            return f"geometric(start={self.start}, ratio={self.ratio})"
        return f"explicit({','.join(map(str, self.values))})"


@dataclass(frozen=True)
class LimsupEstimate:
    """Attained sup/inf of f_{n_k} for k in k_range (inclusive, after
    discarding k < burn_in). Finite data: these bound no limit."""

    sup_observed: Fraction
    inf_observed: Fraction
    k_range: tuple[int, int]
    burn_in: int


def limsup_estimate(
    b: BitSequence, spec: SubsequenceSpec, burn_in: int = 4
) -> LimsupEstimate:
    if burn_in < 0:
        raise ValueError("burn_in must be non-negative")
    indices = spec.generate(b.frac_length)
    if len(indices) < burn_in + 2:
        raise PrecisionError(
            f"spec yields {len(indices)} indices within {b.frac_length} digits; "
            f"need at least burn_in + 2 = {burn_in + 2}"
        )
    values = [frequency(b, nk) for nk in indices[burn_in:]]
    return LimsupEstimate(
        sup_observed=max(values),
        inf_observed=min(values),
        k_range=(burn_in, len(indices) - 1),
        burn_in=burn_in,
    )


def complement_pair_check(b: BitSequence, n: int) -> bool:
    """ones(b, n) + ones(complement(b), n) = n, exactly."""
    total = ones_count_prefix(b, n) + ones_count_prefix(complement(b), n)
    if total != n:
        raise VerificationError(
            f"complement pair counts sum to {total}, expected {n}"
        )
    return True


def sqrt_interval_bits(nu_prefix: BitSequence) -> tuple[BitSequence, int]:
    """Digits of sqrt(x) forced by knowing only floor(x * 2^m).

    The prefix encloses x in [a, a+1] * 2^-m, so sqrt(x) lies between the
    roots of the endpoints; the longest common prefix of those two roots
    (each truncated to m digits) is forced regardless of the unseen tail.
    Zero forced digits is a valid return.
    """
    if nu_prefix.int_width != 0 or nu_prefix.int_value != 0:
        raise ValueError("expected a purely fractional prefix of a value in (0,1)")
    m = nu_prefix.frac_length
    if m < 1:
        raise PrecisionError("empty prefix forces nothing")
    a = nu_prefix.frac_value
    lo = isqrt(a << m)
    hi_arg = (a + 1) << m
    hi = isqrt(hi_arg)
    if hi * hi == hi_arg:
        hi -= 1   # upper endpoint exact: open it to stay below the root
    forced = m - (lo ^ hi).bit_length()
    prefix = BitSequence(0, forced, lo >> (m - forced),
                         origin=f"forced by {nu_prefix.origin or 'prefix'}")
    return prefix, forced


def frequency_from_square(nu_prefix: BitSequence, n: int) -> Fraction:
    """f_n of sqrt(x) recovered from a prefix of x alone.

    Defined only when the prefix forces at least n digits; the caller
    must supply a longer prefix otherwise (about 2n digits of x force a
    hair under n digits of its root).
    """
    forced_seq, count = sqrt_interval_bits(nu_prefix)
    if count < n:
        raise PrecisionError(
            f"prefix forces only {count} root digits, {n} requested; "
            f"supply a longer prefix"
        )
    return frequency(forced_seq, n)


@dataclass(frozen=True)
class RelationRow:
    k: int
    n_k: int
    f_omega1: Fraction
    f_omega2: Fraction
    f_sum: Fraction
    deviation: Fraction
    bound: Fraction
    within_bound: bool
    f_from_nu1: Fraction | None
    f_from_nu2: Fraction | None


@dataclass(frozen=True)
class FrequencyRelationReport:
    s: int
    l: int
    n: int
    burn_in: int
    subsequence: str
    forced_from_nu1: int
    forced_from_nu2: int
    rows: tuple[RelationRow, ...]

    CAVEAT = "finite-n estimates; limit values are not computed"


def frequency_relation_report(
    s: int,
    l: int | None = None,
    n: int = 4096,
    spec: SubsequenceSpec | None = None,
    burn_in: int = 4,
) -> FrequencyRelationReport:
    """Tabulate f_{n_k} for both constructed values, their sum against
    the 3l/n_k envelope around 1, and the root frequencies recoverable
    from the squares alone.
    """
    if spec is None:
        spec = SubsequenceSpec.geometric(16, 2)
    cs = build_construction(s, l, n)
    indices = spec.generate(n)
    if not indices:
        raise PrecisionError("subsequence has no indices within the precision")

    forced1_seq, forced1 = sqrt_interval_bits(cs.nu1)
    forced2_seq, forced2 = sqrt_interval_bits(cs.nu2)

    rows = []
    for k, nk in enumerate(indices):
        f1 = frequency(cs.omega1, nk)
        f2 = frequency(cs.omega2, nk)
        f_sum = f1 + f2
        deviation = abs(f_sum - 1)
        bound = Fraction(3 * cs.l, nk)
        h1 = frequency(forced1_seq, nk) if forced1 >= nk else None
        h2 = frequency(forced2_seq, nk) if forced2 >= nk else None
        rows.append(RelationRow(
            k=k, n_k=nk, f_omega1=f1, f_omega2=f2, f_sum=f_sum,
            deviation=deviation, bound=bound,
            within_bound=deviation <= bound,
            f_from_nu1=h1, f_from_nu2=h2,
        ))
    return FrequencyRelationReport(
        s=cs.s, l=cs.l, n=cs.n, burn_in=burn_in,
        subsequence=spec.describe(),
        forced_from_nu1=forced1, forced_from_nu2=forced2,
        rows=tuple(rows),
    )
