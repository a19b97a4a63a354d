"""Exact dyadic digit extraction built on integer square roots.

A digit string is stored as the integer floor(x * 2^n) together with its
widths, so every digit held is exact: extraction truncates, it never
rounds. The subtraction pipelines exploit that sqrt(s) is irrational for
non-square s, which pins ceil(y) = floor(y) + 1 and makes floor(R - y)
computable from a single integer square root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

try:
    import gmpy2 as _gmpy2

    def _isqrt_backend(m: int) -> int:
        return int(_gmpy2.isqrt(m))

except ImportError:
    _isqrt_backend = math.isqrt


class PerfectSquareError(ValueError):
    """Raised when an operation requires a non-square s."""


class PrecisionError(ValueError):
    """Raised when a digit budget is too small for an exact answer."""


class VerificationError(RuntimeError):
    """An exact structural check failed; signals an arithmetic bug.

    ``position`` carries the first offending 1-based fractional index
    when one is known.
    """

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


def isqrt(m: int) -> int:
    """Floor of the square root of a non-negative integer."""
    if m < 0:
        raise ValueError("isqrt requires a non-negative argument")
    return _isqrt_backend(m)


def is_perfect_square(s: int) -> bool:
    if s < 0:
        return False
    r = isqrt(s)
    return r * r == s


def _require_nonsquare(s: int) -> None:
    if s < 2:
        # 0 and 1 are squares; negatives have no real root
        if s < 0:
            raise ValueError(f"s must be a natural number, got {s}")
        raise PerfectSquareError(
            f"{s} is a perfect square; its square root is rational and the "
            f"digit pipelines require an irrational root"
        )
    if is_perfect_square(s):
        raise PerfectSquareError(
            f"{s} is a perfect square; its square root is rational and the "
            f"digit pipelines require an irrational root"
        )


@dataclass(frozen=True)
class BitSequence:
    """An exact binary digit string: ``int_width`` integer digits followed
    by ``length - int_width`` fractional digits, packed MSB-first into
    ``value``.

    Fractional digits are addressed 1-based: digit j has weight 2^-j.
    ``origin`` is provenance metadata and is excluded from equality.
    """

    int_width: int
    length: int
    value: int
    origin: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.int_width < 0 or self.length < self.int_width:
            raise ValueError("widths must satisfy 0 <= int_width <= length")
        if not 0 <= self.value < (1 << self.length):
            raise ValueError("value does not fit in the declared length")

    @property
    def frac_length(self) -> int:
        return self.length - self.int_width

    @property
    def int_value(self) -> int:
        return self.value >> self.frac_length

    @property
    def frac_value(self) -> int:
        """All fractional digits as one integer (MSB = digit 1)."""
        return self.value & ((1 << self.frac_length) - 1)

    def digit(self, j: int) -> int:
        """Fractional digit at 1-based position j."""
        if not 1 <= j <= self.frac_length:
            raise IndexError(f"fractional position {j} outside 1..{self.frac_length}")
        return (self.value >> (self.frac_length - j)) & 1

    def frac_window(self, start: int, count: int) -> int:
        """Fractional digits start..start+count-1 as one integer."""
        if count < 0 or start < 1 or start + count - 1 > self.frac_length:
            raise IndexError(
                f"window [{start}, {start + count - 1}] outside 1..{self.frac_length}"
            )
        shift = self.frac_length - (start + count - 1)
        return (self.value >> shift) & ((1 << count) - 1)

    def ones_total(self) -> int:
        return self.value.bit_count()

    def as_fraction(self) -> Fraction:
        return Fraction(self.value, 1 << self.frac_length)

    def render(self) -> str:
        ipart = format(self.int_value, "b").zfill(self.int_width) if self.int_width else "0"
        if self.frac_length == 0:
            return ipart
        return ipart + "." + format(self.frac_value, "b").zfill(self.frac_length)

    __str__ = render

    @classmethod
    def from_string(cls, text: str, origin: str = "") -> "BitSequence":
        ipart, dot, fpart = text.partition(".")
        if not dot:
            ipart, fpart = text, ""
        digits = ipart + fpart
        if not digits or any(ch not in "01" for ch in digits):
            raise ValueError(f"not a binary digit string: {text!r}")
        int_width = 0 if ipart in ("", "0") else len(ipart)
        value = int(digits, 2) if digits else 0
        length = int_width + len(fpart)
        # re-pack: when int_width was dropped ("0." prefix) the integer
        # digits contribute nothing to value
        value &= (1 << length) - 1
        return cls(int_width, length, value, origin=origin)


@dataclass(frozen=True)
class DyadicRational:
    """numerator / 2^log_denominator in lowest terms (odd numerator, or
    zero with exponent 0). Values are non-negative."""

    numerator: int
    log_denominator: int

    def __post_init__(self) -> None:
        if self.numerator < 0:
            raise ValueError("dyadic rationals here are non-negative")
        if self.log_denominator < 0:
            raise ValueError("log_denominator must be non-negative")
        num, k = self.numerator, self.log_denominator
        if num == 0:
            k = 0
        else:
            tz = (num & -num).bit_length() - 1
            drop = min(tz, k)
            num >>= drop
            k -= drop
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "log_denominator", k)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.log_denominator)

    def floor(self) -> int:
        return self.numerator >> self.log_denominator

    def scaled_to(self, n: int) -> int:
        """Exact integer value * 2^n; n must cover the denominator."""
        if n < self.log_denominator:
            raise PrecisionError(
                f"need {self.log_denominator} fractional bits, budget is {n}"
            )
        return self.numerator << (n - self.log_denominator)

    def __add__(self, other: "DyadicRational") -> "DyadicRational":
        k = max(self.log_denominator, other.log_denominator)
        return DyadicRational(self.scaled_to(k) + other.scaled_to(k), k)

    def __sub__(self, other: "DyadicRational") -> "DyadicRational":
        k = max(self.log_denominator, other.log_denominator)
        num = self.scaled_to(k) - other.scaled_to(k)
        if num < 0:
            raise ValueError("subtraction result would be negative")
        return DyadicRational(num, k)

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.log_denominator}"

    @classmethod
    def parse(cls, text: str) -> "DyadicRational":
        head, sep, tail = text.partition("/2^")
        if sep:
            return cls(int(head), int(tail))
        return cls(int(text), 0)


def sqrt_bits(s: int, n: int) -> BitSequence:
    """First n exact fractional digits of sqrt(s), integer part included.

    floor(sqrt(s) * 2^n) = isqrt(s * 4^n), so one integer square root
    yields every digit at once.
    """
    _require_nonsquare(s)
    if n < 0:
        raise ValueError("digit count must be non-negative")
    value = isqrt(s << (2 * n))
    width = isqrt(s).bit_length()
    return BitSequence(width, width + n, value, origin=f"sqrt({s})")


def dyadic_bits(q: DyadicRational, n: int) -> BitSequence:
    """First n fractional digits of a dyadic rational q < 4.

    Digits past position log_denominator are zero; truncation is exact
    either way.
    """
    if q.floor() >= 4:
        raise ValueError("dyadic_bits expects q < 4")
    if n < 0:
        raise ValueError("digit count must be non-negative")
    value = (q.numerator << n) >> q.log_denominator
    width = q.floor().bit_length()
    return BitSequence(width, width + n, value, origin=f"dyadic({q})")


def exact_bits_rational_minus_scaled_sqrt(
    R: DyadicRational, c: int, s: int, n: int
) -> BitSequence:
    """First n exact digits of R - sqrt(s)/2^c, required to lie in (0, 1).

    With K = R * 2^n an integer and y = sqrt(s) * 2^(n-c) irrational,
    floor((R - sqrt(s)/2^c) * 2^n) = K - ceil(y) = K - isqrt(s * 4^(n-c)) - 1.
    Every one of the n digits is exact; nothing is rounded.
    """
    _require_nonsquare(s)
    if c < 0:
        raise ValueError("shift count must be non-negative")
    if n < c:
        raise PrecisionError(f"need n >= c, got n={n} < c={c}")
    K = R.scaled_to(n)
    v = K - isqrt(s << (2 * (n - c))) - 1
    if not 0 <= v < (1 << n):
        raise ValueError(
            f"{R} - sqrt({s})/2^{c} lies outside the open unit interval"
        )
    return BitSequence(0, n, v, origin=f"{R}-sqrt({s})/2^{c}")


def exact_bits_scaled_sqrt_minus_rational(
    c: int, s: int, R: int, n: int
) -> BitSequence:
    """First n exact digits of (sqrt(s) - R)/2^c, required to lie in (0, 1).

    floor(((sqrt(s) - R)/2^c) * 2^n) = isqrt(s * 4^(n-c)) - R * 2^(n-c):
    subtracting the integer R * 2^(n-c) commutes with the floor.
    """
    _require_nonsquare(s)
    if c < 0:
        raise ValueError("shift count must be non-negative")
    if R < 0:
        raise ValueError("R must be a natural number")
    if n < c:
        raise PrecisionError(f"need n >= c, got n={n} < c={c}")
    v = isqrt(s << (2 * (n - c))) - (R << (n - c))
    if not 0 <= v < (1 << n):
        raise ValueError(
            f"(sqrt({s})-{R})/2^{c} lies outside the open unit interval"
        )
    return BitSequence(0, n, v, origin=f"(sqrt({s})-{R})/2^{c}")


def complement(b: BitSequence) -> BitSequence:
    """Flip every digit. Involutive on the digit content."""
    mask = (1 << b.length) - 1
    return BitSequence(b.int_width, b.length, b.value ^ mask,
                       origin=f"complement({b.origin})")


def borrow_subtract_bits(
    rational: DyadicRational, sqrt_prefix: BitSequence, c: int, n: int
) -> BitSequence:
    """Digit-level subtraction of a right-shifted root prefix from a
    terminating expansion, worked column by column with borrows.

    The terminating minuend is first rewritten into its trailing-ones
    form: the last 1 digit becomes 0 and every later digit becomes 1 (the
    two expansions denote the same value). After the rewrite no column
    ever needs lookahead past the working precision. Works at n + c
    fractional columns internally and returns the first n output digits;
    agreement with the integer-arithmetic route is exact, though callers
    should only rely on all but the final digit.
    """
    if n < 1:
        raise ValueError("need at least one output digit")
    if c < 0:
        raise ValueError("shift count must be non-negative")
    m = n + c
    if sqrt_prefix.frac_length < m:
        raise PrecisionError(
            f"prefix holds {sqrt_prefix.frac_length} fractional digits, "
            f"the procedure needs {m}"
        )
    if rational.log_denominator > m:
        raise PrecisionError(
            f"minuend needs {rational.log_denominator} fractional digits, "
            f"working precision is {m}"
        )
    if rational.numerator == 0:
        raise ValueError("minuend must be positive")

    width = max(rational.floor().bit_length(), 1)
    minuend = _expansion_digits(rational.scaled_to(m), width + m)

    last_one = len(minuend) - 1
    while minuend[last_one] == 0:
        last_one -= 1
    minuend[last_one] = 0
    for i in range(last_one + 1, len(minuend)):
        minuend[i] = 1

    # frac_length + c - m = frac_length - n >= 0 by the precision check
    shifted_scaled = sqrt_prefix.value >> (sqrt_prefix.frac_length + c - m)
    subtrahend = _expansion_digits(shifted_scaled, width + m)

    out = [0] * (width + m)
    borrow = 0
    for i in reversed(range(width + m)):
        d = minuend[i] - subtrahend[i] - borrow
        borrow = 1 if d < 0 else 0
        out[i] = d & 1
    if borrow:
        raise ValueError("minuend is smaller than the shifted subtrahend")
    if any(out[:width]):
        raise ValueError("difference is not inside the unit interval")

    value = 0
    for d in out[width:width + n]:
        value = (value << 1) | d
    return BitSequence(0, n, value,
                       origin=f"borrow({rational}, shift={c})")


def _expansion_digits(scaled: int, total: int) -> list[int]:
    """Digit list of an integer zero-padded to ``total`` columns."""
    text = format(scaled, "b").zfill(total)
    if len(text) > total:
        raise ValueError("operand wider than the working layout")
    return [ord(ch) - 48 for ch in text]
