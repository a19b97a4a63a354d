"""Constructed numbers whose binary tails mirror the digits of sqrt(s).

For non-square s and the smallest l with 2^l > s (any admissible l is
accepted), four values in (0, 1) are built to n exact fractional digits:

    omega1 = 1 - sqrt(s)/2^(2l)          complement-tailed
    omega2 = (sqrt(s) - 1)/2^l           shift-tailed
    nu1    = omega1^2 = (1 + s/2^(4l)) - sqrt(s)/2^(2l-1)
    nu2    = omega2^2 = (s+1)/2^(2l)  - sqrt(s)/2^(2l-1)

The squares share the subtrahend sqrt(s)/2^(2l-1); they differ by the
dyadic rational recorded in ``rational_terms``, which is why their digit
tails coincide exactly once that rational's digits run out.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactcore import (
    BitSequence,
    DyadicRational,
    PrecisionError,
    VerificationError,
    _require_nonsquare,
    exact_bits_rational_minus_scaled_sqrt,
    exact_bits_scaled_sqrt_minus_rational,
)


@dataclass(frozen=True)
class ConstructionSet:
    s: int
    l: int
    n: int
    omega1: BitSequence
    omega2: BitSequence
    nu1: BitSequence
    nu2: BitSequence
    rational_terms: tuple[DyadicRational, DyadicRational]


@dataclass(frozen=True)
class ValueIdentityReport:
    """Outcome of verify_value_identities; construction only returns on
    success, so the interesting payload is the exact difference."""

    s: int
    l: int
    n: int
    nu_difference: DyadicRational


def default_l(s: int) -> int:
    """Smallest l with 2^l > s."""
    if s < 2:
        raise ValueError("constructions need s >= 2")
    return s.bit_length()


def build_construction(s: int, l: int | None = None, n: int = 4096) -> ConstructionSet:
    """Build all four values to n exact fractional digits.

    n >= 4l so the rational terms are representable inside the window;
    verification layers impose their own stricter floors.
    """
    _require_nonsquare(s)
    if l is None:
        l = default_l(s)
    if l < 1 or (1 << l) <= s:
        raise ValueError(f"l={l} inadmissible: need 2^l > s for s={s}")
    if n < 4 * l:
        raise PrecisionError(f"need n >= 4l = {4 * l}, got {n}")

    term1 = DyadicRational((1 << (4 * l)) + s, 4 * l)   # 1 + s/2^(4l)
    term2 = DyadicRational(s + 1, 2 * l)                # (s+1)/2^(2l)

    omega1 = exact_bits_rational_minus_scaled_sqrt(DyadicRational(1, 0), 2 * l, s, n)
    omega2 = exact_bits_scaled_sqrt_minus_rational(l, s, 1, n)
    nu1 = exact_bits_rational_minus_scaled_sqrt(term1, 2 * l - 1, s, n)
    nu2 = exact_bits_rational_minus_scaled_sqrt(term2, 2 * l - 1, s, n)
    return ConstructionSet(s, l, n, omega1, omega2, nu1, nu2, (term1, term2))


def verify_value_identities(cs: ConstructionSet) -> ValueIdentityReport:
    """Exact integer checks tying the four prefixes together.

    * all four values lie strictly inside (0, 1);
    * nu1 - nu2 equals the difference of the rational terms exactly,
      digit for digit (both pipelines share the same subtrahend, so the
      irrational parts cancel with no error term at all);
    * the dyadic enclosure of nu_i intersects the square of the dyadic
      enclosure of omega_i, as it must when nu_i = omega_i^2.

    Raises VerificationError on any violation; such a failure can only
    mean an arithmetic bug, never a property of the values themselves.
    """
    n = cs.n
    for name in ("omega1", "omega2", "nu1", "nu2"):
        b: BitSequence = getattr(cs, name)
        if b.frac_length != n or b.int_width != 0:
            raise VerificationError(f"{name} has an unexpected layout")
        if b.value == 0:
            # floor(x * 2^n) = 0 would allow x < 2^-n only
            raise VerificationError(f"{name} is not strictly positive at {n} digits")

    term1, term2 = cs.rational_terms
    diff = term1 - term2
    if diff.log_denominator > n:
        raise PrecisionError("precision below the rational-difference scale")
    got = cs.nu1.value - cs.nu2.value
    expected = diff.scaled_to(n)
    if got != expected:
        raise VerificationError(
            f"nu1 - nu2 = {got} * 2^-{n}, expected {expected} * 2^-{n}",
            position=_first_diff_position(got, expected, n),
        )

    for om_name, nu_name in (("omega1", "nu1"), ("omega2", "nu2")):
        om = getattr(cs, om_name).value
        nu = getattr(cs, nu_name).value
        # [nu, nu+1] * 2^n must meet [om^2, (om+1)^2]: both intervals
        # contain the same real point omega^2
        if (nu << n) > (om + 1) ** 2 or om * om > ((nu + 1) << n):
            raise VerificationError(
                f"{nu_name} prefix is inconsistent with {om_name} squared"
            )

    return ValueIdentityReport(cs.s, cs.l, cs.n, diff)


def _first_diff_position(a: int, b: int, n: int) -> int:
    x = a ^ b
    return n - x.bit_length() + 1 if x else 0


def construction_to_dict(cs: ConstructionSet) -> dict:
    term1, term2 = cs.rational_terms
    return {
        "s": cs.s,
        "l": cs.l,
        "bits": cs.n,
        "omega1": str(cs.omega1),
        "omega2": str(cs.omega2),
        "nu1": str(cs.nu1),
        "nu2": str(cs.nu2),
        "rational_term_nu1": str(term1),
        "rational_term_nu2": str(term2),
    }


def construction_from_dict(d: dict) -> ConstructionSet:
    s, l, n = int(d["s"]), int(d["l"]), int(d["bits"])
    seqs = {}
    for name in ("omega1", "omega2", "nu1", "nu2"):
        seqs[name] = BitSequence.from_string(d[name], origin=f"parsed {name}")
        if seqs[name].frac_length != n:
            raise ValueError(f"{name} does not carry {n} fractional digits")
    terms = (
        DyadicRational.parse(d["rational_term_nu1"]),
        DyadicRational.parse(d["rational_term_nu2"]),
    )
    return ConstructionSet(s, l, n, seqs["omega1"], seqs["omega2"],
                           seqs["nu1"], seqs["nu2"], terms)
