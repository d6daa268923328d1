"""Exact rational construction of reciprocal-sum constants and
controlled-precision decimal rendering.

Rationals are plain ``fractions.Fraction`` values (arbitrary precision,
always in lowest terms).  Decimal rendering truncates toward zero, so a
``DecimalApprox`` with declared precision ``d`` satisfies
``|value - true| < 10**-d`` by construction.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from cflab.catalog import SequenceSpec

# Decimal renderings here routinely exceed the interpreter's default
# int<->str conversion limit (10^4..10^8 digits); lift it for this process.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

BigRational = Fraction

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class DecimalApprox:
    """Truncated decimal rendering of a rational, with declared precision.

    ``digits`` is the full string, e.g. ``"0.51645"`` or ``"-3.14"``;
    ``precision`` counts the correct fractional digits.
    """

    digits: str
    precision: int

    def value(self) -> Fraction:
        return Fraction(self.digits)

    def fractional_digits(self) -> str:
        _, _, frac = self.digits.partition(".")
        return frac

    def to_json(self) -> str:
        return json.dumps({"digits": self.digits, "precision": self.precision})

    @classmethod
    def from_json(cls, text: str) -> "DecimalApprox":
        obj = json.loads(text)
        return cls(digits=obj["digits"], precision=int(obj["precision"]))


def reciprocal_sum(spec: SequenceSpec, count: int) -> Fraction:
    """Exact sum of the reciprocals of the first `count` sequence terms."""
    terms = spec.terms(count)
    return _balanced_sum([Fraction(1, t) for t in terms])


def _balanced_sum(parts: list[Fraction]) -> Fraction:
    # Pairwise summation keeps intermediate gcd work small for long sums.
    while len(parts) > 1:
        parts = [
            parts[i] + parts[i + 1] if i + 1 < len(parts) else parts[i]
            for i in range(0, len(parts), 2)
        ]
    return parts[0]


def to_decimal(r: Fraction, d: int) -> DecimalApprox:
    """Decimal string of r with d fractional digits, truncated toward zero."""
    if d < 1:
        raise ValueError("digit count must be >= 1")
    num, den = abs(r.numerator), r.denominator
    ip, rem = divmod(num, den)
    frac = (rem * 10**d) // den
    sign = "-" if r.numerator < 0 else ""
    return DecimalApprox(digits=f"{sign}{ip}.{str(frac).zfill(d)}", precision=d)


def log_of_bigint(q: int) -> float:
    """Natural log of a positive big integer, relative error <= 1e-12.

    Uses the bit length plus the leading 53 bits; q is never converted to a
    float wholesale.
    """
    if q < 1:
        raise ValueError("argument must be >= 1")
    nbits = q.bit_length()
    if nbits <= 53:
        return math.log(q)
    shift = nbits - 53
    return math.log(q >> shift) + shift * _LN2


def log10_of_bigint(q: int) -> float:
    return log_of_bigint(q) / math.log(10.0)


def digit_census(a: "DecimalApprox | str") -> tuple[list[int], list[float]]:
    """Counts and frequencies of the digits 0-9 in a decimal string.

    A single leading sign and one decimal point are ignored; any other
    non-digit character is an error.
    """
    s = a.digits if isinstance(a, DecimalApprox) else a
    s = s.lstrip("-").replace(".", "", 1)
    if not s:
        raise ValueError("empty digit string")
    counts = [0] * 10
    for ch in s:
        if not ch.isdigit():
            raise ValueError(f"non-digit character {ch!r}")
        counts[int(ch)] += 1
    total = sum(counts)
    return counts, [c / total for c in counts]
