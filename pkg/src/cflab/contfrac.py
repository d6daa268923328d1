"""Continued-fraction expansion, convergents, reconstruction and error bounds.

Exact expansions use the Euclidean algorithm with Lehmer word-level
acceleration; the compiled kernel (cflab._euclid, Cython) is preferred and
the pure-Python twin (cflab._euclid_py) is the fallback, selected at import.

Certified expansion of an interval emits only the quotient prefix shared by
the exact expansions of both endpoints, which is guaranteed to be a prefix
of the expansion of every value inside the interval.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from cflab import _euclid_py
from cflab.catalog import SequenceSpec
from cflab.errors import CertificationError, PrecisionError
from cflab.exact import DecimalApprox, log_of_bigint, to_decimal

try:
    from cflab import _euclid

    _KERNELS = {"compiled": _euclid.lehmer_cf, "python": _euclid_py.lehmer_cf}
    DEFAULT_KERNEL = "compiled"
except ImportError:  # extension not built
    _KERNELS = {"python": _euclid_py.lehmer_cf}
    DEFAULT_KERNEL = "python"


def available_kernels() -> tuple[str, ...]:
    return tuple(_KERNELS)


def _kernel(name: str | None):
    return _KERNELS[name or DEFAULT_KERNEL]


EXACT = "exact"
TRUNCATED = "truncated"


@dataclass
class CFExpansion:
    """Integer part plus positive partial quotients, canonical form.

    tail="exact" means the expansion terminates exactly (last quotient >= 2
    unless there are no quotients); tail="truncated" means only a certified
    prefix is stored, with `precision` decimal digits backing it.
    """

    a0: int
    quotients: list[int]
    tail: str = EXACT
    precision: int | None = None

    def __post_init__(self):
        if self.tail not in (EXACT, TRUNCATED):
            raise ValueError(f"bad tail {self.tail!r}")
        if any(a < 1 for a in self.quotients):
            raise ValueError("partial quotients must be >= 1")
        if self.tail == EXACT and len(self.quotients) >= 1 and self.quotients[-1] == 1:
            raise ValueError("exact expansion not canonical (ends in 1)")

    def __len__(self) -> int:
        return len(self.quotients)

    # --- serialization: line-oriented text ---

    def to_text(self) -> str:
        tail = EXACT if self.tail == EXACT else f"{TRUNCATED}:{self.precision}"
        lines = [f"a0={self.a0} tail={tail}"]
        lines.extend(str(a) for a in self.quotients)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CFExpansion":
        lines = text.splitlines()
        header = lines[0].split()
        a0 = int(header[0].removeprefix("a0="))
        tailspec = header[1].removeprefix("tail=")
        if tailspec == EXACT:
            tail, precision = EXACT, None
        else:
            tail, precision = TRUNCATED, int(tailspec.split(":", 1)[1])
        quotients = [int(line) for line in lines[1:] if line.strip()]
        return cls(a0=a0, quotients=quotients, tail=tail, precision=precision)

    # --- serialization: compact JSON ---

    def to_json(self) -> str:
        obj = {"a0": self.a0, "quotients": self.quotients, "tail": self.tail}
        if self.precision is not None:
            obj["precision"] = self.precision
        return json.dumps(obj, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "CFExpansion":
        obj = json.loads(text)
        return cls(
            a0=int(obj["a0"]),
            quotients=[int(a) for a in obj["quotients"]],
            tail=obj.get("tail", EXACT),
            precision=obj.get("precision"),
        )


def cf_expand_rational(r: Fraction, kernel: str | None = None) -> CFExpansion:
    """Exact canonical continued fraction of a rational; round-trips with from_cf."""
    num, den = r.numerator, r.denominator
    a0, rem = divmod(num, den)
    if rem == 0:
        return CFExpansion(a0=a0, quotients=[])
    quotients = _kernel(kernel)(den, rem)
    return CFExpansion(a0=a0, quotients=quotients)


def from_cf(cf: CFExpansion) -> Fraction:
    """Exact value of the final convergent; inverse of cf_expand_rational."""
    p_prev, q_prev = 1, 0
    p, q = cf.a0, 1
    for a in cf.quotients:
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
    return Fraction(p, q)


def cf_expand_certified(
    low: Fraction, high: Fraction, kernel: str | None = None
) -> CFExpansion:
    """Quotient prefix shared by the exact expansions of both endpoints.

    The result is a prefix of the expansion of every value in [low, high].
    Raises CertificationError when the endpoints certify no quotient at all.
    """
    if low > high:
        raise ValueError("requires low <= high")
    if low == high:
        return cf_expand_rational(low, kernel=kernel)
    cf_low = cf_expand_rational(low, kernel=kernel)
    cf_high = cf_expand_rational(high, kernel=kernel)
    if cf_low.a0 != cf_high.a0:
        raise CertificationError("interval too wide: integer parts differ")
    shared: list[int] = []
    for a, b in zip(cf_low.quotients, cf_high.quotients):
        if a != b:
            break
        shared.append(a)
    if not shared:
        raise CertificationError("interval too wide: no common partial quotient")
    width = high - low
    log10_width = log_of_bigint(width.numerator) / math.log(10.0) - log_of_bigint(
        width.denominator
    ) / math.log(10.0)
    digits = max(1, int(-log10_width))
    return CFExpansion(
        a0=cf_low.a0, quotients=shared, tail=TRUNCATED, precision=digits
    )


def cf_expand_paper(r: Fraction, d: int, kernel: str | None = None) -> CFExpansion:
    """Compatibility mode: expand exactly, keep quotients while Q_n^2 < 10^d.

    This is the historical stopping heuristic for a value known to d decimal
    digits; the certified interval method is strictly safer.
    """
    cf = cf_expand_rational(r, kernel=kernel)
    bound = 10**d
    q, q_prev = 1, 0
    kept: list[int] = []
    for a in cf.quotients:
        q, q_prev = a * q + q_prev, q
        if q * q >= bound:
            break
        kept.append(a)
    if len(kept) == len(cf.quotients) and cf.tail == EXACT:
        return cf
    return CFExpansion(a0=cf.a0, quotients=kept, tail=TRUNCATED, precision=d)


class ConvergentStream:
    """Streamable (P_n, Q_n) pairs, n = 0, 1, ..., with resumable state.

    P_0 = a0, Q_0 = 1, and P_{n+1} = a_{n+1} P_n + P_{n-1} (same for Q).
    """

    STATE_VERSION = 1

    def __init__(self, cf: CFExpansion, start: int = 0, state: dict | None = None):
        self.cf = cf
        if state is None:
            self.n = -1
            self.p, self.p_prev = 1, 0  # yields P_0 = a0 on first step
            self.q, self.q_prev = 0, 1
        else:
            self.load_state(state)
        if start:
            for _ in range(start - (self.n + 1)):
                self.advance()

    def advance(self) -> tuple[int, int]:
        if self.n < 0:
            self.p, self.p_prev = self.cf.a0 * self.p + self.p_prev, self.p
            self.q, self.q_prev = self.cf.a0 * self.q + self.q_prev, self.q
        else:
            a = self.cf.quotients[self.n]
            self.p, self.p_prev = a * self.p + self.p_prev, self.p
            self.q, self.q_prev = a * self.q + self.q_prev, self.q
        self.n += 1
        return self.p, self.q

    def __iter__(self) -> Iterator[tuple[int, int]]:
        while self.n < len(self.cf.quotients):
            yield self.advance()

    def state(self) -> dict:
        return {
            "version": self.STATE_VERSION,
            "n": self.n,
            "p": format(self.p, "x"),
            "p_prev": format(self.p_prev, "x"),
            "q": format(self.q, "x"),
            "q_prev": format(self.q_prev, "x"),
        }

    def load_state(self, state: dict) -> None:
        if state.get("version") != self.STATE_VERSION:
            raise PrecisionError("incompatible convergent state version")
        self.n = state["n"]
        self.p = int(state["p"], 16)
        self.p_prev = int(state["p_prev"], 16)
        self.q = int(state["q"], 16)
        self.q_prev = int(state["q_prev"], 16)


def convergents(cf: CFExpansion) -> Iterator[tuple[int, int]]:
    """Yield (P_n, Q_n) for n = 0 .. len(cf)."""
    return iter(ConvergentStream(cf))


def convergent_list(cf: CFExpansion, n_max: int | None = None) -> list[tuple[int, int]]:
    """[(P_0, Q_0), ..., (P_n, Q_n)], optionally stopping at n_max."""
    out = []
    for pair in convergents(cf):
        out.append(pair)
        if n_max is not None and len(out) > n_max:
            break
    return out


@dataclass(frozen=True)
class ErrorBounds:
    """Strict sandwich on |r - P_n/Q_n| for a non-terminal convergent."""

    ln_lower: float
    ln_upper: float

    @property
    def lower(self) -> float:
        return math.exp(self.ln_lower) if self.ln_lower > -700 else 0.0

    @property
    def upper(self) -> float:
        return math.exp(self.ln_upper) if self.ln_upper > -700 else 0.0

    @property
    def log10_upper(self) -> float:
        return self.ln_upper / math.log(10.0)


def error_bounds(
    series: Sequence[tuple[int, int]], n: int, r: Fraction | None = None
) -> ErrorBounds:
    """1/(Q_n (Q_{n+1} + Q_n)) < |r - P_n/Q_n| < 1/(Q_n Q_{n+1}).

    `series` must hold convergents up to index n+1.  If r is supplied and
    equals P_n/Q_n exactly the sandwich is undefined and an error is raised.
    """
    if n + 1 >= len(series):
        raise ValueError(f"need convergents up to n+1={n + 1}")
    p_n, q_n = series[n]
    q_next = series[n + 1][1]
    if r is not None and r == Fraction(p_n, q_n):
        raise PrecisionError(f"value coincides with convergent {n}; error is zero")
    ln_qn = log_of_bigint(q_n)
    return ErrorBounds(
        ln_lower=-(ln_qn + log_of_bigint(q_next + q_n)),
        ln_upper=-(ln_qn + log_of_bigint(q_next)),
    )


def cf_from_quotient_sequence(
    spec: SequenceSpec, n: int, digits: int | None = None
) -> tuple[CFExpansion, DecimalApprox]:
    """Continued fraction [0; t_1, ..., t_n] built from a sequence, plus its
    decimal value to `digits` places (certified by the 1/Q_n^2 bound)."""
    terms = spec.terms(n)
    cf = CFExpansion(a0=0, quotients=terms, tail=TRUNCATED, precision=None)
    series = convergent_list(cf)
    p_n, q_n = series[-1]
    # |value - P_n/Q_n| < 1/Q_n^2, so d digits are certified when Q_n^2 > 10^d.
    log10_qn2 = 2.0 * log_of_bigint(q_n) / math.log(10.0)
    if digits is None:
        digits = max(1, int(log10_qn2) - 2)
    if digits >= log10_qn2:
        raise PrecisionError(
            f"{digits} digits requested but Q_n^2 only certifies "
            f"{int(log10_qn2)} digits at n={n}"
        )
    cf.precision = digits
    return cf, to_decimal(Fraction(p_n, q_n), digits)
