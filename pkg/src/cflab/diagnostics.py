"""Transcendence-flavoured diagnostics: Davenport-Roth and
Adamczewski-Bugeaud statistics, the almost-everywhere denominator bound,
the doubly-exponential lower bound on Q_n, the Thue-Siegel-Roth exponent
delta(r; n) and Sondow's epsilon estimate.

Everything is evaluated from logarithms of the convergent denominators;
Q_n itself is never converted to fixed precision (Q_47 of the Mersenne
quotient fraction has ~87 million digits).  A finite computation can only
exhibit growth compatible with divergence, never prove it; running maxima
stand in for the limsups.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from cflab.catalog import EULER_GAMMA, EULER_GAMMA_8
from cflab.contfrac import CFExpansion
from cflab.errors import PrecisionError
from cflab.exact import log_of_bigint
from cflab.stats import StatSeries

_LN2 = math.log(2.0)
_LN10 = math.log(10.0)


def wagstaff_c(gamma: float = EULER_GAMMA_8) -> float:
    """The constant c = 1/(2^(e^-gamma) - 1) of the denominator lower bound.

    The reference value 2.101893933 is reproduced from the 8-digit rounding
    of the Euler-Mascheroni constant; the full-precision gamma shifts c by
    about 1.2e-8.
    """
    return 1.0 / (2.0 ** math.exp(-gamma) - 1.0)


def sondow_epsilon_limit(gamma: float = EULER_GAMMA) -> float:
    """2^(e^-gamma) - 1 ~ 0.47577, the growth-model prediction for epsilon."""
    return 2.0 ** math.exp(-gamma) - 1.0


# --- log-domain denominators ---


def ln_denominators(series: Iterable[tuple[int, int]]) -> list[float]:
    """[ln Q_1, ln Q_2, ...] from an exact convergent stream (skips n=0)."""
    out = []
    for i, (_, q) in enumerate(series):
        if i == 0:
            continue
        out.append(log_of_bigint(q))
    return out


def ln_denominators_from_ln_quotients(ln_quotients: Sequence[float]) -> list[float]:
    """[ln Q_1, ln Q_2, ...] via the recurrence run entirely in log domain.

    ln Q_{n+1} = ln a_{n+1} + ln Q_n + ln(1 + Q_{n-1}/(a_{n+1} Q_n)); the
    correction term underflows harmlessly once the quotients explode, so the
    accumulated relative error stays far below 1e-6 for 47 terms.
    """
    out: list[float] = []
    ln_q_prev = 0.0  # ln Q_0
    ln_q = ln_quotients[0]  # ln Q_1 = ln a_1
    out.append(ln_q)
    for ln_a in ln_quotients[1:]:
        t = ln_q_prev - ln_a - ln_q
        corr = math.log1p(math.exp(t)) if t > -700 else 0.0
        ln_q_prev, ln_q = ln_q, ln_a + ln_q + corr
        out.append(ln_q)
    return out


def mersenne_ln_quotients(exponents: Sequence[int]) -> list[float]:
    """ln(2^p - 1) for each exponent, without materializing the integers."""
    return [
        p * _LN2 + (math.log1p(-(2.0 ** (-p))) if p < 1074 else 0.0)
        for p in exponents
    ]


def _as_ln_denominators(series) -> list[float]:
    if isinstance(series, (list, tuple)) and series and isinstance(series[0], float):
        return list(series)
    return ln_denominators(series)


# --- per-n statistics ---


def davenport_roth_stat(series) -> StatSeries:
    """sqrt(ln n) * ln(ln Q_n) / n for n >= 3; divergence suggests
    transcendence."""
    lnq = _as_ln_denominators(series)
    entries = []
    for n in range(3, len(lnq) + 1):
        ln_qn = lnq[n - 1]
        if ln_qn <= 1.0:
            raise ValueError(f"Q_{n} < 3: log log undefined or non-positive")
        entries.append((n, math.sqrt(math.log(n)) * math.log(ln_qn) / n))
    return StatSeries(name="davenport_roth", entries=entries)


def adamczewski_bugeaud_stat(series) -> StatSeries:
    """ln(ln Q_n) / (n^(2/3) ln(n)^(2/3) ln ln n) for n >= 3."""
    lnq = _as_ln_denominators(series)
    entries = []
    for n in range(3, len(lnq) + 1):
        ln_qn = lnq[n - 1]
        if ln_qn <= 1.0:
            raise ValueError(f"Q_{n} < 3: log log undefined or non-positive")
        denom = n ** (2.0 / 3.0) * math.log(n) ** (2.0 / 3.0) * math.log(math.log(n))
        entries.append((n, math.log(ln_qn) / denom))
    return StatSeries(name="adamczewski_bugeaud", entries=entries)


def khinchin_B_check(series, B: float) -> tuple[list[tuple[int, bool]], StatSeries]:
    """Per-n truth of Q_n < e^(Bn), plus the empirical (ln Q_n)/n series."""
    if B <= 0:
        raise ValueError("B must be positive")
    lnq = _as_ln_denominators(series)
    flags = [(n, lnq[n - 1] < B * n) for n in range(1, len(lnq) + 1)]
    ratios = StatSeries(
        name="ln_denominator_rate",
        entries=[(n, lnq[n - 1] / n) for n in range(1, len(lnq) + 1)],
        metadata={"B": B},
    )
    return flags, ratios


@dataclass(frozen=True)
class WagstaffBoundRow:
    n: int
    log10_q: float
    log10_bound: float

    @property
    def holds(self) -> bool:
        return self.log10_q > self.log10_bound


@dataclass(frozen=True)
class WagstaffBoundReport:
    rows: tuple[WagstaffBoundRow, ...]
    c: float

    def violations(self) -> list[int]:
        return [row.n for row in self.rows if not row.holds]

    def row(self, n: int) -> WagstaffBoundRow:
        return self.rows[n - self.rows[0].n]


def wagstaff_lower_bound_check(series, n_min: int = 3) -> WagstaffBoundReport:
    """Compare Q_n with the growth-model bound 2^(c * 2^((n+1) e^-gamma)).

    Both sides are kept in the log domain.  c is the reference constant
    2.101893933 (see wagstaff_c); the doubly-exponential factor uses the
    full-precision gamma.
    """
    lnq = _as_ln_denominators(series)
    c = wagstaff_c()
    u = math.exp(-EULER_GAMMA)
    rows = []
    for n in range(n_min, len(lnq) + 1):
        log10_q = lnq[n - 1] / _LN10
        log10_bound = c * 2.0 ** ((n + 1) * u) * math.log10(2.0)
        rows.append(WagstaffBoundRow(n=n, log10_q=log10_q, log10_bound=log10_bound))
    return WagstaffBoundReport(rows=tuple(rows), c=c)


# --- Thue-Siegel-Roth exponent ---


@dataclass(frozen=True)
class TsrDelta:
    n: int
    delta: float
    sandwich_low: float   # ln(Q_n Q_{n+1}) / ln Q_n
    sandwich_high: float  # ln(Q_n (Q_n + Q_{n+1})) / ln Q_n

    @property
    def bracketed(self) -> bool:
        # The real numbers satisfy the strict sandwich, but once the
        # quotients explode |r - P_n/Q_n| approaches 1/(Q_n Q_{n+1}) closer
        # than double precision can resolve; allow that rounding collapse.
        tol = 1e-11 * max(1.0, abs(self.delta))
        return (
            self.sandwich_low - tol < self.delta < self.sandwich_high + tol
        )


def tsr_required_digits(series: Sequence[tuple[int, int]], n: int) -> int:
    """Decimal digits of r needed before delta(r; n) may be evaluated."""
    q_n = series[n][1]
    q_next = series[n + 1][1]
    log10_gap = (log_of_bigint(q_n) + log_of_bigint(q_n + q_next)) / _LN10
    return int(log10_gap) + 8  # safety margin: r's error 1e-8 below the gap


def tsr_delta(
    r: Fraction,
    r_digits: int,
    series: Sequence[tuple[int, int]],
    n: int,
) -> TsrDelta:
    """delta(r; n) = -ln|r - P_n/Q_n| / ln Q_n, with the error sandwich.

    `r_digits` declares how many decimal digits of r are correct; the
    operation refuses (PrecisionError) when that precision cannot resolve
    the distance to the n-th convergent.
    """
    if n + 1 >= len(series):
        raise ValueError(f"need convergents up to n+1={n + 1}")
    needed = tsr_required_digits(series, n)
    if r_digits < needed:
        raise PrecisionError(
            f"delta at n={n} needs {needed} correct digits of r, got {r_digits}"
        )
    p_n, q_n = series[n]
    q_next = series[n + 1][1]
    diff = abs(r - Fraction(p_n, q_n))
    if diff == 0:
        raise PrecisionError(f"value coincides with convergent {n}")
    ln_diff = log_of_bigint(diff.numerator) - log_of_bigint(diff.denominator)
    ln_qn = log_of_bigint(q_n)
    return TsrDelta(
        n=n,
        delta=-ln_diff / ln_qn,
        sandwich_low=(ln_qn + log_of_bigint(q_next)) / ln_qn,
        sandwich_high=(ln_qn + log_of_bigint(q_n + q_next)) / ln_qn,
    )


def sondow_epsilon(cf: CFExpansion, series) -> StatSeries:
    """Per-n ratio ln a_{n+1} / ln Q_n with its running maximum.

    The limsup of this ratio bounds the epsilon of the Thue-Siegel-Roth
    inequality; for the Mersenne quotient fraction it should hover near
    2^(e^-gamma) - 1 ~ 0.47577.
    """
    if len(cf.quotients) < 2:
        raise ValueError("need at least 2 partial quotients")
    lnq = _as_ln_denominators(series)
    entries = []
    running = []
    best = -math.inf
    for n in range(1, len(cf.quotients)):
        ratio = log_of_bigint(cf.quotients[n]) / lnq[n - 1]
        best = max(best, ratio)
        entries.append((n, ratio))
        running.append(repr(best))
    return StatSeries(
        name="sondow_ratio",
        entries=entries,
        extra={"running_max": running},
        metadata={"limit_prediction": sondow_epsilon_limit()},
    )


# --- assembled report ---


@dataclass
class DiagnosticReport:
    """Per-n values of every diagnostic plus running-maximum summaries."""

    statistics: dict[str, StatSeries]
    deltas: list[TsrDelta] = field(default_factory=list)
    constants: dict[str, float] = field(default_factory=dict)

    def summary(self) -> dict:
        out: dict = {"constants": self.constants, "running_max": {}}
        for name, series in self.statistics.items():
            if series.entries:
                out["running_max"][name] = max(v for _, v in series.entries)
        if self.deltas:
            out["delta_mean"] = sum(d.delta for d in self.deltas) / len(self.deltas)
            out["delta_range"] = [self.deltas[0].n, self.deltas[-1].n]
            out["delta_count"] = len(self.deltas)
        out["disclaimer"] = (
            "running maxima over a finite range can exhibit divergence "
            "but never prove it"
        )
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "statistics": {
                    name: json.loads(s.to_json()) for name, s in self.statistics.items()
                },
                "deltas": [
                    {
                        "n": d.n,
                        "delta": d.delta,
                        "sandwich_low": d.sandwich_low,
                        "sandwich_high": d.sandwich_high,
                    }
                    for d in self.deltas
                ],
                "summary": self.summary(),
            },
            indent=2,
        )

    def to_csv(self) -> str:
        buf = io.StringIO(newline="")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["statistic", "n", "value"])
        for name, series in self.statistics.items():
            for n, v in series.entries:
                writer.writerow([name, n, repr(v)])
        for d in self.deltas:
            writer.writerow(["tsr_delta", d.n, repr(d.delta)])
        return buf.getvalue()


def build_report(
    cf: CFExpansion,
    series: Sequence[tuple[int, int]],
    r: Fraction | None = None,
    r_digits: int = 0,
    n_max: int | None = None,
) -> DiagnosticReport:
    """Run every diagnostic that the inputs support."""
    lnq = ln_denominators(series)
    stats = {
        "davenport_roth": davenport_roth_stat(lnq),
        "adamczewski_bugeaud": adamczewski_bugeaud_stat(lnq),
        "sondow": sondow_epsilon(cf, lnq),
    }
    deltas = []
    if r is not None:
        top = len(series) - 2 if n_max is None else min(n_max, len(series) - 2)
        for n in range(3, top + 1):
            deltas.append(tsr_delta(r, r_digits, series, n))
    constants = {
        "euler_gamma": EULER_GAMMA,
        "c": wagstaff_c(),
        "epsilon_prediction": sondow_epsilon_limit(),
    }
    return DiagnosticReport(statistics=stats, deltas=deltas, constants=constants)
