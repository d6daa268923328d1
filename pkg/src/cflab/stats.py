"""Running Khinchin means, Levy roots, sign changes, records, Gauss-Kuzmin
histograms and the reference constants K and L.

All means and roots are evaluated in the log domain; partial quotients and
convergent denominators are only ever touched through their logarithms, so
series with millions of terms or with 10^5-digit quotients cannot overflow.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import mpmath

from cflab.contfrac import CFExpansion, ConvergentStream
from cflab.exact import log_of_bigint

_LN2 = math.log(2.0)

# Khinchin constant, published digits (validation target for the series).
KHINCHIN_REFERENCE = 2.685452001065306


@dataclass
class StatSeries:
    """Ordered (n, value) samples of one statistic, CSV/JSON exportable."""

    name: str
    entries: list[tuple[int, float]]
    reference: float | None = None
    extra: dict[str, list] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def values(self) -> list[float]:
        return [v for _, v in self.entries]

    def final(self) -> tuple[int, float]:
        return self.entries[-1]

    def header(self) -> list[str]:
        cols = ["n", "value"]
        if self.reference is not None:
            cols += ["reference", "delta"]
        cols += sorted(self.extra)
        return cols

    def rows(self) -> Iterator[list]:
        extras = sorted(self.extra)
        for i, (n, v) in enumerate(self.entries):
            row: list = [n, repr(v)]
            if self.reference is not None:
                row += [repr(self.reference), repr(v - self.reference)]
            row += [self.extra[k][i] for k in extras]
            yield row

    def to_csv(self) -> str:
        buf = io.StringIO(newline="")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header())
        writer.writerows(self.rows())
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "reference": self.reference,
                "entries": self.entries,
                "extra": self.extra,
                "metadata": self.metadata,
            }
        )


# --- reference constants ---


def levy_constant() -> float:
    """exp(pi^2 / (12 ln 2)) = 3.27582291872..."""
    return math.exp(math.pi**2 / (12.0 * _LN2))


def khinchin_estimate(target_error: float) -> tuple[float, float, int]:
    """Khinchin's constant by the zeta-accelerated series, with a rigorous
    tail bound.

    ln K * ln 2 = sum_{j>=1} (zeta(2j) - 1)/j * sum_{k=1}^{2j-1} (-1)^(k+1)/k.
    Terms decay like 4^-j: zeta(2j)-1 < 1.4 * 2^-2j (j >= 1) and the inner
    alternating sum lies in (ln 2, 1], so the tail after J terms is below
    (1.4/(J+1)) * 4^-(J+1) * 4/3.  Returns (value, tail_bound, terms).
    """
    if not (1e-12 < target_error < 1e-3):
        raise ValueError("target_error must lie strictly between 1e-12 and 1e-3")
    terms = 4
    while _khinchin_tail_bound(terms) > target_error / 4.0:
        terms += 1
        if terms > 200:
            raise ValueError("tolerance unreachable")
    with mpmath.workdps(30):
        acc = mpmath.mpf(0)
        harm = mpmath.mpf(0)
        k = 0
        for j in range(1, terms + 1):
            while k < 2 * j - 1:
                k += 1
                harm += mpmath.mpf(-1) ** (k + 1) / k
            acc += (mpmath.zeta(2 * j) - 1) / j * harm
        value = float(mpmath.exp(acc / mpmath.ln(2)))
    return value, _khinchin_tail_bound(terms), terms


def _khinchin_tail_bound(terms: int) -> float:
    # Bound on the tail of the series for ln K * ln 2, propagated to K:
    # |K - K_J| <= K * tail(ln K) / ln 2 <= 3 * tail / 0.69 < 4.4 * tail.
    tail_lnk_ln2 = (1.4 / (terms + 1)) * 4.0 ** (-(terms + 1)) * (4.0 / 3.0)
    return 4.4 * tail_lnk_ln2


def khinchin_constant(target_error: float = 1e-9) -> float:
    """Khinchin's constant K = 2.685452001... within target_error."""
    return khinchin_estimate(target_error)[0]


def khinchin_partial_product(m_max: int) -> float:
    """Brute-force partial product over m <= m_max; monotone increasing in
    m_max and strictly below K.  Independent oracle for the series."""
    acc = 0.0
    for m in range(1, m_max + 1):
        acc += math.log2(m) * math.log1p(1.0 / (m * (m + 2)))
    return math.exp(acc)


# --- running statistics over a continued fraction ---


def _stride_indices(total: int, stride: int) -> Iterator[int]:
    for n in range(1, total + 1):
        if n % stride == 0 or n == total:
            yield n


def running_khinchin(cf: CFExpansion, stride: int = 1) -> StatSeries:
    """K(n) = (a_1 ... a_n)^(1/n), computed as exp(mean of ln a_k)."""
    entries = []
    acc = 0.0
    total = len(cf.quotients)
    keep = set(_stride_indices(total, stride))
    for n, a in enumerate(cf.quotients, start=1):
        acc += log_of_bigint(a)
        if n in keep:
            entries.append((n, math.exp(acc / n)))
    return StatSeries(name="khinchin_mean", entries=entries, metadata={"stride": stride})


def running_levy(cf: CFExpansion, stride: int = 1) -> StatSeries:
    """L(n) = Q_n^(1/n) via exp(ln Q_n / n); Q_n is never made a float."""
    entries = []
    total = len(cf.quotients)
    keep = set(_stride_indices(total, stride))
    stream = ConvergentStream(cf)
    stream.advance()  # skip n = 0
    for n in range(1, total + 1):
        _, q = stream.advance()
        if n in keep:
            entries.append((n, math.exp(log_of_bigint(q) / n)))
    return StatSeries(name="levy_root", entries=entries, metadata={"stride": stride})


def sign_changes(series: StatSeries, reference: float) -> StatSeries:
    """Cumulative count of strict sign changes of (value - reference).

    Exact hits neither count nor reset the tracked sign.
    """
    if not series.entries:
        raise ValueError("empty series")
    counts = []
    last_sign = 0
    total = 0
    for n, v in series.entries:
        sign = (v > reference) - (v < reference)
        if sign != 0:
            if last_sign != 0 and sign != last_sign:
                total += 1
            last_sign = sign
        counts.append((n, float(total)))
    return StatSeries(
        name=f"{series.name}_sign_changes",
        entries=counts,
        metadata={"reference": reference},
    )


def record_indices(series: StatSeries, reference: float) -> list[int]:
    """Indices n where |value - reference| sets a strict new minimum."""
    if not series.entries:
        raise ValueError("empty series")
    best = math.inf
    records = []
    for n, v in series.entries:
        d = abs(v - reference)
        if d < best:
            best = d
            records.append(n)
    return records


def gauss_kuzmin_theoretical(m: int) -> float:
    """Limiting frequency log2(1 + 1/(m(m+2))) of the partial quotient m."""
    return math.log2(1.0 + 1.0 / (m * (m + 2)))


@dataclass(frozen=True)
class GaussKuzminHistogram:
    m_max: int
    total: int
    counts: tuple[int, ...]        # counts[m-1] for m = 1..m_max
    overflow: int                  # quotients > m_max

    def frequency(self, m: int) -> float:
        return self.counts[m - 1] / self.total

    def frequencies(self) -> list[float]:
        return [c / self.total for c in self.counts]

    def overflow_frequency(self) -> float:
        return self.overflow / self.total

    def theoretical(self) -> list[float]:
        return [gauss_kuzmin_theoretical(m) for m in range(1, self.m_max + 1)]

    def to_csv(self) -> str:
        buf = io.StringIO(newline="")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["m", "count", "frequency", "theoretical"])
        for m in range(1, self.m_max + 1):
            writer.writerow(
                [m, self.counts[m - 1], repr(self.frequency(m)),
                 repr(gauss_kuzmin_theoretical(m))]
            )
        writer.writerow([f">{self.m_max}", self.overflow,
                         repr(self.overflow_frequency()), ""])
        return buf.getvalue()


def gauss_kuzmin_histogram(cf: CFExpansion, m_max: int) -> GaussKuzminHistogram:
    """Empirical partial-quotient frequencies with an overflow bucket."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    counts = [0] * m_max
    overflow = 0
    for a in cf.quotients:
        if a <= m_max:
            counts[a - 1] += 1
        else:
            overflow += 1
    return GaussKuzminHistogram(
        m_max=m_max,
        total=len(cf.quotients),
        counts=tuple(counts),
        overflow=overflow,
    )


def power_law_fit(
    series: StatSeries, reference: float, n_min: int = 1, n_max: int | None = None
) -> tuple[float, float]:
    """Fit |value - reference| ~ amplitude * n^exponent by log-log OLS."""
    pts = [
        (math.log(n), math.log(abs(v - reference)))
        for n, v in series.entries
        if n >= n_min and (n_max is None or n <= n_max) and v != reference
    ]
    if len(pts) < 2:
        raise ValueError("not enough points for a power-law fit")
    n = len(pts)
    sx = sum(x for x, _ in pts)
    sy = sum(y for _, y in pts)
    sxx = sum(x * x for x, _ in pts)
    sxy = sum(x * y for x, y in pts)
    exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx)
    amplitude = math.exp((sy - exponent * sx) / n)
    return amplitude, exponent
