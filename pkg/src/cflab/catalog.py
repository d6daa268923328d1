"""Mersenne exponent catalog, comparison sequences and the doubly-exponential
growth model.

The default catalog is the GIMPS list of the 47 known Mersenne prime
exponents, shipped as ``data/mersenne_exponents.txt``.  Exponents above
20996011 lie in an interval that has not been exhaustively searched; this is
recorded as metadata only and never changes any computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from cflab.errors import CatalogError

# Euler-Mascheroni constant at double precision.
EULER_GAMMA = 0.5772156649015329

# The commonly printed 8-digit rounding of the Euler-Mascheroni constant.
# The reference value c = 2.101893933 of the growth-model constant (see
# cflab.diagnostics.wagstaff_c) is reproduced only from this rounding.
EULER_GAMMA_8 = 0.57721566

# Exponents above this bound have not been exhaustively searched for
# intermediate Mersenne primes.
UNVERIFIED_ABOVE = 20996011

SEQUENCE_KINDS = ("mersenne", "dyadic", "fibonacci-power", "factorial-power", "custom")


def mersenne_number(p: int) -> int:
    """Return 2**p - 1 exactly.  Requires p >= 2."""
    if p < 2:
        raise ValueError(f"exponent must be >= 2, got {p}")
    return (1 << p) - 1


@dataclass(frozen=True)
class MersenneCatalog:
    """Ordered list of Mersenne prime exponents with search-status metadata."""

    exponents: tuple[int, ...]
    verified: tuple[bool, ...] = field(default=())

    def __post_init__(self):
        if not self.verified:
            object.__setattr__(
                self,
                "verified",
                tuple(p <= UNVERIFIED_ABOVE for p in self.exponents),
            )
        prev = 1
        for i, p in enumerate(self.exponents):
            if p < 2:
                raise CatalogError(f"entry {i + 1}: exponent {p} < 2")
            if p <= prev:
                raise CatalogError(
                    f"entry {i + 1}: exponent {p} not greater than previous {prev}"
                )
            prev = p

    def __len__(self) -> int:
        return len(self.exponents)

    def mersenne_numbers(self, count: int | None = None) -> list[int]:
        sel = self.exponents if count is None else self.exponents[:count]
        return [mersenne_number(p) for p in sel]

    def mod4_census(self) -> tuple[int, int, int]:
        """Counts of exponents congruent to 1, 3, and anything else mod 4."""
        c1 = sum(1 for p in self.exponents if p % 4 == 1)
        c3 = sum(1 for p in self.exponents if p % 4 == 3)
        return c1, c3, len(self.exponents) - c1 - c3


def default_catalog() -> MersenneCatalog:
    """The embedded 47-exponent GIMPS list."""
    text = resources.files("cflab").joinpath("data/mersenne_exponents.txt").read_text()
    return parse_catalog(text.splitlines())


def parse_catalog(lines: Iterable[str]) -> MersenneCatalog:
    exponents: list[int] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            p = int(line)
        except ValueError:
            raise CatalogError(f"line {lineno}: not an integer: {raw.strip()!r}")
        if exponents and p == exponents[-1]:
            raise CatalogError(f"line {lineno}: duplicate exponent {p}")
        if exponents and p < exponents[-1]:
            raise CatalogError(
                f"line {lineno}: exponent {p} smaller than previous {exponents[-1]}"
            )
        exponents.append(p)
    try:
        return MersenneCatalog(tuple(exponents))
    except CatalogError as exc:
        raise CatalogError(str(exc)) from None


def load_catalog(source: str | Path | None = None) -> MersenneCatalog:
    """Load an exponent list (one integer per line, ``#`` comments allowed).

    With no source, returns the embedded default list.
    """
    if source is None:
        return default_catalog()
    path = Path(source)
    return parse_catalog(path.read_text().splitlines())


@dataclass(frozen=True)
class SequenceSpec:
    """A family of strictly increasing integers >= 2 whose reciprocals are
    summed, or which serve directly as partial quotients."""

    kind: str
    catalog: MersenneCatalog | None = None
    values: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in SEQUENCE_KINDS:
            raise CatalogError(f"unknown sequence kind {self.kind!r}")
        if self.kind == "custom":
            prev = 1
            for v in self.values:
                if v <= prev:
                    raise CatalogError("custom sequence must be strictly increasing, >= 2")
                prev = v

    def max_terms(self) -> int | None:
        if self.kind in ("mersenne", "dyadic"):
            cat = self.catalog or default_catalog()
            return len(cat)
        if self.kind == "custom":
            return len(self.values)
        return None  # unbounded families

    def terms(self, count: int) -> list[int]:
        """First `count` members of the sequence, as exact integers."""
        if count < 1:
            raise CatalogError("term count must be >= 1")
        limit = self.max_terms()
        if limit is not None and count > limit:
            raise CatalogError(f"requested {count} terms, only {limit} available")
        if self.kind == "mersenne":
            cat = self.catalog or default_catalog()
            return [mersenne_number(p) for p in cat.exponents[:count]]
        if self.kind == "dyadic":
            cat = self.catalog or default_catalog()
            return [1 << p for p in cat.exponents[:count]]
        if self.kind == "fibonacci-power":
            # 2^F_n for the distinct Fibonacci numbers 1, 2, 3, 5, 8, ...
            out, a, b = [], 1, 2
            for _ in range(count):
                out.append(1 << a)
                a, b = b, a + b
            return out
        if self.kind == "factorial-power":
            out, f = [], 1
            for n in range(1, count + 1):
                f *= n
                out.append(1 << f)
            return out
        return list(self.values[:count])


@dataclass(frozen=True)
class WagstaffFit:
    """Least-squares fit of ln(log2 M_n) against the 1-based index n,
    alongside the growth-model line n*e^(-gamma)*ln 2 - ln ln 2."""

    slope: float
    intercept: float
    residuals: tuple[float, ...]
    model_slope: float
    model_intercept: float


def fit_line(ys: Sequence[float]) -> tuple[float, float, tuple[float, ...]]:
    """OLS of ys against the 1-based index: slope, intercept, residuals."""
    xs = range(1, len(ys) + 1)
    n = len(ys)
    sx = sum(xs)
    sy = sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
    intercept = (sy - slope * sx) / n
    residuals = tuple(y - (slope * x + intercept) for x, y in zip(xs, ys))
    return slope, intercept, residuals


def wagstaff_fit(catalog: MersenneCatalog) -> WagstaffFit:
    """Fit y_n = ln(log2 M_n) ~ slope*n + intercept by OLS, with M_n
    idealized as 2^(p_n) so that y_n = ln(p_n).

    In this variable the doubly-exponential growth model is exactly linear:
    p_n ~ 2^(n e^-gamma) gives the line
    n*e^(-gamma)*ln 2 - ln ln 2 ~ 0.3892 n + 0.3665.
    (Keeping the full log2(2^p - 1) instead of p would shift the fit of the
    early small exponents and move slope/intercept to ~0.3862/0.6429.)
    """
    if len(catalog) < 2:
        raise CatalogError("fit needs at least 2 exponents")
    ys = [math.log(p) for p in catalog.exponents]
    if max(ys) == min(ys):
        raise CatalogError("degenerate fit: all values equal")
    slope, intercept, residuals = fit_line(ys)
    return WagstaffFit(
        slope=slope,
        intercept=intercept,
        residuals=residuals,
        model_slope=math.exp(-EULER_GAMMA) * math.log(2.0),
        model_intercept=-math.log(math.log(2.0)),
    )
