import math

import pytest
from hypothesis import given, strategies as st

from cflab.catalog import (
    EULER_GAMMA,
    MersenneCatalog,
    SequenceSpec,
    UNVERIFIED_ABOVE,
    default_catalog,
    fit_line,
    load_catalog,
    mersenne_number,
    parse_catalog,
    wagstaff_fit,
)
from cflab.errors import CatalogError


class TestMersenneNumber:
    def test_small_values(self):
        assert mersenne_number(2) == 3
        assert mersenne_number(3) == 7
        assert mersenne_number(5) == 31
        assert mersenne_number(13) == 8191

    @given(st.integers(min_value=2, max_value=2000))
    def test_all_p_bits_set(self, p):
        m = mersenne_number(p)
        assert m.bit_length() == p
        assert m & (m + 1) == 0  # 2^p - 1 has every bit below p set

    def test_rejects_small_exponent(self):
        with pytest.raises(ValueError):
            mersenne_number(1)


class TestDefaultCatalog:
    def test_size_and_extremes(self, catalog):
        assert len(catalog) == 47
        assert catalog.exponents[0] == 2
        assert max(catalog.exponents) == 43112609

    def test_strictly_increasing(self, catalog):
        assert all(a < b for a, b in zip(catalog.exponents, catalog.exponents[1:]))

    def test_mod4_census(self, catalog):
        assert catalog.mod4_census() == (27, 19, 1)

    def test_verified_metadata(self, catalog):
        flags = dict(zip(catalog.exponents, catalog.verified))
        assert flags[20996011] is True
        assert flags[43112609] is False
        assert all(flags[p] == (p <= UNVERIFIED_ABOVE) for p in catalog.exponents)

    def test_mersenne_numbers_prefix(self, catalog):
        assert catalog.mersenne_numbers(3) == [3, 7, 31]


class TestParseCatalog:
    def test_comments_and_blanks(self):
        cat = parse_catalog(["# header", "", "2", "3  # inline", "5"])
        assert cat.exponents == (2, 3, 5)

    def test_non_integer_line(self):
        with pytest.raises(CatalogError, match="line 2"):
            parse_catalog(["2", "three"])

    def test_duplicate(self):
        with pytest.raises(CatalogError, match="duplicate"):
            parse_catalog(["2", "3", "3"])

    def test_decreasing(self):
        with pytest.raises(CatalogError, match="smaller than previous"):
            parse_catalog(["5", "3"])

    def test_exponent_below_two(self):
        with pytest.raises(CatalogError):
            parse_catalog(["1", "2"])

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "cat.txt"
        path.write_text("2\n3\n5\n7\n")
        assert load_catalog(path).exponents == (2, 3, 5, 7)

    def test_load_default(self, catalog):
        assert load_catalog(None).exponents == catalog.exponents


class TestSequenceSpec:
    def test_mersenne_terms(self, mersenne_spec):
        assert mersenne_spec.terms(4) == [3, 7, 31, 127]

    def test_dyadic_terms(self, catalog):
        spec = SequenceSpec(kind="dyadic", catalog=catalog)
        assert spec.terms(4) == [4, 8, 32, 128]

    def test_fibonacci_power_terms(self):
        spec = SequenceSpec(kind="fibonacci-power")
        assert spec.terms(5) == [2**1, 2**2, 2**3, 2**5, 2**8]

    def test_factorial_power_terms(self):
        spec = SequenceSpec(kind="factorial-power")
        assert spec.terms(4) == [2**1, 2**2, 2**6, 2**24]

    def test_custom_terms(self):
        spec = SequenceSpec(kind="custom", values=(3, 7, 31))
        assert spec.terms(2) == [3, 7]
        assert spec.max_terms() == 3

    def test_custom_must_increase(self):
        with pytest.raises(CatalogError):
            SequenceSpec(kind="custom", values=(3, 3))

    def test_unknown_kind(self):
        with pytest.raises(CatalogError):
            SequenceSpec(kind="geometric")

    def test_count_beyond_catalog(self, mersenne_spec):
        assert mersenne_spec.max_terms() == 47
        with pytest.raises(CatalogError):
            mersenne_spec.terms(48)

    def test_count_must_be_positive(self, mersenne_spec):
        with pytest.raises(CatalogError):
            mersenne_spec.terms(0)

    def test_terms_strictly_increasing(self, catalog):
        for kind in ("mersenne", "dyadic", "fibonacci-power", "factorial-power"):
            spec = SequenceSpec(kind=kind, catalog=catalog)
            terms = spec.terms(8)
            assert all(a < b for a, b in zip(terms, terms[1:]))
            assert terms[0] >= 2


class TestCatalogValidation:
    def test_rejects_unsorted(self):
        with pytest.raises(CatalogError):
            MersenneCatalog(exponents=(3, 2))

    def test_rejects_tiny_exponent(self):
        with pytest.raises(CatalogError):
            MersenneCatalog(exponents=(1, 2))


class TestWagstaffFit:
    def test_fit_line_recovers_exact_line(self):
        # OLS through points exactly on a line returns it to full precision.
        slope_in, intercept_in = 0.385366, 0.669113
        ys = [slope_in * n + intercept_in for n in range(1, 48)]
        slope, intercept, residuals = fit_line(ys)
        assert slope == pytest.approx(slope_in, rel=1e-10)
        assert intercept == pytest.approx(intercept_in, rel=1e-10)
        assert max(abs(r) for r in residuals) < 1e-9

    def test_default_catalog_fit(self, catalog):
        fit = wagstaff_fit(catalog)
        assert fit.slope == pytest.approx(0.3854, abs=5e-4)
        assert fit.intercept == pytest.approx(0.6691, abs=5e-3)
        assert len(fit.residuals) == 47

    def test_model_line_constants(self, catalog):
        fit = wagstaff_fit(catalog)
        assert fit.model_slope == pytest.approx(
            math.exp(-EULER_GAMMA) * math.log(2.0), rel=1e-15
        )
        assert fit.model_slope == pytest.approx(0.3892, abs=5e-4)
        assert fit.model_intercept == pytest.approx(0.3665, abs=5e-4)

    def test_needs_two_points(self):
        with pytest.raises(CatalogError):
            wagstaff_fit(MersenneCatalog(exponents=(2,)))
