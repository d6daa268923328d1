import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cflab import _euclid_py
from cflab.contfrac import (
    CFExpansion,
    ConvergentStream,
    available_kernels,
    cf_expand_certified,
    cf_expand_paper,
    cf_expand_rational,
    cf_from_quotient_sequence,
    convergent_list,
    convergents,
    error_bounds,
    from_cf,
)
from cflab.errors import CertificationError, PrecisionError
from conftest import random_fraction

positive_fractions = st.fractions(
    min_value=Fraction(0), max_value=Fraction(10**9), max_denominator=10**9
)

UM_47 = "0.31824815840584486942596202748140694243806236564"


class TestKernels:
    def test_python_kernel_always_available(self):
        assert "python" in available_kernels()

    def test_compiled_kernel_built(self):
        # The package ships a compiled kernel; this environment must have it.
        assert "compiled" in available_kernels()

    @given(
        st.integers(min_value=0, max_value=10**40),
        st.integers(min_value=1, max_value=10**40),
    )
    def test_kernels_match_schoolbook(self, p, q):
        from cflab.contfrac import _KERNELS

        want = _euclid_py.schoolbook_cf(p, q)
        for kernel in _KERNELS.values():
            assert kernel(p, q) == want

    def test_kernels_match_on_adversarial_inputs(self):
        from cflab.contfrac import _KERNELS

        # Fibonacci neighbours (all quotients 1) and huge structured numbers.
        a, b = 1, 1
        for _ in range(300):
            a, b = b, a + b
        cases = [(b, a), (a, b), (2**4000 - 1, 2**2000 - 1), (10**300, 7)]
        rng = random.Random(5)
        for _ in range(20):
            cases.append((rng.getrandbits(8000), rng.getrandbits(4000) + 1))
        for p, q in cases:
            want = _euclid_py.schoolbook_cf(p, q)
            for kernel in _KERNELS.values():
                assert kernel(p, q) == want


class TestExpansion:
    def test_known_expansion(self):
        cf = cf_expand_rational(Fraction(331, 651))
        assert cf.a0 == 0
        assert cf.quotients == [1, 1, 29, 11]
        assert cf.tail == "exact"

    def test_integer(self):
        cf = cf_expand_rational(Fraction(7))
        assert (cf.a0, cf.quotients) == (7, [])

    def test_negative_value(self):
        cf = cf_expand_rational(Fraction(-7, 3))
        assert from_cf(cf) == Fraction(-7, 3)
        assert cf.a0 == -3  # floor

    @given(positive_fractions)
    def test_roundtrip(self, r):
        assert from_cf(cf_expand_rational(r)) == r

    @given(positive_fractions)
    def test_canonical_form(self, r):
        cf = cf_expand_rational(r)
        assert all(a >= 1 for a in cf.quotients)
        if cf.quotients:
            assert cf.quotients[-1] >= 2

    def test_rejects_noncanonical_exact(self):
        with pytest.raises(ValueError):
            CFExpansion(a0=0, quotients=[2, 1], tail="exact")
        # truncated prefixes may end in 1
        CFExpansion(a0=0, quotients=[2, 1], tail="truncated", precision=3)


class TestConvergents:
    @given(positive_fractions)
    def test_determinant_identity(self, r):
        series = convergent_list(cf_expand_rational(r))
        for n in range(1, len(series)):
            p_n, q_n = series[n]
            p_prev, q_prev = series[n - 1]
            assert p_n * q_prev - p_prev * q_n == (-1) ** (n - 1)

    @given(positive_fractions)
    def test_alternating_enclosure(self, r):
        series = convergent_list(cf_expand_rational(r))
        for n, (p, q) in enumerate(series[:-1]):
            if n % 2 == 0:
                assert Fraction(p, q) <= r
            else:
                assert Fraction(p, q) >= r
        assert Fraction(*series[-1]) == r

    def test_denominators_strictly_increase(self, bm12_cf):
        series = convergent_list(bm12_cf)
        assert all(a[1] < b[1] for a, b in zip(series[1:], series[2:]))

    def test_stream_state_roundtrip(self, bm12_cf):
        stream = ConvergentStream(bm12_cf)
        for _ in range(10):
            stream.advance()
        state = stream.state()
        resumed = ConvergentStream(bm12_cf, state=state)
        for _ in range(20):
            assert stream.advance() == resumed.advance()

    def test_stream_yields_a0_first(self, bm12_cf):
        first = next(convergents(bm12_cf))
        assert first == (bm12_cf.a0, 1)


class TestCertified:
    def test_certifies_shared_prefix(self):
        r = Fraction(331, 651)
        eps = Fraction(1, 10**12)
        cf = cf_expand_certified(r - eps, r + eps)
        exact = cf_expand_rational(r)
        assert cf.a0 == exact.a0
        assert cf.quotients == exact.quotients[: len(cf.quotients)]
        assert len(cf.quotients) >= 3
        assert cf.tail == "truncated"
        assert cf.precision >= 11

    @settings(max_examples=60)
    @given(positive_fractions, st.integers(min_value=6, max_value=40))
    def test_prefix_of_every_interior_point(self, r, d):
        eps = Fraction(1, 10**d)
        try:
            cf = cf_expand_certified(r - eps, r + eps)
        except CertificationError:
            return
        rng = random.Random(int(r.numerator) % 100003)
        for _ in range(5):
            interior = r - eps + Fraction(rng.randrange(0, 2 * 10**d), 10**d) * eps
            inner = cf_expand_rational(interior)
            assert inner.a0 == cf.a0
            assert inner.quotients[: len(cf.quotients)] == cf.quotients

    def test_wide_interval_rejected(self):
        with pytest.raises(CertificationError, match="integer parts"):
            cf_expand_certified(Fraction(1, 2), Fraction(3, 2))

    def test_no_common_quotient_rejected(self):
        # [0.333, 0.334]: expansions [0;3,333] and [0;2,1,993] share only a0.
        with pytest.raises(CertificationError, match="no common partial quotient"):
            cf_expand_certified(Fraction(333, 1000), Fraction(334, 1000))

    def test_degenerate_interval_is_exact(self):
        cf = cf_expand_certified(Fraction(331, 651), Fraction(331, 651))
        assert cf.tail == "exact"


class TestPaperMode:
    def test_prefix_of_exact(self, bm12):
        paper = cf_expand_paper(bm12, 40)
        exact = cf_expand_rational(bm12)
        assert paper.quotients == exact.quotients[: len(paper.quotients)]
        assert paper.tail == "truncated"

    def test_stop_rule(self, bm12):
        d = 40
        paper = cf_expand_paper(bm12, d)
        series = convergent_list(
            CFExpansion(paper.a0, paper.quotients, tail="truncated", precision=d)
        )
        assert series[-1][1] ** 2 < 10**d  # every kept Q_n obeys Q_n^2 < 10^d
        # the next quotient would have violated the bound
        exact = cf_expand_rational(bm12)
        nxt = exact.quotients[len(paper.quotients)]
        q, q_prev = series[-1][1], series[-2][1]
        assert (nxt * q + q_prev) ** 2 >= 10**d

    def test_certified_is_prefix_of_paper(self, bm12):
        # certified interval +-10^-d never emits more than the stop rule keeps
        d = 40
        eps = Fraction(1, 10**d)
        certified = cf_expand_certified(bm12 - eps, bm12 + eps)
        paper = cf_expand_paper(bm12, d)
        assert len(certified.quotients) <= len(paper.quotients)
        assert certified.quotients == paper.quotients[: len(certified.quotients)]

    def test_full_precision_returns_exact(self):
        cf = cf_expand_paper(Fraction(331, 651), 2000)
        assert cf.tail == "exact"


class TestErrorBounds:
    @settings(max_examples=60)
    @given(positive_fractions)
    def test_strict_sandwich(self, r):
        # Strict on every non-terminal convergent; at the terminal one the
        # upper inequality degenerates to equality.
        series = convergent_list(cf_expand_rational(r))
        for n in range(len(series) - 2):
            p_n, q_n = series[n]
            diff = abs(r - Fraction(p_n, q_n))
            q_next = series[n + 1][1]
            assert Fraction(1, q_n * (q_next + q_n)) < diff
            assert diff < Fraction(1, q_n * q_next)
            b = error_bounds(series, n)
            assert b.lower < b.upper
            assert b.lower == pytest.approx(1 / (q_n * (q_next + q_n)), rel=1e-9)

    def test_refuses_exact_hit(self):
        series = convergent_list(cf_expand_rational(Fraction(331, 651)))
        hit = Fraction(*series[2])
        with pytest.raises(PrecisionError):
            error_bounds(series, 2, r=hit)
        with pytest.raises(ValueError):
            error_bounds(series, len(series) - 1)  # n+1 beyond the series

    def test_log10_upper_for_huge_denominators(self, um21):
        _, series, _ = um21
        b = error_bounds(series, 20)
        assert b.upper == 0.0  # underflows as a float
        assert b.log10_upper < -11000  # but the log-domain bound is usable


class TestSerialization:
    @given(positive_fractions)
    def test_text_roundtrip(self, r):
        cf = cf_expand_rational(r)
        assert CFExpansion.from_text(cf.to_text()) == cf

    @given(positive_fractions)
    def test_json_roundtrip(self, r):
        cf = cf_expand_rational(r)
        assert CFExpansion.from_json(cf.to_json()) == cf

    def test_truncated_header(self):
        cf = CFExpansion(a0=0, quotients=[3, 7, 1], tail="truncated", precision=12)
        text = cf.to_text()
        assert text.splitlines()[0] == "a0=0 tail=truncated:12"
        assert CFExpansion.from_text(text) == cf


class TestQuotientSequence:
    def test_um_digits(self, mersenne_spec):
        _, dec = cf_from_quotient_sequence(mersenne_spec, 13, 47)
        assert dec.digits == UM_47

    def test_quotients_are_sequence_terms(self, mersenne_spec, um21):
        cf, _, _ = um21
        assert cf.a0 == 0
        assert cf.quotients[:5] == [3, 7, 31, 127, 8191]

    def test_refuses_uncertified_digits(self, mersenne_spec):
        with pytest.raises(PrecisionError):
            cf_from_quotient_sequence(mersenne_spec, 3, 10**6)

    def test_default_digit_count_is_certified(self, mersenne_spec):
        cf, dec = cf_from_quotient_sequence(mersenne_spec, 6)
        series = convergent_list(cf)
        assert 10 ** dec.precision < series[-1][1] ** 2


class TestPerformanceScale:
    def test_hundred_thousand_digit_expansion(self):
        rng = random.Random(11)
        r = Fraction(
            rng.randrange(10 ** (10**5 - 1), 10 ** (10**5)),
            rng.randrange(10 ** (10**5 - 1), 10 ** (10**5)),
        )
        cf = cf_expand_rational(r)
        assert from_cf(cf) == r
        assert len(cf.quotients) > 150_000
