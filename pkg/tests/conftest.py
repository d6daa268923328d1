import random
from fractions import Fraction

import pytest

from cflab.catalog import SequenceSpec, default_catalog
from cflab.contfrac import cf_expand_rational, cf_from_quotient_sequence, convergent_list
from cflab.exact import reciprocal_sum


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def mersenne_spec(catalog):
    return SequenceSpec(kind="mersenne", catalog=catalog)


@pytest.fixture(scope="session")
def bm12(mersenne_spec):
    """Exact 12-term Mersenne reciprocal sum."""
    return reciprocal_sum(mersenne_spec, 12)


@pytest.fixture(scope="session")
def bm12_cf(bm12):
    return cf_expand_rational(bm12)


@pytest.fixture(scope="session")
def um21(mersenne_spec):
    """Quotient-sequence CF with 21 Mersenne-number terms, plus convergents."""
    cf, dec = cf_from_quotient_sequence(mersenne_spec, 21)
    return cf, convergent_list(cf), dec


def random_fraction(rng: random.Random, max_digits: int) -> Fraction:
    """Random positive fraction with up to max_digits-digit parts."""
    nd = rng.randint(1, max_digits)
    dd = rng.randint(1, max_digits)
    num = rng.randrange(10 ** (nd - 1), 10**nd)
    den = rng.randrange(max(2, 10 ** (dd - 1)), 10**dd)
    return Fraction(num, den)
