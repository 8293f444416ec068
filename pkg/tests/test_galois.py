import math

import pytest

from bohrstrip.constructors import make_unimodular_poly, unimodular_norm_bound
from bohrstrip.errors import InvalidInputError
from bohrstrip.galois import GaloisField, get_field, unimodular_floor
from bohrstrip.multiindex import MultiIndex
from bohrstrip.norms import sup_norm_estimate


def test_prime_field():
    field = GaloisField(3, 1)
    assert [field.trace(a) for a in range(3)] == [0, 1, 2]
    assert field.character(0) == 1
    assert field.mul(2, 2) == 1


def test_extension_field():
    field = get_field(5, 2)
    assert field.order == 25
    elements = range(field.order)
    for a in elements:
        assert field.frobenius(a, 2) == a
        if a:
            inverse = int(field.antilog[(-field.log[a]) % (field.order - 1)])
            assert field.mul(a, inverse) == 1
    for a in range(0, 25, 3):
        for b in range(0, 25, 4):
            assert field.trace(field.add(a, b)) == (field.trace(a) + field.trace(b)) % 5
            assert field.mul(a, b) == field.mul(b, a)
    assert {field.trace(a) for a in elements} == set(range(5))


def test_field_rejects():
    with pytest.raises(InvalidInputError):
        GaloisField(4, 1)
    with pytest.raises(InvalidInputError):
        GaloisField(5, 0)


def test_unimodular_floor():
    assert unimodular_floor(3, 2) == pytest.approx(1)
    assert unimodular_floor(5, 2) == pytest.approx(2 * math.cos(2 * math.pi / 5))


def test_unimodular_polynomial():
    R = make_unimodular_poly(3, 1, 2)
    assert len(R) == 6
    assert R[MultiIndex({1: 1, 2: 1})] == pytest.approx(2)
    assert abs(R[MultiIndex({2: 1, 3: 1})]) == pytest.approx(2)
    assert abs(R[MultiIndex({3: 2})]) == pytest.approx(1)
    lower, _ = sup_norm_estimate(R)
    assert lower <= unimodular_norm_bound(3, 1, 2)


def test_random_unimodular_polynomial_is_seeded():
    R = make_unimodular_poly(5, 1, 2, method="random", seed=1)
    assert R == make_unimodular_poly(5, 1, 2, method="random", seed=1)
    assert {round(abs(c), 12) for c in R.terms.values()} == {1.0, 2.0}
    with pytest.raises(InvalidInputError):
        make_unimodular_poly(5, 1, 2, method="other")
