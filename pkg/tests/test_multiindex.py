import math

import numpy as np
import pytest
from sympy import prime

from bohrstrip.errors import InvalidInputError
from bohrstrip.multiindex import index_to_multiindex, log_index, MultiIndex, multiindex_to_index, omega


def test_index_to_multiindex():
    assert index_to_multiindex(1) == MultiIndex()
    assert index_to_multiindex(12) == MultiIndex({1: 2, 2: 1})
    assert index_to_multiindex(2**50 * 7919) == MultiIndex({1: 50, 1000: 1})
    assert index_to_multiindex(9409) == MultiIndex({25: 2})


def test_multiindex_to_index():
    assert multiindex_to_index(MultiIndex([(25, 2)])) == 9409
    assert multiindex_to_index(MultiIndex()) == 1
    for n in (2, 30, 97 * 101, 2**10 * 3**4 * 7919):
        assert multiindex_to_index(index_to_multiindex(n)) == n


def test_round_trip_small_indices():
    for n in range(1, 10_001):
        assert multiindex_to_index(index_to_multiindex(n)) == n


def test_round_trip_random_products():
    rng = np.random.default_rng(17)
    for _ in range(100):
        positions = rng.choice(np.arange(1, 2001), size=int(rng.integers(1, 6)), replace=False)
        alpha = MultiIndex({int(pos): int(rng.integers(1, 4)) for pos in positions})
        n = math.prod(prime(pos) ** exp for pos, exp in alpha)
        assert multiindex_to_index(alpha) == n
        assert index_to_multiindex(n) == alpha


def test_large_prime_cofactor():
    assert index_to_multiindex(2 * 104729) == MultiIndex({1: 1, 10000: 1})


def test_invalid_indices():
    for bad in (0, -3, 2.5, True):
        with pytest.raises(InvalidInputError):
            index_to_multiindex(bad)


def test_normalization():
    assert MultiIndex([(3, 0), (1, 2)]) == MultiIndex([(1, 2)])
    assert list(MultiIndex({4: 1, 2: 3})) == [(2, 3), (4, 1)]
    with pytest.raises(InvalidInputError):
        MultiIndex([(1, 1), (1, 2)])
    with pytest.raises(InvalidInputError):
        MultiIndex([(0, 1)])
    with pytest.raises(InvalidInputError):
        MultiIndex([(2, -1)])


def test_arithmetic():
    alpha = MultiIndex({1: 1})
    beta = MultiIndex({1: 2, 3: 1})
    assert alpha + beta == MultiIndex({1: 3, 3: 1})
    assert alpha + MultiIndex() == alpha
    assert MultiIndex.unit(1, 2) * 3 == MultiIndex.unit(1, 6)
    assert beta.degree() == omega(beta) == 3
    assert beta.factorial() == 2
    assert beta.restrict({3}) == MultiIndex({3: 1})
    assert beta.to_list() == [[1, 2], [3, 1]]


def test_log_index():
    alpha = index_to_multiindex(2**40 * 7919)
    assert float(log_index(alpha)) == pytest.approx(40 * math.log(2) + math.log(7919), rel=1e-15)
    assert log_index(MultiIndex()) == 0
