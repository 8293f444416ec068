import pytest
from sympy import prime

from bohrstrip.errors import InvalidInputError, PrimeTableResourceError
from bohrstrip.primes import nth_prime, prime_sieve, PrimeTable


def test_prime_sieve():
    assert prime_sieve(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert prime_sieve(1).tolist() == []


@pytest.mark.parametrize("k, expected", [(1, 2), (5, 11), (25, 97), (1000, 7919)])
def test_nth_prime(k, expected):
    assert nth_prime(k) == expected


def test_nth_prime_against_sympy():
    for k in (2, 17, 168, 169, 4321, 20000):
        assert nth_prime(k) == prime(k)


def test_nth_prime_rejects_position_zero():
    with pytest.raises(InvalidInputError):
        nth_prime(0)


def test_table_grows_and_indexes():
    table = PrimeTable(max_primes=50_000)
    initial = len(table)
    assert table.nth(30_000) == prime(30_000)
    assert len(table) > initial
    assert table.index_of(7919) == 1000
    with pytest.raises(InvalidInputError):
        table.index_of(7917)


def test_table_budget():
    table = PrimeTable(max_primes=1000)
    assert table.nth(1000) == 7919
    with pytest.raises(PrimeTableResourceError):
        table.nth(1001)


def test_pnt_constant_is_tight():
    table = PrimeTable()
    epsilon = 0.5
    c = table.pnt_constant(epsilon, count=200)
    ratios = [table.nth(n) / n ** (1 + epsilon) for n in range(1, 201)]
    assert all(table.nth(n) <= c * n ** (1 + epsilon) for n in range(1, 201))
    assert max(ratios) == pytest.approx(c, rel=1e-12)
    with pytest.raises(InvalidInputError):
        table.pnt_constant(0)
