""" Finite multi-indices and their correspondence with positive integers n = p^alpha.
"""
import functools
import math

import mpmath

from bohrstrip.errors import InvalidInputError
from bohrstrip.primes import get_prime_table

LOG_DPS = 40


class MultiIndex(tuple):
    """A finite multi-index stored as sorted ``(position, exponent)`` pairs with positive exponents.

    ``alpha + beta`` is multi-index addition, which corresponds to multiplying the integers p^alpha and p^beta.
    """

    __slots__ = ()

    def __new__(cls, entries=()):
        if isinstance(entries, MultiIndex):
            return entries
        if hasattr(entries, "items"):
            entries = entries.items()
        merged = {}
        for pos, exp in entries:
            if isinstance(pos, bool) or isinstance(exp, bool) or int(pos) != pos or int(exp) != exp:
                raise InvalidInputError(f"Multi-index entries must be integers, got ({pos!r}, {exp!r})")
            pos, exp = int(pos), int(exp)
            if pos < 1:
                raise InvalidInputError(f"Multi-index positions start at 1, got {pos}")
            if exp < 0:
                raise InvalidInputError(f"Multi-index exponents must be nonnegative, got {exp} at position {pos}")
            if pos in merged:
                raise InvalidInputError(f"Duplicate position {pos} in multi-index")
            if exp:
                merged[pos] = exp
        return tuple.__new__(cls, sorted(merged.items()))

    @classmethod
    def trusted(cls, entries):
        """Wrap entries already known to be sorted, duplicate free and positive."""
        return tuple.__new__(cls, entries)

    @classmethod
    def unit(cls, position, exponent=1):
        return cls.trusted(((position, exponent),)) if exponent else EMPTY

    def degree(self):
        return sum(exp for _, exp in self)

    def support(self):
        return frozenset(pos for pos, _ in self)

    def exponent(self, position):
        for pos, exp in self:
            if pos == position:
                return exp
        return 0

    def restrict(self, positions):
        """The part of this multi-index on ``positions`` (anything supporting ``in``)."""
        return MultiIndex.trusted(tuple(e for e in self if e[0] in positions))

    def relabel(self, mapping):
        """Move position j to ``mapping[j]``; the mapping must be increasing on the support."""
        return MultiIndex.trusted(tuple((mapping[pos], exp) for pos, exp in self))

    def factorial(self):
        """alpha! = prod alpha_j!"""
        return math.prod(math.factorial(exp) for _, exp in self)

    def __add__(self, other):
        if not self:
            return other
        if not other:
            return self
        merged = dict(self)
        for pos, exp in other:
            merged[pos] = merged.get(pos, 0) + exp
        return MultiIndex.trusted(tuple(sorted(merged.items())))

    def __mul__(self, scalar):
        if scalar == 0:
            return EMPTY
        return MultiIndex.trusted(tuple((pos, exp * scalar) for pos, exp in self))

    def to_list(self):
        return [[pos, exp] for pos, exp in self]

    def __repr__(self):
        return f"MultiIndex({list(self)!r})"


EMPTY = MultiIndex.trusted(())


def omega(alpha):
    """|alpha|, the number of prime factors of p^alpha counted with multiplicity."""
    return alpha.degree()


def multiindex_to_index(alpha):
    table = get_prime_table()
    n = 1
    for pos, exp in alpha:
        n *= table.nth(pos) ** exp
    return n


def index_to_multiindex(n):
    if isinstance(n, bool) or int(n) != n:
        raise InvalidInputError(f"Dirichlet indices are positive integers, got {n!r}")
    n = int(n)
    if n < 1:
        raise InvalidInputError(f"Dirichlet indices are positive integers, got {n}")
    table = get_prime_table()
    entries = []
    rest = n
    position = 0
    while rest > 1:
        if position >= len(table):
            table.ensure_value(min(2 * table.largest, math.isqrt(rest) + 1))
        prime = int(table.primes[position])
        if prime * prime > rest:
            # the cofactor has no prime factor below its square root
            entries.append((table.index_of(rest), 1))
            break
        position += 1
        if rest % prime:
            continue
        exp = 0
        while rest % prime == 0:
            rest //= prime
            exp += 1
        entries.append((position, exp))
    return MultiIndex.trusted(tuple(sorted(entries)))


@functools.lru_cache(maxsize=None)
def log_prime(position):
    with mpmath.workdps(LOG_DPS):
        return mpmath.log(get_prime_table().nth(position))


@functools.lru_cache(maxsize=1 << 20)
def log_index(alpha):
    """ln(p^alpha) with at least 30 significant digits."""
    if not alpha:
        return mpmath.mpf(0)
    with mpmath.workdps(LOG_DPS):
        return mpmath.fsum(exp * log_prime(pos) for pos, exp in alpha)
