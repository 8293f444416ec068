""" The growable table of primes behind every multi-index position.

Position ``j`` of a multi-index stands for the j-th prime (1-based, position 1 is the prime 2).
"""
import bisect
import logging
import math
import threading

import numpy as np

from bohrstrip.errors import InvalidInputError, PrimeTableResourceError

log = logging.getLogger(__name__)

DEFAULT_MAX_PRIMES = 2_000_000
INITIAL_SIEVE_LIMIT = 1 << 12


def prime_sieve(nmax):
    """All primes ``<= nmax`` as an int64 array (sieve of Eratosthenes)."""
    if nmax < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(nmax + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, math.isqrt(nmax) + 1):
        if is_prime[i]:
            is_prime[i * i:: i] = False
    return np.nonzero(is_prime)[0].astype(np.int64)


def nth_prime_upper_bound(n):
    # Rosser's bound, valid for n >= 6
    if n < 6:
        return 15
    return int(n * (math.log(n) + math.log(math.log(n)))) + 1


def prime_count_upper_bound(x):
    if x < 17:
        return 7
    return int(1.25506 * x / math.log(x)) + 1


class PrimeTable(object):
    """Ascending primes, grown on demand and never shrunk.

    Readers get a consistent snapshot: growth builds a new array and swaps the reference under a lock.
    """

    def __init__(self, max_primes=DEFAULT_MAX_PRIMES):
        self.max_primes = max_primes
        self._lock = threading.Lock()
        self._primes = prime_sieve(INITIAL_SIEVE_LIMIT)
        self._pnt_cache = {}

    def __len__(self):
        return len(self._primes)

    @property
    def primes(self):
        return self._primes

    @property
    def largest(self):
        return int(self._primes[-1])

    def _grow_to_limit(self, limit):
        with self._lock:
            if limit <= self._primes[-1]:
                return
            if prime_count_upper_bound(limit) > 4 * self.max_primes:
                raise PrimeTableResourceError(
                    f"Growing the prime table to cover {limit} exceeds the budget of {self.max_primes} primes"
                )
            primes = prime_sieve(limit)
            if len(primes) > self.max_primes:
                primes = primes[: self.max_primes]
            log.debug("Prime table grown from %d to %d primes (largest %d)", len(self._primes), len(primes), primes[-1])
            self._primes = primes

    def ensure_count(self, count):
        if count > self.max_primes:
            raise PrimeTableResourceError(f"Prime number {count} requested, the table budget is {self.max_primes} primes")
        if count <= len(self._primes):
            return
        self._grow_to_limit(max(nth_prime_upper_bound(count), 2 * self.largest))
        if count > len(self._primes):
            raise PrimeTableResourceError(f"Prime number {count} does not fit the table budget of {self.max_primes} primes")

    def ensure_value(self, value):
        """Grow until the table holds every prime ``<= value``."""
        if value <= self.largest:
            return
        self._grow_to_limit(max(value, 2 * self.largest))
        if value > self.largest:
            raise PrimeTableResourceError(f"Primes up to {value} do not fit the table budget of {self.max_primes} primes")

    def nth(self, k):
        if k < 1:
            raise InvalidInputError(f"Prime positions start at 1, got {k}")
        self.ensure_count(k)
        return int(self._primes[k - 1])

    def index_of(self, prime):
        """Position of ``prime`` in the table (1-based)."""
        self.ensure_value(prime)
        primes = self._primes
        i = bisect.bisect_left(primes, prime)
        if i == len(primes) or primes[i] != prime:
            raise InvalidInputError(f"{prime} is not a prime")
        return i + 1

    def pnt_constant(self, epsilon, count=None):
        """Smallest C with p_n <= C * n**(1 + epsilon) for all n <= count (default: the stored range)."""
        if epsilon <= 0:
            raise InvalidInputError(f"epsilon must be positive, got {epsilon}")
        if count is None:
            count = len(self._primes)
        self.ensure_count(count)
        key = (float(epsilon), count)
        if key not in self._pnt_cache:
            n = np.arange(1, count + 1, dtype=np.float64)
            scale = n ** (1.0 + epsilon)
            primes = self._primes[:count].astype(np.float64)
            c = float(np.max(primes / scale))
            while np.any(primes > c * scale):
                c = float(np.nextafter(c, np.inf))
            self._pnt_cache[key] = c
        return self._pnt_cache[key]


_table = PrimeTable()


def get_prime_table():
    return _table


def configure(max_primes):
    _table.max_primes = max_primes


def nth_prime(k):
    return _table.nth(k)
