""" Arithmetic in the field with p**k elements and its absolute trace.

Elements are the integers 0 .. p**k - 1; the base p digits of an element are its coefficients in the basis
1, x, ..., x**(k-1) of F_p[x] / (f) for a primitive polynomial f of degree k.
"""
import cmath
import functools
import itertools
import logging
import math

import numpy as np
from sympy import isprime

from bohrstrip.errors import BudgetExceededError, FieldConstructionError, InvalidInputError

log = logging.getLogger(__name__)

# multisets enumerated by unimodular_floor
FLOOR_ENUMERATION_LIMIT = 2_000_000


class GaloisField(object):
    """The field with ``p**k`` elements.

    Attributes:
        p (int): characteristic
        k (int): degree over the prime field
        order (int): p**k
        modulus (tuple): coefficients f_0 .. f_{k-1} of the monic primitive polynomial x**k + ... + f_0
    """

    def __init__(self, p, k=1):
        if not isprime(p):
            raise InvalidInputError(f"The characteristic must be prime, got {p}")
        if k < 1:
            raise InvalidInputError(f"The field degree must be positive, got {k}")
        self.p = p
        self.k = k
        self.order = p**k
        self.digits = np.array([[(e // p**i) % p for i in range(k)] for e in range(self.order)], dtype=np.int64)
        self.modulus, self.antilog = self._find_primitive()
        self.log = np.full(self.order, -1, dtype=np.int64)
        self.log[self.antilog] = np.arange(self.order - 1)
        self.trace_table = self._trace_table()
        log.debug("Field of order %d built from modulus %s", self.order, self.modulus)

    def _encode(self, coeffs):
        return sum(int(c) * self.p**i for i, c in enumerate(coeffs))

    def _times_x(self, coeffs, modulus):
        # x * (c_0 + ... + c_{k-1} x^{k-1}) reduced with x^k = -(f_0 + ... + f_{k-1} x^{k-1})
        top = coeffs[-1]
        shifted = [0] + coeffs[:-1]
        return [(s - top * f) % self.p for s, f in zip(shifted, modulus)]

    def _find_primitive(self):
        p, k, order = self.p, self.k, self.order
        one = [1] + [0] * (k - 1)
        for tail in itertools.product(range(p), repeat=k):
            modulus = list(tail)
            if modulus[0] == 0:
                continue
            powers = []
            element = one
            for i in range(order - 1):
                code = self._encode(element)
                if i and code == 1:
                    break
                powers.append(code)
                element = self._times_x(element, modulus)
            else:
                if self._encode(element) == 1:
                    return tuple(modulus), np.array(powers, dtype=np.int64)
        raise FieldConstructionError(f"No primitive polynomial of degree {k} over F_{p} found")

    def add(self, a, b):
        return self._encode((self.digits[a] + self.digits[b]) % self.p)

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self.antilog[(self.log[a] + self.log[b]) % (self.order - 1)])

    def product(self, elements):
        result = 1
        for e in elements:
            result = self.mul(result, e)
            if result == 0:
                break
        return result

    def frobenius(self, a, i=1):
        """a ** (p ** i)"""
        if a == 0:
            return 0
        return int(self.antilog[(self.log[a] * self.p**i) % (self.order - 1)])

    def _trace_table(self):
        table = np.zeros(self.order, dtype=np.int64)
        for a in range(1, self.order):
            digits = np.zeros(self.k, dtype=np.int64)
            for i in range(self.k):
                digits = (digits + self.digits[self.frobenius(a, i)]) % self.p
            if np.any(digits[1:]):
                raise FieldConstructionError(f"Trace of {a} left the prime field")
            table[a] = digits[0]
        return table

    def trace(self, a):
        return int(self.trace_table[a])

    def character(self, a):
        """The additive character exp(2 pi i tr(a) / p)."""
        return cmath.exp(2j * math.pi * self.trace(a) / self.p)


@functools.lru_cache(maxsize=None)
def get_field(p, k):
    return GaloisField(p, k)


@functools.lru_cache(maxsize=None)
def unimodular_floor(p, m):
    """Smallest nonzero modulus of a sum of at most m! p-th roots of unity (exhaustive, 1e-9 zero floor)."""
    terms = math.factorial(m)
    count = math.comb(terms + p, p) - 1
    if count > FLOOR_ENUMERATION_LIMIT:
        raise BudgetExceededError(f"Enumerating {count} sums of roots of unity exceeds {FLOOR_ENUMERATION_LIMIT}")
    roots = [cmath.exp(2j * math.pi * j / p) for j in range(p)]
    floor = math.inf
    for size in range(1, terms + 1):
        for multiset in itertools.combinations_with_replacement(range(p), size):
            value = abs(sum(roots[j] for j in multiset))
            if 1e-9 < value < floor:
                floor = value
    return floor
