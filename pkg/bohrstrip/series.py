""" Sparse Dirichlet polynomials and their power series counterparts.

A :class:`SparseSeries` maps multi-indices to complex coefficients. On the Dirichlet side the term at alpha is
a_n n^(-s) with n = p^alpha; on the power side it is c_alpha z^alpha. The Bohr transform only changes the tag.
"""
import bisect
import cmath
import logging
import math
from enum import Enum
from types import MappingProxyType

import numpy as np

from bohrstrip.blocks import as_theta
from bohrstrip.errors import BudgetExceededError, InvalidInputError, MissingCoordinateError, SideMismatchError
from bohrstrip.multiindex import EMPTY, index_to_multiindex, log_index, multiindex_to_index, MultiIndex

log = logging.getLogger(__name__)

MAX_TERMS = 10_000_000
# points evaluated per numpy batch
EVAL_CHUNK = 1 << 22


class Side(str, Enum):
    dirichlet = "dirichlet"
    power = "power"


class SparseSeries(object):
    """Immutable finitely supported map MultiIndex -> complex.

    Exact zeros are never stored, and neither is anything of modulus below ``prune``.
    """

    __slots__ = ("_terms", "_side", "_index_cache", "_term_arrays")

    def __init__(self, terms=None, side=Side.dirichlet, prune=0.0):
        side = Side(side)
        stored = {}
        for alpha, coef in (terms or {}).items():
            coef = complex(coef)
            if coef == 0 or abs(coef) < prune:
                continue
            stored[MultiIndex(alpha)] = coef
        self._terms = stored
        self._side = side
        self._index_cache = None
        self._term_arrays = None

    @classmethod
    def _wrap(cls, terms, side):
        # terms already hold MultiIndex keys and nonzero complex values
        series = cls.__new__(cls)
        series._terms = terms
        series._side = side
        series._index_cache = None
        series._term_arrays = None
        return series

    @classmethod
    def from_indices(cls, coefficients, side=Side.dirichlet):
        """Build from ``{n: a_n}``."""
        return cls({index_to_multiindex(n): a for n, a in coefficients.items()}, side=side)

    @classmethod
    def monomial(cls, alpha, coef=1.0, side=Side.dirichlet):
        return cls({MultiIndex(alpha): coef}, side=side)

    @classmethod
    def unit(cls, side=Side.dirichlet):
        return cls._wrap({EMPTY: 1 + 0j}, Side(side))

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def side(self):
        return self._side

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __contains__(self, alpha):
        return alpha in self._terms

    def __getitem__(self, alpha):
        return self._terms.get(alpha, 0j)

    def items(self):
        return self._terms.items()

    def coefficient(self, n):
        """a_n for a positive integer index n."""
        return self._terms.get(index_to_multiindex(n), 0j)

    def __eq__(self, other):
        if not isinstance(other, SparseSeries):
            return NotImplemented
        return self._side == other._side and self._terms == other._terms

    __hash__ = None

    def __repr__(self):
        return f"SparseSeries(side={self._side.value}, terms={len(self._terms)})"

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1, other))

    def __mul__(self, other):
        if isinstance(other, SparseSeries):
            return multiply(self, other)
        return scale(other, self)

    def __rmul__(self, other):
        return scale(other, self)

    def __neg__(self):
        return scale(-1, self)

    def with_side(self, side):
        side = Side(side)
        if side is self._side:
            return self
        return SparseSeries._wrap(self._terms, side)

    def indices(self):
        """alpha -> n = p^alpha for every stored term (computed once)."""
        if self._index_cache is None:
            self._index_cache = {alpha: multiindex_to_index(alpha) for alpha in self._terms}
        return self._index_cache

    def positions(self):
        """Sorted prime positions touched by the support."""
        found = set()
        for alpha in self._terms:
            found.update(pos for pos, _ in alpha)
        return sorted(found)

    def restrict(self, predicate):
        return SparseSeries._wrap({a: c for a, c in self._terms.items() if predicate(a)}, self._side)

    def term_arrays(self):
        """(positions, cols, exps, coefs) with ``cols``/``exps`` padded to the longest multi-index."""
        if self._term_arrays is None:
            positions = self.positions()
            column = {pos: i for i, pos in enumerate(positions)}
            width = max((len(alpha) for alpha in self._terms), default=0)
            cols = np.zeros((len(self._terms), width), dtype=np.int64)
            exps = np.zeros((len(self._terms), width), dtype=np.int64)
            coefs = np.empty(len(self._terms), dtype=np.complex128)
            for t, (alpha, coef) in enumerate(self._terms.items()):
                for i, (pos, exp) in enumerate(alpha):
                    cols[t, i] = column[pos]
                    exps[t, i] = exp
                coefs[t] = coef
            self._term_arrays = (positions, cols, exps, coefs)
        return self._term_arrays


def _check_sides(D, E):
    if D.side is not E.side:
        raise SideMismatchError(f"Cannot combine a {D.side.value} series with a {E.side.value} series")


def check_term_budget(count, what="series"):
    if count > MAX_TERMS:
        raise BudgetExceededError(f"The {what} needs {count} terms, the term budget is {MAX_TERMS}")


def add(D, E):
    _check_sides(D, E)
    terms = dict(D._terms)
    for alpha, coef in E._terms.items():
        value = terms.get(alpha, 0j) + coef
        if value == 0:
            terms.pop(alpha, None)
        else:
            terms[alpha] = value
    return SparseSeries._wrap(terms, D.side)


def add_many(series, side=None):
    series = list(series)
    if not series:
        return SparseSeries(side=side or Side.dirichlet)
    terms = {}
    for D in series:
        _check_sides(series[0], D)
        for alpha, coef in D._terms.items():
            terms[alpha] = terms.get(alpha, 0j) + coef
    return SparseSeries._wrap({a: c for a, c in terms.items() if c != 0}, series[0].side)


def scale(lam, D):
    lam = complex(lam)
    if lam == 0:
        return SparseSeries._wrap({}, D.side)
    terms = {}
    for alpha, coef in D._terms.items():
        value = lam * coef
        if value != 0:
            terms[alpha] = value
    return SparseSeries._wrap(terms, D.side)


def shift(D, alpha):
    """Multiply every term by the monomial at ``alpha`` (n^(-s) times D on the Dirichlet side)."""
    alpha = MultiIndex(alpha)
    return SparseSeries._wrap({beta + alpha: coef for beta, coef in D._terms.items()}, D.side)


def multiply(D, E):
    _check_sides(D, E)
    check_term_budget(len(D) * len(E), "product")
    if len(D) > len(E):
        D, E = E, D
    terms = {}
    get = terms.get
    right = list(E._terms.items())
    for alpha, a in D._terms.items():
        for beta, b in right:
            gamma = alpha + beta
            terms[gamma] = get(gamma, 0j) + a * b
    return SparseSeries._wrap({g: c for g, c in terms.items() if c != 0}, D.side)


def power(D, q):
    if q < 0:
        raise InvalidInputError(f"Powers must be nonnegative, got {q}")
    result = SparseSeries.unit(D.side)
    base = D
    while q:
        if q & 1:
            result = multiply(result, base)
        q >>= 1
        if q:
            base = multiply(base, base)
    return result


def powers(D, k):
    """[D, D**2, ..., D**k] by repeated multiplication."""
    result = [D]
    for _ in range(1, k):
        result.append(multiply(result[-1], D))
    return result


def combine(D, lambdas, powers_of_D=None):
    """D_lambda = lambda_1 D + lambda_2 D**2 + ... + lambda_k D**k."""
    lambdas = [complex(lam) for lam in lambdas]
    if not lambdas:
        raise InvalidInputError("combine needs at least one coefficient")
    if powers_of_D is None:
        powers_of_D = powers(D, len(lambdas))
    return add_many([scale(lam, P) for lam, P in zip(lambdas, powers_of_D)], side=D.side)


def homogeneous_part(D, m):
    return SparseSeries._wrap({a: c for a, c in D._terms.items() if a.degree() == m}, D.side)


def omega_tilde(D):
    return {alpha.degree() for alpha in D._terms}


def is_theta_supported(D, theta):
    theta = as_theta(theta)
    return all(pos in theta for alpha in D._terms for pos, _ in alpha)


def bohr_transform(P):
    """Power series -> Dirichlet series, z^alpha -> (p^alpha)^(-s)."""
    if P.side is not Side.power:
        raise SideMismatchError("The Bohr transform takes a power side series")
    return P.with_side(Side.dirichlet)


def inverse_bohr_transform(D):
    if D.side is not Side.dirichlet:
        raise SideMismatchError("The inverse Bohr transform takes a Dirichlet side series")
    return D.with_side(Side.power)


def coefficient_l1(D):
    return math.fsum(abs(c) for c in D._terms.values())


def h2_norm(D):
    return math.sqrt(math.fsum(abs(c) ** 2 for c in D._terms.values()))


def h2_inner(D, E):
    _check_sides(D, E)
    small, large, swap = (D, E, False) if len(D) <= len(E) else (E, D, True)
    total = 0j
    for alpha, a in small._terms.items():
        b = large._terms.get(alpha)
        if b is not None:
            total += b * a.conjugate() if swap else a * b.conjugate()
    return total


def term_power(alpha, sigma):
    """(p^alpha)^(-sigma) through a high precision logarithm."""
    return math.exp(-sigma * float(log_index(alpha)))


def abs_sum_profile(D, sigma):
    """Sorted indices n_1 < n_2 < ... of the support and the running sums A_{n_i}(D, sigma)."""
    if D.side is not Side.dirichlet:
        raise SideMismatchError("Partial sums A_N are taken on the Dirichlet side")
    indices = D.indices()
    order = sorted(D._terms, key=indices.__getitem__)
    values = np.array([abs(D._terms[a]) * term_power(a, sigma) for a in order], dtype=np.float64)
    return [indices[a] for a in order], np.cumsum(values)


def partial_abs_sum(D, sigma, N=None):
    """A_N(D, sigma) = sum_{n <= N} |a_n| n^(-sigma); ``N=None`` sums everything."""
    if D.side is not Side.dirichlet:
        raise SideMismatchError("Partial sums A_N are taken on the Dirichlet side")
    indices = D.indices()
    return math.fsum(abs(c) * term_power(a, sigma) for a, c in D._terms.items() if N is None or indices[a] <= N)


def profile_value(profile, N):
    """A_N read off an :func:`abs_sum_profile`."""
    ns, sums = profile
    i = bisect.bisect_right(ns, N)
    return float(sums[i - 1]) if i else 0.0


def evaluate_dirichlet(D, s):
    s = complex(s)
    if s.real < 0:
        raise InvalidInputError(f"Dirichlet series are evaluated on Re s >= 0, got {s}")
    total = 0j
    for alpha, coef in D._terms.items():
        total += coef * cmath.exp(-s * float(log_index(alpha)))
    return total


def evaluate_power(D, z):
    """Evaluate at a point given as ``{position: z_j}`` or as a sequence with ``z[j - 1] = z_j``."""
    if not hasattr(z, "get"):
        z = {j: value for j, value in enumerate(z, 1)}
    total = 0j
    for alpha, coef in D._terms.items():
        term = coef
        for pos, exp in alpha:
            if pos not in z:
                raise MissingCoordinateError(f"No coordinate given for position {pos}")
            term *= complex(z[pos]) ** exp
        total += term
    return total


def evaluate(D, point):
    if D.side is Side.dirichlet:
        return evaluate_dirichlet(D, point)
    return evaluate_power(D, point)


def evaluate_many(D, Z):
    """Power side values at the rows of ``Z``, columns ordered like ``D.positions()``."""
    positions, cols, exps, coefs = D.term_arrays()
    Z = np.asarray(Z, dtype=np.complex128)
    if Z.ndim != 2 or Z.shape[1] != len(positions):
        raise InvalidInputError(f"Expected points with {len(positions)} coordinates, got shape {Z.shape}")
    if not len(coefs):
        return np.zeros(Z.shape[0], dtype=np.complex128)
    if cols.shape[1] == 0:
        return np.full(Z.shape[0], coefs.sum(), dtype=np.complex128)
    per_point = max(1, cols.size)
    step = max(1, EVAL_CHUNK // per_point)
    out = np.empty(Z.shape[0], dtype=np.complex128)
    for start in range(0, Z.shape[0], step):
        block = Z[start:start + step]
        monomials = np.prod(block[:, cols] ** exps, axis=2)
        out[start:start + step] = monomials @ coefs
    return out


def dirichlet_point_to_torus(D, s):
    """z_j = p_j^(-s) for the positions of D."""
    return {pos: cmath.exp(-complex(s) * float(log_index(MultiIndex.unit(pos)))) for pos in D.positions()}
