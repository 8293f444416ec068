""" Arithmetic progressions of prime positions, their block schemes and the construction parameters.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Tuple

from sympy import isprime

from bohrstrip.errors import BudgetExceededError, InvalidInputError

log = logging.getLogger(__name__)

MAX_BLOCK_POSITIONS = 10_000_000
MAX_POSITION = 2**53


@dataclass(frozen=True)
class Progression:
    """Theta = {u + k*v : k >= 1}, a set of prime positions."""

    u: int
    v: int

    def __post_init__(self):
        if self.u < 1 or self.v < 1:
            raise InvalidInputError(f"Progressions need u, v >= 1, got u={self.u}, v={self.v}")

    def __contains__(self, position):
        return position > self.u and (position - self.u) % self.v == 0

    def element(self, k):
        return self.u + k * self.v

    def first(self, count):
        return [self.u + k * self.v for k in range(1, count + 1)]

    def to_dict(self):
        return {"u": self.u, "v": self.v}


class ComplementOf:
    """Positions outside a given set of positions."""

    def __init__(self, theta):
        self.theta = theta

    def __contains__(self, position):
        return position not in self.theta


def as_theta(theta):
    """Accept a Progression, a ``(u, v)`` pair, a ``{"u": .., "v": ..}`` mapping or an explicit set of positions."""
    if isinstance(theta, (Progression, ComplementOf, frozenset, set)):
        return theta
    if isinstance(theta, dict):
        return Progression(int(theta["u"]), int(theta["v"]))
    if isinstance(theta, (tuple, list)) and len(theta) == 2:
        return Progression(int(theta[0]), int(theta[1]))
    return frozenset(theta)


@dataclass(frozen=True)
class BlockScheme:
    """Theta cut into consecutive blocks B^(1), ..., B^(K) of sizes p, p**2, ..., p**K."""

    u: int
    v: int
    p: int
    blocks: Tuple[Tuple[int, ...], ...]
    block_index: dict = field(default=None, compare=False, repr=False)

    @property
    def K(self):
        return len(self.blocks)

    @property
    def theta(self):
        return Progression(self.u, self.v)

    @property
    def positions(self):
        return [pos for block in self.blocks for pos in block]

    def block_of(self, position):
        """Block number (1-based) holding ``position``, or 0 if it lies in none."""
        return self.block_index.get(position, 0)

    def to_dict(self):
        return {"u": self.u, "v": self.v, "p": self.p, "K": self.K}


def make_blocks(u, v, p, K, m):
    if not isprime(p):
        raise InvalidInputError(f"The block base must be prime, got p={p}")
    if p <= m:
        raise InvalidInputError(f"The block base must exceed the degree (p={p}, m={m})")
    if K < 1:
        raise InvalidInputError(f"At least one block is needed, got K={K}")
    theta = Progression(u, v)
    total = sum(p**k for k in range(1, K + 1))
    if total > MAX_BLOCK_POSITIONS:
        raise BudgetExceededError(f"{K} blocks of base {p} hold {total} positions, more than {MAX_BLOCK_POSITIONS}")
    if theta.element(total) > MAX_POSITION:
        raise InvalidInputError(f"Block positions overflow: the last position {theta.element(total)} exceeds {MAX_POSITION}")
    blocks = []
    start = 1
    for k in range(1, K + 1):
        size = p**k
        blocks.append(tuple(u + j * v for j in range(start, start + size)))
        start += size
    block_index = {pos: k for k, block in enumerate(blocks, 1) for pos in block}
    log.debug("Block scheme u=%d v=%d p=%d K=%d covers positions %d..%d", u, v, p, K, blocks[0][0], blocks[-1][-1])
    return BlockScheme(u=u, v=v, p=p, blocks=tuple(blocks), block_index=block_index)


@dataclass(frozen=True)
class ConstructionParams:
    """Parameters of the maximal strip polynomial for degree ``m``.

    delta solves 2m/(m-1) + epsilon = (2m/(m-1)) / (1 - delta), and b is the midpoint of the interval
    (p**(-delta/(1-delta)), 1) on which p**delta * b**(1-delta) > 1.
    """

    m: int
    p: int
    K: int
    epsilon: float
    delta: float
    b: float
    eta: float = 1.0

    @classmethod
    def from_epsilon(cls, m, p, K, epsilon, eta=1.0):
        if m < 2:
            raise InvalidInputError(f"The degree must be at least 2, got m={m}")
        if epsilon <= 0:
            raise InvalidInputError(f"epsilon must be positive, got {epsilon}")
        if p <= m:
            raise InvalidInputError(f"The block base must exceed the degree (p={p}, m={m})")
        q = 2 * m / (m - 1)
        delta = 1 - q / (q + epsilon)
        low = p ** (-delta / (1 - delta))
        b = (low + 1) / 2
        params = cls(m=m, p=p, K=K, epsilon=epsilon, delta=delta, b=b, eta=eta)
        if not params.growth_factor > 1:
            raise InvalidInputError(f"p**delta * b**(1 - delta) must exceed 1 (p={p}, delta={delta}, b={b})")
        return params

    @property
    def q(self):
        return 2 * self.m / (self.m - 1)

    @property
    def q_epsilon(self):
        return self.q + self.epsilon

    @property
    def growth_factor(self):
        return self.p**self.delta * self.b ** (1 - self.delta)

    @property
    def dirichlet_exponent(self):
        """r = 1 / ((2m/(m-1) + epsilon)(1 + epsilon)), the real part at which the series diverges."""
        return 1 / (self.q_epsilon * (1 + self.epsilon))

    def block_weight(self, k):
        return (self.b / self.p) ** (k * (self.m - 1) * (1 - self.delta) / (2 * self.m))

    def to_dict(self):
        return {
            "m": self.m,
            "p": self.p,
            "K": self.K,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "b": self.b,
            "eta": self.eta,
        }


class WeightSequence(dict):
    """Position -> weight, zero off the blocks."""

    def __missing__(self, position):
        return 0.0

    def power_sum(self, exponent):
        return math.fsum(w**exponent for w in self.values())


def weight_sequence(scheme, params):
    weights = WeightSequence()
    for k, block in enumerate(scheme.blocks, 1):
        w = params.block_weight(k)
        for pos in block:
            weights[pos] = w
    return weights


def geometric_weight_sum(params, K):
    """sum_{k<=K} b**k, the value of sum_l w_l**(2m/(m-1) + epsilon) over K blocks."""
    return math.fsum(params.b**k for k in range(1, K + 1))


def disjoint_theta_family(count):
    """``count`` pairwise disjoint progressions: the odd residues 1, 3, ..., 2*count - 1 modulo 2*count."""
    if count < 1:
        raise InvalidInputError(f"count must be positive, got {count}")
    modulus = 2 * count
    return [Progression(2 * i - 1, modulus) for i in range(1, count + 1)]
