""" Sup norm brackets of polynomials on the polytorus.
"""
import logging
import math

import numpy as np

from bohrstrip.errors import BudgetExceededError
from bohrstrip.series import coefficient_l1, evaluate_many, omega_tilde, Side

log = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 12_000_000
# coordinate phase ascent is only run on polynomials with at most this many variables
ASCENT_MAX_VARIABLES = 64
ASCENT_PHASES = 32
ASCENT_SWEEPS = 3
# rounding allowance added to rigorous upper bounds
UPPER_ROUNDING = 1e-12


def _power_side(D):
    return D if D.side is Side.power else D.with_side(Side.power)


def _coordinate_ascent(D, point, value):
    d = point.shape[0]
    phases = np.exp(2j * np.pi * np.arange(ASCENT_PHASES) / ASCENT_PHASES)
    for _ in range(ASCENT_SWEEPS):
        improved = False
        for j in range(d):
            candidates = np.repeat(point[np.newaxis, :], ASCENT_PHASES, axis=0)
            candidates[:, j] = point[j] * phases
            values = np.abs(evaluate_many(D, candidates))
            best = int(np.argmax(values))
            if values[best] > value * (1 + 1e-15):
                point = candidates[best]
                value = float(values[best])
                improved = True
        if not improved:
            break
    return point, value


def sup_norm_search(D, samples=64, seed=0):
    """Largest |D(z)| found on the polytorus and the point attaining it.

    Tries the all-ones point and ``samples`` seeded random points, then refines the best one by coordinate
    phase ascent when there are few variables.
    """
    D = _power_side(D)
    positions = D.positions()
    if not D:
        return 0.0, {}
    d = len(positions)
    rng = np.random.default_rng(seed)
    points = np.exp(2j * np.pi * rng.random((samples + 1, d)))
    points[0, :] = 1.0
    values = np.abs(evaluate_many(D, points))
    best = int(np.argmax(values))
    point, value = points[best], float(values[best])
    if 0 < d <= ASCENT_MAX_VARIABLES:
        point, value = _coordinate_ascent(D, point, value)
    return value, dict(zip(positions, (complex(z) for z in point)))


def sup_norm_estimate(D, samples=64, seed=0):
    """(lower, upper) with lower <= sup_T |D| <= upper; upper is the sum of coefficient moduli."""
    D = _power_side(D)
    upper = coefficient_l1(D)
    lower, _ = sup_norm_search(D, samples=samples, seed=seed)
    return min(lower, upper), upper


def _grid_sizes(degrees, slack_target):
    """Smallest grid sizes M_j > 2 n_j with prod sec(n_j pi / M_j) <= 1 + slack_target, split evenly."""
    per_factor = (1 + slack_target) ** (1 / len(degrees))
    angle = math.acos(1 / per_factor)
    sizes = []
    for n in degrees:
        M = max(2 * n + 1, math.ceil(n * math.pi / angle))
        while 1 / math.cos(n * math.pi / M) > per_factor:
            M += 1
        sizes.append(M)
    return sizes


def grid_points_needed(D, slack_target=0.1):
    D = _power_side(D)
    free, degrees = _grid_variables(D)
    if not free:
        return 1
    return math.prod(_grid_sizes(degrees, slack_target))


def _grid_variables(D):
    positions = D.positions()
    degree = {pos: 0 for pos in positions}
    for alpha in D.terms:
        for pos, exp in alpha:
            degree[pos] = max(degree[pos], exp)
    homogeneous = len(omega_tilde(D)) == 1 and positions
    # |D| is invariant under z -> e^{i psi} z when D is homogeneous, so the first coordinate is fixed to 1
    free = positions[1:] if homogeneous else positions
    return free, [degree[pos] for pos in free]


def grid_sup_bracket(D, max_points=DEFAULT_GRID_POINTS, slack_target=0.1):
    """Rigorous bracket (lower, upper, witness) of the polytorus sup of a small polynomial.

    D is evaluated by an FFT on a tensor grid of roots of unity. For a polynomial of degree n_j in z_j
    sampled at M_j > 2 n_j equispaced points, sup |D| <= grid max * prod_j sec(n_j pi / M_j).
    """
    D = _power_side(D)
    if not D:
        return 0.0, 0.0, {}
    positions = D.positions()
    free, degrees = _grid_variables(D)
    fixed = [pos for pos in positions if pos not in set(free)]
    if not free:
        value = abs(complex(sum(D.terms.values())))
        return value, value, {pos: 1 + 0j for pos in positions}
    sizes = _grid_sizes(degrees, slack_target)
    total = math.prod(sizes)
    if total > max_points:
        raise BudgetExceededError(f"A sup norm grid of {total} points exceeds the budget of {max_points}")
    column = {pos: i for i, pos in enumerate(free)}
    coefficients = np.zeros(sizes, dtype=np.complex128)
    index = [[] for _ in free]
    values = []
    for alpha, coef in D.terms.items():
        exps = [0] * len(free)
        for pos, exp in alpha:
            if pos in column:
                exps[column[pos]] = exp
        for i, exp in enumerate(exps):
            index[i].append(exp)
        values.append(coef)
    np.add.at(coefficients, tuple(np.array(ix) for ix in index), np.array(values))
    grid = np.fft.ifftn(coefficients) * total
    del coefficients
    magnitudes = np.abs(grid)
    flat = int(np.argmax(magnitudes))
    lower = float(magnitudes.flat[flat])
    nodes = np.unravel_index(flat, sizes)
    factor = math.prod(1 / math.cos(n * math.pi / M) for n, M in zip(degrees, sizes))
    upper = lower * factor * (1 + UPPER_ROUNDING)
    witness = {pos: 1 + 0j for pos in fixed}
    for pos, node, M in zip(free, nodes, sizes):
        witness[pos] = complex(np.exp(2j * np.pi * node / M))
    log.debug("Grid bracket over %d points: [%g, %g]", total, lower, upper)
    return lower, min(upper, coefficient_l1(D) * (1 + UPPER_ROUNDING)), witness


def sup_bracket(D, max_points=DEFAULT_GRID_POINTS, slack_target=0.1, samples=64, seed=0):
    """Grid bracket when it fits ``max_points``, sampled search with the coefficient sum bound otherwise.

    Returns (lower, upper, witness, rigorous) where ``rigorous`` tells whether the upper end came from the grid.
    """
    try:
        lower, upper, witness = grid_sup_bracket(D, max_points=max_points, slack_target=slack_target)
        return lower, upper, witness, True
    except BudgetExceededError:
        log.debug("Grid too large for %r, falling back to sampling", D)
    lower, witness = sup_norm_search(D, samples=samples, seed=seed)
    return lower, coefficient_l1(D), witness, False
