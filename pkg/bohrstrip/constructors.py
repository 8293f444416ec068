""" Homogeneous polynomials supported on a progression with maximal Bohr strip.

R_k is an m-homogeneous polynomial in p**k variables whose multilinear coefficients are p-th roots of unity,
Q_k moves R_k onto the k-th block of Theta and scales it to sup norm at most 1/k**2, and P = sum_k Q_k.
"""
import cmath
import itertools
import logging
import math

import numpy as np

from bohrstrip.blocks import ConstructionParams, make_blocks, weight_sequence
from bohrstrip.certificates import issue, register_check, verdict_of
from bohrstrip.errors import BudgetExceededError, FieldConstructionError, InvalidInputError, SupportViolationError
from bohrstrip.galois import get_field, unimodular_floor
from bohrstrip.multiindex import MultiIndex
from bohrstrip.norms import DEFAULT_GRID_POINTS, sup_bracket, sup_norm_estimate
from bohrstrip.primes import get_prime_table
from bohrstrip.series import (
    abs_sum_profile,
    add_many,
    bohr_transform,
    check_term_budget,
    h2_norm,
    profile_value,
    scale,
    Side,
    SparseSeries,
    term_power,
)
from bohrstrip.settings import NormKind, UnimodularMethod

log = logging.getLogger(__name__)

CHARACTER = UnimodularMethod.character.value
RANDOM = UnimodularMethod.random.value
RANDOM_ATTEMPTS = 16
DEFAULT_SAFETY = 1.05


def unimodular_norm_bound(p, k, m):
    return p ** (k * (m + 1) / 2)


def _multilinear_orbit(combination):
    """MultiIndex over positions element + 1 and the count m!/alpha! of orderings of ``combination``."""
    entries = tuple((element + 1, len(list(group))) for element, group in itertools.groupby(combination))
    alpha = MultiIndex.trusted(entries)
    return alpha, math.factorial(len(combination)) // alpha.factorial()


def make_unimodular_poly(p, k, m, method=CHARACTER, seed=0, samples=64, safety_factor=DEFAULT_SAFETY):
    """The power side polynomial R_k on positions 1 .. p**k.

    ``character``: the multilinear coefficient of (i_1, ..., i_m) is exp(2 pi i tr(xi_{i_1} ... xi_{i_m}) / p), xi_j
    running through the field with p**k elements. It is symmetric, so the grouped coefficient of alpha is
    (m!/alpha!) times one root of unity.
    ``random``: seeded random p-th roots per multi-index, redrawn while the sampled sup norm breaks the bound.
    """
    if p <= m:
        raise InvalidInputError(f"The block base must exceed the degree (p={p}, m={m})")
    size = p**k
    check_term_budget(math.comb(size + m - 1, m), "unimodular polynomial")
    roots = [cmath.exp(2j * math.pi * t / p) for t in range(p)]
    combinations = list(itertools.combinations_with_replacement(range(size), m))
    if method == CHARACTER:
        field = get_field(p, k)
        exponents = [field.trace(field.product(c)) for c in combinations]
        R = _grouped(combinations, exponents, roots)
    elif method == RANDOM:
        bound = safety_factor * unimodular_norm_bound(p, k, m)
        for attempt in range(RANDOM_ATTEMPTS):
            rng = np.random.default_rng([seed, p, k, m, attempt])
            exponents = rng.integers(0, p, size=len(combinations)).tolist()
            R = _grouped(combinations, exponents, roots)
            lower, _ = sup_norm_estimate(R, samples=samples, seed=seed)
            if lower <= bound:
                break
            log.debug("Random unimodular draw %d rejected: sampled sup %g > %g", attempt, lower, bound)
        else:
            raise FieldConstructionError(f"No random unimodular polynomial under {bound} in {RANDOM_ATTEMPTS} draws")
    else:
        raise InvalidInputError(f"Unknown unimodular construction {method!r}")
    return R


def _grouped(combinations, exponents, roots):
    terms = {}
    for combination, t in zip(combinations, exponents):
        alpha, orbit = _multilinear_orbit(combination)
        terms[alpha] = orbit * roots[t]
    return SparseSeries._wrap(terms, Side.power)


def coefficient_floor(R):
    return min(abs(c) for c in R.terms.values())


def construction_params(m, p, K, epsilon):
    # every grouped coefficient of R_k has modulus m!/alpha! >= 1 and the pure powers reach 1
    return ConstructionParams.from_epsilon(m, p, K, epsilon, eta=1.0)


def make_Qk(scheme, params, k, R=None, method=CHARACTER, seed=0):
    if not 1 <= k <= scheme.K:
        raise InvalidInputError(f"Block {k} is outside 1..{scheme.K}")
    if R is None:
        R = make_unimodular_poly(params.p, k, params.m, method=method, seed=seed)
    block = scheme.blocks[k - 1]
    relabel = {j: block[j - 1] for j in range(1, len(block) + 1)}
    factor = params.p ** (-k * (params.m + 1) / 2) / k**2
    return SparseSeries._wrap({alpha.relabel(relabel): factor * c for alpha, c in R.terms.items()}, Side.power)


def make_P(scheme, params, method=CHARACTER, seed=0):
    """P = Q_1 + ... + Q_K on the blocks of ``scheme``."""
    check_term_budget(sum(math.comb(len(block) + params.m - 1, params.m) for block in scheme.blocks), "polynomial P")
    parts = []
    for k in range(1, scheme.K + 1):
        R = make_unimodular_poly(params.p, k, params.m, method=method, seed=seed)
        if coefficient_floor(R) < params.eta - 1e-9:
            raise FieldConstructionError(f"R_{k} has a coefficient below eta={params.eta}")
        parts.append(make_Qk(scheme, params, k, R=R))
        log.debug("Block %d: %d terms", k, len(R))
    return add_many(parts, side=Side.power)


def _terms_by_block(D, scheme):
    grouped = {k: [] for k in range(1, scheme.K + 1)}
    for alpha, coef in D.terms.items():
        blocks = {scheme.block_of(pos) for pos, _ in alpha}
        if len(blocks) != 1 or 0 in blocks:
            raise SupportViolationError(f"Term {alpha!r} is not supported on a single block of the scheme")
        grouped[blocks.pop()].append((alpha, coef))
    return grouped


def pnt_constant_for(scheme, epsilon):
    return get_prime_table().pnt_constant(epsilon, count=scheme.blocks[-1][-1])


def weight_constant(scheme, params):
    """K_w with w_l * l**(1/q) <= K_w on Theta, q = 2m/(m-1) + epsilon."""
    q = params.q_epsilon
    return ((scheme.u + scheme.v) * params.b / (1 - params.b)) ** (1 / q)


def _growth_rule(rows, tolerance):
    ok = bool(rows)
    for i, (k, block_sum, lower, dirichlet_sum, chain_lower, cumulative, cumulative_dirichlet, ratio_floor) in enumerate(rows):
        ok &= block_sum >= lower * (1 - tolerance)
        ok &= dirichlet_sum >= chain_lower * (1 - tolerance)
        if i:
            previous = rows[i - 1]
            ok &= cumulative > previous[5] and cumulative_dirichlet > previous[6]
            ok &= previous[1] > 0 and block_sum / previous[1] >= ratio_floor - tolerance
    return verdict_of(ok)


@register_check(
    "block_growth",
    "growth",
    ["k", "block_sum", "lower_bound", "dirichlet_sum", "chain_lower_bound", "cumulative_block_sum", "cumulative_dirichlet_sum", "ratio_floor"],
    _growth_rule,
)
def growth_rows(D, inputs, seed=0):
    """Per block k: the exact block sum of |c_alpha| w^alpha against (eta/m!)(1/k**2) g**(k(m-1)/2),
    and the Dirichlet sum of |c_alpha| (p^alpha)**(-r) against the chain bound through C and K_w."""
    scheme = make_blocks(inputs["u"], inputs["v"], inputs["p"], inputs["K"], inputs["m"])
    params = construction_params(inputs["m"], inputs["p"], inputs["K"], inputs["epsilon"])
    weights = weight_sequence(scheme, params)
    r = params.dirichlet_exponent
    m = params.m
    C = pnt_constant_for(scheme, params.epsilon)
    chain = C ** (m * r) * weight_constant(scheme, params) ** m
    g = params.growth_factor
    rows = []
    cumulative = cumulative_dirichlet = 0.0
    for k, terms in _terms_by_block(D, scheme).items():
        w_m = weights[scheme.blocks[k - 1][0]] ** m
        block_sum = w_m * math.fsum(abs(c) for _, c in terms)
        dirichlet_sum = math.fsum(abs(c) * term_power(alpha, r) for alpha, c in terms)
        lower = params.eta / math.factorial(m) / k**2 * g ** (k * (m - 1) / 2)
        cumulative += block_sum
        cumulative_dirichlet += dirichlet_sum
        ratio_floor = ((k - 1) / k) ** 2 * g ** ((m - 1) / 2) if k > 1 else 0.0
        rows.append([k, block_sum, lower, dirichlet_sum, block_sum / chain, cumulative, cumulative_dirichlet, ratio_floor])
    return rows


def certify_growth(D, scheme, params, seed=0, command=""):
    inputs = growth_inputs(scheme, params)
    notes = {
        "pnt_constant": pnt_constant_for(scheme, params.epsilon),
        "weight_constant": weight_constant(scheme, params),
        "growth_factor": params.growth_factor,
        "weight_power_sum": weight_sequence(scheme, params).power_sum(params.q_epsilon),
    }
    try:
        notes["unimodular_floor"] = unimodular_floor(params.p, params.m)
    except BudgetExceededError:
        notes["unimodular_floor"] = None
    return issue("block_growth", _dirichlet(D), inputs, seed=seed, command=command, notes=notes)


def growth_inputs(scheme, params):
    return {
        "u": scheme.u,
        "v": scheme.v,
        "p": scheme.p,
        "K": scheme.K,
        "m": params.m,
        "epsilon": params.epsilon,
        "delta": params.delta,
        "b": params.b,
        "eta": params.eta,
        "sigma": params.dirichlet_exponent,
    }


def _norm_rule(rows, tolerance):
    ok = all(lower <= upper * (1 + tolerance) and lower <= bound * (1 + tolerance) for _, lower, upper, bound in rows)
    return verdict_of(bool(rows) and ok)


@register_check("block_norms", "norm_bound", ["k", "sampled_sup", "coefficient_sum", "bound"], _norm_rule)
def norm_rows(D, inputs, seed=0):
    """Sampled sup of each Q_k against safety/k**2, then (k = 0) of P against safety * pi**2 / 6."""
    scheme = make_blocks(inputs["u"], inputs["v"], inputs["p"], inputs["K"], inputs["m"])
    safety = inputs["safety_factor"]
    samples = inputs["samples"]
    P = D.with_side(Side.power)
    rows = []
    for k, terms in _terms_by_block(P, scheme).items():
        Q = SparseSeries._wrap(dict(terms), Side.power)
        lower, upper = sup_norm_estimate(Q, samples=samples, seed=seed + k)
        rows.append([k, lower, upper, safety / k**2])
    lower, upper = sup_norm_estimate(P, samples=samples, seed=seed)
    rows.append([0, lower, upper, safety * math.pi**2 / 6])
    return rows


def norm_certificate(D, scheme, params, safety_factor=DEFAULT_SAFETY, samples=64, seed=0, command=""):
    inputs = {"u": scheme.u, "v": scheme.v, "p": scheme.p, "K": scheme.K, "m": params.m, "safety_factor": safety_factor, "samples": samples}
    return issue("block_norms", D, inputs, seed=seed, command=command)


def _increasing_rule(rows, tolerance):
    values = [row[2] for row in rows]
    ok = all(b > a for a, b in zip(values, values[1:]))
    return verdict_of(bool(rows) and ok)


@register_check("abscissa_growth", "growth", ["k", "N", "A_N"], _increasing_rule)
def abscissa_rows(D, inputs, seed=0):
    """A_N(D, sigma) at the block boundaries N_k = largest index of block k."""
    scheme = make_blocks(inputs["u"], inputs["v"], inputs["p"], inputs["K"], inputs["M"])
    D = _dirichlet(D)
    indices = D.indices()
    profile = abs_sum_profile(D, inputs["sigma"])
    rows = []
    for k, terms in _terms_by_block(D, scheme).items():
        if not terms:
            continue
        N = max(indices[alpha] for alpha, _ in terms)
        rows.append([k, N, profile_value(profile, N)])
    return rows


def abscissa_certificate(D, scheme, M, delta, seed=0, command="", notes=None):
    inputs = {"u": scheme.u, "v": scheme.v, "p": scheme.p, "K": scheme.K, "M": M, "sigma": delta}
    return issue("abscissa_growth", _dirichlet(D), inputs, seed=seed, command=command, notes=notes)


def _dirichlet(D):
    return D if D.side is Side.dirichlet else bohr_transform(D)


def smallest_prime_above(n):
    table = get_prime_table()
    k = 1
    while table.nth(k) <= n:
        k += 1
    return table.nth(k)


def make_Dkm(
    theta,
    m,
    M,
    norm=NormKind.h2.value,
    p=None,
    K=2,
    epsilon=0.5,
    method=CHARACTER,
    seed=0,
    samples=64,
    grid_points=DEFAULT_GRID_POINTS,
    slack_target=0.1,
    command="",
):
    """An M-homogeneous Dirichlet polynomial on ``theta`` whose A_N at delta_m = (m-1)/(2m) grows over the blocks.

    Returns the series, normalized in the requested norm, and its growth certificate. ``h2`` normalization is
    exact; ``sup`` divides by the rigorous grid upper bound when the grid fits ``grid_points`` and by the sampled
    lower estimate otherwise, which the certificate notes record.
    """
    if not M > m >= 2:
        raise InvalidInputError(f"make_Dkm needs M > m >= 2, got m={m}, M={M}")
    if p is None:
        p = smallest_prime_above(M)
    scheme = make_blocks(theta.u, theta.v, p, K, M)
    params = construction_params(M, p, K, epsilon)
    D = bohr_transform(make_P(scheme, params, method=method, seed=seed))
    normalization = {"norm": NormKind(norm).value}
    if normalization["norm"] == NormKind.h2.value:
        divisor = h2_norm(D)
        normalization.update(divisor=divisor, rigorous=True)
    else:
        lower, upper, _, rigorous = sup_bracket(D, max_points=grid_points, slack_target=slack_target, samples=samples, seed=seed)
        divisor = upper if rigorous else lower
        normalization.update(divisor=divisor, rigorous=rigorous, lower=lower, upper=upper)
    D = scale(1 / divisor, D)
    delta = (m - 1) / (2 * m)
    certificate = abscissa_certificate(D, scheme, M, delta, seed=seed, command=command, notes={"normalization": normalization})
    return D, certificate
