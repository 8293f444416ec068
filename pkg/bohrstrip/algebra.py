""" Dense, algebrable families of Dirichlet series at finite truncation.

The density perturbation moves a Dirichlet polynomial D1 by less than epsilon to
D = D1 + t^(-ws) (epsilon/2)(1 + D2/k), after which every D_lambda = lambda_1 D + ... + lambda_k D^k has
A_N(D_lambda, delta_m) growing like A_N(D2, delta_m). The remaining tools split combinations
sum lambda_i D_i D^i around their first off-progression index and evaluate polynomials in generators with
disjoint supports.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from bohrstrip.blocks import as_theta, ComplementOf, Progression
from bohrstrip.certificates import INCONCLUSIVE, issue, PASS, register_check, verdict_of
from bohrstrip.constructors import CHARACTER, make_Dkm
from bohrstrip.errors import InvalidInputError, SupportViolationError
from bohrstrip.multiindex import index_to_multiindex, MultiIndex
from bohrstrip.norms import DEFAULT_GRID_POINTS
from bohrstrip.primes import nth_prime
from bohrstrip.series import (
    abs_sum_profile,
    add,
    add_many,
    coefficient_l1,
    evaluate_power,
    homogeneous_part,
    is_theta_supported,
    multiply,
    omega_tilde,
    power,
    powers,
    profile_value,
    scale,
    shift,
    Side,
    SparseSeries,
)

log = logging.getLogger(__name__)

LEDGER_TOLERANCE = 1e-12


@dataclass(frozen=True)
class MembershipQuery:
    """Membership in D_Theta(j, k, ell, m): for all lambda with ||lambda||_inf <= j and |lambda_k| >= 1/j
    some N has A_N(D_lambda, delta_m) > ell."""

    j: int
    k: int
    ell: float
    m: int

    def __post_init__(self):
        if self.j < 1 or self.k < 1 or self.m < 2 or self.ell < 0:
            raise InvalidInputError(f"Invalid membership query {self}")

    @property
    def delta_m(self):
        return (self.m - 1) / (2 * self.m)

    def in_region(self, lambdas, tolerance=1e-12):
        return (
            len(lambdas) == self.k
            and max(abs(lam) for lam in lambdas) <= self.j + tolerance
            and abs(lambdas[-1]) >= 1 / self.j - tolerance
        )

    def to_dict(self):
        return {"j": self.j, "k": self.k, "ell": self.ell, "m": self.m}


def sample_lambda_region(query, count, seed=0):
    """``count`` seeded points of the query region, its extreme points first."""
    j, k = query.j, query.k
    samples = []
    for extreme in [
        [0j] * (k - 1) + [complex(1 / j)],
        [complex(j)] * (k - 1) + [complex(1 / j)],
        [complex(j)] * k,
        [complex(-j)] * (k - 1) + [complex(0, j)],
    ]:
        if extreme not in samples:
            samples.append(extreme)
    rng = np.random.default_rng([seed, j, k])
    while len(samples) < count:
        radii = j * np.sqrt(rng.random(k - 1))
        phases = np.exp(2j * np.pi * rng.random(k))
        last = (1 / j + (j - 1 / j) * rng.random()) * phases[-1]
        samples.append([complex(r * ph) for r, ph in zip(radii, phases[:-1])] + [complex(last)])
    return samples[:count]


def w_exponent(k, m, r):
    """w = max_{0 <= i <= k-1} max{(k-2)(m+r), rk + mi} + 1."""
    if k < 1 or m < 2 or r < 0:
        raise InvalidInputError(f"w_exponent needs k >= 1, m >= 2, r >= 0, got k={k}, m={m}, r={r}")
    return max(max((k - 2) * (m + r), r * k + m * i) for i in range(k)) + 1


def newton_remainder(D2, k):
    """D3 with (1 + D2/k)^k = 1 + D2 + D3, as sum_{i>=2} C(k, i) k^(-i) D2^i."""
    if k < 2:
        return SparseSeries(side=D2.side)
    return add_many([scale(math.comb(k, i) / k**i, P) for i, P in enumerate(powers(D2, k), 1) if i >= 2], side=D2.side)


def unshift(D, alpha):
    """Divide every term by the monomial at ``alpha``."""
    alpha = MultiIndex(alpha)
    terms = {}
    for beta, coef in D.items():
        entries = dict(beta)
        for pos, exp in alpha:
            if entries.get(pos, 0) < exp:
                raise SupportViolationError(f"{beta!r} is not divisible by {alpha!r}")
            entries[pos] -= exp
        terms[MultiIndex(entries)] = coef
    return SparseSeries(terms, side=D.side)


@dataclass
class PerturbationResult:
    D: SparseSeries
    D1: SparseSeries
    D2: SparseSeries
    D3: SparseSeries
    D4: SparseSeries
    w: int
    epsilon: float
    k: int
    m: int
    r: int
    shift_position: int
    theta_supported: bool
    bounds: Dict[str, float] = field(default_factory=dict)
    d2_certificate: Optional[object] = None
    witness_bound_rows: List[list] = field(default_factory=list)

    @property
    def degree_D2(self):
        return self.m + self.r + 1

    @property
    def shift_prime(self):
        return nth_prime(self.shift_position)

    def inputs(self):
        return {
            "w": self.w,
            "k": self.k,
            "m": self.m,
            "r": self.r,
            "epsilon": self.epsilon,
            "shift_position": self.shift_position,
        }


def density_perturbation(
    D1,
    epsilon,
    query,
    theta,
    p=None,
    K=1,
    shift_position=1,
    method=CHARACTER,
    seed=0,
    samples=64,
    grid_points=DEFAULT_GRID_POINTS,
    command="",
):
    """D = D1 + t^(-ws) D4 with D4 = (epsilon/2)(1 + D2/k) and D2 an (m+r+1)-homogeneous series on Theta of
    sup norm at most 1/2, t the prime at ``shift_position`` and w = w_exponent(k, m+1, r)."""
    if epsilon <= 0:
        raise InvalidInputError(f"epsilon must be positive, got {epsilon}")
    if D1.side is not Side.dirichlet:
        raise InvalidInputError("The perturbed polynomial must be on the Dirichlet side")
    theta = as_theta(theta)
    if not isinstance(theta, Progression):
        raise InvalidInputError("The perturbation needs Theta as a progression (u, v)")
    if not is_theta_supported(D1, theta):
        raise SupportViolationError("D1 is not supported on Theta")
    k, m = query.k, query.m
    r = max(omega_tilde(D1), default=0)
    D2_unit, d2_certificate = make_Dkm(
        theta, m, m + r + 1, norm="sup", p=p, K=K, epsilon=epsilon, method=method, seed=seed, samples=samples, grid_points=grid_points, command=command
    )
    D2 = scale(0.5, D2_unit)
    w = w_exponent(k, m + 1, r)
    D4 = scale(epsilon / 2, add(SparseSeries.unit(), scale(1 / k, D2)))
    D = add(D1, shift(D4, MultiIndex.unit(shift_position, w)))
    normalization = d2_certificate.notes["normalization"]
    d2_sup = 0.5 * (1.0 if normalization["rigorous"] else normalization["upper"] / normalization["divisor"])
    bounds = {
        "d2_sup_bound": d2_sup,
        "d2_sup_bound_rigorous": normalization["rigorous"],
        "sup_distance_bound": epsilon / 2 * (1 + d2_sup / k),
        "coefficient_distance_bound": epsilon / 2 * (1 + coefficient_l1(D2) / k),
    }
    log.debug("Perturbation with w=%d, deg D2=%d, bounds %s", w, m + r + 1, bounds)
    return PerturbationResult(
        D=D,
        D1=D1,
        D2=D2,
        D3=newton_remainder(D2, k),
        D4=D4,
        w=w,
        epsilon=epsilon,
        k=k,
        m=m,
        r=r,
        shift_position=shift_position,
        theta_supported=is_theta_supported(D, theta),
        bounds=bounds,
        d2_certificate=d2_certificate,
    )


def recover_components(D, inputs):
    """(D1, D2, D4) from the perturbed series: t^w D2 is its (w + m + r + 1)-homogeneous part times epsilon/(2k)."""
    w, k, epsilon = inputs["w"], inputs["k"], inputs["epsilon"]
    degree = inputs["m"] + inputs["r"] + 1
    t_w = MultiIndex.unit(inputs["shift_position"], w)
    D2 = scale(2 * k / epsilon, unshift(homogeneous_part(D, w + degree), t_w))
    D4 = scale(epsilon / 2, add(SparseSeries.unit(), scale(1 / k, D2)))
    D1 = add(D, scale(-1, shift(D4, t_w)))
    return D1, D2, D4


def _max_difference(D, E):
    keys = set(D.terms) | set(E.terms)
    return max((abs(D[a] - E[a]) for a in keys), default=0.0)


def _degree_range(D):
    degrees = omega_tilde(D)
    return (min(degrees), max(degrees)) if degrees else (-1, -1)


def _ledger_rule(rows, tolerance):
    ok = bool(rows)
    for _, low, high, bound_low, bound_high, residual in rows:
        if low >= 0:
            ok &= bound_low <= low and high <= bound_high
        ok &= residual <= tolerance
    return verdict_of(ok)


@register_check(
    "homogeneity_ledger",
    "disjointness",
    ["slot", "degree_min", "degree_max", "bound_min", "bound_max", "residual"],
    _ledger_rule,
    tolerance=LEDGER_TOLERANCE,
)
def ledger_rows(D, inputs, seed=0):
    """The split D^k = E + c t^(wk) + c t^(wk) D2 + c t^(wk) D3 with c = (epsilon/2)^k.

    slot 1: E = sum_{i<k} C(k,i) D1^(k-i) X^i, degrees below wk, residual of the full split
    slot 2: the wk-homogeneous part of D^k against c t^(wk)
    slot 3: the (wk+m+r+1)-homogeneous part against c t^(wk) D2
    slot 4: c t^(wk) D3, degrees above wk+m+r+1
    slot 5: D, ..., D^(k-1), degrees below wk+m+r+1
    slot 6: D3, degrees above m+r, residual of (1 + D2/k)^k - 1 - D2 - D3
    slot 7: D1, degrees at most r
    """
    w, k, epsilon, m, r = inputs["w"], inputs["k"], inputs["epsilon"], inputs["m"], inputs["r"]
    degree = m + r + 1
    D1, D2, D4 = recover_components(D, inputs)
    D3 = newton_remainder(D2, k)
    t_w = MultiIndex.unit(inputs["shift_position"], w)
    X = shift(D4, t_w)
    c = (epsilon / 2) ** k
    t_wk = t_w * k
    powers_of_D = powers(D, k)
    Dk = powers_of_D[-1]
    E = add_many([scale(math.comb(k, i), multiply(power(D1, k - i), power(X, i))) for i in range(k)], side=D.side)
    C0 = SparseSeries.monomial(t_wk, c)
    C2 = scale(c, shift(D2, t_wk))
    C3 = scale(c, shift(D3, t_wk))
    split_residual = _max_difference(Dk, add_many([E, C0, C2, C3], side=D.side))
    newton = add(SparseSeries.unit(D.side), scale(1 / k, D2))
    newton_residual = _max_difference(power(newton, k), add_many([SparseSeries.unit(), D2, D3], side=D.side))
    lower = add_many(powers_of_D[:-1], side=D.side) if k > 1 else SparseSeries(side=D.side)
    top = k * (w + degree)
    rows = [
        [1, *_degree_range(E), 0, w * k - 1, split_residual],
        [2, *_degree_range(C0), w * k, w * k, _max_difference(homogeneous_part(Dk, w * k), C0)],
        [3, *_degree_range(C2), w * k + degree, w * k + degree, _max_difference(homogeneous_part(Dk, w * k + degree), C2)],
        [4, *_degree_range(C3), w * k + degree + 1, top, 0.0],
        [5, *_degree_range(lower), 0, w * k + degree - 1, 0.0],
        [6, *_degree_range(D3), m + r + 1, k * degree, newton_residual],
        [7, *_degree_range(D1), 0, r, 0.0],
    ]
    return rows


def ledger_certificate(result, seed=0, command=""):
    return issue("homogeneity_ledger", result.D, result.inputs(), seed=seed, command=command)


def _growth_inequality_rule(rows, tolerance):
    return verdict_of(bool(rows) and all(lhs >= rhs * (1 - tolerance) for _, _, lhs, rhs in rows))


@register_check("perturbation_growth", "growth", ["sample", "N", "lhs", "rhs"], _growth_inequality_rule)
def growth_inequality_rows(D, inputs, seed=0):
    """A_N(D_lambda, delta_m) against (epsilon/2)^k t^(-wk delta_m) |lambda_k| A_{N / t^(wk)}(D2, delta_m)
    at N = t^(wk) n for the support indices n of D2."""
    w, k, epsilon = inputs["w"], inputs["k"], inputs["epsilon"]
    delta = (inputs["m"] - 1) / (2 * inputs["m"])
    _, D2, _ = recover_components(D, inputs)
    t_wk = nth_prime(inputs["shift_position"]) ** (w * k)
    d2_profile = abs_sum_profile(D2, delta)
    factor = (epsilon / 2) ** k * t_wk ** (-delta)
    powers_of_D = powers(D, k)
    rows = []
    for i, lambdas in enumerate(_lambdas_from(inputs["lambdas"])):
        profile = abs_sum_profile(_combine(powers_of_D, lambdas), delta)
        for n in d2_profile[0]:
            N = t_wk * n
            rows.append([i, N, profile_value(profile, N), factor * abs(lambdas[-1]) * profile_value(d2_profile, n)])
    return rows


def growth_certificate_inequality(result, query, lambda_samples, seed=0, command=""):
    inputs = dict(result.inputs(), lambdas=_lambda_pairs(lambda_samples), query=query.to_dict())
    certificate = issue("perturbation_growth", result.D, inputs, seed=seed, command=command)
    result.witness_bound_rows = certificate.rows
    return certificate


def _lambdas_from(pairs):
    return [[complex(re, im) for re, im in sample] for sample in pairs]


def _lambda_pairs(samples):
    return [[[complex(lam).real, complex(lam).imag] for lam in sample] for sample in samples]


def _combine(powers_of_D, lambdas):
    return add_many([scale(lam, P) for lam, P in zip(lambdas, powers_of_D)], side=powers_of_D[0].side)


def _membership_rule(rows, tolerance):
    if not rows:
        return INCONCLUSIVE
    return PASS if all(found for _, found, _, _ in rows) else INCONCLUSIVE


@register_check("membership", "growth", ["sample", "found", "N", "A_N"], _membership_rule)
def membership_rows(D, inputs, seed=0):
    """For each lambda the smallest scheduled N with A_N(D_lambda, delta_m) > ell (found = 0: none in the truncation)."""
    query = MembershipQuery(**inputs["query"])
    schedule = inputs.get("schedule")
    lambda_samples = _lambdas_from(inputs["lambdas"])
    powers_of_D = powers(D, query.k)
    rows = []
    for i, lambdas in enumerate(lambda_samples):
        ns, sums = abs_sum_profile(_combine(powers_of_D, lambdas), query.delta_m)
        candidates = sorted(schedule) if schedule else ns
        found = [0, 0, profile_value((ns, sums), candidates[-1]) if candidates else 0.0]
        for N in candidates:
            value = profile_value((ns, sums), N)
            if value > query.ell:
                found = [1, N, value]
                break
        rows.append([i, *found])
    return rows


def membership_witness(D, query, lambda_samples, schedule=None, seed=0, command=""):
    """Witnesses N for sampled lambdas; a missing witness is inconclusive, never a disproof."""
    inputs = {"query": query.to_dict(), "lambdas": _lambda_pairs(lambda_samples)}
    if schedule is not None:
        inputs["schedule"] = sorted(int(N) for N in schedule)
    return issue("membership", D, inputs, seed=seed, command=command)


@dataclass
class N0Split:
    n0: int
    D_tilde: SparseSeries
    D_hat: SparseSeries
    collisions: int
    residual: float


def n0_split(combination, D, theta):
    """Split sum_i lambda_i D_i D^i (D_i off Theta, D on Theta) as D_tilde + D_hat with
    D_hat = n0^(-s) sum_i lambda_i a_{i,n0} D^i, n0 the smallest index of the leading D_N."""
    theta = as_theta(theta)
    off_theta = ComplementOf(theta)
    if not is_theta_supported(D, theta):
        raise SupportViolationError("D is not supported on Theta")
    combination = [(complex(lam), Di) for lam, Di in combination]
    for i, (_, Di) in enumerate(combination):
        if not is_theta_supported(Di, off_theta):
            raise SupportViolationError(f"D_{i} has terms on Theta")
    leading = [i for i, (lam, Di) in enumerate(combination) if lam != 0 and Di]
    if not leading:
        raise InvalidInputError("The combination has no nonzero term")
    last = leading[-1]
    indices = combination[last][1].indices()
    n0 = min(indices.values())
    alpha0 = index_to_multiindex(n0)
    powers_of_D = [SparseSeries.unit(D.side)] + (powers(D, len(combination) - 1) if len(combination) > 1 else [])
    hat_terms = []
    tilde_terms = []
    total = []
    for (lam, Di), P in zip(combination, powers_of_D):
        a = Di[alpha0]
        hat_terms.append(scale(lam * a, P))
        rest = add(Di, SparseSeries.monomial(alpha0, -a, side=D.side)) if a else Di
        tilde_terms.append(scale(lam, multiply(rest, P)))
        total.append(scale(lam, multiply(Di, P)))
    D_hat = shift(add_many(hat_terms, side=D.side), alpha0)
    D_tilde = add_many(tilde_terms, side=D.side)
    collisions = sum(1 for alpha in D_tilde if alpha.restrict(off_theta) == alpha0)
    residual = _max_difference(add_many(total, side=D.side), add(D_hat, D_tilde))
    return N0Split(n0=n0, D_tilde=D_tilde, D_hat=D_hat, collisions=collisions, residual=residual)


def _split_generators(series, thetas):
    return [series.restrict(lambda alpha, th=theta: all(pos in th for pos, _ in alpha)) for theta in thetas]


def random_combination(rng, D, pool, max_degree=3):
    """Seeded (lambda_i, D_i) pairs for i = 0..L with D_i built from the constant 1 and terms of ``pool``."""
    monomials = [(alpha, coef) for G in pool for alpha, coef in G.items()]
    L = int(rng.integers(1, max_degree + 1))
    combination = []
    for i in range(L + 1):
        terms = {}
        if rng.random() < 0.5 or not monomials:
            terms[MultiIndex()] = complex(rng.normal(), rng.normal())
        picked = rng.choice(len(monomials), size=min(len(monomials), int(rng.integers(0, 4))), replace=False) if monomials else []
        for j in picked:
            alpha, coef = monomials[int(j)]
            terms[alpha] = coef * complex(rng.normal(), rng.normal())
        combination.append((complex(rng.normal(), rng.normal()), SparseSeries(terms, side=D.side)))
    if not combination[-1][1]:
        combination[-1] = (combination[-1][0], SparseSeries.unit(D.side))
    return combination


def _disjointness_rule(rows, tolerance):
    return verdict_of(bool(rows) and all(collisions == 0 and residual <= tolerance for _, _, _, collisions, residual in rows))


@register_check("coefficient_disjointness", "disjointness", ["combination", "n0", "terms", "collisions", "residual"], _disjointness_rule, tolerance=1e-9)
def disjointness_rows(series, inputs, seed=0):
    """n0 splits of seeded combinations sum lambda_i D_i D^i, D the first generator and D_i built from the others."""
    thetas = [Progression(t["u"], t["v"]) for t in inputs["thetas"]]
    generators = _split_generators(series, thetas)
    D, pool = generators[0], generators[1:]
    rows = []
    for c in range(inputs["combinations"]):
        rng = np.random.default_rng([seed, c])
        split = n0_split(random_combination(rng, D, pool), D, thetas[0])
        rows.append([c, split.n0, len(split.D_tilde), split.collisions, split.residual])
    return rows


def disjointness_certificate(series, thetas, combinations, seed=0, command=""):
    inputs = {"thetas": [theta.to_dict() for theta in thetas], "combinations": combinations}
    return issue("coefficient_disjointness", series, inputs, seed=seed, command=command)


@dataclass
class FreeAlgebraResult:
    series: SparseSeries
    components: Dict[int, SparseSeries]


def _check_polynomial(Q, count):
    for exps in Q:
        if len(exps) != count:
            raise InvalidInputError(f"Polynomial terms need {count} exponents, got {list(exps)}")


def free_algebra_eval(generators, Q):
    """Q(D_1, ..., D_N) = sum_m L_m(D_1, ..., D_{N-1}) D_N^m, returning the series and the L_m."""
    if not generators:
        raise InvalidInputError("free_algebra_eval needs at least one generator")
    _check_polynomial(Q, len(generators))
    if any(not any(exps) for exps in Q):
        raise InvalidInputError("The polynomial has a constant term")
    seen = set()
    for G in generators:
        positions = set(G.positions())
        if seen & positions:
            raise SupportViolationError("Generators must have pairwise disjoint supports")
        seen |= positions
    side = generators[0].side
    cache = {}

    def gen_power(i, e):
        if (i, e) not in cache:
            cache[(i, e)] = power(generators[i], e)
        return cache[(i, e)]

    grouped = {}
    for exps, coef in Q.items():
        grouped.setdefault(exps[-1], []).append((exps[:-1], coef))
    components = {}
    for e_last, terms in sorted(grouped.items()):
        parts = []
        for exps, coef in terms:
            product = SparseSeries.unit(side)
            for i, e in enumerate(exps):
                if e:
                    product = multiply(product, gen_power(i, e))
            parts.append(scale(coef, product))
        components[e_last] = add_many(parts, side=side)
    last = len(generators) - 1
    series = add_many([multiply(L, gen_power(last, e)) if e else L for e, L in components.items()], side=side)
    return FreeAlgebraResult(series=series, components=components)


def evaluate_polynomial(Q, values):
    return sum(coef * math.prod(v**e for v, e in zip(values, exps)) for exps, coef in Q.items())


@dataclass
class IndependenceWitness:
    point: Dict[int, complex]
    values: List[complex]
    value: complex
    sample: int


def independence_witness(generators, Q, samples=64, radius=0.9, threshold=1e-8, seed=0):
    """A point v0 with |Q(f_1(v0), ..., f_N(v0))| > threshold, or None (inconclusive).

    v0 puts independent uniform disc samples of radius ``radius`` on each generator's own support positions.
    """
    _check_polynomial(Q, len(generators))
    lifted = [G.with_side(Side.power) for G in generators]
    rng = np.random.default_rng(seed)
    for sample in range(samples):
        point = {}
        for G in lifted:
            positions = G.positions()
            moduli = radius * np.sqrt(rng.random(len(positions)))
            phases = np.exp(2j * np.pi * rng.random(len(positions)))
            point.update({pos: complex(z) for pos, z in zip(positions, moduli * phases)})
        values = [evaluate_power(G, point) for G in lifted]
        value = evaluate_polynomial(Q, values)
        if abs(value) > threshold:
            return IndependenceWitness(point=point, values=values, value=value, sample=sample)
    return None


def homogeneity_rules(Dm, Dn):
    """For homogeneous Dm, Dn of degrees m, n: Omega~(Dm Dn) = {m + n}, and min/max of Omega~(Dm + Dn) are
    min/max of {m, n}."""
    (m,), (n,) = _single_degree(Dm), _single_degree(Dn)
    product = omega_tilde(multiply(Dm, Dn))
    total = omega_tilde(add(Dm, Dn))
    return {
        "product": product == {m + n},
        "minimum": min(total) == min(m, n),
        "maximum": max(total) == max(m, n),
    }


def _single_degree(D):
    degrees = omega_tilde(D)
    if len(degrees) != 1:
        raise InvalidInputError(f"Expected a homogeneous series, got degrees {sorted(degrees)}")
    return tuple(degrees)


def coefficient_stability(D, tau, seed=0):
    """Add a seeded perturbation of coefficient sum ``tau`` and record the largest coefficient move.

    Each coefficient moves by at most the coefficient sum of the perturbation.
    """
    rng = np.random.default_rng(seed)
    alphas = sorted(D.terms) or [MultiIndex()]
    weights = rng.random(len(alphas))
    phases = np.exp(2j * np.pi * rng.random(len(alphas)))
    E = SparseSeries({a: tau * w / weights.sum() * ph for a, w, ph in zip(alphas, weights, phases)}, side=D.side)
    moved = _max_difference(add(D, E), D)
    return {"tau": tau, "max_coefficient_shift": moved, "within_tau": moved <= tau * (1 + 1e-12)}
