""" Isometric copies of l1 and l2 spanned by polynomials on pairwise disjoint progressions.

T(lambda) = sum_k lambda_k sum_{m=2}^{M} 2^(1-m) P_{k,m} / ||P_{k,m}||_inf in the sup norm, and
T(lambda) = sum_k lambda_k sum_{m=3}^{M} 2^(-(m-2)/2) D_{k,m} with orthonormal D_{k,m} in the H2 norm.
"""
import cmath
import logging
import math

from bohrstrip.blocks import disjoint_theta_family, make_blocks, Progression
from bohrstrip.certificates import issue, register_check, verdict_of
from bohrstrip.constructors import CHARACTER, construction_params, make_Dkm, make_P
from bohrstrip.errors import InvalidInputError
from bohrstrip.norms import DEFAULT_GRID_POINTS, sup_bracket
from bohrstrip.series import add_many, bohr_transform, evaluate_power, h2_inner, h2_norm, scale, Side

log = logging.getLogger(__name__)


def _complex_list(lambdas):
    return [complex(*lam) if isinstance(lam, (tuple, list)) else complex(lam) for lam in lambdas]


def _pairs(lambdas):
    return [[lam.real, lam.imag] for lam in lambdas]


def l1_thetas(count, M_max):
    family = disjoint_theta_family(count * (M_max - 1))
    return {(k, m): family[(k - 1) * (M_max - 1) + (m - 2)] for k in range(1, count + 1) for m in range(2, M_max + 1)}


def l2_thetas(count, M_max):
    family = disjoint_theta_family(count * (M_max - 2))
    return {(k, m): family[(k - 1) * (M_max - 2) + (m - 3)] for k in range(1, count + 1) for m in range(3, M_max + 1)}


def _part(D, theta):
    return D.restrict(lambda alpha: all(pos in theta for pos, _ in alpha))


def embed_l1(lambdas, M_max=4, K=1, p=5, epsilon=0.5, slack_target=0.1, samples=64, seed=0, grid_points=DEFAULT_GRID_POINTS, method=CHARACTER, command=""):
    """Truncated image of lambda under the l1 embedding, with its isometry certificate.

    Each P_{k,m} is divided by the lower end L of its sup norm bracket, so its norm lies in [1, U/L].
    """
    lambdas = _complex_list(lambdas)
    if M_max < 2:
        raise InvalidInputError("M_max must be at least 2")
    thetas = l1_thetas(len(lambdas), M_max)
    parts = []
    normalizations = {}
    for (k, m), theta in thetas.items():
        lam = lambdas[k - 1]
        if lam == 0:
            continue
        scheme = make_blocks(theta.u, theta.v, p, K, m)
        P = make_P(scheme, construction_params(m, p, K, epsilon), method=method, seed=seed)
        lower, upper, _, rigorous = sup_bracket(P, max_points=grid_points, slack_target=slack_target, samples=samples, seed=seed)
        normalizations[f"{k},{m}"] = {"lower": lower, "upper": upper, "rigorous": rigorous}
        parts.append(scale(lam * 2.0 ** (1 - m) / lower, P))
    T = bohr_transform(add_many(parts, side=Side.power))
    inputs = {
        "lambdas": _pairs(lambdas),
        "M_max": M_max,
        "thetas": {f"{k},{m}": theta.to_dict() for (k, m), theta in sorted(thetas.items())},
        "slack_target": slack_target,
        "grid_points": grid_points,
        "samples": samples,
    }
    certificate = issue("isometry_l1", T, inputs, seed=seed, command=command, notes={"normalization": normalizations})
    return T, certificate


def _l1_rule(rows, tolerance):
    ok = bool(rows)
    for k, m, weight, lower, upper, bound in rows:
        ok &= lower <= upper * (1 + tolerance) + tolerance
        ok &= upper <= bound * (1 + tolerance) + tolerance
        if k == 0:
            ok &= lower >= 2 * weight - bound - tolerance * (weight + 1)
    return verdict_of(ok)


@register_check("isometry_l1", "isometry_l1", ["k", "m", "weight", "lower", "upper", "bound"], _l1_rule)
def l1_rows(T, inputs, seed=0):
    """Per part the sup bracket of lambda_k 2^(1-m) P_{k,m}/||P_{k,m}|| against its weight; the k = 0 row compares
    |T(z)| at a combined witness z and the sum of the part upper bounds with sum |lambda_k| (1 - 2^(1-M))."""
    lambdas = _complex_list(inputs["lambdas"])
    M_max = inputs["M_max"]
    slack = inputs["slack_target"]
    P = T.with_side(Side.power)
    rows = []
    witness = {}
    total_upper = 0.0
    target = math.fsum(abs(lam) * (1 - 2.0 ** (1 - M_max)) for lam in lambdas)
    for key, theta in sorted(inputs["thetas"].items(), key=lambda item: tuple(int(x) for x in item[0].split(","))):
        k, m = (int(x) for x in key.split(","))
        lam = lambdas[k - 1]
        if lam == 0:
            continue
        part = _part(P, Progression(theta["u"], theta["v"]))
        weight = abs(lam) * 2.0 ** (1 - m)
        lower, upper, point, _ = sup_bracket(part, max_points=inputs["grid_points"], slack_target=slack, samples=inputs["samples"], seed=seed)
        # rotate all coordinates so the part is real and positive at its witness
        value = evaluate_power(part, point)
        rotation = cmath.exp(-1j * cmath.phase(value) / m)
        witness.update({pos: z * rotation for pos, z in point.items()})
        total_upper += upper
        rows.append([k, m, weight, lower, upper, weight * (1 + slack)])
    achieved = abs(evaluate_power(P, witness)) if P else 0.0
    rows.append([0, 0, target, achieved, total_upper, target * (1 + slack)])
    return rows


def embed_l2(lambdas, M_max=4, K=1, p=5, epsilon=0.5, seed=0, method=CHARACTER, command=""):
    """Truncated image of lambda under the l2 embedding with its isometry and orthonormality certificates.

    D_{k,m} is m-homogeneous on Theta_{k,m}, built with growth exponent delta_{m-1}, and H2-normalized.
    """
    lambdas = _complex_list(lambdas)
    if M_max < 3:
        raise InvalidInputError("M_max must be at least 3")
    thetas = l2_thetas(len(lambdas), M_max)
    parts = []
    growth = {}
    for (k, m), theta in thetas.items():
        lam = lambdas[k - 1]
        if lam == 0:
            continue
        D, certificate = make_Dkm(theta, m - 1, m, norm="h2", p=p, K=K, epsilon=epsilon, method=method, seed=seed, command=command)
        growth[f"{k},{m}"] = certificate.verdict
        parts.append(scale(lam * 2.0 ** (-(m - 2) / 2), D))
    T = add_many(parts, side=Side.dirichlet)
    inputs = {
        "lambdas": _pairs(lambdas),
        "M_max": M_max,
        "thetas": {f"{k},{m}": theta.to_dict() for (k, m), theta in sorted(thetas.items())},
    }
    notes = {"part_growth": growth}
    isometry = issue("isometry_l2", T, inputs, seed=seed, command=command, notes=notes)
    orthonormality = issue("orthonormality", T, inputs, seed=seed, command=command)
    return T, isometry, orthonormality


def _l2_parts(T, inputs):
    lambdas = _complex_list(inputs["lambdas"])
    parts = []
    for key, theta in sorted(inputs["thetas"].items(), key=lambda item: tuple(int(x) for x in item[0].split(","))):
        k, m = (int(x) for x in key.split(","))
        lam = lambdas[k - 1]
        if lam == 0:
            continue
        parts.append((k, m, lam, _part(T, Progression(theta["u"], theta["v"]))))
    return lambdas, parts


def _l2_rule(rows, tolerance):
    ok = bool(rows) and all(abs(value - expected) <= tolerance * max(1.0, abs(expected)) for _, _, value, expected in rows)
    return verdict_of(ok)


@register_check("isometry_l2", "isometry_l2", ["k", "m", "h2_norm_squared", "expected"], _l2_rule, tolerance=1e-10)
def l2_rows(T, inputs, seed=0):
    lambdas, parts = _l2_parts(T, inputs)
    M_max = inputs["M_max"]
    rows = [[k, m, h2_norm(part) ** 2, abs(lam) ** 2 * 2.0 ** (-(m - 2))] for k, m, lam, part in parts]
    expected = math.fsum(abs(lam) ** 2 for lam in lambdas) * (1 - 2.0 ** (-(M_max - 2)))
    rows.append([0, 0, h2_norm(T) ** 2, expected])
    return rows


def _orthonormality_rule(rows, tolerance):
    ok = bool(rows)
    for _, _, _, _, inner, expected in rows:
        # disjoint supports give an exact zero
        ok &= inner == 0 if expected == 0 else abs(inner - expected) <= tolerance
    return verdict_of(ok)


@register_check("orthonormality", "orthonormality", ["k", "m", "k2", "m2", "inner_abs", "expected"], _orthonormality_rule, tolerance=1e-10)
def orthonormality_rows(T, inputs, seed=0):
    """|<D_{k,m}, D_{k',m'}>| for all pairs of recovered parts, the parts rescaled back to unit vectors."""
    _, parts = _l2_parts(T, inputs)
    units = [(k, m, scale(1 / (lam * 2.0 ** (-(m - 2) / 2)), part)) for k, m, lam, part in parts]
    rows = []
    for i, (k, m, D) in enumerate(units):
        for k2, m2, E in units[i:]:
            rows.append([k, m, k2, m2, abs(h2_inner(D, E)), 1.0 if (k, m) == (k2, m2) else 0.0])
    return rows
