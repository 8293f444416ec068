import numpy as np
import pytest

from bohrstrip import series
from bohrstrip.blocks import Progression
from bohrstrip.errors import BudgetExceededError, InvalidInputError, MissingCoordinateError, SideMismatchError
from bohrstrip.multiindex import MultiIndex
from bohrstrip.series import (
    abs_sum_profile,
    add,
    bohr_transform,
    combine,
    dirichlet_point_to_torus,
    evaluate,
    evaluate_many,
    evaluate_power,
    h2_inner,
    h2_norm,
    homogeneous_part,
    inverse_bohr_transform,
    is_theta_supported,
    multiply,
    omega_tilde,
    partial_abs_sum,
    power,
    profile_value,
    scale,
    shift,
    Side,
    SparseSeries,
)


def _random_series(rng, size, max_index=500):
    indices = rng.choice(np.arange(1, max_index + 1), size=size, replace=False)
    return {int(n): complex(rng.normal(), rng.normal()) for n in indices}


def test_multiply_matches_divisor_convolution():
    rng = np.random.default_rng(7)
    for _ in range(100):
        a = _random_series(rng, int(rng.integers(1, 12)))
        b = _random_series(rng, int(rng.integers(1, 12)))
        expected = {}
        for n, x in a.items():
            for k, y in b.items():
                expected[n * k] = expected.get(n * k, 0j) + x * y
        product = multiply(SparseSeries.from_indices(a), SparseSeries.from_indices(b))
        support = {n for n, c in expected.items() if c != 0}
        assert set(product.indices().values()) == support
        for n in support:
            assert product.coefficient(n) == pytest.approx(expected[n], rel=1e-12)


def test_zero_coefficients_are_not_stored():
    D = SparseSeries.from_indices({1: 1, 2: 0, 3: 1e-20})
    assert len(D) == 2
    assert len(SparseSeries(D.terms, prune=1e-10)) == 1
    assert not add(D, scale(-1, D))


def test_combine():
    D = SparseSeries.from_indices({1: 1, 3: 2})
    C = combine(D, [1, 1])
    assert C == SparseSeries.from_indices({1: 2, 3: 6, 9: 4})
    with pytest.raises(InvalidInputError):
        combine(D, [])


def test_power_and_shift():
    D = SparseSeries.from_indices({1: 1, 2: 1})
    assert power(D, 0) == SparseSeries.unit()
    assert power(D, 3) == SparseSeries.from_indices({1: 1, 2: 3, 4: 3, 8: 1})
    shifted = shift(D, MultiIndex.unit(2, 2))
    assert shifted == SparseSeries.from_indices({9: 1, 18: 1})
    with pytest.raises(InvalidInputError):
        power(D, -1)


def test_partial_sums():
    D = SparseSeries.from_indices({1: 1, 2: -1})
    assert partial_abs_sum(D, 0.25) == pytest.approx(1 + 2**-0.25)
    assert partial_abs_sum(D, 0.25) == pytest.approx(1.840896415)
    assert partial_abs_sum(D, 0.25, N=1) == 1
    profile = abs_sum_profile(D, 0.25)
    assert profile[0] == [1, 2]
    assert profile_value(profile, 0) == 0
    assert profile_value(profile, 10**6) == pytest.approx(1 + 2**-0.25)


def test_h2():
    D = SparseSeries.from_indices({2: 3, 3: 4})
    E = SparseSeries.from_indices({3: 1j})
    assert h2_norm(D) == pytest.approx(5)
    assert h2_inner(D, E) == pytest.approx(-4j)
    assert h2_inner(E, D) == pytest.approx(4j)


def test_homogeneity():
    D = SparseSeries.from_indices({2: 1, 6: 1, 12: 1, 5: 2})
    assert omega_tilde(D) == {1, 2, 3}
    assert homogeneous_part(D, 1) == SparseSeries.from_indices({2: 1, 5: 2})
    assert omega_tilde(SparseSeries()) == set()


def test_theta_support():
    theta = Progression(1, 1)
    assert is_theta_supported(SparseSeries.from_indices({1: 1, 3: 1, 15: 1}), theta)
    assert not is_theta_supported(SparseSeries.from_indices({2: 1}), theta)
    assert is_theta_supported(SparseSeries.from_indices({2: 1}), {1})


def test_sides():
    D = SparseSeries.from_indices({6: 1})
    P = inverse_bohr_transform(D)
    assert P.side is Side.power
    assert bohr_transform(P) == D
    with pytest.raises(SideMismatchError):
        bohr_transform(D)
    with pytest.raises(SideMismatchError):
        inverse_bohr_transform(P)
    with pytest.raises(SideMismatchError):
        add(D, P)
    with pytest.raises(SideMismatchError):
        partial_abs_sum(P, 0.5)


def test_evaluation_across_sides():
    D = SparseSeries.from_indices({1: 1, 6: 2})
    assert evaluate(D, 1) == pytest.approx(4 / 3)
    point = dirichlet_point_to_torus(D, 1)
    assert evaluate(D.with_side(Side.power), point) == pytest.approx(4 / 3)
    s = 0.5 + 3j
    assert evaluate(D, s) == pytest.approx(evaluate_power(D, dirichlet_point_to_torus(D, s)))
    with pytest.raises(InvalidInputError):
        evaluate(D, -1)


def test_evaluation_agreement_random_cases():
    rng = np.random.default_rng(23)
    for _ in range(100):
        indices = rng.choice(np.arange(1, 3001), size=int(rng.integers(1, 12)), replace=False)
        D = SparseSeries.from_indices({int(n): complex(*rng.normal(size=2)) for n in indices})
        s = complex(rng.uniform(0, 2), rng.uniform(-20, 20))
        P = inverse_bohr_transform(D)
        assert evaluate(D, s) == pytest.approx(evaluate(P, dirichlet_point_to_torus(D, s)), rel=1e-9, abs=1e-12)


def test_evaluate_power():
    P = SparseSeries({MultiIndex({1: 1, 3: 2}): 2, MultiIndex(): 1}, side=Side.power)
    assert evaluate_power(P, {1: 2, 3: 1j}) == pytest.approx(1 - 4)
    assert evaluate_power(P, [2, 0, 1j]) == pytest.approx(-3)
    with pytest.raises(MissingCoordinateError):
        evaluate_power(P, {1: 1})
    rng = np.random.default_rng(1)
    Z = np.exp(2j * np.pi * rng.random((5, 2)))
    values = evaluate_many(P, Z)
    for z, value in zip(Z, values):
        assert value == pytest.approx(evaluate_power(P, {1: z[0], 3: z[1]}))


def test_term_budget(monkeypatch):
    monkeypatch.setattr(series, "MAX_TERMS", 10)
    D = SparseSeries.from_indices({1: 1, 2: 1, 3: 1, 5: 1})
    with pytest.raises(BudgetExceededError):
        multiply(D, D)
