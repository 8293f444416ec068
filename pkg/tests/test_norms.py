import pytest

from bohrstrip.errors import BudgetExceededError
from bohrstrip.multiindex import MultiIndex
from bohrstrip.norms import grid_points_needed, grid_sup_bracket, sup_bracket, sup_norm_estimate, sup_norm_search
from bohrstrip.series import coefficient_l1, Side, SparseSeries


def _power(terms):
    return SparseSeries({MultiIndex(alpha): c for alpha, c in terms.items()}, side=Side.power)


def test_sup_norm_estimate_linear():
    P = _power({((1, 1),): 1, ((2, 1),): 1})
    lower, upper = sup_norm_estimate(P)
    assert lower == pytest.approx(2)
    assert upper == pytest.approx(2)


def test_sup_norm_search_finds_rotated_maximum():
    # |z1 - z2| peaks at 2 away from the all ones point
    P = _power({((1, 1),): 1, ((2, 1),): -1})
    value, point = sup_norm_search(P, samples=16, seed=3)
    assert value == pytest.approx(2, rel=1e-2)
    assert set(point) == {1, 2}


def test_grid_bracket_contains_sup():
    P = _power({(): 1, ((1, 1),): 1})
    lower, upper, witness = grid_sup_bracket(P, slack_target=0.1)
    assert lower == pytest.approx(2)
    assert lower <= upper <= 2 * 1.1
    homogeneous = _power({((1, 1), (2, 1)): 1, ((2, 2),): 1})
    lower, upper, witness = grid_sup_bracket(homogeneous, slack_target=0.05)
    assert lower == pytest.approx(2)
    assert lower * (1 - 1e-12) <= upper <= 2 * 1.05 * (1 + 1e-9)
    assert witness[1] == 1


def test_grid_budget():
    P = _power({((1, 3), (2, 3), (3, 3)): 1, ((4, 3),): 1})
    assert grid_points_needed(P) > 10
    with pytest.raises(BudgetExceededError):
        grid_sup_bracket(P, max_points=10)
    lower, upper, witness, rigorous = sup_bracket(P, max_points=10)
    assert not rigorous
    assert upper == coefficient_l1(P)
    assert lower <= upper


def test_empty_polynomial():
    assert grid_sup_bracket(SparseSeries(side=Side.power)) == (0.0, 0.0, {})
