import pytest

from bohrstrip.errors import ParseError
from bohrstrip.formats import (
    growth_rows,
    polynomial_from_terms,
    polynomial_to_terms,
    read_growth_csv,
    read_series,
    series_from_dict,
    series_to_dict,
    write_growth_csv,
    write_series,
)
from bohrstrip.series import abs_sum_profile, Side, SparseSeries


def test_series_file(tmp_path):
    D = SparseSeries.from_indices({1: 1, 12: 0.5 - 2j, 9409: -3})
    path = tmp_path / "series.json"
    write_series(str(path), D)
    assert read_series(str(path)) == D
    text = path.read_text()
    write_series(str(path), SparseSeries(dict(reversed(list(D.terms.items())))))
    assert path.read_text() == text
    assert series_to_dict(D)["terms"][0] == {"alpha": [], "re": 1.0, "im": 0.0}


@pytest.mark.parametrize(
    "data",
    [
        {"side": "dirichlet", "terms": [{"alpha": [[2, 1], [1, 1]], "re": 1}]},
        {"side": "dirichlet", "terms": [{"alpha": [[1, 1]], "re": 1}, {"alpha": [[1, 1]], "re": 2}]},
        {"side": "dirichlet", "terms": [{"alpha": [[1, 0]], "re": 1}]},
        {"side": "dirichlet", "terms": [{"alpha": [[1.5, 1]], "re": 1}]},
        {"side": "sideways", "terms": []},
        {"side": "power"},
        [],
    ],
)
def test_series_parse_errors(data):
    with pytest.raises(ParseError):
        series_from_dict(data)


def test_power_side_file():
    data = {"side": "power", "terms": [{"alpha": [[1, 2]], "re": 0, "im": 1}]}
    P = series_from_dict(data)
    assert P.side is Side.power
    assert P.coefficient(4) == 1j


def test_growth_csv(tmp_path):
    D = SparseSeries.from_indices({1: 1, 10: 2})
    rows = growth_rows(abs_sum_profile(D, 0.5), 0.5)
    path = str(tmp_path / "growth.csv")
    write_growth_csv(path, rows)
    assert open(path).readline().strip() == "N_log10,sigma,A_N"
    read = read_growth_csv(path)
    assert read[0] == (0.0, 0.5, 1.0)
    assert read[1][0] == pytest.approx(1)
    assert read[1][2] == pytest.approx(1 + 2 / 10**0.5)


def test_growth_csv_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("N,A\n1,2\n")
    with pytest.raises(ParseError):
        read_growth_csv(str(path))


def test_polynomial_terms():
    Q = polynomial_from_terms(
        [
            {"exponents": [1], "re": 1},
            {"exponents": [1, 0], "re": 2},
            {"exponents": [0, 2], "re": 1, "im": 1},
            {"exponents": [0, 1], "re": 0},
        ]
    )
    assert Q == {(1, 0): 3, (0, 2): 1 + 1j}
    assert polynomial_from_terms(polynomial_to_terms(Q)) == Q
    with pytest.raises(ParseError):
        polynomial_from_terms([{"exponents": [-1], "re": 1}])
    with pytest.raises(ParseError):
        polynomial_from_terms([{"re": 1}])
