import pytest
import yaml
from click.testing import CliRunner

from bohrstrip import primes, series
from bohrstrip.blocks import make_blocks, Progression
from bohrstrip.constructors import construction_params, make_Dkm, make_P
from bohrstrip.series import bohr_transform, SparseSeries


@pytest.fixture(autouse=True)
def restore_budgets(monkeypatch):
    # harness runs set the module level budgets from their settings
    monkeypatch.setattr(series, "MAX_TERMS", series.MAX_TERMS)
    monkeypatch.setattr(primes.get_prime_table(), "max_primes", primes.get_prime_table().max_primes)


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def write_config(tmp_path):
    def _write(data, name="config.yml"):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data))
        return str(path)

    return _write


@pytest.fixture()
def out_dir(tmp_path):
    directory = tmp_path / "out"
    directory.mkdir()
    return directory


@pytest.fixture(scope="session")
def small_dkm():
    """A 3-homogeneous H2-normalized series on positions 2, 3, ..., 6 with its growth certificate."""
    return make_Dkm(Progression(1, 1), 2, 3, norm="h2", p=5, K=1)


@pytest.fixture(scope="session")
def default_construction():
    """The default construct run: (m, p, K, epsilon) = (2, 5, 4, 0.5) on the progression 3 + 2k."""
    scheme = make_blocks(3, 2, 5, 4, 2)
    params = construction_params(2, 5, 4, 0.5)
    return scheme, params, bohr_transform(make_P(scheme, params))


@pytest.fixture()
def base_polynomial():
    """1 + 2 * 3^(-s)"""
    return SparseSeries.from_indices({1: 1, 3: 2})
