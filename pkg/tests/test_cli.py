import json

import pytest

from bohrstrip.cli import bohrstrip

CONSTRUCT_OUTPUTS = ["series.json", "growth.json", "norms.json", "abscissa.json", "growth.csv"]


@pytest.fixture()
def construct_run(runner, write_config, out_dir):
    path = write_config({"K": 2, "samples": 16})
    result = runner.invoke(bohrstrip, ["construct", "-c", path, "-o", str(out_dir)])
    return result, out_dir


def test_construct(construct_run):
    result, out_dir = construct_run
    assert result.exit_code == 0, result.output
    for name in CONSTRUCT_OUTPUTS:
        assert (out_dir / name).exists()
    assert "growth.json: pass" in result.output
    growth = json.loads((out_dir / "growth.json").read_text())
    assert growth["provenance"]["command"] == "construct"
    assert growth["verdict"] == "pass"


def test_construct_is_deterministic(runner, write_config, construct_run, tmp_path):
    _, out_dir = construct_run
    again = tmp_path / "again"
    path = write_config({"K": 2, "samples": 16}, name="again.yml")
    result = runner.invoke(bohrstrip, ["construct", "-c", path, "-o", str(again)])
    assert result.exit_code == 0, result.output
    for name in CONSTRUCT_OUTPUTS:
        assert (again / name).read_bytes() == (out_dir / name).read_bytes()


def test_construct_invalid_input(runner, write_config, out_dir):
    path = write_config({"m": 5, "p": 5})
    result = runner.invoke(bohrstrip, ["construct", "-c", path, "-o", str(out_dir)])
    assert result.exit_code == 2
    assert "InvalidInputError" in result.output
    assert not (out_dir / "series.json").exists()


def test_construct_over_budget(runner, write_config, out_dir):
    path = write_config({"K": 2, "max_terms": 100})
    result = runner.invoke(bohrstrip, ["construct", "-c", path, "-o", str(out_dir)])
    assert result.exit_code == 3
    assert "BudgetExceededError" in result.output


@pytest.mark.parametrize("which, outputs", [("l2", ["isometry_l2.json", "orthonormality.json"]), ("l1", ["isometry_l1.json"])])
def test_embed(runner, write_config, out_dir, which, outputs):
    path = write_config({"embed": {"M_max": 3}})
    result = runner.invoke(bohrstrip, ["embed", "--which", which, "-c", path, "-o", str(out_dir)])
    assert result.exit_code == 0, result.output
    for name in ["series.json"] + outputs:
        assert (out_dir / name).exists()
        if name != "series.json":
            verified = runner.invoke(bohrstrip, ["verify", str(out_dir / "series.json"), str(out_dir / name)])
            assert verified.exit_code == 0, verified.output


def test_perturb(runner, out_dir):
    result = runner.invoke(bohrstrip, ["perturb", "-o", str(out_dir)])
    assert result.exit_code == 0, result.output
    perturbation = json.loads((out_dir / "perturbation.json").read_text())
    assert perturbation["w"] == 6
    assert perturbation["degree_D2"] == 4
    assert perturbation["shift_prime"] == 2
    assert perturbation["bounds"]["sup_distance_bound"] < perturbation["epsilon"]
    membership = json.loads((out_dir / "membership.json").read_text())
    assert membership["verdict"] == "pass"
    assert membership["inputs"]["query"]["ell"] == 10
    for name in ["homogeneity.json", "perturbation_growth.json", "membership.json"]:
        verified = runner.invoke(bohrstrip, ["verify", str(out_dir / "series.json"), str(out_dir / name)])
        assert verified.exit_code == 0, verified.output
    verified = runner.invoke(bohrstrip, ["verify", str(out_dir / "d2_series.json"), str(out_dir / "d2_growth.json")])
    assert verified.exit_code == 0, verified.output


def test_algebra(runner, write_config, out_dir):
    path = write_config({"combinations": 10})
    result = runner.invoke(bohrstrip, ["algebra", "-c", path, "-o", str(out_dir)])
    assert result.exit_code == 0, result.output
    algebra = json.loads((out_dir / "algebra.json").read_text())
    assert algebra["independence"] is not None
    assert all(algebra["homogeneity_rules"].values())
    assert algebra["coefficient_stability"]["within_tau"]
    verified = runner.invoke(bohrstrip, ["verify", str(out_dir / "series.json"), str(out_dir / "disjointness.json")])
    assert verified.exit_code == 0, verified.output


@pytest.mark.parametrize(
    "args, config",
    [
        (["embed", "--which", "l2"], {"embed": {"M_max": 3}}),
        (["embed", "--which", "l1"], {"embed": {"M_max": 3}}),
        (["perturb"], {}),
        (["algebra"], {"combinations": 10}),
    ],
)
def test_runs_are_deterministic(runner, write_config, tmp_path, args, config):
    path = write_config(config)
    runs = []
    for name in ("first", "second"):
        directory = tmp_path / name
        result = runner.invoke(bohrstrip, args + ["-c", path, "-o", str(directory)])
        assert result.exit_code == 0, result.output
        runs.append({p.name: p.read_bytes() for p in sorted(directory.iterdir())})
    assert runs[0]
    assert runs[0] == runs[1]


def test_algebra_rejects_wide_polynomial(runner, write_config, out_dir):
    path = write_config({"generators": 2, "polynomial": [{"exponents": [1, 1, 1], "re": 1.0}]})
    result = runner.invoke(bohrstrip, ["algebra", "-c", path, "-o", str(out_dir)])
    assert result.exit_code == 2


def test_verify(runner, construct_run):
    _, out_dir = construct_run
    series, certificate = str(out_dir / "series.json"), str(out_dir / "growth.json")
    result = runner.invoke(bohrstrip, ["verify", series, certificate])
    assert result.exit_code == 0, result.output
    result = runner.invoke(bohrstrip, ["check", series, str(out_dir / "norms.json")])
    assert result.exit_code == 0, result.output


def test_verify_corrupted_series(runner, construct_run):
    _, out_dir = construct_run
    data = json.loads((out_dir / "series.json").read_text())
    data["terms"][0]["re"] *= 2
    corrupted = out_dir / "corrupted.json"
    corrupted.write_text(json.dumps(data))
    result = runner.invoke(bohrstrip, ["verify", str(corrupted), str(out_dir / "growth.json")])
    assert result.exit_code == 1
    assert "row" in result.output


def test_verify_unparsable_series(runner, construct_run):
    _, out_dir = construct_run
    broken = out_dir / "broken.json"
    broken.write_text('{"side": "dirichlet", "terms": [{"alpha": [[2, 1], [1, 1]], "re": 1}]}')
    result = runner.invoke(bohrstrip, ["verify", str(broken), str(out_dir / "growth.json")])
    assert result.exit_code == 2
    assert "ParseError" in result.output


def test_show(runner, write_config):
    path = write_config({"seed": 9, "construct": {"K": 3}})
    result = runner.invoke(bohrstrip, ["show", "-c", path])
    assert result.exit_code == 0, result.output
    shown = json.loads(result.output)
    assert shown["seed"] == 9
    assert shown["construct"]["K"] == 3
    result = runner.invoke(bohrstrip, ["config", "--seed", "4"])
    assert json.loads(result.output)["seed"] == 4


def test_show_sample(runner):
    result = runner.invoke(bohrstrip, ["show", "--sample"])
    assert result.exit_code == 0
    assert "# seed: 0" in result.output
    assert "construct:" in result.output


def test_list_commands(runner):
    result = runner.invoke(bohrstrip, ["--help"])
    assert result.exit_code == 0
    for name in ["algebra", "construct", "embed", "perturb", "show", "verify"]:
        assert name in result.output
