import json

import numpy as np
import pytest

import main
from utils.state_io import parse_state


def run(argv, capsys):
    code = main.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def ghz4_file(tmp_path, capsys):
    path = tmp_path / "ghz4.json"
    assert main.main(["gen", "ghz", "--n", "4", "--output", str(path)]) == 0
    capsys.readouterr()
    return path


def test_measure_ghz(ghz4_file, capsys):
    code, out, _ = run(["measure", str(ghz4_file)], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["f"] == pytest.approx(1.0)
    assert report["eq"] == pytest.approx(1.0)
    assert report["picture"] == "coherence"


@pytest.mark.parametrize("picture", ["density", "coherence", "qubit-fast", "qubit_fast"])
def test_measure_completely_mixed_in_each_picture(tmp_path, capsys, picture):
    path = tmp_path / "mixed22.json"
    assert main.main(["gen", "mixed", "--dims", "2,2", "--output", str(path)]) == 0
    code, out, _ = run(["measure", str(path), "--picture", picture], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["f"] == pytest.approx(-0.5)
    assert report["eq"] == 0.0


def test_measure_malformed_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    code, _, err = run(["measure", str(path)], capsys)
    assert code == 1
    assert "JSON" in err


def test_measure_missing_file(tmp_path, capsys):
    code, _, _ = run(["measure", str(tmp_path / "missing.json")], capsys)
    assert code == 1


def test_measure_validation_error(tmp_path, capsys):
    rows = [[[1.1 if i == j == 0 else (-0.1 if i == j == 1 else 0.0), 0.0] for j in range(4)] for i in range(4)]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dims": [2, 2], "rows": rows}), encoding="utf-8")
    code, _, _ = run(["measure", str(path)], capsys)
    assert code == 2
    code, _, _ = run(["measure", str(path), "--no-validate"], capsys)
    assert code == 0


def test_measure_picture_incompatible(tmp_path, capsys):
    path = tmp_path / "qubit_qutrit.json"
    assert main.main(["gen", "mixed", "--dims", "2,3", "--output", str(path)]) == 0
    code, _, _ = run(["measure", str(path), "--picture", "qubit-fast"], capsys)
    assert code == 3


def test_measure_with_channel(tmp_path, capsys):
    state = tmp_path / "bell.json"
    assert main.main(["gen", "ghz", "--n", "2", "--output", str(state)]) == 0
    channel = tmp_path / "dephase.json"
    p0 = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
    p1 = [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
    identity = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
    channel.write_text(
        json.dumps({"dims": [2, 2], "factors": [{"kraus": [p0, p1]}, {"kraus": [identity]}]}),
        encoding="utf-8",
    )
    capsys.readouterr()
    code, out, _ = run(["measure", str(state), "--channel", str(channel)], capsys)
    assert code == 0
    assert json.loads(out)["eq"] == pytest.approx(0.0, abs=1e-12)

    channel.write_text(
        json.dumps({"dims": [2, 2], "factors": [{"kraus": [p0]}, {"kraus": [identity]}]}),
        encoding="utf-8",
    )
    code, _, _ = run(["measure", str(state), "--channel", str(channel)], capsys)
    assert code == 2


def test_sweep_werner_json(capsys):
    code, out, err = run(["sweep-werner", "--from", "-1", "--to", "1", "--steps", "401"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert len(payload["rows"]) == 401
    assert len(payload["crossings"]) == 1
    assert payload["matches_published"] is False
    assert "Werner" in err


def test_sweep_werner_csv(tmp_path, capsys):
    path = tmp_path / "sweep.csv"
    code, _, _ = run(["sweep-werner", "--steps", "11", "--out", "csv", "--output", str(path)], capsys)
    assert code == 0
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "phi,f,eq"
    assert lines[-1].startswith("# ")


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep-werner", "--steps", "1"],
        ["sweep-werner", "--from", "0.5", "--to", "0.1"],
        ["verify", "--trials", "0"],
        ["basis", "--dim", "1"],
        ["gen", "nothing"],
        [],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    code, _, _ = run(argv, capsys)
    assert code == 1


def test_verify_small_run(tmp_path, capsys):
    code, out, _ = run(["verify", "--seed", "42", "--trials", "2", "--dims", "2,2;2,3", "--quiet"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert report["config"]["dims"] == [[2, 2], [2, 3]]


def test_verify_is_deterministic(capsys):
    argv = ["verify", "--seed", "7", "--trials", "2", "--dims", "2,2", "--quiet"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second


def test_verify_mutation_writes_counterexamples(tmp_path, capsys):
    path = tmp_path / "counterexamples.json"
    code, _, err = run(
        [
            "verify",
            "--trials",
            "2",
            "--dims",
            "2,2",
            "--quiet",
            "--mutate-g-weight",
            "--counterexample-out",
            str(path),
        ],
        capsys,
    )
    assert code == 4
    counterexamples = json.loads(path.read_text(encoding="utf-8"))
    assert any(c["property"] == "picture_equivalence" for c in counterexamples)
    assert str(path) in err


def test_gen_ghz_shape(capsys):
    code, out, _ = run(["gen", "ghz", "--n", "3"], capsys)
    assert code == 0
    rho = parse_state(json.loads(out))
    assert rho.matrix.shape == (8, 8)


def test_gen_werner_valid(capsys):
    code, out, _ = run(["gen", "werner", "--phi", "0.5"], capsys)
    assert code == 0
    assert parse_state(json.loads(out)).dims == (2, 2)
    code, _, _ = run(["gen", "werner", "--phi", "1.5"], capsys)
    assert code == 2


def test_gen_separable_writes_certificate(tmp_path, capsys):
    state = tmp_path / "sep.json"
    code, _, _ = run(["gen", "separable", "--dims", "2,3", "--terms", "4", "--seed", "7", "--output", str(state)], capsys)
    assert code == 0
    certificate = json.loads((tmp_path / "sep.certificate.json").read_text(encoding="utf-8"))
    assert len(certificate["weights"]) == 4
    assert certificate["dims"] == [2, 3]
    code, out, _ = run(["measure", str(state)], capsys)
    assert code == 0
    assert json.loads(out)["eq"] == 0.0


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "ghz", "--n", "4"],
        ["gen", "werner", "--phi", "-0.3"],
        ["gen", "mixed", "--dims", "3,3"],
        ["gen", "maxent", "--dim", "3"],
        ["gen", "pure", "--dims", "2,2,2", "--seed", "1"],
        ["gen", "product", "--dims", "2,3", "--seed", "2"],
        ["gen", "density", "--dims", "3,3", "--rank", "2", "--seed", "3"],
    ],
)
def test_gen_output_measures_cleanly(tmp_path, capsys, argv):
    path = tmp_path / "state.json"
    assert main.main(argv + ["--output", str(path)]) == 0
    code, out, _ = run(["measure", str(path), "--picture", "density"], capsys)
    assert code == 0
    assert 0.0 <= json.loads(out)["eq"] <= 1.0 + 1e-9


def test_gen_output_is_exact(capsys):
    code, out, _ = run(["gen", "density", "--dims", "2,2", "--seed", "11"], capsys)
    assert code == 0
    from generator.state_gallery import random_density

    rho = parse_state(json.loads(out))
    assert np.array_equal(rho.matrix, random_density((2, 2), 4, 11).matrix)


def test_basis_dump(capsys):
    code, out, _ = run(["basis", "--dim", "2"], capsys)
    assert code == 0
    elements = json.loads(out)
    assert len(elements) == 4
    s = 1 / np.sqrt(2)
    assert elements[2] == [[[0.0, 0.0], [0.0, -s]], [[0.0, s], [0.0, 0.0]]]

    code, out, _ = run(["basis", "--dim", "3"], capsys)
    assert len(json.loads(out)) == 9
