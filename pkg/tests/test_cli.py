import json

import pytest

from germforge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_csv_row(capsys):
    code, out, _ = run(capsys, "bounds", "--opsu", "catalog:11_5", "--g", "catalog:DG_3", "--format", "csv")
    assert code == 0
    assert out.strip().splitlines()[-1] == "A_{F,DG_3}(11_5),54,57,60,57"


def test_milnor_number_of_a_catalog_function(capsys):
    code, out, _ = run(capsys, "mu", "--g", "catalog:DG_3")
    assert code == 0
    assert out.strip() == "30"


def test_group_level_json_format(capsys):
    code, out, _ = run(capsys, "--format", "json", "tau", "--g", "x^3 + y^4")
    assert code == 0
    assert json.loads(out) == {"tau": 6}


def test_tau_tilde_of_a_literal_trivializer(capsys):
    code, out, _ = run(capsys, "tau-tilde", "--germ", "Y1,Y2,X^3+X*Y1+Z^3,X", "--vars", "X,Y1,Y2,Z")
    assert code == 0
    assert out.strip() == "3"


def test_augmentation_certificate(capsys):
    code, out, _ = run(capsys, "aug-cert", "--germ", "catalog:T_1", "--p", "4", "--s", "1")
    assert code == 0
    assert out.startswith("true")


def test_augmentation_certificate_needs_a_positive_degree(capsys):
    code, out, err = run(capsys, "aug-cert", "--germ", "catalog:T_1", "--p", "4", "--s", "0")
    assert code == 1
    assert out == ""
    assert "positive" in err


def test_infinite_milnor_number_is_a_refusal(capsys):
    code, out, err = run(capsys, "mu", "--g", "x^2", "--vars", "x,y")
    assert code == 2
    assert out.strip() == "infinite"
    assert "infinite" in err


def test_non_principal_image_is_a_refusal(capsys):
    code, _, _ = run(capsys, "image", "--germ", "x, x, x", "--vars", "x,y")
    assert code == 2


def test_parity_is_a_refusal(capsys):
    code, _, _ = run(capsys, "plane-curve", "--g", "y^2 - x^3", "--vars", "x,y", "--branches", "2")
    assert code == 2


def test_literal_unfolding_needs_a_parameter(capsys):
    code, _, err = run(capsys, "delta-sub", "--opsu", "y^2, y^5 + l*y, l")
    assert code == 1
    assert "--param" in err


def test_literal_unfolding(capsys):
    code, out, _ = run(capsys, "delta-sub", "--opsu", "y^2, y^5 + l*y, l", "--param", "l")
    assert code == 0
    assert out.strip() == "1"


def test_exhausted_bound(capsys):
    code, out, _ = run(capsys, "delta-sub", "--opsu", "catalog:11_5", "--bound", "1", "--format", "json")
    assert code == 0
    assert json.loads(out)["delta"]["at_least"] == 2


def test_unknown_command(capsys):
    code, _, _ = run(capsys, "nonsense")
    assert code == 1


@pytest.mark.parametrize("argv", [["--bound", "0", "mu", "--g", "x^2"], ["delta-sub", "--bound", "0", "--opsu", "catalog:f_2"]])
def test_bad_bound(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 1


def test_bad_bound_from_the_environment(capsys, monkeypatch):
    monkeypatch.setenv("GERMFORGE_BOUND", "zero")
    code, _, err = run(capsys, "mu", "--g", "x^2")
    assert code == 1
    assert "GERMFORGE_BOUND" in err


def test_undeclared_variable_in_a_spec_file(capsys, tmp_path):
    path = tmp_path / "bad.germ"
    path.write_text("vars y\nparam l\ngerm y^2, y^5 + z*y, l\n")
    code, _, err = run(capsys, "codim", "--opsu", str(path))
    assert code == 1
    assert "bad.germ:3" in err


def test_spec_file_codimension(capsys, tmp_path):
    path = tmp_path / "f_2.germ"
    path.write_text("label f_2\nvars y\nparam l\ngerm y^2, y^5 + l*y, l\nfunction g(x) = x^3\n")
    code, out, _ = run(capsys, "codim", "--opsu", str(path), "--g", str(path))
    assert code == 0
    assert out.strip() == "4"


def test_empty_table(capsys):
    code, out, _ = run(capsys, "table1", "--rows", "", "--format", "csv")
    assert code == 0
    assert out.strip() == "label,lower,value,upper,refined"


def test_table_rows_written_to_a_file(capsys, tmp_path):
    output = tmp_path / "rows.csv"
    code, _, _ = run(capsys, "table1", "--rows", "DG_3 × 11_5", "--output", str(output))
    assert code == 0
    assert output.read_text().splitlines()[1] == "A_{F,DG_3}(11_5),54,57,60,57"


def test_conjecture_bound(capsys):
    code, out, _ = run(capsys, "conj2-bound", "--n", "3")
    assert code == 0
    assert out.strip().splitlines()[-1] == "max 4  bound 4  attained true"


def test_augment_prints_the_germ(capsys):
    code, out, _ = run(capsys, "--format", "json", "augment", "--opsu", "catalog:f_2", "--g", "x^3")
    assert code == 0
    data = json.loads(out)
    assert data["label"] == "A_{F,g}(f_2)"
    assert data["source"] == ["y", "x"]
    first, second, third = data["components"]
    assert (first, third) == ("y^2", "x")
    assert second.startswith("y^5 + ")


def test_catalog_listing(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    assert "11_5-opsu" in out
