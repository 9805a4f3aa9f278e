import pytest

from germforge.core.germs import MapGerm, OnePSU
from germforge.io.catalog import AUGMENTATION, FUNCTION, GERM, OPSU, load_catalog
from germforge.io.germ_spec import GermSpecError, load_germ_spec, parse_germ_spec

CUSP_FAMILY = """\
# the cusp family
label f_2;
vars y;
param l;
germ y^2, y^5 + l*y, l;
"""


def test_cusp_family_is_an_unfolding():
    entry = parse_germ_spec(CUSP_FAMILY)
    assert entry.kind == OPSU
    assert entry.label == "f_2"
    assert isinstance(entry.payload, OnePSU)
    assert entry.payload.parameter == "l"


def test_11_5_matches_the_catalog(tmp_path):
    path = tmp_path / "11_5.germ"
    path.write_text("vars x, y\nparam l\ngerm x, y^4 + x*y^2 + x^2*y + l*y, l\n")
    entry = load_germ_spec(path)
    assert entry.label == "11_5"
    assert entry.payload.components_equal(load_catalog().opsu("11_5"))
    assert entry.provenance.endswith("11_5.germ")


def test_germ_without_parameter():
    entry = parse_germ_spec("vars y\ngerm y^2, y^3\n")
    assert entry.kind == GERM
    assert type(entry.payload) is MapGerm


def test_function_only():
    entry = parse_germ_spec("function g(u, v) = u^7 + u^3*v^4 + v^6;\n")
    assert entry.kind == FUNCTION
    assert entry.payload.variables == ("u", "v")
    assert entry.label == "g"


def test_germ_with_function_is_an_augmentation():
    entry = parse_germ_spec(CUSP_FAMILY + "function g(x) = x^3;\n")
    assert entry.kind == AUGMENTATION
    F, g = entry.payload
    assert F.label == "f_2"
    assert g.label == "g"


def test_undeclared_variable_reports_its_line():
    with pytest.raises(GermSpecError) as info:
        parse_germ_spec("vars y\nparam l\n\ngerm y^2, y^5 + z*y, l\n", "bad.germ")
    assert info.value.line == 4
    assert str(info.value).startswith("bad.germ:4:")
    assert "z" in str(info.value)


@pytest.mark.parametrize(
    "text, line",
    [
        ("vars y\nshape y^2\n", 2),
        ("vars y\nvars x\n", 2),
        ("germ y^2, y^3\n", 1),
        ("vars y, y\ngerm y^2, y^3\n", 1),
        ("vars y\nparam y\ngerm y^2, y^3 + y, y\n", 2),
        ("vars y\nparam l\n", 2),
        ("function g x^3\n", 1),
    ],
)
def test_malformed_specs(text, line):
    with pytest.raises(GermSpecError) as info:
        parse_germ_spec(text)
    assert info.value.line == line


def test_empty_spec():
    with pytest.raises(GermSpecError):
        parse_germ_spec("# nothing here\n")


def test_function_needs_an_unfolding():
    with pytest.raises(GermSpecError):
        parse_germ_spec("vars y\ngerm y^2, y^3\nfunction g(x) = x^3\n")


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_germ_spec(tmp_path / "absent.germ")
