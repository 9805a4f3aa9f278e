import pytest
from sympy import Rational

from germforge.core.functions import FunctionGerm
from germforge.core.germs import (
    ArityError,
    GermShapeError,
    ImmersiveCurveError,
    MapGerm,
    OnePSU,
    ParityError,
    VariableCollisionError,
    augment,
    conjecture2_bound,
    natural_opsu,
    normal_form_opsu,
    plane_curve_report,
    quasihomogeneous_map_weights,
)
from germforge.core.ring import make_ring, parse_polynomial
from germforge.core.standard_basis import VectorTuple


@pytest.fixture
def cusp_family():
    return OnePSU.parse("y^2, y^5 + l*y, l", ("y", "l"), label="f_2")


def test_augment_builds_f4(cusp_family):
    g = FunctionGerm.parse("x^3", ("x",), label="x^3")
    F4 = augment(cusp_family, g)
    expected = MapGerm.parse("y^2, y^5 + x^3*y, x", ("y", "x"))
    assert F4.components_equal(expected)
    assert F4.label == "A_{F,x^3}(f_2)"
    shown = F4.permuted((2, 0, 1))
    assert shown.components_equal(MapGerm.parse("x, y^2, y^5 + x^3*y", ("x", "y")))


def test_augment_of_the_cusp_by_x4():
    F = OnePSU.parse("y^2, y^3 + l*y, l", ("y", "l"))
    germ = augment(F, FunctionGerm.parse("x^4", ("x",)))
    assert germ.components_equal(MapGerm.parse("y^2, y^3 + x^4*y, x", ("y", "x")))


def test_augment_by_a_coordinate_renames_the_parameter(cusp_family):
    germ = augment(cusp_family, FunctionGerm.parse("z", ("z",)))
    assert germ.components_equal(MapGerm.parse("y^2, y^5 + z*y, z", ("y", "z")))


def test_augment_then_z_zero_recovers_the_base(cusp_family):
    germ = augment(cusp_family, FunctionGerm.parse("x^3", ("x",)))
    as_opsu = OnePSU.from_germ(germ)
    assert as_opsu.base.components_equal(cusp_family.base)


def test_augment_rejects_shared_variables(cusp_family):
    with pytest.raises(VariableCollisionError):
        augment(cusp_family, FunctionGerm.parse("y^3", ("y",)))


def test_natural_opsu_restricts_to_the_augmentation(cusp_family):
    g = FunctionGerm.parse("x^3", ("x",))
    G = natural_opsu(cusp_family, g)
    assert G.parameter == "l1"
    expected = OnePSU.parse("y^2, y^5 + (x^3 + l1)*y, x, l1", ("y", "x", "l1"))
    assert G.components_equal(expected)
    assert G.base.components_equal(augment(cusp_family, g))


def test_natural_opsu_of_the_zero_function(cusp_family):
    zero = FunctionGerm(make_ring(("z",)).zero)
    G = natural_opsu(cusp_family, zero)
    assert G.components_equal(OnePSU.parse("y^2, y^5 + l1*y, z, l1", ("y", "z", "l1")))


def test_opsu_shape_checks():
    with pytest.raises(GermShapeError):
        OnePSU.parse("y^2, y^5 + l*y, l^2", ("y", "l"))
    with pytest.raises(GermShapeError):
        MapGerm.parse("y + 1, y^2", ("y",))
    with pytest.raises(ArityError):
        MapGerm.parse("y^2, y^3", ("y",), target=("X",))


def test_unfolding_target_names_end_with_the_parameter_slot(cusp_family):
    assert cusp_family.target == ("X1", "X2", "L")
    F = OnePSU.parse("x, y^4 + x*y^2 + x^2*y + l*y, l", ("x", "y", "l"))
    assert F.target == ("X1", "X2", "L")
    assert MapGerm.parse("y^2, y^5 + l*y, l", ("y", "l")).target == ("X1", "X2", "X3")


def test_opsu_parameter_slot_switches_letter_on_collision():
    F = OnePSU.parse("y^2, y^5 + L*y, L", ("y", "L"))
    assert F.target == ("W1", "W2", "WL")


def test_base_sets_the_parameter_to_zero(cusp_family):
    assert cusp_family.base.components_equal(MapGerm.parse("y^2, y^5", ("y",)))
    assert cusp_family.base.target == ("X1", "X2")


def _y2y5():
    return MapGerm.parse("y^2, y^5", ("y",))


def _gamma(germ):
    ring = germ.ring
    return VectorTuple((ring.zero, ring.gens[0]))


def test_normal_form_with_vanishing_q():
    f = _y2y5()
    F = normal_form_opsu(f, _gamma(f), [], [])
    assert F.components_equal(OnePSU.parse("y^2, y^5 + l*y, l", ("y", "l")))


@pytest.mark.parametrize(
    "q_text, expected",
    [
        ("1", "y^2, y^5 + (1 + l*y^2)*l*y, l"),
        ("t", "y^2, y^5 + (1 + l^2*y^2)*l*y, l"),
    ],
)
def test_normal_form_with_hadamard_expansion(q_text, expected):
    f = _y2y5()
    s = [parse_polynomial("X1", make_ring(f.target))]
    q = [parse_polynomial(q_text, make_ring(("t",)))]
    F = normal_form_opsu(f, _gamma(f), s, q, expand_hadamard=True)
    assert F.components_equal(OnePSU.parse(expected, ("y", "l")))


def test_normal_form_reads_q_literally_by_default():
    f = _y2y5()
    s = [parse_polynomial("X1", make_ring(f.target))]
    q = [parse_polynomial("1", make_ring(("t",)))]
    F = normal_form_opsu(f, _gamma(f), s, q)
    assert F.components_equal(OnePSU.parse("y^2, y^5 + (1 + y^2)*l*y, l", ("y", "l")))


def test_normal_form_argument_checks():
    f = _y2y5()
    with pytest.raises(ArityError):
        normal_form_opsu(f, _gamma(f), [parse_polynomial("X1", make_ring(f.target))], [])
    with pytest.raises(VariableCollisionError):
        normal_form_opsu(f, _gamma(f), [], [], parameter="y")


def test_map_weights_of_the_cusp():
    weights = quasihomogeneous_map_weights(MapGerm.parse("y^2, y^3", ("y",)))
    (w,) = weights.source
    assert weights.target == (2 * w, 3 * w)


def test_map_weights_of_11_5_do_not_exist():
    assert quasihomogeneous_map_weights(MapGerm.parse("x, y^4 + x*y^2 + x^2*y", ("x", "y"))) is None


@pytest.mark.parametrize(
    "text, branches, expected",
    [
        ("y^2 - x^3", 1, (2, 2, 1, 1, 1, Rational(1))),
        ("x^3 + y^4", 1, (6, 6, 3, 3, 3, Rational(1))),
        ("u^7 + u^3*v^4 + v^6", 5, (30, 27, 17, 13, 10, Rational(13, 10))),
    ],
)
def test_plane_curve_report(text, branches, expected):
    names = ("u", "v") if "u" in text else ("x", "y")
    report = plane_curve_report(FunctionGerm.parse(text, names), branches)
    assert (report.mu, report.tau, report.delta, report.mu_image, report.aecod, report.quotient) == expected


def test_plane_curve_parity_and_immersion():
    with pytest.raises(ParityError):
        plane_curve_report(FunctionGerm.parse("y^2 - x^3", ("x", "y")), 2)
    with pytest.raises(ImmersiveCurveError):
        plane_curve_report(FunctionGerm.parse("x*y", ("x", "y")), 2)
    with pytest.raises(GermShapeError):
        plane_curve_report(FunctionGerm.parse("x^2", ("x",)))


@pytest.mark.parametrize(
    "n, maximum, bound, attained",
    [(2, 2, Rational(9, 4), False), (3, 4, Rational(4), True), (5, 9, Rational(9), True)],
)
def test_conjecture2_bound(n, maximum, bound, attained):
    result = conjecture2_bound(n)
    assert result.maximum == maximum
    assert result.bound == bound
    assert result.attained is attained
    assert all(v <= result.bound for _, v in result.values)


def test_conjecture2_bound_values_for_three():
    assert conjecture2_bound(3).values == ((1, 4), (2, 3))
    with pytest.raises(ValueError):
        conjecture2_bound(1)
