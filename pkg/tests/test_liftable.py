import pytest

from germforge.core.discriminant import HypersurfaceEquation, defining_equation, image_equation
from germforge.core.germs import MapGerm, OnePSU
from germforge.core.liftable import (
    SubstantialityDegree,
    augmentation_certificate,
    cross_substantiality_witness,
    derlog,
    is_cross_substantial,
    isosingular_dimension,
    jxh_test,
    lift_ideal,
    substantiality_degree,
    substantiality_report,
)
from germforge.core.ring import LOCAL_NEGDEGREVLEX, constant_term, make_ring, parse_polynomial, reorder
from germforge.core.standard_basis import quotient_dimension, standard_basis

F1 = "y^2, y^3 + l*y, l"
F2 = "y^2, y^5 + l*y, l"
F11_5 = "x, y^4 + x*y^2 + x^2*y + l*y, l"
F5_2 = "x, y, z^5 + x*z + y^2*z^2 + y*z^3 + l*z^2, l"


def _opsu(text, names):
    return OnePSU.parse(text, names)


@pytest.fixture(scope="module")
def cusp_family():
    return _opsu(F2, ("y", "l"))


@pytest.fixture(scope="module")
def opsu_11_5():
    return _opsu(F11_5, ("x", "y", "l"))


def _local_ideal(polys):
    return standard_basis([reorder(p, LOCAL_NEGDEGREVLEX) for p in polys if p])


def test_derlog_of_the_cusp():
    module = derlog(image_equation(MapGerm.parse("y^2, y^3", ("y",))))
    module.check()
    assert len(module.generators) >= 2
    # Derlog is generated by the Euler field (2X, 3Y) and (2Y, 3X^2)
    assert quotient_dimension(_local_ideal([field[0] for field in module.generators])) == 1
    assert quotient_dimension(_local_ideal(module.last_components())) == 2


def test_derlog_of_a_smooth_divisor():
    fold = MapGerm.parse("x, y^2", ("x", "y"))
    divisor = defining_equation(fold)
    assert str(divisor) == "X2"
    module = derlog(divisor)
    assert quotient_dimension(_local_ideal([field[0] for field in module.generators])) == 0
    last = _local_ideal(module.last_components())
    assert last.contains(last.ring.gens[1])
    assert not last.is_unit
    assert isosingular_dimension(fold) == 1


def test_derlog_of_an_empty_divisor_is_everything():
    assert isosingular_dimension(MapGerm.parse("x", ("x",))) == 1
    assert isosingular_dimension(MapGerm.parse("x, y", ("x", "y"))) == 2


def test_derlog_needs_a_reduced_equation():
    cusp = MapGerm.parse("y^2, y^3", ("y",))
    h = image_equation(cusp)
    with pytest.raises(ValueError):
        derlog(HypersurfaceEquation(h.poly**2, cusp, reduced=False))


def test_derlog_of_the_11_5_discriminant_is_tangent(opsu_11_5):
    module = derlog(defining_equation(opsu_11_5))
    module.check()
    h = module.divisor.poly
    partials = [h.diff(gen) for gen in h.ring.gens]
    for field, cofactor in zip(module.generators, module.cofactors):
        assert field.dot(partials) == cofactor * h


def test_lift_ideal_of_the_quasihomogeneous_cusp_contains_the_parameter():
    F = _opsu(F1, ("y", "l"))
    basis = lift_ideal(F)
    assert basis.contains(basis.ring.gens[-1])
    assert substantiality_degree(F) == 1


def test_lift_ideal_of_11_5_needs_the_square(opsu_11_5):
    basis = lift_ideal(opsu_11_5)
    L = basis.ring.gens[-1]
    assert not basis.contains(L)
    assert basis.contains(L**2)
    assert substantiality_degree(opsu_11_5) == 2


def test_substantiality_of_the_cusp_family(cusp_family):
    report = substantiality_report(cusp_family)
    assert report.delta == 1
    assert report.substantial
    assert report.cross_substantial
    assert report.jxh_sufficient
    assert report.stable_caveat
    assert report.to_dict()["delta"] == 1


def test_11_5_is_neither_substantial_nor_cross_substantial(opsu_11_5):
    report = substantiality_report(opsu_11_5)
    assert report.delta == 2
    assert not report.substantial
    assert not report.cross_substantial
    assert not report.jxh_sufficient


@pytest.mark.slow
def test_5_2_is_cross_substantial_but_not_substantial():
    F = _opsu(F5_2, ("x", "y", "z", "l"))
    assert substantiality_degree(F) == 2
    assert is_cross_substantial(F)
    witness = cross_substantiality_witness(F)
    assert witness is not None
    x_p = witness.field.ring.gens[-2]
    assert witness.field[-1] == witness.unit * x_p
    assert constant_term(witness.unit) != 0


def test_cross_witness_of_the_cusp_family(cusp_family):
    witness = cross_substantiality_witness(cusp_family)
    assert witness is not None
    assert witness.field[-1] == witness.unit * witness.field.ring.gens[-2]


def test_no_cross_witness_for_11_5(opsu_11_5):
    assert cross_substantiality_witness(opsu_11_5) is None


def test_exhausted_search_reports_a_lower_bound(opsu_11_5):
    delta = substantiality_degree(opsu_11_5, bound=1)
    assert not delta.exact
    assert delta.lower == 2
    assert str(delta) == ">=2"
    assert delta.leading_power in (None, 2)
    assert delta.to_json()["at_least"] == 2
    with pytest.raises(ValueError):
        substantiality_degree(opsu_11_5, bound=0)


def test_substantiality_degree_compares_with_integers():
    assert SubstantialityDegree(2, 32) == 2
    assert SubstantialityDegree(None, 4) != 5
    assert str(SubstantialityDegree(3, 32)) == "3"


def test_jxh_with_a_unit_partial():
    ring = make_ring(("X1", "L"))
    h = parse_polynomial("L^2 - X1", ring)
    divisor = HypersurfaceEquation(h, MapGerm.parse("y^2, y^3", ("y",)))
    assert jxh_test(divisor)


def test_jxh_for_the_cusp_family(cusp_family):
    assert jxh_test(defining_equation(cusp_family))


@pytest.mark.parametrize(
    "components, names, tau_tilde",
    [
        ("X^3 + X*Y, Y, Z", ("X", "Y", "Z"), 1),
        ("Y1, Y2, X^3 + X*Y1 + Z^3, X", ("X", "Y1", "Y2", "Z"), 3),
        ("Y1, Y2, X^3 + X*Y1 + Z^3", ("X", "Y1", "Y2", "Z"), 1),
    ],
)
def test_isosingular_dimension_of_trivializers(components, names, tau_tilde):
    assert isosingular_dimension(MapGerm.parse(components, names)) == tau_tilde


@pytest.mark.parametrize(
    "components, names, p, s, holds",
    [
        ("X^3 + X*Y, Y, Z", ("X", "Y", "Z"), 3, 1, False),
        ("Y1, Y2, X^3 + X*Y1 + Z^3, X", ("X", "Y1", "Y2", "Z"), 4, 1, True),
        ("Y1, Y2, X^3 + X*Y1 + Z^3", ("X", "Y1", "Y2", "Z"), 4, 2, False),
    ],
)
def test_augmentation_certificate(components, names, p, s, holds):
    assert augmentation_certificate(MapGerm.parse(components, names), p, s) is holds


def test_certificate_needs_positive_degree():
    with pytest.raises(ValueError):
        augmentation_certificate(MapGerm.parse("x", ("x",)), 1, 0)
