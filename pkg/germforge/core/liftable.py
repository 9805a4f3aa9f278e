"""Liftable vector fields: Derlog, the lift ideal, substantiality and the isosingular locus.

Derlog(H) stands in for Lift(F) throughout; the two agree for stable germs,
which is not checked here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, PolyRing

from .discriminant import HypersurfaceEquation, defining_equation
from .germs import MapGerm, OnePSU
from .ring import (
    LOCAL_NEGDEGREVLEX,
    constant_term,
    format_polynomial,
    make_ring,
    reorder,
    variable_names,
)
from .standard_basis import (
    EngineInconsistencyError,
    IdealBasis,
    VectorTuple,
    module_syzygies,
    standard_basis,
)
from .utils import log_info

DEFAULT_BOUND = 32


@dataclass(frozen=True)
class DerlogModule:
    """Generators of the vector fields tangent to H = 0, with eta(H) = a * H."""

    divisor: HypersurfaceEquation
    generators: Tuple[VectorTuple, ...]
    cofactors: Tuple[PolyElement, ...]

    def check(self) -> None:
        h = self.divisor.poly
        partials = [h.diff(gen) for gen in h.ring.gens]
        for field, cofactor in zip(self.generators, self.cofactors):
            if field.dot(partials) != cofactor * h:
                raise EngineInconsistencyError(
                    f"field {[format_polynomial(c) for c in field]} is not tangent to {format_polynomial(h)}"
                )

    def last_components(self) -> List[PolyElement]:
        return [field[-1] for field in self.generators]


def _coordinate_fields(ring: PolyRing) -> Tuple[VectorTuple, ...]:
    n = ring.ngens
    return tuple(
        VectorTuple(tuple(ring.one if i == j else ring.zero for j in range(n))) for i in range(n)
    )


def derlog(divisor: HypersurfaceEquation) -> DerlogModule:
    """Syzygies of (dH/dX_1, ..., dH/dX_m, -H) read as fields with cofactors."""
    if not divisor.reduced:
        raise ValueError("Derlog needs a reduced equation")
    h = divisor.poly
    ring = h.ring
    if not divisor.vanishing:
        fields = _coordinate_fields(ring)
        return DerlogModule(divisor, fields, tuple(ring.zero for _ in fields))
    columns = [VectorTuple((h.diff(gen),)) for gen in ring.gens]
    columns.append(VectorTuple((-h,)))
    log_info(f"Computing Derlog of a divisor with {len(h)} terms in {ring.ngens} variables")
    fields = []
    cofactors = []
    for syzygy in module_syzygies(columns):
        field = VectorTuple(syzygy.components[:-1])
        if field.is_zero():
            continue
        fields.append(field)
        cofactors.append(syzygy.components[-1])
    module = DerlogModule(divisor, tuple(fields), tuple(cofactors))
    module.check()
    return module


@lru_cache(maxsize=32)
def lift_data(F: OnePSU) -> Tuple[DerlogModule, IdealBasis]:
    """Derlog of the image/discriminant of F and the local ideal of last components."""
    module = derlog(defining_equation(F))
    ring = make_ring(variable_names(module.divisor.poly.ring), LOCAL_NEGDEGREVLEX)
    gens = [reorder(c, LOCAL_NEGDEGREVLEX) for c in module.last_components() if c]
    log_info(f"Standard basis of the lift ideal of {F.label or F} from {len(gens)} generators")
    return module, standard_basis(gens or [ring.zero])


def lift_ideal(F: OnePSU) -> IdealBasis:
    """d pi(Lift(F)) as a local standard basis in the target variables (X, L)."""
    return lift_data(F)[1]


@dataclass(frozen=True)
class SubstantialityDegree:
    """delta(F), or a lower bound when the search is exhausted."""

    value: Optional[int]
    bound: int
    leading_power: Optional[int] = None

    @property
    def exact(self) -> bool:
        return self.value is not None

    @property
    def lower(self) -> int:
        return self.value if self.value is not None else self.bound + 1

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.value == other
        if isinstance(other, SubstantialityDegree):
            return (self.value, self.bound, self.leading_power) == (
                other.value,
                other.bound,
                other.leading_power,
            )
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.bound, self.leading_power))

    def __str__(self) -> str:
        return str(self.value) if self.exact else f">={self.bound + 1}"

    def to_json(self):
        if self.exact:
            return self.value
        return {"at_least": self.bound + 1, "at_most": self.leading_power}


def _parameter_power_in_leading_ideal(basis: IdealBasis) -> Optional[int]:
    last = basis.ring.ngens - 1
    exponents = [m[last] for m in basis.leading_monomials if m[last] and sum(m) == m[last]]
    return min(exponents) if exponents else None


def substantiality_degree(F: OnePSU, bound: int = DEFAULT_BOUND) -> SubstantialityDegree:
    """Least m <= bound with L^m in the lift ideal."""
    if bound < 1:
        raise ValueError(f"bound must be positive, got {bound}")
    basis = lift_ideal(F)
    parameter = basis.ring.gens[-1]
    power = parameter
    for m in range(1, bound + 1):
        if basis.contains(power):
            return SubstantialityDegree(m, bound)
        power = power * parameter
    leading = _parameter_power_in_leading_ideal(basis)
    if leading is not None and not basis.contains(parameter ** leading):
        leading = None
    return SubstantialityDegree(None, bound, leading)


def _last_base_variable(ring: PolyRing) -> PolyElement:
    return ring.gens[-2]


def is_cross_substantial(F: OnePSU) -> bool:
    """X_p in the lift ideal, locally."""
    basis = lift_ideal(F)
    return basis.contains(_last_base_variable(basis.ring))


@dataclass(frozen=True)
class CrossWitness:
    """A Derlog field whose last component is unit * X_p, with unit(0) != 0."""

    field: VectorTuple
    unit: PolyElement
    cofactor: PolyElement


def cross_substantiality_witness(F: OnePSU) -> Optional[CrossWitness]:
    """Combine Derlog generators into a field with last component u * X_p."""
    module, _ = lift_data(F)
    ring = module.divisor.poly.ring
    x_p = _last_base_variable(ring)
    used = [(field, a) for field, a in zip(module.generators, module.cofactors) if field[-1]]
    if not used:
        return None
    columns = [VectorTuple((x_p,))] + [VectorTuple((field[-1],)) for field, _ in used]
    for syzygy in module_syzygies(columns):
        unit = syzygy[0]
        if not constant_term(unit):
            continue
        field = VectorTuple(tuple(ring.zero for _ in range(ring.ngens)))
        cofactor = ring.zero
        for b, (generator, a) in zip(syzygy.components[1:], used):
            if b:
                field = field + generator.scale(-b)
                cofactor -= b * a
        if field[-1] != unit * x_p:
            raise EngineInconsistencyError("cross-substantiality witness has the wrong last component")
        DerlogModule(module.divisor, (field,), (cofactor,)).check()
        return CrossWitness(field, unit, cofactor)
    return None


def jxh_test(divisor: HypersurfaceEquation) -> bool:
    """X_p in the local ideal of dH/dX_1, ..., dH/dX_p (the parameter slot is last)."""
    h = reorder(divisor.poly, LOCAL_NEGDEGREVLEX)
    ring = h.ring
    if ring.ngens < 2:
        raise ValueError("the divisor needs base variables and a parameter")
    partials = [h.diff(gen) for gen in ring.gens[:-1]]
    basis = standard_basis(partials)
    return basis.contains(_last_base_variable(ring))


@dataclass(frozen=True)
class SubstantialityReport:
    delta: SubstantialityDegree
    substantial: bool
    cross_substantial: bool
    jxh_sufficient: bool
    stable_caveat: bool = True

    def to_dict(self):
        return {
            "delta": self.delta.to_json(),
            "substantial": self.substantial,
            "cross_substantial": self.cross_substantial,
            "jxh_sufficient": self.jxh_sufficient,
            "stable_caveat": self.stable_caveat,
        }


def substantiality_report(F: OnePSU, bound: int = DEFAULT_BOUND) -> SubstantialityReport:
    delta = substantiality_degree(F, bound)
    cross = is_cross_substantial(F)
    jxh = jxh_test(lift_data(F)[0].divisor)
    if jxh and not cross:
        raise EngineInconsistencyError(
            f"{F.label or F}: X_p lies in J_X H but not in the lift ideal"
        )
    return SubstantialityReport(delta, delta == 1, cross, jxh)


@lru_cache(maxsize=32)
def isosingular_dimension(T: MapGerm) -> int:
    """Rank over Q of the Derlog generators of the discriminant of T evaluated at 0."""
    divisor = defining_equation(T)
    if not divisor.vanishing:
        return T.target_dimension
    module = derlog(divisor)
    rows = [[QQ.convert(v) for v in field.at_origin()] for field in module.generators]
    if not rows:
        return 0
    return DomainMatrix(rows, (len(rows), len(rows[0])), QQ).rank()


def augmentation_certificate(T: MapGerm, p: int, s: int) -> bool:
    """dim tau~(T) >= p - s for a trivializer T of degree s."""
    if s < 1:
        raise ValueError(f"trivializer degree must be positive, got {s}")
    return isosingular_dimension(T) >= p - s
