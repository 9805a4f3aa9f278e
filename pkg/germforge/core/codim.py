"""A_e-codimension from the lift ideal and bounds for augmentations."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Dict, Optional, Sequence, Set, Tuple

from .functions import (
    FunctionGerm,
    NonIsolatedSingularityError,
    briancon_skoda,
    join,
    milnor_number,
    tjurina_number,
)
from .germs import OnePSU, VariableCollisionError, natural_opsu
from .liftable import DEFAULT_BOUND, SubstantialityDegree, lift_data, substantiality_degree
from .ring import (
    LOCAL_NEGDEGREVLEX,
    embed,
    fresh_name,
    jacobian_generators,
    make_ring,
    reorder,
    substitute,
    variable_names,
)
from .standard_basis import INFINITE, EngineInconsistencyError, quotient_dimension, standard_basis
from .utils import json_dimension, log_info


class InfiniteCodimensionError(ArithmeticError):
    """Raised when a bound needs a finite codimension and the quotient is infinite."""


def _lift_generators(F: OnePSU):
    module, _ = lift_data(F)
    return [reorder(c, LOCAL_NEGDEGREVLEX) for c in module.last_components() if c]


def aecod_damon(F: OnePSU):
    """dim O_{p+1}/(lift ideal + <L>), INFINITE when the base is not A-finite."""
    gens = _lift_generators(F)
    ring = make_ring(variable_names(lift_data(F)[1].ring), LOCAL_NEGDEGREVLEX)
    basis = standard_basis(gens + [ring.gens[-1]])
    return quotient_dimension(basis)


def augmentation_codim(F: OnePSU, g: FunctionGerm):
    """dim of O/(lift ideal + <L - g> + Jg), with L replaced by g(Z) up front."""
    target = variable_names(lift_data(F)[1].ring)
    clash = set(target) & set(g.variables)
    if clash:
        raise VariableCollisionError(f"function variables {sorted(clash)} collide with the target of F")
    ring = make_ring(target[:-1] + g.variables, LOCAL_NEGDEGREVLEX)
    assignment = {name: ring.gens[i] for i, name in enumerate(target[:-1])}
    assignment[target[-1]] = embed(g.poly, ring)
    gens = [substitute(c, assignment, ring) for c in _lift_generators(F)]
    gens += [embed(d, ring) for d in jacobian_generators(g.poly)]
    log_info(f"Augmentation codimension of {F.label or F} by {g.label or g} in {ring.ngens} variables")
    return quotient_dimension(standard_basis([c for c in gens if c] or [ring.zero]))


def augmentation_label(F: OnePSU, g: FunctionGerm) -> str:
    return f"A_{{F,{g.label or 'g'}}}({F.label or 'f'})"


@dataclass(frozen=True)
class BoundsReport:
    label: str
    aecod_f: int
    tau_g: int
    mu_g: int
    bs_g: int
    delta_F: SubstantialityDegree
    codim_aug: int
    lower: int
    upper: int
    refined: int
    lower_equality: bool
    upper_equality: bool
    g_quasihom: bool
    F_substantial: bool

    @property
    def refined_holds(self) -> bool:
        return self.codim_aug <= self.refined

    @property
    def refined_equality_expected(self) -> bool:
        # observed: refined is exact when delta(F) >= BS(g)
        return self.delta_F.lower >= self.bs_g

    def to_row(self) -> Dict[str, object]:
        return {
            "label": self.label,
            "lower": self.lower,
            "value": self.codim_aug,
            "upper": self.upper,
            "refined": self.refined,
        }

    def to_dict(self) -> Dict[str, object]:
        return {
            "label": self.label,
            "aecod_f": self.aecod_f,
            "tau_g": self.tau_g,
            "mu_g": self.mu_g,
            "bs_g": self.bs_g,
            "delta_F": json_dimension(self.delta_F),
            "codim_aug": self.codim_aug,
            "lower": self.lower,
            "upper": self.upper,
            "refined": self.refined,
            "lower_equality": self.lower_equality,
            "upper_equality": self.upper_equality,
            "g_quasihom": self.g_quasihom,
            "F_substantial": self.F_substantial,
            "refined_holds": self.refined_holds,
            "refined_equality_expected": self.refined_equality_expected,
        }


def _finite(value, what: str) -> int:
    if value == INFINITE:
        raise InfiniteCodimensionError(f"{what} is infinite")
    return int(value)


def bounds_report(
    F: OnePSU,
    g: FunctionGerm,
    label: Optional[str] = None,
    bound: int = DEFAULT_BOUND,
) -> BoundsReport:
    """One table row: lower, value, upper and refined bounds with equality checks."""
    mu = milnor_number(g)
    if mu == INFINITE:
        raise NonIsolatedSingularityError(f"{g} has a non-isolated singularity")
    mu = int(mu)
    tau = int(tjurina_number(g))
    bs = briancon_skoda(g)
    aecod = _finite(aecod_damon(F), f"the A_e-codimension of {F.label or F}")
    delta = substantiality_degree(F, bound)
    value = _finite(augmentation_codim(F, g), "the augmentation codimension")
    label = label or augmentation_label(F, g)
    lower, upper = aecod * tau, aecod * mu
    if not lower <= value <= upper:
        raise EngineInconsistencyError(f"{label}: {value} outside [{lower}, {upper}]")
    g_quasihom = mu == tau
    substantial = delta == 1
    lower_equality = value == lower
    if lower_equality != (g_quasihom or substantial):
        raise EngineInconsistencyError(
            f"{label}: lower equality is {lower_equality} but mu = tau is {g_quasihom} "
            f"and delta = 1 is {substantial}"
        )
    upper_equality = value == upper
    if g_quasihom and not upper_equality:
        raise EngineInconsistencyError(f"{label}: quasi-homogeneous g but {value} != {upper}")
    return BoundsReport(
        label=label,
        aecod_f=aecod,
        tau_g=tau,
        mu_g=mu,
        bs_g=bs,
        delta_F=delta,
        codim_aug=value,
        lower=lower,
        upper=upper,
        refined=lower + mu - tau,
        lower_equality=lower_equality,
        upper_equality=upper_equality,
        g_quasihom=g_quasihom,
        F_substantial=substantial,
    )


@dataclass(frozen=True)
class MondCheck:
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def equality(self) -> bool:
        return self.lhs == self.rhs

    def to_dict(self) -> Dict[str, object]:
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds, "equality": self.equality}


def mond_inequality_check(F: OnePSU, g: FunctionGerm, mu_i_f: int) -> MondCheck:
    """aecod(A_{F,g}(f)) against mu_I(f) * mu(g)."""
    if mu_i_f < 0:
        raise ValueError(f"image Milnor number must be non-negative, got {mu_i_f}")
    mu = _finite(milnor_number(g), f"mu({g})")
    lhs = _finite(augmentation_codim(F, g), "the augmentation codimension")
    return MondCheck(lhs, mu_i_f * mu)


def joined_refined_bound(aecod_base: int, functions: Sequence[FunctionGerm]) -> int:
    """aecod * tau(J) + mu(J) - tau(J) for J the join of the augmenting functions."""
    if not functions:
        raise ValueError("at least one augmenting function is needed")
    joined = reduce(join, functions)
    mu = _finite(milnor_number(joined), f"mu({joined.label})")
    tau = int(tjurina_number(joined))
    return aecod_base * tau + mu - tau


def _disjoint_copy(g: FunctionGerm, taken: Set[str]) -> FunctionGerm:
    names = []
    for name in g.variables:
        fresh = fresh_name(name, taken)
        taken.add(fresh)
        names.append(fresh)
    return g.renamed(names)


def iterated_augmentation(F: OnePSU, functions: Sequence[FunctionGerm]) -> Tuple[OnePSU, FunctionGerm]:
    """Unfold through every function but the last, then return it on fresh variables."""
    if not functions:
        raise ValueError("at least one augmenting function is needed")
    current = F
    for g in functions[:-1]:
        current = natural_opsu(current, _disjoint_copy(g, set(current.source) | set(current.target)))
    return current, _disjoint_copy(functions[-1], set(current.source) | set(current.target))
