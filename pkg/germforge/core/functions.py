"""Invariants of function germs: Milnor and Tjurina numbers, Briancon-Skoda exponent, weights."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from sympy import Eq, Rational, Symbol, symbols
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement
from sympy.solvers.simplex import InfeasibleLPError, UnboundedLPError, lpmax

from .ring import (
    LOCAL_NEGDEGREVLEX,
    constant_term,
    embed,
    format_polynomial,
    fresh_name,
    jacobian_generators,
    make_ring,
    parse_polynomial,
    reorder,
    variable_names,
)
from .standard_basis import (
    INFINITE,
    EngineInconsistencyError,
    IdealBasis,
    quotient_dimension,
    standard_basis,
)


class NonIsolatedSingularityError(ValueError):
    """Raised when an invariant needs a finite Milnor number."""


class FamilyRangeError(ValueError):
    """Raised when a named family is indexed outside its range."""


@dataclass(frozen=True)
class FunctionGerm:
    """A polynomial function germ (C^d, 0) -> (C, 0)."""

    poly: PolyElement
    label: str = ""

    def __post_init__(self) -> None:
        if constant_term(self.poly):
            raise ValueError(f"function germ {format_polynomial(self.poly)} does not vanish at 0")

    @classmethod
    def parse(cls, text: str, names: Sequence[str], label: str = "") -> "FunctionGerm":
        return cls(parse_polynomial(text, make_ring(names)), label)

    @property
    def variables(self) -> Tuple[str, ...]:
        return variable_names(self.poly.ring)

    @property
    def dimension(self) -> int:
        return len(self.variables)

    def local_poly(self) -> PolyElement:
        return reorder(self.poly, LOCAL_NEGDEGREVLEX)

    def renamed(self, names: Sequence[str]) -> "FunctionGerm":
        names = tuple(names)
        if len(names) != self.dimension:
            raise ValueError(f"expected {self.dimension} names, got {len(names)}")
        ring = make_ring(names, self.poly.ring.order)
        return FunctionGerm(ring.from_dict(dict(self.poly)), self.label)

    def __str__(self) -> str:
        return format_polynomial(self.poly)


@dataclass(frozen=True)
class WeightVector:
    """Positive weights making every monomial of weighted degree 1."""

    variables: Tuple[str, ...]
    weights: Tuple[Rational, ...]
    degree: Rational = Rational(1)

    def __post_init__(self) -> None:
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")

    def as_dict(self):
        return dict(zip(self.variables, self.weights))


def solve_positive_weights(rows: Sequence[Tuple[Sequence[int], int]], unknowns: int) -> Optional[List[Rational]]:
    """Positive solution of sum(c_i * w_i) = rhs for every row, or None.

    Maximizes the smallest unknown (capped at 1), so a family of solutions
    yields a canonical one.
    """
    ws = symbols(f"w0:{unknowns}")
    t = Symbol("t")
    constraints = []
    for coefficients, rhs in rows:
        lhs = sum(c * w for c, w in zip(coefficients, ws) if c)
        if lhs == 0:
            if rhs != 0:
                return None
            continue
        constraints.append(Eq(lhs, rhs))
    constraints.extend(w >= t for w in ws)
    constraints.append(t <= 1)
    try:
        best, solution = lpmax(t, constraints)
    except (InfeasibleLPError, UnboundedLPError):
        return None
    if best <= 0:
        return None
    return [Rational(solution.get(w, best)) for w in ws]


@lru_cache(maxsize=64)
def jacobian_basis(g: FunctionGerm) -> IdealBasis:
    """Local standard basis of the Jacobian ideal."""
    return standard_basis(jacobian_generators(g.local_poly()))


@lru_cache(maxsize=64)
def tjurina_basis(g: FunctionGerm) -> IdealBasis:
    local = g.local_poly()
    return standard_basis(jacobian_generators(local) + [local])


def milnor_number(g: FunctionGerm):
    """dim O/Jg, or INFINITE for a non-isolated singularity."""
    return quotient_dimension(jacobian_basis(g))


def tjurina_number(g: FunctionGerm):
    """dim O/(Jg + <g>)."""
    return quotient_dimension(tjurina_basis(g))


def _require_isolated(g: FunctionGerm) -> None:
    if milnor_number(g) == INFINITE:
        raise NonIsolatedSingularityError(f"{format_polynomial(g.poly)} has a non-isolated singularity")


def briancon_skoda(g: FunctionGerm) -> int:
    """Least r >= 1 with g^r in Jg (always at most the number of variables)."""
    _require_isolated(g)
    basis = jacobian_basis(g)
    local = g.local_poly()
    power = local
    for r in range(1, g.dimension + 1):
        if basis.contains(power):
            return r
        power = basis.drop_high_order(power * local)
    raise EngineInconsistencyError(
        f"no power of {format_polynomial(g.poly)} up to {g.dimension} lies in its Jacobian ideal"
    )


def quasihomogeneous_weights(g: FunctionGerm) -> Optional[WeightVector]:
    """Weights for which g is quasi-homogeneous of degree 1, in the given coordinates."""
    if not g.poly:
        raise ValueError("the zero function has no weights")
    rows = [(monom, 1) for monom in g.poly.itermonoms()]
    weights = solve_positive_weights(rows, g.dimension)
    if weights is None:
        return None
    return WeightVector(g.variables, tuple(weights))


def euler_identity_holds(g: FunctionGerm, weights: WeightVector) -> bool:
    """Check sum w_i z_i dg/dz_i == g exactly."""
    ring = g.poly.ring
    total = ring.zero
    for gen, w, partial in zip(ring.gens, weights.weights, jacobian_generators(g.poly)):
        total += gen * partial * QQ.from_sympy(w)
    return total == g.poly * QQ.from_sympy(weights.degree)


def is_quasihomogeneous_up_to_R(g: FunctionGerm) -> bool:
    """Saito's criterion: mu == tau."""
    _require_isolated(g)
    return milnor_number(g) == tjurina_number(g)


def family_DG(k: int) -> FunctionGerm:
    if k < 3:
        raise FamilyRangeError(f"DG_k needs k >= 3, got {k}")
    text = f"u^{2 * k + 1} + u^{k}*v^{k + 1} + v^{2 * k}"
    return FunctionGerm.parse(text, ("u", "v"), label=f"DG_{k}")


def family_malgrange() -> FunctionGerm:
    return FunctionGerm.parse("(u*v*w)^2 + u^8 + v^8 + w^8", ("u", "v", "w"), label="M")


def family_Ak(k: int) -> FunctionGerm:
    if k < 1:
        raise FamilyRangeError(f"A_k needs k >= 1, got {k}")
    return FunctionGerm.parse(f"z^{k + 1}", ("z",), label=f"A_{k}")


def join(g: FunctionGerm, h: FunctionGerm) -> FunctionGerm:
    """g(z) + h(w) on disjoint variables; h's variables are renamed on collision."""
    taken = set(g.variables)
    names = []
    for name in h.variables:
        fresh = fresh_name(name, taken)
        taken.add(fresh)
        names.append(fresh)
    other = h.renamed(names)
    ring = make_ring(g.variables + tuple(names))
    label = f"{g.label or 'g'}+{h.label or 'h'}"
    return FunctionGerm(embed(g.poly, ring) + embed(other.poly, ring), label)
