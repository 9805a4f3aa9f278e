"""Map-germs, one-parameter stable unfoldings and augmentations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Rational
from sympy.polys.rings import PolyElement, PolyRing

from .functions import (
    FunctionGerm,
    NonIsolatedSingularityError,
    milnor_number,
    solve_positive_weights,
    tjurina_number,
)
from .ring import (
    RingMismatchError,
    common_ring,
    constant_term,
    embed,
    format_polynomial,
    fresh_name,
    make_ring,
    parse_polynomial_list,
    substitute,
    variable_names,
)
from .standard_basis import INFINITE, VectorTuple


class VariableCollisionError(ValueError):
    """Raised when an augmenting function reuses a variable of the unfolding."""


class ArityError(ValueError):
    """Raised when argument lists have incompatible lengths."""


class GermShapeError(ValueError):
    """Raised when components violate the shape a germ or unfolding needs."""


class ParityError(ValueError):
    """Raised when mu + r - 1 is odd, so the branch count cannot be right."""


class ImmersiveCurveError(ZeroDivisionError):
    """Raised when tau equals delta and the codimension quotient is undefined."""


def default_target_names(count: int, taken: Sequence[str], parameter: bool = False) -> Tuple[str, ...]:
    """X1..Xp (and L for a parameter slot), switching letters on collision."""
    taken = set(taken)
    for letter in ("X", "W", "V", "T"):
        slots = count - 1 if parameter else count
        names = [f"{letter}{i}" for i in range(1, slots + 1)]
        if parameter:
            names.append("L" if letter == "X" else f"{letter}L")
        if not taken.intersection(names):
            return tuple(names)
    names = []
    for i in range(1, count + 1):
        name = fresh_name(f"X{i}", taken)
        taken.add(name)
        names.append(name)
    return tuple(names)


@dataclass(frozen=True)
class MapGerm:
    """A polynomial map-germ (C^n, 0) -> (C^p, 0)."""

    components: Tuple[PolyElement, ...]
    label: str = ""
    target: Tuple[str, ...] = ()
    display_order: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise GermShapeError("a map-germ needs at least one component")
        common_ring(list(self.components))
        for component in self.components:
            if constant_term(component):
                raise GermShapeError(
                    f"component {format_polynomial(component)} does not vanish at 0"
                )
        if not self.target:
            object.__setattr__(self, "target", self._default_target())
        object.__setattr__(self, "target", tuple(self.target))
        if len(self.target) != len(self.components):
            raise ArityError(f"{len(self.components)} components but {len(self.target)} target names")
        if set(self.target) & set(self.source):
            raise VariableCollisionError("target names must differ from source names")
        if self.display_order is not None:
            order = tuple(self.display_order)
            if sorted(order) != list(range(len(self.components))):
                raise ArityError(f"display order {order} is not a permutation")
            object.__setattr__(self, "display_order", order)

    def _default_target(self) -> Tuple[str, ...]:
        return default_target_names(len(self.components), self.source)

    @classmethod
    def parse(cls, text: str, names: Sequence[str], label: str = "", **kwargs) -> "MapGerm":
        return cls(tuple(parse_polynomial_list(text, make_ring(names))), label, **kwargs)

    @property
    def ring(self) -> PolyRing:
        return self.components[0].ring

    @property
    def source(self) -> Tuple[str, ...]:
        return variable_names(self.ring)

    @property
    def source_dimension(self) -> int:
        return len(self.source)

    @property
    def target_dimension(self) -> int:
        return len(self.components)

    def permuted(self, order: Sequence[int]) -> "MapGerm":
        """Reorder target components (an A-equivalence)."""
        order = tuple(order)
        if sorted(order) != list(range(len(self.components))):
            raise ArityError(f"{order} is not a permutation of the components")
        return MapGerm(
            tuple(self.components[i] for i in order),
            self.label,
            tuple(self.target[i] for i in order),
        )

    def display_form(self) -> "MapGerm":
        if self.display_order is None:
            return self
        return self.permuted(self.display_order)

    def components_equal(self, other: "MapGerm") -> bool:
        """Componentwise equality by variable name, independent of ring layout."""
        if len(self.components) != len(other.components):
            return False
        names = tuple(sorted(set(self.source) | set(other.source)))
        ring = make_ring(names)
        return all(embed(a, ring) == embed(b, ring) for a, b in zip(self.components, other.components))

    def __str__(self) -> str:
        return "(" + ", ".join(format_polynomial(c) for c in self.components) + ")"


@dataclass(frozen=True)
class OnePSU(MapGerm):
    """F(x, l) = (f_l(x), l): the parameter is the last source variable and last component."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if len(self.components) < 2:
            raise GermShapeError("an unfolding needs the base components plus the parameter")
        parameter = self.ring.gens[-1]
        if self.components[-1] != parameter:
            raise GermShapeError(
                f"last component must be the parameter {self.parameter}, "
                f"got {format_polynomial(self.components[-1])}"
            )

    def _default_target(self) -> Tuple[str, ...]:
        return default_target_names(len(self.components), self.source, parameter=True)

    @classmethod
    def parse(cls, text: str, names: Sequence[str], label: str = "", **kwargs) -> "OnePSU":
        return cls(tuple(parse_polynomial_list(text, make_ring(names))), label, **kwargs)

    @property
    def parameter(self) -> str:
        return self.source[-1]

    @property
    def base_source(self) -> Tuple[str, ...]:
        return self.source[:-1]

    @property
    def base(self) -> MapGerm:
        """f = f_0: set the parameter to zero."""
        ring = make_ring(self.base_source)
        assignment = {name: gen for name, gen in zip(self.base_source, ring.gens)}
        assignment[self.parameter] = ring.zero
        return MapGerm(
            tuple(substitute(c, assignment, ring) for c in self.components[:-1]),
            self.label,
            self.target[:-1],
        )

    @classmethod
    def from_germ(cls, germ: MapGerm, label: str = "") -> "OnePSU":
        return cls(germ.components, label or germ.label, germ.target)


def _check_disjoint(F: OnePSU, g: FunctionGerm) -> None:
    clash = set(g.variables) & set(F.source)
    if clash:
        raise VariableCollisionError(f"augmenting variables {sorted(clash)} already used by the unfolding")


def _augment_components(F: OnePSU, g: FunctionGerm, ring: PolyRing, shift: Optional[PolyElement]):
    g_image = embed(g.poly, ring)
    if shift is not None:
        g_image = g_image + shift
    assignment: Dict[str, PolyElement] = {
        name: ring.gens[variable_names(ring).index(name)] for name in F.base_source
    }
    assignment[F.parameter] = g_image
    unfolded = [substitute(c, assignment, ring) for c in F.components[:-1]]
    identity = [ring.gens[variable_names(ring).index(name)] for name in g.variables]
    return unfolded, identity


def _augmented_target(F: OnePSU, g: FunctionGerm, source: Sequence[str], parameter: bool) -> Tuple[str, ...]:
    count = len(F.components) - 1 + g.dimension + (1 if parameter else 0)
    return default_target_names(count, source, parameter=parameter)


def augment(F: OnePSU, g: FunctionGerm) -> MapGerm:
    """A_{F,g}(f)(x, z) = (f_{g(z)}(x), z)."""
    _check_disjoint(F, g)
    source = F.base_source + g.variables
    ring = make_ring(source)
    unfolded, identity = _augment_components(F, g, ring, None)
    label = f"A_{{F,{g.label or 'g'}}}({F.label or 'f'})"
    return MapGerm(tuple(unfolded + identity), label, _augmented_target(F, g, source, False))


def natural_opsu(F: OnePSU, g: FunctionGerm) -> OnePSU:
    """(x, z, l') -> (f_{g(z)+l'}(x), z, l'), an unfolding of augment(F, g)."""
    _check_disjoint(F, g)
    parameter = fresh_name(F.parameter, set(F.source) | set(g.variables))
    source = F.base_source + g.variables + (parameter,)
    ring = make_ring(source)
    unfolded, identity = _augment_components(F, g, ring, ring.gens[-1])
    label = f"A_{{F,{g.label or 'g'}}}({F.label or 'f'})"
    return OnePSU(
        tuple(unfolded + identity + [ring.gens[-1]]),
        label,
        _augmented_target(F, g, source, True),
    )


def normal_form_opsu(
    f: MapGerm,
    gamma: VectorTuple,
    s: Sequence[PolyElement],
    q: Sequence[PolyElement],
    parameter: str = "l",
    expand_hadamard: bool = False,
) -> OnePSU:
    """(f + (1 + sum q_i(l) s_i(f)) l gamma, l).

    ``s`` live in the target variables of ``f``; ``q`` are univariate.
    With ``expand_hadamard`` each q_i is multiplied by l first.
    """
    if len(s) != len(q):
        raise ArityError(f"{len(s)} target functions but {len(q)} parameter functions")
    if gamma.rank != f.target_dimension:
        raise ArityError(f"gamma has rank {gamma.rank}, the germ has {f.target_dimension} components")
    if gamma.ring != f.ring:
        raise RingMismatchError("gamma must live in the source ring of the germ")
    if parameter in f.source:
        raise VariableCollisionError(f"parameter {parameter!r} is already a source variable")
    ring = make_ring(f.source + (parameter,))
    lam = ring.gens[-1]
    images = {name: embed(c, ring) for name, c in zip(f.target, f.components)}
    multiplier = ring.one
    for s_i, q_i in zip(s, q):
        if constant_term(s_i):
            raise GermShapeError(f"{format_polynomial(s_i)} must vanish at 0")
        if len(variable_names(q_i.ring)) != 1:
            raise ArityError("each q_i must be a polynomial in one variable")
        q_image = substitute(q_i, {variable_names(q_i.ring)[0]: lam}, ring)
        if expand_hadamard:
            q_image = q_image * lam
        multiplier += q_image * substitute(s_i, images, ring)
    components = [
        embed(c, ring) + multiplier * lam * embed(gc, ring) for c, gc in zip(f.components, gamma)
    ]
    return OnePSU(tuple(components + [lam]), f.label, default_target_names(len(components) + 1, variable_names(ring), True))


@dataclass(frozen=True)
class MapWeights:
    source: Tuple[Rational, ...]
    target: Tuple[Rational, ...]


def quasihomogeneous_map_weights(F: MapGerm) -> Optional[MapWeights]:
    """Positive source weights and target degrees making every component weighted homogeneous."""
    n, p = F.source_dimension, F.target_dimension
    rows = []
    for i, component in enumerate(F.components):
        for monom in component.itermonoms():
            row = list(monom) + [0] * p
            row[n + i] = -1
            rows.append((row, 0))
    solution = solve_positive_weights(rows, n + p)
    if solution is None:
        return None
    return MapWeights(tuple(solution[:n]), tuple(solution[n:]))


@dataclass(frozen=True)
class PlaneCurveReport:
    mu: int
    tau: int
    branches: int
    delta: int
    mu_image: int
    aecod: int
    quotient: Rational

    def to_dict(self) -> Dict[str, object]:
        return {
            "mu": self.mu,
            "tau": self.tau,
            "branches": self.branches,
            "delta": self.delta,
            "mu_image": self.mu_image,
            "aecod": self.aecod,
            "quotient": str(self.quotient),
        }


def plane_curve_report(g: FunctionGerm, branches: int = 1) -> PlaneCurveReport:
    """Image Milnor number over codimension for the parametrization of g = 0."""
    if g.dimension != 2:
        raise GermShapeError(f"plane curves need 2 variables, got {g.dimension}")
    if branches < 1:
        raise ValueError("branch count must be positive")
    mu = milnor_number(g)
    if mu == INFINITE:
        raise NonIsolatedSingularityError(f"{g} has a non-isolated singularity")
    if (mu + branches - 1) % 2:
        raise ParityError(f"mu + r - 1 = {mu + branches - 1} is odd; check the branch count")
    tau = tjurina_number(g)
    delta = (mu + branches - 1) // 2
    if tau == delta:
        raise ImmersiveCurveError(f"tau = delta = {delta}: the parametrization is immersive")
    mu_image = mu - delta
    aecod = tau - delta
    return PlaneCurveReport(mu, tau, branches, delta, mu_image, aecod, Rational(mu_image, aecod))


@dataclass(frozen=True)
class Conjecture2Bound:
    n: int
    values: Tuple[Tuple[int, int], ...]
    maximum: int
    bound: Rational

    @property
    def attained(self) -> bool:
        return self.maximum == self.bound

    def to_dict(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "values": {str(k): v for k, v in self.values},
            "maximum": self.maximum,
            "bound": str(self.bound),
            "attained": self.attained,
        }


def conjecture2_bound(n: int) -> Conjecture2Bound:
    """(k+1)(n-k) for 1 <= k <= n-1 against (n+1)^2/4."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    values = tuple((k, (k + 1) * (n - k)) for k in range(1, n))
    return Conjecture2Bound(n, values, max(v for _, v in values), Rational((n + 1) ** 2, 4))
