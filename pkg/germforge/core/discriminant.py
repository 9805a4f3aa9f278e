"""Defining equations of images and discriminants of polynomial map-germs."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Tuple

from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, PolyRing

from .germs import GermShapeError, MapGerm
from .ring import (
    as_variable,
    embed,
    format_polynomial,
    make_ring,
    partial_derivative,
    substitute,
    variable_names,
)
from .standard_basis import eliminate, resultant_eliminate
from .utils import log_info

IMAGE = "image"
DISCRIMINANT = "discriminant"


class NonPrincipalError(RuntimeError):
    """Raised when an elimination ideal that should define a hypersurface is not principal."""


@dataclass(frozen=True)
class HypersurfaceEquation:
    """Reduced equation H of the image or discriminant of ``germ`` in its target variables."""

    poly: PolyElement
    germ: MapGerm
    kind: str = IMAGE
    reduced: bool = True
    vanishing: bool = True

    @property
    def variables(self) -> Tuple[str, ...]:
        return variable_names(self.poly.ring)

    def composition(self) -> PolyElement:
        """H o F, zero for an image equation."""
        assignment = dict(zip(self.germ.target, self.germ.components))
        return substitute(self.poly, assignment, self.germ.ring)

    def __str__(self) -> str:
        return format_polynomial(self.poly)


def _normalize(h: PolyElement) -> PolyElement:
    """Squarefree, integer primitive, positive leading coefficient."""
    h = h.sqf_part()
    _, h = h.clear_denoms()
    _, h = h.primitive()
    if h.LC < 0:
        h = -h
    return h


def _graph_ring(germ: MapGerm) -> Tuple[Dict[str, PolyElement], List[int], PolyRing]:
    """Substitute coordinate components directly, keep the rest as graph equations."""
    direct: Dict[str, str] = {}
    remaining: List[int] = []
    for index, component in enumerate(germ.components):
        name = as_variable(component)
        if name is not None and name not in direct:
            direct[name] = germ.target[index]
        else:
            remaining.append(index)
    eliminated = tuple(name for name in germ.source if name not in direct)
    ring = make_ring(eliminated + germ.target)
    assignment = {}
    for name in germ.source:
        target_name = direct.get(name, name)
        assignment[name] = ring.gens[variable_names(ring).index(target_name)]
    return assignment, remaining, ring


def _principal_generator(gens: List[PolyElement], germ: MapGerm, kind: str) -> HypersurfaceEquation:
    target_ring = make_ring(germ.target)
    if not gens:
        raise NonPrincipalError(f"the {kind} of {germ} is not a hypersurface (zero elimination ideal)")
    if len(gens) > 1:
        shown = ", ".join(format_polynomial(g) for g in gens)
        raise NonPrincipalError(f"the {kind} of {germ} is not principal: <{shown}>")
    h = embed(gens[0], target_ring)
    if h.is_ground:
        return HypersurfaceEquation(target_ring.one, germ, kind, True, vanishing=False)
    return HypersurfaceEquation(_normalize(h), germ, kind)


def _eliminate_sources(polys: List[PolyElement], drop: List[str]) -> List[PolyElement]:
    """Elimination ideal generators, by one resultant when a single kernel variable remains."""
    if len(drop) == 1 and len(polys) == 2:
        h = resultant_eliminate(polys[0], polys[1], drop[0])
        if h is not None:
            log_info(f"Eliminated {drop[0]} by a resultant")
            return [h] if h else []
    return eliminate(polys, drop)


def image_equation(germ: MapGerm) -> HypersurfaceEquation:
    """Eliminate the source variables from the graph of an n -> n+1 germ."""
    if germ.target_dimension != germ.source_dimension + 1:
        raise GermShapeError(
            f"image equations need n -> n+1 germs, got {germ.source_dimension} -> {germ.target_dimension}"
        )
    assignment, remaining, ring = _graph_ring(germ)
    targets = {name: ring.gens[variable_names(ring).index(name)] for name in germ.target}
    graph = [targets[germ.target[i]] - substitute(germ.components[i], assignment, ring) for i in remaining]
    drop = [name for name in variable_names(ring) if name not in germ.target]
    log_info(f"Eliminating {len(drop)} source variables for the image of {germ.label or germ}")
    if not graph:
        raise NonPrincipalError(f"the image of {germ} fills the target")
    return _principal_generator(_eliminate_sources(graph, drop), germ, IMAGE)


def critical_minors(germ: MapGerm) -> List[PolyElement]:
    """All maximal minors of the Jacobian matrix (p x n, n >= p)."""
    n, p = germ.source_dimension, germ.target_dimension
    rows = [[partial_derivative(c, name) for name in germ.source] for c in germ.components]
    domain = germ.ring.to_domain()
    minors = []
    for columns in combinations(range(n), p):
        block = [[row[j] for j in columns] for row in rows]
        minor = DomainMatrix(block, (p, p), domain).det()
        if minor:
            minors.append(minor)
    if n == p and minors and not minors[0].is_ground:
        minors = [minors[0].sqf_part()]
    return minors


def discriminant_equation(germ: MapGerm) -> HypersurfaceEquation:
    """Image of the critical set for n >= p, as a reduced equation."""
    if germ.source_dimension < germ.target_dimension:
        raise GermShapeError(
            f"discriminants need n >= p, got {germ.source_dimension} -> {germ.target_dimension}"
        )
    target_ring = make_ring(germ.target)
    minors = critical_minors(germ)
    if not minors:
        raise NonPrincipalError(f"every point of {germ} is critical")
    if any(m.is_ground for m in minors):
        return HypersurfaceEquation(target_ring.one, germ, DISCRIMINANT, True, vanishing=False)
    assignment, remaining, ring = _graph_ring(germ)
    targets = {name: ring.gens[variable_names(ring).index(name)] for name in germ.target}
    graph = [targets[germ.target[i]] - substitute(germ.components[i], assignment, ring) for i in remaining]
    critical = [substitute(m, assignment, ring) for m in minors]
    drop = [name for name in variable_names(ring) if name not in germ.target]
    log_info(f"Eliminating {len(drop)} source variables for the discriminant of {germ.label or germ}")
    return _principal_generator(_eliminate_sources(graph + critical, drop), germ, DISCRIMINANT)


def defining_equation(germ: MapGerm) -> HypersurfaceEquation:
    """The divisor whose Derlog stands in for Lift: image for n -> n+1, discriminant for n >= p."""
    if germ.target_dimension == germ.source_dimension + 1:
        return image_equation(germ)
    return discriminant_equation(germ)


def is_squarefree(h: HypersurfaceEquation) -> bool:
    return h.poly.is_ground or h.poly.is_squarefree
