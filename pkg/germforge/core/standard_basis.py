"""Groebner bases, Mora standard bases, syzygies, elimination and quotient dimensions.

Global orders run Buchberger's algorithm with sugar selection and the
Gebauer-Moeller criteria. Local orders run the same pair loop with Mora's
ecart-driven weak normal form (tangent-cone algorithm). Module computations
embed a free module in a ring extended by position variables ordered
position-over-term. Elimination goes through sympy: a single variable by
subresultants, several through sympy's Groebner bases under a block order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Set, Tuple

from sympy.polys.groebnertools import groebner
from sympy.polys.orderings import MonomialOrder
from sympy.polys.rings import PolyElement, PolyRing
from sympy import oo

from .ring import (
    GLOBAL_DEGREVLEX,
    GLOBAL_LEX,
    Monomial,
    PositionOverTermOrder,
    RingMismatchError,
    block_elimination,
    common_ring,
    embed,
    fresh_name,
    make_ring,
    variable_names,
)

GROEBNER_GLOBAL = "groebner-global"
STANDARD_LOCAL = "standard-local"
RAW = "raw"

INFINITE = oo


class BasisKindError(ValueError):
    """Raised when an operation needs a different kind of basis."""


class RankMismatchError(ValueError):
    """Raised when module elements of different ranks are combined."""


class EliminationError(ValueError):
    """Raised when elimination variables are not ring variables."""


class EngineInconsistencyError(RuntimeError):
    """Raised when a computed object fails an identity it must satisfy."""


@dataclass
class _Element:
    poly: PolyElement
    lm: Monomial
    lc: object
    sugar: int
    ecart: int


def _degree(monom: Monomial, nvars: int) -> int:
    return sum(monom[:nvars])


def _max_degree(p: PolyElement, nvars: int) -> int:
    return max(_degree(m, nvars) for m in p.itermonoms())


def _position(monom: Monomial, nvars: int) -> Tuple[int, ...]:
    return tuple(monom[nvars:])


def _element(p: PolyElement, nvars: int, sugar: Optional[int] = None) -> _Element:
    lm = p.ring.leading_expv(p)
    top = _max_degree(p, nvars)
    return _Element(
        poly=p,
        lm=lm,
        lc=p[lm],
        sugar=top if sugar is None else max(sugar, top),
        ecart=top - _degree(lm, nvars),
    )


def _truncate(p: PolyElement, corner: Optional[int]) -> PolyElement:
    if corner is None:
        return p
    return p.new({m: c for m, c in p.items() if sum(m) <= corner})


def spoly(f: _Element, g: _Element, ring: PolyRing) -> PolyElement:
    """S-polynomial of two basis elements with cached leading data."""
    lcm = ring.monomial_lcm(f.lm, g.lm)
    s1 = f.poly.mul_term((ring.monomial_div(lcm, f.lm), ring.domain.one / f.lc))
    s2 = g.poly.mul_term((ring.monomial_div(lcm, g.lm), ring.domain.one / g.lc))
    return s1 - s2


def _reduce(f: PolyElement, reducers: Sequence[_Element]) -> PolyElement:
    """Full division of ``f`` by ``reducers`` under a global order."""
    ring = f.ring
    div = ring.monomial_div
    remainder = {}
    f = f.copy()
    while f:
        lm = ring.leading_expv(f)
        lc = f[lm]
        for g in reducers:
            q = div(lm, g.lm)
            if q is not None:
                f = f - g.poly.mul_term((q, lc / g.lc))
                break
        else:
            remainder[lm] = lc
            del f[lm]
    return ring.from_dict(remainder) if remainder else ring.zero


def _mora_normal_form(
    f: PolyElement, reducers: Sequence[_Element], nvars: int, corner: Optional[int]
) -> PolyElement:
    """Weak normal form under a local order (ecart strategy, growing reducer set)."""
    ring = f.ring
    div = ring.monomial_div
    pool = list(reducers)
    h = _truncate(f, corner)
    while h:
        lm = ring.leading_expv(h)
        candidates = [g for g in pool if div(lm, g.lm) is not None]
        if not candidates:
            return h
        g = min(candidates, key=lambda item: item.ecart)
        current = _element(h, nvars)
        if g.ecart > current.ecart:
            pool.append(current)
        h = h - g.poly.mul_term((div(lm, g.lm), h[lm] / g.lc))
        h = _truncate(h, corner)
    return h


def select(elements: Sequence[_Element], pairs: Set[Tuple[int, int]], ring: PolyRing, nvars: int):
    """Pick the next pair: sugar then lcm degree for global orders, lcm degree for local."""
    local = not ring.order.is_global

    def key(pair):
        f, g = elements[pair[0]], elements[pair[1]]
        lcm = ring.monomial_lcm(f.lm, g.lm)
        degree = _degree(lcm, nvars)
        sugar = max(
            f.sugar + degree - _degree(f.lm, nvars), g.sugar + degree - _degree(g.lm, nvars)
        )
        if local:
            return (degree, sugar, pair)
        return (sugar, degree, pair)

    return min(pairs, key=key)


def update(
    elements: Sequence[_Element],
    active: Set[int],
    pairs: Set[Tuple[int, int]],
    k: int,
    ring: PolyRing,
    nvars: int,
) -> Tuple[Set[Tuple[int, int]], Set[int]]:
    """Gebauer-Moeller update after appending element ``k``."""
    lcm, mul, div = ring.monomial_lcm, ring.monomial_mul, ring.monomial_div
    lmf = elements[k].lm
    position = _position(lmf, nvars)

    kept = set()
    for i, j in pairs:
        lij = lcm(elements[i].lm, elements[j].lm)
        if (
            div(lij, lmf) is not None
            and lij != lcm(elements[i].lm, lmf)
            and lij != lcm(elements[j].lm, lmf)
        ):
            continue
        kept.add((i, j))

    groups = {}
    for i in sorted(active):
        if _position(elements[i].lm, nvars) != position:
            continue
        groups.setdefault(lcm(elements[i].lm, lmf), []).append(i)
    minimal: List[Monomial] = []
    for candidate in sorted(groups, key=lambda m: (sum(m), ring.order(m))):
        if all(div(candidate, other) is None for other in minimal):
            minimal.append(candidate)
    for candidate in minimal:
        group = groups[candidate]
        if any(mul(elements[i].lm, lmf) == candidate for i in group):
            continue
        kept.add((min(group), k))

    still_active = {i for i in active if div(elements[i].lm, lmf) is None}
    still_active.add(k)
    return kept, still_active


def _corner(elements: Sequence[_Element], nvars: int) -> Optional[int]:
    """Degree D with m^D inside the ideal, read off pure powers among leading monomials.

    Only valid for local degree orders: every monomial of degree >= D is
    divisible by one of the pure powers.
    """
    powers = [None] * nvars
    for element in elements:
        support = [i for i, e in enumerate(element.lm) if e]
        if len(support) == 1:
            i = support[0]
            exp = element.lm[i]
            if powers[i] is None or exp < powers[i]:
                powers[i] = exp
    if any(p is None for p in powers):
        return None
    return sum(p - 1 for p in powers) + 1


def minimalize(elements: Sequence[_Element], nvars: int) -> List[_Element]:
    """Drop elements whose leading monomial is divisible by another one's."""
    if not elements:
        return []
    ring = elements[0].poly.ring
    kept: List[_Element] = []
    for element in sorted(elements, key=lambda e: (_degree(e.lm, nvars), ring.order(e.lm)), reverse=False):
        if all(ring.monomial_div(element.lm, other.lm) is None for other in kept):
            kept.append(element)
    return kept


def interreduce(elements: Sequence[_Element], nvars: int) -> List[_Element]:
    """Tail-reduce a minimal Groebner basis (global orders only)."""
    reduced = []
    for i, element in enumerate(elements):
        others = [e for j, e in enumerate(elements) if j != i]
        head = element.poly.ring.from_dict({element.lm: element.lc})
        tail = _reduce(element.poly - head, others)
        reduced.append(_element((head + tail).monic(), nvars, element.sugar))
    return reduced


def buchberger(polys: Sequence[PolyElement], nvars: Optional[int] = None) -> List[PolyElement]:
    """Groebner basis (global order) or standard basis (local order) of ``polys``.

    ``nvars`` counts the ring variables; any further variables are module
    positions and S-pairs are only formed between equal positions.
    """
    ring = common_ring(list(polys))
    nvars = ring.ngens if nvars is None else nvars
    local = not ring.order.is_global
    module = nvars != ring.ngens
    elements: List[_Element] = []
    active: Set[int] = set()
    pairs: Set[Tuple[int, int]] = set()
    corner: Optional[int] = None

    def normal_form(p: PolyElement) -> PolyElement:
        if local:
            return _mora_normal_form(p, elements, nvars, corner)
        return _reduce(p, elements)

    def add(h: PolyElement, sugar: Optional[int] = None) -> bool:
        nonlocal pairs, active, corner
        element = _element(h.monic(), nvars, sugar)
        elements.append(element)
        pairs, active = update(elements, active, pairs, len(elements) - 1, ring, nvars)
        if _degree(element.lm, nvars) == 0 and not module:
            return True
        if local and not module:
            corner = _corner(elements, nvars)
        return False

    for p in sorted((p for p in polys if p), key=lambda p: _max_degree(p, nvars)):
        h = normal_form(p)
        if h and add(h):
            return [ring.one]

    while pairs:
        i, j = select(elements, pairs, ring, nvars)
        pairs.discard((i, j))
        f, g = elements[i], elements[j]
        degree = _degree(ring.monomial_lcm(f.lm, g.lm), nvars)
        sugar = max(f.sugar + degree - _degree(f.lm, nvars), g.sugar + degree - _degree(g.lm, nvars))
        h = normal_form(spoly(f, g, ring))
        if h and add(h, sugar):
            return [ring.one]

    basis = minimalize(elements, nvars)
    if not local:
        basis = interreduce(basis, nvars)
    elif corner is not None:
        basis = [_element(_truncate(e.poly, corner), nvars) for e in basis]
    return [e.poly for e in basis]


def _sort_generators(polys: Iterable[PolyElement]) -> Tuple[PolyElement, ...]:
    polys = list(polys)
    if not polys:
        return ()
    order = polys[0].ring.order

    def key(p):
        return [(order(m), str(c)) for m, c in p.terms()]

    return tuple(sorted(polys, key=key, reverse=True))


@dataclass(frozen=True)
class IdealBasis:
    """Generators of an ideal, tagged with the kind of basis they form."""

    generators: Tuple[PolyElement, ...]
    ring: PolyRing
    kind: str = RAW
    reduced: bool = False
    corner: Optional[int] = None
    _elements: Tuple[_Element, ...] = field(default=(), repr=False, compare=False)

    @classmethod
    def raw(cls, gens: Sequence[PolyElement]) -> "IdealBasis":
        ring = common_ring(list(gens))
        return cls(tuple(gens), ring, RAW)

    @property
    def is_local(self) -> bool:
        return self.kind == STANDARD_LOCAL

    @property
    def leading_monomials(self) -> Tuple[Monomial, ...]:
        return tuple(self.ring.leading_expv(g) for g in self.generators)

    @property
    def is_unit(self) -> bool:
        return any(sum(m) == 0 for m in self.leading_monomials)

    def drop_high_order(self, p: PolyElement) -> PolyElement:
        """Drop terms of degree above the corner (they lie in the ideal)."""
        if self.kind != STANDARD_LOCAL:
            return p
        return _truncate(p, self.corner)

    def normal_form(self, p: PolyElement) -> PolyElement:
        return normal_form(p, self)

    def contains(self, p: PolyElement) -> bool:
        return not normal_form(p, self)


def standard_basis(gens: Sequence[PolyElement], order: Optional[MonomialOrder] = None) -> IdealBasis:
    """Groebner basis for global orders, Mora standard basis for local ones."""
    gens = list(gens)
    if not gens:
        raise ValueError("standard_basis needs at least one generator")
    ring = common_ring(gens)
    if order is not None and ring.order != order:
        raise RingMismatchError(f"ring order {ring.order!r} does not match {order!r}")
    nonzero = [g for g in gens if g]
    polys = buchberger(nonzero) if nonzero else []
    local = not ring.order.is_global
    elements = tuple(_element(p, ring.ngens) for p in polys)
    corner = _corner(elements, ring.ngens) if local else None
    if any(sum(e.lm) == 0 for e in elements):
        corner = 0
    return IdealBasis(
        generators=_sort_generators(polys),
        ring=ring,
        kind=STANDARD_LOCAL if local else GROEBNER_GLOBAL,
        reduced=not local,
        corner=corner,
        _elements=elements,
    )


def normal_form(p: PolyElement, basis: IdealBasis) -> PolyElement:
    """Membership oracle: zero exactly when ``p`` lies in the ideal."""
    if basis.kind == RAW:
        raise BasisKindError("normal_form needs a Groebner or standard basis")
    if p.ring != basis.ring:
        raise RingMismatchError("polynomial and basis live in different rings")
    if not basis.generators:
        return p
    elements = basis._elements or tuple(_element(g, basis.ring.ngens) for g in basis.generators)
    if basis.kind == STANDARD_LOCAL:
        if basis.corner == 0:
            return basis.ring.zero
        return _mora_normal_form(p, elements, basis.ring.ngens, basis.corner)
    return _reduce(p, elements)


def quotient_dimension(basis: IdealBasis):
    """dim_Q of the local quotient, or INFINITE when it is not finite."""
    if basis.kind != STANDARD_LOCAL:
        raise BasisKindError("quotient_dimension needs a local standard basis")
    nvars = basis.ring.ngens
    leads = basis.leading_monomials
    if any(sum(m) == 0 for m in leads):
        return 0
    for i in range(nvars):
        if not any(m[i] and sum(m) == m[i] for m in leads):
            return INFINITE

    def in_leading_ideal(monom: Monomial) -> bool:
        return any(all(a >= b for a, b in zip(monom, lead)) for lead in leads)

    seen = {tuple([0] * nvars)}
    frontier = [tuple([0] * nvars)]
    while frontier:
        following = []
        for monom in frontier:
            for i in range(nvars):
                step = monom[:i] + (monom[i] + 1,) + monom[i + 1 :]
                if step not in seen and not in_leading_ideal(step):
                    seen.add(step)
                    following.append(step)
        frontier = following
    return len(seen)


def standard_monomials(basis: IdealBasis) -> List[Monomial]:
    """Monomials outside the leading ideal of a zero-dimensional local basis."""
    if quotient_dimension(basis) == INFINITE:
        raise BasisKindError("the quotient is infinite dimensional")
    leads = basis.leading_monomials
    nvars = basis.ring.ngens
    result = []
    frontier = [tuple([0] * nvars)]
    seen = set(frontier)
    while frontier:
        result.extend(frontier)
        following = []
        for monom in frontier:
            for i in range(nvars):
                step = monom[:i] + (monom[i] + 1,) + monom[i + 1 :]
                if step in seen or any(all(a >= b for a, b in zip(step, l)) for l in leads):
                    continue
                seen.add(step)
                following.append(step)
        frontier = following
    if any(sum(m) == 0 for m in leads):
        return []
    return sorted(result, key=basis.ring.order, reverse=True)


def eliminate(gens: Sequence[PolyElement], drop: Iterable[str]) -> List[PolyElement]:
    """Generators of the ideal intersected with the subring free of ``drop``.

    The reduced Groebner basis comes from sympy's Buchberger under a block
    order with ``drop`` first; its members free of ``drop`` generate the
    elimination ideal.
    """
    gens = list(gens)
    ring = common_ring(gens)
    names = variable_names(ring)
    drop = list(dict.fromkeys(drop))
    unknown = [name for name in drop if name not in names]
    if unknown:
        raise EliminationError(f"cannot eliminate undeclared variables {unknown}")
    keep = [name for name in names if name not in drop]
    elimination_ring = make_ring(drop + keep, block_elimination(len(drop)))
    seq = [embed(g, elimination_ring) for g in gens if g]
    if not seq:
        return []
    basis = groebner(seq, elimination_ring)
    target = make_ring(keep, GLOBAL_DEGREVLEX)
    split = len(drop)
    survivors = [embed(g, target).monic() for g in basis if g and all(not any(m[:split]) for m in g.itermonoms())]
    return list(_sort_generators(survivors))


def _leading_coefficient_is_ground(p: PolyElement, index: int) -> bool:
    top = p.degree(index)
    return all(not any(m[:index] + m[index + 1 :]) for m in p.itermonoms() if m[index] == top)


def resultant_eliminate(f: PolyElement, g: PolyElement, variable: str) -> Optional[PolyElement]:
    """Squarefree generator of the radical of <f, g> eliminated by ``variable``.

    Applies when both polynomials involve ``variable`` and one of them has a
    ground leading coefficient in it, so the resultant vanishes exactly on the
    projection of V(f, g). Returns None otherwise.
    """
    ring = common_ring([f, g])
    names = variable_names(ring)
    if variable not in names:
        raise EliminationError(f"cannot eliminate undeclared variable {variable!r}")
    if ring.ngens < 2:
        return None
    index = names.index(variable)
    if f.degree(index) < 1 or g.degree(index) < 1:
        return None
    if not (_leading_coefficient_is_ground(f, index) or _leading_coefficient_is_ground(g, index)):
        return None
    first = make_ring((variable,) + tuple(n for n in names if n != variable), GLOBAL_LEX)
    res = embed(f, first).resultant(embed(g, first))
    keep = make_ring([n for n in names if n != variable], GLOBAL_DEGREVLEX)
    if not isinstance(res, PolyElement):
        return keep(res)
    res = embed(res, keep)
    if res.is_ground:
        return res
    return res.sqf_part().monic()


@dataclass(frozen=True)
class VectorTuple:
    """An element of a free module over a polynomial ring."""

    components: Tuple[PolyElement, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise RankMismatchError("a module element needs at least one component")
        common_ring(list(self.components))

    @property
    def rank(self) -> int:
        return len(self.components)

    @property
    def ring(self) -> PolyRing:
        return self.components[0].ring

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, index):
        return self.components[index]

    def __add__(self, other: "VectorTuple") -> "VectorTuple":
        if other.rank != self.rank:
            raise RankMismatchError(f"ranks {self.rank} and {other.rank} differ")
        return VectorTuple(tuple(a + b for a, b in zip(self, other)))

    def scale(self, factor: PolyElement) -> "VectorTuple":
        return VectorTuple(tuple(factor * c for c in self))

    def dot(self, values: Sequence[PolyElement]) -> PolyElement:
        if len(values) != self.rank:
            raise RankMismatchError(f"expected {self.rank} values, got {len(values)}")
        total = self.ring.zero
        for c, v in zip(self.components, values):
            total += c * v
        return total

    def at_origin(self) -> Tuple:
        return tuple(c.get(c.ring.zero_monom, c.ring.domain.zero) for c in self)

    def is_zero(self) -> bool:
        return not any(self.components)


def _combination(coefficients: Sequence[PolyElement], columns: Sequence[VectorTuple]) -> VectorTuple:
    rank = columns[0].rank
    ring = columns[0].ring
    totals = [ring.zero] * rank
    for coefficient, column in zip(coefficients, columns):
        if coefficient:
            for i in range(rank):
                totals[i] += coefficient * column[i]
    return VectorTuple(tuple(totals))


def module_syzygies(columns: Sequence[VectorTuple]) -> List[VectorTuple]:
    """Generators of {c : sum c_j * column_j = 0} over the polynomial ring.

    Uses a Groebner basis of the graph module spanned by (column_j, e_j)
    under position-over-term; elements vanishing in the first block are the
    syzygies.
    """
    columns = list(columns)
    if not columns:
        raise RankMismatchError("module_syzygies needs at least one column")
    rank = columns[0].rank
    if any(column.rank != rank for column in columns):
        raise RankMismatchError("all columns must have the same rank")
    ring = columns[0].ring
    if any(column.ring != ring for column in columns):
        raise RingMismatchError("columns live in different rings")
    if ring.order != GLOBAL_DEGREVLEX:
        ring = make_ring(variable_names(ring), GLOBAL_DEGREVLEX)
        columns = [VectorTuple(tuple(embed(c, ring) for c in column)) for column in columns]
    names = variable_names(ring)
    nvars = len(names)
    count = len(columns)
    taken = set(names)
    positions = []
    for index in range(rank + count):
        name = fresh_name(f"e{index}", taken)
        taken.add(name)
        positions.append(name)
    extended = make_ring(names + tuple(positions), PositionOverTermOrder(GLOBAL_DEGREVLEX, nvars))

    def unit(index: int) -> Tuple[int, ...]:
        return tuple(1 if k == index else 0 for k in range(rank + count))

    graph = []
    for j, column in enumerate(columns):
        terms = {tuple([0] * nvars) + unit(rank + j): ring.domain.one}
        for i, component in enumerate(column):
            for monom, coeff in component.iterterms():
                terms[monom + unit(i)] = coeff
        graph.append(extended.from_dict(terms))

    syzygies = []
    for g in buchberger(graph, nvars):
        parts = [dict() for _ in range(count)]
        is_syzygy = True
        for monom, coeff in g.iterterms():
            slot = monom[nvars:].index(1)
            if slot < rank:
                is_syzygy = False
                break
            parts[slot - rank][monom[:nvars]] = coeff
        if is_syzygy:
            syzygies.append(VectorTuple(tuple(ring.from_dict(p) if p else ring.zero for p in parts)))

    for syzygy in syzygies:
        if not _combination(syzygy.components, columns).is_zero():
            raise EngineInconsistencyError("computed syzygy does not annihilate the columns")
    return sorted(syzygies, key=lambda s: [[(ring.order(m), str(c)) for m, c in p.terms()] for p in s])
