"""Polynomial rings over QQ, monomial orders and the polynomial text format."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.orderings import MonomialOrder, grevlex, lex
from sympy.polys.rings import PolyElement, PolyRing

Monomial = Tuple[int, ...]
Polynomial = PolyElement

_NAME_PATTERN = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_TOKEN_PATTERN = re.compile(
    r"(?P<space>\s+)"
    r"|(?P<decimal>\d+\.\d*|\.\d+|\d+[eE][-+]?\d+)"
    r"|(?P<number>\d+)"
    r"|(?P<name>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^/(),])"
)


class PolynomialSyntaxError(ValueError):
    """Raised when polynomial text does not follow the grammar."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UndeclaredVariableError(PolynomialSyntaxError):
    """Raised when polynomial text names a variable the ring does not declare."""

    def __init__(self, name: str, position: int) -> None:
        super().__init__(f"undeclared variable {name!r}", position)
        self.name = name


class MissingAssignmentError(KeyError):
    """Raised when a substitution leaves a used variable without an image."""


class RingMismatchError(ValueError):
    """Raised when polynomials that must share a ring do not."""


class NegDegRevLexOrder(MonomialOrder):
    """Local degree order: lower total degree is larger, ties broken by revlex."""

    alias = "ds"
    is_global = False

    def __call__(self, monomial: Monomial):
        return (-sum(monomial), tuple(reversed([-m for m in monomial])))


class BlockEliminationOrder(MonomialOrder):
    """degrevlex on the first ``split`` variables, then degrevlex on the rest."""

    is_global = True

    def __init__(self, split: int) -> None:
        if split < 0:
            raise ValueError(f"block split must be non-negative, got {split}")
        self.split = split
        self.alias = f"dp({split}),dp"

    def __call__(self, monomial: Monomial):
        return (grevlex(monomial[: self.split]), grevlex(monomial[self.split :]))

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.split})"

    def __eq__(self, other) -> bool:
        return isinstance(other, BlockEliminationOrder) and other.split == self.split

    def __hash__(self) -> int:
        return hash((self.__class__, self.split))


class PositionOverTermOrder(MonomialOrder):
    """Module order on a ring extended by position variables e_1, e_2, ...

    The first ``nvars`` exponents are the ring monomial, the rest mark the
    module position. Lower position index is larger; ties use ``base``.
    """

    def __init__(self, base: MonomialOrder, nvars: int) -> None:
        self.base = base
        self.nvars = nvars
        self.alias = f"c,{base.alias}"
        self.is_global = base.is_global

    def __call__(self, monomial: Monomial):
        return (tuple(monomial[self.nvars :]), self.base(monomial[: self.nvars]))

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.base!r}, {self.nvars})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PositionOverTermOrder)
            and other.nvars == self.nvars
            and other.base == self.base
        )

    def __hash__(self) -> int:
        return hash((self.__class__, self.base, self.nvars))


GLOBAL_DEGREVLEX: MonomialOrder = grevlex
GLOBAL_LEX: MonomialOrder = lex
LOCAL_NEGDEGREVLEX: MonomialOrder = NegDegRevLexOrder()


def block_elimination(split: int) -> BlockEliminationOrder:
    return BlockEliminationOrder(split)


@lru_cache(maxsize=None)
def _build_ring(names: Tuple[str, ...], order: MonomialOrder) -> PolyRing:
    return PolyRing(names, QQ, order)


@dataclass(frozen=True)
class RingContext:
    """Ordered variable names plus a monomial order."""

    names: Tuple[str, ...]
    order: MonomialOrder = GLOBAL_DEGREVLEX

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", tuple(self.names))
        for name in self.names:
            if not _NAME_PATTERN.match(name):
                raise ValueError(f"invalid variable name: {name!r}")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")

    @classmethod
    def of(cls, ring_or_poly: Union[PolyRing, PolyElement]) -> "RingContext":
        ring = ring_or_poly.ring if isinstance(ring_or_poly, PolyElement) else ring_or_poly
        return cls(variable_names(ring), ring.order)

    @property
    def ring(self) -> PolyRing:
        return _build_ring(self.names, self.order)

    @property
    def is_local(self) -> bool:
        return not self.order.is_global

    def gen(self, name: str) -> PolyElement:
        try:
            return self.ring.gens[self.names.index(name)]
        except ValueError:
            raise UndeclaredVariableError(name, 0) from None

    def with_order(self, order: MonomialOrder) -> "RingContext":
        return RingContext(self.names, order)

    def local(self) -> "RingContext":
        return self.with_order(LOCAL_NEGDEGREVLEX)


def make_ring(names: Iterable[str], order: MonomialOrder = GLOBAL_DEGREVLEX) -> PolyRing:
    return RingContext(tuple(names), order).ring


def variable_names(ring: PolyRing) -> Tuple[str, ...]:
    return tuple(str(symbol) for symbol in ring.symbols)


def used_variables(p: PolyElement) -> Tuple[str, ...]:
    names = variable_names(p.ring)
    used = set()
    for monom in p.itermonoms():
        used.update(i for i, e in enumerate(monom) if e)
    return tuple(names[i] for i in sorted(used))


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    index = 1
    while f"{base}{index}" in taken:
        index += 1
    return f"{base}{index}"


def embed(p: PolyElement, ring: PolyRing) -> PolyElement:
    """Move ``p`` into ``ring`` by variable name (the target may add or reorder names)."""
    if p.ring == ring:
        return p
    target = variable_names(ring)
    missing = [name for name in used_variables(p) if name not in target]
    if missing:
        raise RingMismatchError(f"variables {missing} are not declared in {target}")
    positions = [target.index(name) if name in target else None for name in variable_names(p.ring)]
    width = ring.ngens
    terms = {}
    for monom, coeff in p.iterterms():
        image = [0] * width
        for index, exp in enumerate(monom):
            if exp:
                image[positions[index]] = exp
        terms[tuple(image)] = coeff
    return ring.from_dict(terms)


def reorder(p: PolyElement, order: MonomialOrder) -> PolyElement:
    return embed(p, make_ring(variable_names(p.ring), order))


def common_ring(polys: Sequence[PolyElement]) -> PolyRing:
    if not polys:
        raise RingMismatchError("no polynomials given")
    ring = polys[0].ring
    for p in polys[1:]:
        if p.ring != ring:
            raise RingMismatchError(
                f"mixed rings: {variable_names(ring)} and {variable_names(p.ring)}"
            )
    return ring


def constant_term(p: PolyElement):
    return p.get(p.ring.zero_monom, QQ.zero)


def as_variable(p: PolyElement) -> Optional[str]:
    """Name of the variable ``p`` equals, or None."""
    if len(p) != 1:
        return None
    (monom, coeff), = p.items()
    if coeff != QQ.one or sum(monom) != 1:
        return None
    return variable_names(p.ring)[monom.index(1)]


class _Parser:
    def __init__(self, text: str, ring: PolyRing) -> None:
        self.text = text
        self.ring = ring
        self.index = {name: i for i, name in enumerate(variable_names(ring))}
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def peek(self) -> Tuple[str, str, int]:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return ("end", "", len(self.text))

    def take(self) -> Tuple[str, str, int]:
        token = self.peek()
        self.pos += 1
        return token

    def expect_end(self) -> None:
        kind, value, where = self.peek()
        if kind != "end":
            raise PolynomialSyntaxError(f"unexpected {value!r}", where)

    def expression(self) -> PolyElement:
        kind, value, _ = self.peek()
        sign = 1
        if kind == "op" and value in "+-":
            self.take()
            sign = -1 if value == "-" else 1
        result = self.term() * sign
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.take()
                rhs = self.term()
                result = result + rhs if value == "+" else result - rhs
            else:
                return result

    def term(self) -> PolyElement:
        result = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.take()
                result = result * self.factor()
            elif kind in ("number", "name") or (kind == "op" and value == "("):
                raise PolynomialSyntaxError("expected '*' between factors", self.peek()[2])
            else:
                return result

    def factor(self) -> PolyElement:
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.take()
            kind, value, where = self.take()
            if kind != "number":
                raise PolynomialSyntaxError("exponent must be a non-negative integer", where)
            return base ** int(value)
        return base

    def atom(self) -> PolyElement:
        kind, value, where = self.take()
        if kind == "number":
            numerator = int(value)
            nkind, nvalue, _ = self.peek()
            if nkind == "op" and nvalue == "/":
                self.take()
                dkind, dvalue, dwhere = self.take()
                if dkind != "number":
                    raise PolynomialSyntaxError("expected integer denominator", dwhere)
                if int(dvalue) == 0:
                    raise PolynomialSyntaxError("zero denominator", dwhere)
                return self.ring.ground_new(QQ(numerator, int(dvalue)))
            return self.ring.ground_new(QQ(numerator))
        if kind == "name":
            if value not in self.index:
                raise UndeclaredVariableError(value, where)
            return self.ring.gens[self.index[value]]
        if kind == "op" and value == "(":
            inner = self.expression()
            ckind, cvalue, cwhere = self.take()
            if not (ckind == "op" and cvalue == ")"):
                raise PolynomialSyntaxError("expected ')'", cwhere)
            return inner
        if kind == "end":
            raise PolynomialSyntaxError("unexpected end of input", where)
        raise PolynomialSyntaxError(f"unexpected {value!r}", where)


def _tokenize(text: str):
    pos = 0
    while pos < len(text):
        match = _TOKEN_PATTERN.match(text, pos)
        if match is None:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = match.lastgroup
        if kind == "decimal":
            raise PolynomialSyntaxError(
                f"non-rational literal {match.group()!r}; write fractions as a/b", pos
            )
        if kind != "space":
            yield (kind, match.group(), pos)
        pos = match.end()


def _as_ring(ring: Union[PolyRing, RingContext]) -> PolyRing:
    return ring.ring if isinstance(ring, RingContext) else ring


def parse_polynomial(text: str, ring: Union[PolyRing, RingContext]) -> PolyElement:
    """Parse ``text`` into an exact polynomial of ``ring``."""
    parser = _Parser(text, _as_ring(ring))
    if parser.peek()[0] == "end":
        raise PolynomialSyntaxError("empty polynomial", 0)
    result = parser.expression()
    parser.expect_end()
    return result


def parse_polynomial_list(text: str, ring: Union[PolyRing, RingContext]) -> List[PolyElement]:
    """Parse comma-separated polynomials, e.g. ``"y^2, y^5 + l*y, l"``."""
    pieces: List[str] = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            pieces.append(text[start:i])
            start = i + 1
    pieces.append(text[start:])
    result = []
    offset = 0
    for piece in pieces:
        try:
            result.append(parse_polynomial(piece, ring))
        except PolynomialSyntaxError as exc:
            if isinstance(exc, UndeclaredVariableError):
                raise UndeclaredVariableError(exc.name, exc.position + offset) from None
            raise PolynomialSyntaxError(
                str(exc).rsplit(" (at position", 1)[0], exc.position + offset
            ) from None
        offset += len(piece) + 1
    return result


def _format_coefficient(coeff) -> str:
    numerator, denominator = int(QQ.numer(coeff)), int(QQ.denom(coeff))
    if denominator == 1:
        return str(numerator)
    return f"{numerator}/{denominator}"


def format_monomial(monom: Monomial, names: Sequence[str]) -> str:
    factors = []
    for name, exp in zip(names, monom):
        if exp == 1:
            factors.append(name)
        elif exp > 1:
            factors.append(f"{name}^{exp}")
    return "*".join(factors)


def format_polynomial(p: PolyElement) -> str:
    """Print ``p`` in the text grammar, terms in decreasing ring order."""
    if not p:
        return "0"
    names = variable_names(p.ring)
    parts: List[str] = []
    for monom, coeff in p.terms():
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        mono = format_monomial(monom, names)
        if not mono:
            body = _format_coefficient(magnitude)
        elif magnitude == QQ.one:
            body = mono
        else:
            body = f"{_format_coefficient(magnitude)}*{mono}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts)


def substitute(
    p: PolyElement,
    assignment: Mapping[str, PolyElement],
    target: Optional[PolyRing] = None,
) -> PolyElement:
    """Compose ``p`` with the images in ``assignment`` (keyed by variable name)."""
    images = list(assignment.values())
    if target is None:
        target = images[0].ring if images else p.ring
    for image in images:
        if image.ring != target:
            raise RingMismatchError("substitution images must share one ring")
    names = variable_names(p.ring)
    for name in used_variables(p):
        if name not in assignment:
            raise MissingAssignmentError(f"no image for variable {name!r}")
    powers: Dict[Tuple[int, int], PolyElement] = {}

    def power(index: int, exp: int) -> PolyElement:
        key = (index, exp)
        if key not in powers:
            base = assignment[names[index]]
            powers[key] = base if exp == 1 else power(index, exp - 1) * base
        return powers[key]

    result = target.zero
    for monom, coeff in p.iterterms():
        term = target.ground_new(coeff)
        for index, exp in enumerate(monom):
            if exp:
                term = term * power(index, exp)
        result += term
    return result


def partial_derivative(p: PolyElement, variable: str) -> PolyElement:
    names = variable_names(p.ring)
    if variable not in names:
        raise UndeclaredVariableError(variable, 0)
    return p.diff(p.ring.gens[names.index(variable)])


def jacobian_generators(p: PolyElement) -> List[PolyElement]:
    return [p.diff(gen) for gen in p.ring.gens]
