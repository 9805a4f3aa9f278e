"""Reader for line-oriented germ-spec files.

    # the cusp family
    label f_2;
    vars y;
    param l;
    germ y^2, y^5 + l*y, l;
    function g(x) = x^3;
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Dict, Optional, Tuple

from ..core.functions import FunctionGerm
from ..core.germs import MapGerm, OnePSU
from ..core.ring import PolynomialSyntaxError, make_ring, parse_polynomial, parse_polynomial_list
from .catalog import AUGMENTATION, FUNCTION, GERM, OPSU, CatalogEntry

KEYS = ("label", "vars", "param", "germ", "function")
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_FUNCTION = re.compile(r"([A-Za-z][A-Za-z0-9_]*)\s*\(([^)]*)\)\s*=\s*(.+)\Z")


class GermSpecError(ValueError):
    """Raised when a germ-spec file is malformed; carries the 1-based line number."""

    def __init__(self, message: str, line: int = 0, source: str = "<string>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line else f"{source}: "
        super().__init__(where + message)


def _names(text: str, line: int, source: str) -> Tuple[str, ...]:
    names = tuple(part.strip() for part in text.split(",") if part.strip())
    if not names:
        raise GermSpecError("expected at least one variable name", line, source)
    for name in names:
        if not _NAME.match(name):
            raise GermSpecError(f"invalid variable name {name!r}", line, source)
    if len(set(names)) != len(names):
        raise GermSpecError(f"repeated variable in {text!r}", line, source)
    return names


def parse_germ_spec(text: str, source: str = "<string>") -> CatalogEntry:
    """Parse germ-spec text into a catalog entry (function, germ, opsu or augmentation)."""
    seen: Dict[str, Tuple[int, str]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line.endswith(";"):
            line = line[:-1].rstrip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        if key not in KEYS:
            raise GermSpecError(f"unknown key {key!r}", number, source)
        if key in seen:
            raise GermSpecError(f"{key!r} declared twice (first on line {seen[key][0]})", number, source)
        if not rest.strip():
            raise GermSpecError(f"{key!r} needs a value", number, source)
        seen[key] = (number, rest.strip())

    label = seen["label"][1] if "label" in seen else ""
    if not label and "germ" in seen:
        label = Path(source).stem if source != "<string>" else ""
    names: Optional[Tuple[str, ...]] = None
    if "vars" in seen:
        names = _names(seen["vars"][1], seen["vars"][0], source)

    germ = None
    if "germ" in seen:
        line, body = seen["germ"]
        if names is None:
            raise GermSpecError("'germ' needs a 'vars' declaration", line, source)
        if "param" in seen:
            param_line, param = seen["param"]
            if not _NAME.match(param):
                raise GermSpecError(f"invalid parameter name {param!r}", param_line, source)
            if param in names:
                raise GermSpecError(f"parameter {param!r} is also listed in 'vars'", param_line, source)
            ring = make_ring(names + (param,))
        else:
            ring = make_ring(names)
        try:
            components = tuple(parse_polynomial_list(body, ring))
            germ = OnePSU(components, label) if "param" in seen else MapGerm(components, label)
        except (PolynomialSyntaxError, ValueError) as exc:
            raise GermSpecError(str(exc), line, source) from exc
    elif "param" in seen:
        raise GermSpecError("'param' without a 'germ'", seen["param"][0], source)

    function = None
    if "function" in seen:
        line, body = seen["function"]
        match = _FUNCTION.match(body)
        if not match:
            raise GermSpecError("expected 'function NAME(vars) = polynomial'", line, source)
        name, variables, poly = match.groups()
        try:
            ring = make_ring(_names(variables, line, source))
            function = FunctionGerm(parse_polynomial(poly.strip(), ring), label if germ is None and label else name)
        except (PolynomialSyntaxError, ValueError) as exc:
            if isinstance(exc, GermSpecError):
                raise
            raise GermSpecError(str(exc), line, source) from exc

    provenance = f"germ-spec {source}"
    if germ is not None and function is not None:
        if not isinstance(germ, OnePSU):
            raise GermSpecError("a function can only augment a germ with a 'param'", seen["function"][0], source)
        return CatalogEntry(label or germ.label, AUGMENTATION, (germ, function), provenance)
    if germ is not None:
        return CatalogEntry(label, OPSU if isinstance(germ, OnePSU) else GERM, germ, provenance)
    if function is not None:
        return CatalogEntry(function.label, FUNCTION, function, provenance)
    raise GermSpecError("no 'germ' or 'function' declared", 0, source)


def load_germ_spec(path: Path) -> CatalogEntry:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Germ-spec file not found: {path}")
    return parse_germ_spec(path.read_text(encoding="utf-8"), str(path))
