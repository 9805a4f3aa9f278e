"""Built-in catalog of germs, unfoldings and functions, and the table1 runner."""

from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import yaml

from ..core.codim import (
    BoundsReport,
    aecod_damon,
    augmentation_codim,
    bounds_report,
    iterated_augmentation,
)
from ..core.discriminant import defining_equation
from ..core.functions import (
    FunctionGerm,
    briancon_skoda,
    family_Ak,
    family_DG,
    family_malgrange,
    milnor_number,
    tjurina_number,
)
from ..core.germs import MapGerm, OnePSU, augment, plane_curve_report, quasihomogeneous_map_weights
from ..core.liftable import (
    DEFAULT_BOUND,
    augmentation_certificate,
    is_cross_substantial,
    isosingular_dimension,
    jxh_test,
    substantiality_degree,
)
from ..core.ring import format_polynomial, parse_polynomial
from ..core.utils import log_info, progress_tracker
from .reports import ReportRow

CATALOG_PATH = Path(__file__).with_name("catalog.yaml")

FUNCTION = "function"
GERM = "germ"
OPSU = "opsu"
AUGMENTATION = "augmentation"
TRIVIALIZER = "trivializer"
NORMAL_FORM = "normal_form"
CURVE = "curve"

_FAMILY_PATTERN = re.compile(r"(DG|A)_(\d+)\Z")
_ROW_SEPARATOR = re.compile(r"\s*[×*]\s*")


class CatalogError(KeyError):
    """Raised when a catalog label is unknown or names the wrong kind of entry."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    kind: str
    payload: Any
    provenance: str = ""
    metadata: Mapping[str, Any] = field(default_factory=dict)
    large: bool = False
    extra: Mapping[str, Any] = field(default_factory=dict)

    def function(self) -> FunctionGerm:
        if self.kind not in (FUNCTION, CURVE):
            raise CatalogError(f"{self.label} is a {self.kind}, not a function")
        return self.payload

    def opsu(self) -> OnePSU:
        if self.kind == OPSU:
            return self.payload
        if self.kind == AUGMENTATION:
            raise CatalogError(f"{self.label} is an augmentation; its unfolding is {self.payload[0].label}")
        raise CatalogError(f"{self.label} is a {self.kind}, not a one-parameter unfolding")

    def germ(self) -> MapGerm:
        if self.kind in (GERM, OPSU, TRIVIALIZER, NORMAL_FORM):
            return self.payload
        if self.kind == AUGMENTATION:
            F, g = self.payload
            germ = augment(F, g)
            display = self.extra.get("display")
            return replace(germ, label=self.label, display_order=tuple(display) if display else None)
        raise CatalogError(f"{self.label} is a {self.kind}, not a map-germ")


@dataclass(frozen=True)
class TableRow:
    opsu: str
    functions: Tuple[str, ...]
    expected: Tuple[int, int, int, int]
    large: bool = False

    @property
    def key_parts(self) -> Tuple[str, ...]:
        return tuple(reversed(self.functions)) + (self.opsu.replace("-opsu", ""),)

    @property
    def key(self) -> str:
        return " × ".join(self.key_parts)

    @property
    def iterated(self) -> bool:
        return len(self.functions) > 1


class Catalog:
    def __init__(self, entries: Dict[str, CatalogEntry], rows: Sequence[TableRow]):
        self.entries = entries
        self.rows = list(rows)

    def __contains__(self, label: str) -> bool:
        try:
            self.get(label)
        except CatalogError:
            return False
        return True

    def labels(self) -> List[str]:
        return list(self.entries)

    def get(self, label: str) -> CatalogEntry:
        if label in self.entries:
            return self.entries[label]
        match = _FAMILY_PATTERN.match(label)
        if match:
            family, k = match.group(1), int(match.group(2))
            g = family_DG(k) if family == "DG" else family_Ak(k)
            return CatalogEntry(label, FUNCTION, g, provenance=f"{family}_k family")
        raise CatalogError(f"unknown catalog entry {label!r}")

    def function(self, label: str) -> FunctionGerm:
        return self.get(label).function()

    def opsu(self, label: str) -> OnePSU:
        entry = self.get(label)
        if entry.kind != OPSU and f"{label}-opsu" in self.entries:
            entry = self.entries[f"{label}-opsu"]
        return entry.opsu()

    def germ(self, label: str) -> MapGerm:
        return self.get(label).germ()


def _inline_function(spec: Mapping[str, Any], label: str) -> FunctionGerm:
    if "family" in spec:
        family = spec["family"]
        if family == "DG":
            g = family_DG(int(spec["k"]))
        elif family == "A":
            g = family_Ak(int(spec["k"]))
        elif family == "M":
            g = family_malgrange()
        else:
            raise CatalogError(f"{label}: unknown family {family!r}")
        return replace(g, label=label)
    return FunctionGerm.parse(spec["poly"], tuple(spec["vars"]), label=spec.get("label", label))


def _entry(label, kind, payload, spec, **extra) -> CatalogEntry:
    return CatalogEntry(
        label=label,
        kind=kind,
        payload=payload,
        provenance=spec.get("provenance", ""),
        metadata=dict(spec.get("metadata", {})),
        large=bool(spec.get("large", False)),
        extra=extra,
    )


def parse_catalog(raw: Mapping[str, Any]) -> Catalog:
    entries: Dict[str, CatalogEntry] = {}

    def add(entry: CatalogEntry) -> None:
        if entry.label in entries:
            raise CatalogError(f"duplicate catalog label {entry.label!r}")
        entries[entry.label] = entry

    for label, spec in (raw.get("functions") or {}).items():
        g = _inline_function(spec, label)
        kind = CURVE if "curve" in spec else FUNCTION
        add(_entry(label, kind, g, spec, **({"curve": spec["curve"]} if "curve" in spec else {})))
    for a, b in raw.get("curves") or []:
        label = f"curve_{a}_{b}"
        g = FunctionGerm.parse(f"y^{a} - x^{b}", ("x", "y"), label=label)
        spec = {
            "provenance": "irreducible quasi-homogeneous plane curve",
            "metadata": {"quasihomogeneous": True, "quotient": "1"},
        }
        add(_entry(label, CURVE, g, spec, curve={"branches": 1, "quotient": "1"}))
    for label, spec in (raw.get("curve_examples") or {}).items():
        g = entries[spec["function"]].function()
        metadata = dict(spec.get("metadata", {}))
        metadata["quotient"] = str(metadata.get("quotient", ""))
        curve = {"branches": int(spec["branches"]), "quotient": metadata["quotient"]}
        add(_entry(label, CURVE, g, {**spec, "metadata": metadata}, curve=curve))
    for label, spec in (raw.get("germs") or {}).items():
        add(_entry(label, GERM, MapGerm.parse(spec["components"], tuple(spec["vars"]), label), spec))
    for label, spec in (raw.get("opsus") or {}).items():
        names = tuple(spec["vars"]) + (spec["param"],)
        F = OnePSU.parse(spec["components"], names, spec.get("label", label))
        add(_entry(label, OPSU, F, spec, base=spec.get("base")))
    for label, spec in (raw.get("augmentations") or {}).items():
        F = entries[spec["opsu"]].opsu()
        function_spec = spec["function"]
        if isinstance(function_spec, str):
            g = entries[function_spec].function()
        else:
            g = _inline_function(function_spec, function_spec.get("label", label))
        add(_entry(label, AUGMENTATION, (F, g), spec, display=spec.get("display")))
    for label, spec in (raw.get("trivializers") or {}).items():
        T = MapGerm.parse(spec["components"], tuple(spec["vars"]), label)
        add(_entry(label, TRIVIALIZER, T, spec, certificate=spec.get("certificate")))
    for label, spec in (raw.get("normal_forms") or {}).items():
        add(_entry(label, NORMAL_FORM, MapGerm.parse(spec["components"], tuple(spec["vars"]), label), spec))

    rows = []
    for spec in raw.get("table1") or []:
        expected = tuple(int(v) for v in spec["expected"])
        if len(expected) != 4:
            raise CatalogError(f"table row {spec} needs four expected values")
        rows.append(TableRow(spec["opsu"], tuple(spec["functions"]), expected, bool(spec.get("large", False))))
    return Catalog(entries, rows)


@lru_cache(maxsize=4)
def load_catalog(path: Optional[Path] = None) -> Catalog:
    catalog_path = Path(path or CATALOG_PATH)
    if not catalog_path.exists():
        raise FileNotFoundError(f"Catalog file not found: {catalog_path}")
    with catalog_path.open("r", encoding="utf-8") as handle:
        raw = yaml.safe_load(handle) or {}
    return parse_catalog(raw)


@dataclass(frozen=True)
class VerificationResult:
    label: str
    key: str
    expected: Any
    actual: Any

    @property
    def ok(self) -> bool:
        return str(self.expected) == str(self.actual)


def _roundtrip(label: str, polys) -> List[VerificationResult]:
    results = []
    for index, p in enumerate(polys):
        text = format_polynomial(p)
        again = parse_polynomial(text, p.ring)
        results.append(VerificationResult(label, f"print[{index}]", text, format_polynomial(again)))
        if again != p:
            results.append(VerificationResult(label, f"parse[{index}]", True, False))
    return results


def _function_checks(entry: CatalogEntry) -> Dict[str, Any]:
    g = entry.function()
    mu = milnor_number(g)
    tau = tjurina_number(g)
    checks = {
        "mu": lambda: mu,
        "tau": lambda: tau,
        "bs": lambda: briancon_skoda(g),
        "quasihomogeneous": lambda: mu == tau,
    }
    if entry.kind == CURVE:
        curve = entry.extra["curve"]
        report = plane_curve_report(g, int(curve["branches"]))
        checks.update(
            delta=lambda: report.delta,
            mu_image=lambda: report.mu_image,
            aecod=lambda: report.aecod,
            quotient=lambda: report.quotient,
        )
    return checks


def _opsu_checks(entry: CatalogEntry, bound: int) -> Dict[str, Any]:
    F = entry.opsu()
    return {
        "aecod": lambda: aecod_damon(F),
        "delta": lambda: substantiality_degree(F, bound),
        "substantial": lambda: substantiality_degree(F, bound) == 1,
        "cross_substantial": lambda: is_cross_substantial(F),
        "jxh": lambda: jxh_test(defining_equation(F)),
        "quasihomogeneous": lambda: quasihomogeneous_map_weights(F) is not None,
    }


def verify_entry(entry: CatalogEntry, catalog: Optional[Catalog] = None, bound: int = DEFAULT_BOUND) -> List[VerificationResult]:
    """Recompute every metadata value of ``entry`` and compare."""
    catalog = catalog or load_catalog()
    label = entry.label
    if entry.kind in (FUNCTION, CURVE):
        results = _roundtrip(label, [entry.function().poly])
        checks = _function_checks(entry)
    elif entry.kind == OPSU:
        F = entry.opsu()
        results = _roundtrip(label, F.components)
        checks = _opsu_checks(entry, bound)
        base = entry.extra.get("base")
        if base:
            results.append(VerificationResult(label, "base", True, F.base.components_equal(catalog.germ(base))))
    elif entry.kind == AUGMENTATION:
        F, g = entry.payload
        results = _roundtrip(label, entry.germ().components)
        checks = {"aecod": lambda: augmentation_codim(F, g)}
    elif entry.kind == TRIVIALIZER:
        T = entry.germ()
        results = _roundtrip(label, T.components)
        checks = {"tau_tilde": lambda: isosingular_dimension(T)}
        certificate = entry.extra.get("certificate")
        if certificate:
            holds = augmentation_certificate(T, int(certificate["p"]), int(certificate["s"]))
            results.append(VerificationResult(label, "certificate", certificate["holds"], holds))
    elif entry.kind == GERM:
        germ = entry.germ()
        results = _roundtrip(label, germ.components)
        checks = {"quasihomogeneous": lambda: quasihomogeneous_map_weights(germ) is not None}
    else:
        return _roundtrip(label, entry.germ().components)
    for key, expected in entry.metadata.items():
        if key in checks:
            results.append(VerificationResult(label, key, expected, checks[key]()))
    return results


def verify_catalog(include_large: bool = False, bound: int = DEFAULT_BOUND) -> List[VerificationResult]:
    catalog = load_catalog()
    entries = [e for e in catalog.entries.values() if include_large or not e.large]
    results: List[VerificationResult] = []
    with progress_tracker("Verifying catalog", total=len(entries)) as advance:
        for entry in entries:
            results.extend(verify_entry(entry, catalog, bound))
            advance()
    return results


def _matches(row: TableRow, parts: Sequence[str]) -> bool:
    if len(parts) == 1:
        return not row.large and parts[0] in row.key_parts
    return tuple(parts) == row.key_parts


def select_rows(selector: Optional[str], catalog: Optional[Catalog] = None) -> List[TableRow]:
    """None: the desk-scale rows; "": nothing; "all": every row; else comma-separated keys."""
    catalog = catalog or load_catalog()
    if selector is None:
        return [row for row in catalog.rows if not row.large]
    selector = selector.strip()
    if not selector:
        return []
    if selector.lower() == "all":
        return list(catalog.rows)
    chosen: List[TableRow] = []
    for token in selector.split(","):
        parts = [p.replace("-opsu", "") for p in _ROW_SEPARATOR.split(token.strip()) if p]
        matched = [row for row in catalog.rows if _matches(row, parts)]
        if not matched:
            raise CatalogError(f"no table row matches {token.strip()!r}")
        chosen.extend(row for row in matched if row not in chosen)
    return [row for row in catalog.rows if row in chosen]


def compute_row(row: TableRow, catalog: Optional[Catalog] = None, bound: int = DEFAULT_BOUND) -> BoundsReport:
    catalog = catalog or load_catalog()
    F = catalog.opsu(row.opsu)
    functions = [catalog.function(label) for label in row.functions]
    if not row.iterated:
        return bounds_report(F, functions[0], bound=bound)
    G, g = iterated_augmentation(F, functions)
    return bounds_report(G, g, bound=bound)


def _row_label(row: TableRow, catalog: Catalog) -> str:
    label = catalog.opsu(row.opsu).label
    for name in row.functions:
        label = f"A_{{F,{name}}}({label})"
    return label


def _row_worker(job: Tuple[TableRow, int]) -> ReportRow:
    row, bound = job
    catalog = load_catalog()
    try:
        return ReportRow.from_report(compute_row(row, catalog, bound))
    except Exception as exc:
        return ReportRow.failed(_row_label(row, catalog), f"{type(exc).__name__}: {exc}")


def table1(selector: Optional[str] = None, bound: int = DEFAULT_BOUND, jobs: int = 1) -> List[ReportRow]:
    """Rows in catalog order; a failing row carries its error instead of aborting the run."""
    rows = select_rows(selector)
    if not rows:
        return []
    jobs_list = [(row, bound) for row in rows]
    results: List[ReportRow] = []
    with progress_tracker("Computing table rows", total=len(rows)) as advance:
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as executor:
                for result in executor.map(_row_worker, jobs_list):
                    results.append(result)
                    advance()
        else:
            for job in jobs_list:
                results.append(_row_worker(job))
                advance()
    for row, result in zip(rows, results):
        if result.ok and result.numbers() != row.expected:
            log_info(f"{result.label}: computed {result.numbers()}, catalog lists {row.expected}")
    return results
