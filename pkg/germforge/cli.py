"""Command-line interface for germforge."""

from __future__ import annotations

import functools
import json
import re
from dataclasses import replace
from pathlib import Path
from typing import List, Optional, Sequence

import click

from .core import codim, discriminant, functions, germs, liftable
from .core.ring import format_polynomial, make_ring, parse_polynomial
from .core.standard_basis import INFINITE
from .core.utils import format_dimension, json_dimension, log_info, set_quiet, status, write_jsonl_log, write_text
from .io import catalog as catalog_io
from .io import config as config_io
from .io import reports
from .io.germ_spec import load_germ_spec

CATALOG_PREFIX = "catalog:"
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*")

REFUSALS = (
    discriminant.NonPrincipalError,
    functions.NonIsolatedSingularityError,
    germs.ParityError,
    germs.ImmersiveCurveError,
    codim.InfiniteCodimensionError,
)


class RefusalError(click.ClickException):
    """A mathematical refusal: the input is valid but the invariant is undefined or infinite."""

    exit_code = 2


def _guarded(command):
    """Map engine exceptions onto exit codes at the command boundary."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except click.ClickException:
            raise
        except REFUSALS as exc:
            raise RefusalError(str(exc)) from exc
        except Exception as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


def _settings(ctx: click.Context) -> config_io.EngineConfig:
    return ctx.find_object(config_io.EngineConfig)


def _override(field: str):
    """Option callback letting a subcommand flag replace one group setting."""

    def callback(ctx: click.Context, param: click.Parameter, value):
        if value is None:
            return value
        try:
            ctx.obj = replace(_settings(ctx), **{field: value})
        except config_io.ConfigError as exc:
            raise click.BadParameter(str(exc), ctx=ctx, param=param) from exc
        return value

    return callback


def _split_names(value: Optional[str]) -> Optional[tuple]:
    if value is None:
        return None
    return tuple(name.strip() for name in value.split(",") if name.strip())


def _infer_names(text: str) -> tuple:
    return tuple(dict.fromkeys(_NAME.findall(text)))


def _catalog_label(value: str) -> Optional[str]:
    if value.startswith(CATALOG_PREFIX):
        return value[len(CATALOG_PREFIX):]
    return None


def _spec_entry(value: str) -> Optional[catalog_io.CatalogEntry]:
    path = Path(value.strip(" '\"")).expanduser()
    if path.suffix and path.exists() and path.is_file():
        return load_germ_spec(path)
    return None


def _resolve_function(value: str, names: Optional[str]) -> functions.FunctionGerm:
    label = _catalog_label(value)
    if label is not None:
        return catalog_io.load_catalog().function(label)
    entry = _spec_entry(value)
    if entry is not None:
        if entry.kind == catalog_io.AUGMENTATION:
            return entry.payload[1]
        return entry.function()
    variables = _split_names(names) or _infer_names(value)
    return functions.FunctionGerm(parse_polynomial(value, make_ring(variables)), "g")


def _resolve_germ(value: str, names: Optional[str]) -> germs.MapGerm:
    label = _catalog_label(value)
    if label is not None:
        return catalog_io.load_catalog().germ(label)
    entry = _spec_entry(value)
    if entry is not None:
        return entry.germ()
    variables = _split_names(names) or _infer_names(value)
    return germs.MapGerm.parse(value, variables)


def _resolve_opsu(value: str, names: Optional[str], param: Optional[str]) -> germs.OnePSU:
    label = _catalog_label(value)
    if label is not None:
        return catalog_io.load_catalog().opsu(label)
    entry = _spec_entry(value)
    if entry is not None:
        if entry.kind == catalog_io.AUGMENTATION:
            return entry.payload[0]
        return entry.opsu()
    if param is None:
        raise click.UsageError("literal unfoldings need --param")
    variables = _split_names(names) or tuple(n for n in _infer_names(value) if n != param)
    return germs.OnePSU.parse(value, variables + (param,))


def _emit(ctx: click.Context, text: str, data, csv_text: Optional[str] = None) -> None:
    output_format = _settings(ctx).output_format
    if output_format == "json":
        click.echo(json.dumps(data, indent=2))
    elif output_format == "csv" and csv_text is not None:
        click.echo(csv_text.rstrip("\n"))
    else:
        click.echo(text)


def _refuse_infinite(value, what: str) -> None:
    if value == INFINITE:
        raise RefusalError(f"{what} is infinite")


@click.group()
@click.option("--format", "output_format", type=click.Choice(config_io.OUTPUT_FORMATS), help="Report format.")
@click.option("--bound", type=int, help="Search bound for the degree of substantiality.")
@click.option("--jobs", type=int, help="Worker processes for table rows.")
@click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path), help="JSON configuration file.")
@click.option("--quiet", is_flag=True, help="Silence progress logging.")
@click.pass_context
def cli(
    ctx: click.Context,
    output_format: Optional[str],
    bound: Optional[int],
    jobs: Optional[int],
    config_path: Optional[Path],
    quiet: bool,
) -> None:
    """Singularity invariants of map-germs and their augmentations."""
    try:
        base = config_io.load_config(config_path) if config_path else config_io.EngineConfig()
        settings = config_io.EngineConfig(
            bound=config_io.resolve_bound(bound, base if config_path else None),
            jobs=jobs if jobs is not None else base.jobs,
            output_format=output_format or base.output_format,
            quiet=quiet or base.quiet,
        )
    except (config_io.ConfigError, FileNotFoundError) as exc:
        raise click.ClickException(str(exc)) from exc
    set_quiet(settings.quiet)
    ctx.obj = settings


function_option = click.option("--g", "g_value", required=True, help="Function: catalog:LABEL, a germ-spec file or a polynomial.")
vars_option = click.option("--vars", "names", help="Comma-separated source variables for literal input.")
germ_option = click.option("--germ", "germ_value", required=True, help="Map-germ: catalog:LABEL, a germ-spec file or components.")
opsu_option = click.option("--opsu", "opsu_value", required=True, help="Unfolding: catalog:LABEL, a germ-spec file or components.")
param_option = click.option("--param", help="Parameter variable of a literal unfolding (last component).")
format_option = click.option(
    "--format",
    type=click.Choice(config_io.OUTPUT_FORMATS),
    expose_value=False,
    callback=_override("output_format"),
    help="Report format (overrides the group option).",
)
bound_option = click.option(
    "--bound", type=int, expose_value=False, callback=_override("bound"), help="Search bound for the degree of substantiality."
)
jobs_option = click.option(
    "--jobs", type=int, expose_value=False, callback=_override("jobs"), help="Worker processes for table rows."
)


@cli.command(name="mu")
@format_option
@function_option
@vars_option
@click.pass_context
@_guarded
def mu_cmd(ctx: click.Context, g_value: str, names: Optional[str]) -> None:
    """Milnor number of a function germ."""
    g = _resolve_function(g_value, names)
    value = functions.milnor_number(g)
    _emit(ctx, format_dimension(value), {"mu": json_dimension(value)})
    _refuse_infinite(value, f"mu({g})")


@cli.command(name="tau")
@format_option
@function_option
@vars_option
@click.pass_context
@_guarded
def tau_cmd(ctx: click.Context, g_value: str, names: Optional[str]) -> None:
    """Tjurina number of a function germ."""
    g = _resolve_function(g_value, names)
    value = functions.tjurina_number(g)
    _emit(ctx, format_dimension(value), {"tau": json_dimension(value)})
    _refuse_infinite(value, f"tau({g})")


@cli.command(name="bs")
@format_option
@function_option
@vars_option
@click.pass_context
@_guarded
def bs_cmd(ctx: click.Context, g_value: str, names: Optional[str]) -> None:
    """Briancon-Skoda exponent: least r with g^r in the Jacobian ideal."""
    value = functions.briancon_skoda(_resolve_function(g_value, names))
    _emit(ctx, str(value), {"bs": value})


@cli.command(name="weights")
@format_option
@click.option("--g", "g_value", help="Function germ.")
@click.option("--germ", "germ_value", help="Map-germ.")
@vars_option
@click.pass_context
@_guarded
def weights_cmd(ctx: click.Context, g_value: Optional[str], germ_value: Optional[str], names: Optional[str]) -> None:
    """Quasi-homogeneous weights of a function or a map-germ."""
    if (g_value is None) == (germ_value is None):
        raise click.UsageError("give exactly one of --g or --germ")
    if g_value is not None:
        g = _resolve_function(g_value, names)
        weights = functions.quasihomogeneous_weights(g)
        if weights is None:
            _emit(ctx, "none", {"weights": None})
            return
        pairs = [f"{name}={w}" for name, w in zip(weights.variables, weights.weights)]
        _emit(ctx, " ".join(pairs), {"weights": {name: str(w) for name, w in weights.as_dict().items()}})
        return
    germ = _resolve_germ(germ_value, names)
    found = germs.quasihomogeneous_map_weights(germ)
    if found is None:
        _emit(ctx, "none", {"weights": None})
        return
    text = "source " + " ".join(f"{n}={w}" for n, w in zip(germ.source, found.source))
    text += "\ntarget " + " ".join(f"{n}={w}" for n, w in zip(germ.target, found.target))
    data = {
        "source": {n: str(w) for n, w in zip(germ.source, found.source)},
        "target": {n: str(w) for n, w in zip(germ.target, found.target)},
    }
    _emit(ctx, text, {"weights": data})


@cli.command(name="augment")
@format_option
@opsu_option
@function_option
@vars_option
@param_option
@click.option("--g-vars", help="Variables of a literal function.")
@click.option("--natural", is_flag=True, help="Print the natural unfolding of the augmentation instead.")
@click.pass_context
@_guarded
def augment_cmd(
    ctx: click.Context,
    opsu_value: str,
    g_value: str,
    names: Optional[str],
    param: Optional[str],
    g_vars: Optional[str],
    natural: bool,
) -> None:
    """A_{F,g}(f)(x, z) = (f_{g(z)}(x), z)."""
    F = _resolve_opsu(opsu_value, names, param)
    g = _resolve_function(g_value, g_vars)
    germ = germs.natural_opsu(F, g) if natural else germs.augment(F, g)
    data = {
        "label": germ.label,
        "source": list(germ.source),
        "target": list(germ.target),
        "components": [format_polynomial(c) for c in germ.components],
    }
    _emit(ctx, f"{germ.label} = {germ}", data)


def _equation_output(ctx: click.Context, h: discriminant.HypersurfaceEquation) -> None:
    text = str(h) if h.vanishing else "1 (empty)"
    data = {
        "kind": h.kind,
        "variables": list(h.variables),
        "equation": str(h),
        "vanishing": h.vanishing,
    }
    _emit(ctx, text, data)


@cli.command(name="image")
@format_option
@germ_option
@vars_option
@click.pass_context
@_guarded
def image_cmd(ctx: click.Context, germ_value: str, names: Optional[str]) -> None:
    """Reduced equation of the image of an n -> n+1 germ."""
    germ = _resolve_germ(germ_value, names)
    with status("Eliminating source variables..."):
        h = discriminant.image_equation(germ)
    _equation_output(ctx, h)


@cli.command(name="discriminant")
@format_option
@germ_option
@vars_option
@click.pass_context
@_guarded
def discriminant_cmd(ctx: click.Context, germ_value: str, names: Optional[str]) -> None:
    """Reduced equation of the discriminant of an n -> p germ, n >= p."""
    germ = _resolve_germ(germ_value, names)
    with status("Eliminating source variables..."):
        h = discriminant.discriminant_equation(germ)
    _equation_output(ctx, h)


@cli.command(name="derlog")
@format_option
@germ_option
@vars_option
@click.pass_context
@_guarded
def derlog_cmd(ctx: click.Context, germ_value: str, names: Optional[str]) -> None:
    """Generators of the vector fields tangent to the image or discriminant."""
    germ = _resolve_germ(germ_value, names)
    with status("Computing Derlog..."):
        module = liftable.derlog(discriminant.defining_equation(germ))
    lines = [f"H = {module.divisor}"]
    fields = []
    for field, cofactor in zip(module.generators, module.cofactors):
        shown = [format_polynomial(c) for c in field]
        lines.append(f"({', '.join(shown)})  cofactor {format_polynomial(cofactor)}")
        fields.append({"field": shown, "cofactor": format_polynomial(cofactor)})
    _emit(ctx, "\n".join(lines), {"divisor": str(module.divisor), "generators": fields})


@cli.command(name="lift-ideal")
@format_option
@opsu_option
@vars_option
@param_option
@click.pass_context
@_guarded
def lift_ideal_cmd(ctx: click.Context, opsu_value: str, names: Optional[str], param: Optional[str]) -> None:
    """Local standard basis of the last components of the liftable fields."""
    F = _resolve_opsu(opsu_value, names, param)
    with status("Computing the lift ideal..."):
        basis = liftable.lift_ideal(F)
    shown = [format_polynomial(g) for g in basis.generators]
    _emit(ctx, "\n".join(shown) or "0", {"variables": list(F.target), "generators": shown, "unit": basis.is_unit})


@cli.command(name="delta-sub")
@format_option
@bound_option
@opsu_option
@vars_option
@param_option
@click.pass_context
@_guarded
def delta_sub_cmd(ctx: click.Context, opsu_value: str, names: Optional[str], param: Optional[str]) -> None:
    """Degree of substantiality with the substantiality report."""
    F = _resolve_opsu(opsu_value, names, param)
    with status("Computing the degree of substantiality..."):
        report = liftable.substantiality_report(F, _settings(ctx).bound)
    text = str(report.delta)
    if not report.delta.exact and report.delta.leading_power is not None:
        text += f" (at most {report.delta.leading_power})"
    _emit(ctx, text, report.to_dict())


@cli.command(name="cross-sub")
@format_option
@opsu_option
@vars_option
@param_option
@click.option("--witness", is_flag=True, help="Also print a liftable field realizing X_p.")
@click.pass_context
@_guarded
def cross_sub_cmd(
    ctx: click.Context, opsu_value: str, names: Optional[str], param: Optional[str], witness: bool
) -> None:
    """Whether the unfolding is cross-substantial."""
    F = _resolve_opsu(opsu_value, names, param)
    with status("Testing cross-substantiality..."):
        value = liftable.is_cross_substantial(F)
        found = liftable.cross_substantiality_witness(F) if witness and value else None
    text = str(value).lower()
    data = {"cross_substantial": value}
    if found is not None:
        shown = [format_polynomial(c) for c in found.field]
        text += f"\nfield ({', '.join(shown)})\nunit {format_polynomial(found.unit)}"
        data["witness"] = {"field": shown, "unit": format_polynomial(found.unit)}
    _emit(ctx, text, data)


@cli.command(name="tau-tilde")
@format_option
@germ_option
@vars_option
@click.pass_context
@_guarded
def tau_tilde_cmd(ctx: click.Context, germ_value: str, names: Optional[str]) -> None:
    """Dimension of the isosingular locus from Derlog evaluated at 0."""
    germ = _resolve_germ(germ_value, names)
    with status("Computing Derlog..."):
        value = liftable.isosingular_dimension(germ)
    log_info("Derlog stands in for the liftable fields; exact for stable germs")
    _emit(ctx, str(value), {"tau_tilde": value, "stable_caveat": True})


@cli.command(name="aug-cert")
@format_option
@germ_option
@vars_option
@click.option("--p", "p", type=int, required=True, help="Target dimension of the candidate augmentation.")
@click.option("--s", "s", type=int, required=True, help="Degree of the trivializer.")
@click.pass_context
@_guarded
def aug_cert_cmd(ctx: click.Context, germ_value: str, names: Optional[str], p: int, s: int) -> None:
    """Check dim tau~(T) >= p - s for a trivializer T."""
    germ = _resolve_germ(germ_value, names)
    with status("Computing Derlog..."):
        holds = liftable.augmentation_certificate(germ, p, s)
    value = liftable.isosingular_dimension(germ)
    _emit(ctx, f"{str(holds).lower()} ({value} vs {p - s})", {"tau_tilde": value, "required": p - s, "holds": holds})


@cli.command(name="codim")
@format_option
@opsu_option
@click.option("--g", "g_value", help="Augmenting function; without it the base codimension is reported.")
@vars_option
@param_option
@click.option("--g-vars", help="Variables of a literal function.")
@click.pass_context
@_guarded
def codim_cmd(
    ctx: click.Context,
    opsu_value: str,
    g_value: Optional[str],
    names: Optional[str],
    param: Optional[str],
    g_vars: Optional[str],
) -> None:
    """A_e-codimension of the base or of an augmentation."""
    F = _resolve_opsu(opsu_value, names, param)
    with status("Computing codimension..."):
        if g_value is None:
            value = codim.aecod_damon(F)
        else:
            value = codim.augmentation_codim(F, _resolve_function(g_value, g_vars))
    _emit(ctx, format_dimension(value), {"aecod": json_dimension(value)})
    _refuse_infinite(value, "the codimension")


@cli.command(name="bounds")
@format_option
@bound_option
@opsu_option
@function_option
@vars_option
@param_option
@click.option("--g-vars", help="Variables of a literal function.")
@click.option("--mu-i", "mu_i", type=int, help="Image Milnor number of the base, to check Mond's inequality.")
@click.pass_context
@_guarded
def bounds_cmd(
    ctx: click.Context,
    opsu_value: str,
    g_value: str,
    names: Optional[str],
    param: Optional[str],
    g_vars: Optional[str],
    mu_i: Optional[int],
) -> None:
    """Lower, actual, upper and refined codimension of an augmentation."""
    F = _resolve_opsu(opsu_value, names, param)
    g = _resolve_function(g_value, g_vars)
    with status("Computing bounds..."):
        report = codim.bounds_report(F, g, bound=_settings(ctx).bound)
        mond = codim.mond_inequality_check(F, g, mu_i) if mu_i is not None else None
    row = reports.ReportRow.from_report(report)
    data = report.to_dict()
    lines = [reports.emit_text([row]).rstrip("\n")]
    lines.append(
        f"delta(F) = {report.delta_F}, BS(g) = {report.bs_g}, "
        f"lower equality {report.lower_equality}, upper equality {report.upper_equality}"
    )
    if mond is not None:
        data["mond"] = mond.to_dict()
        lines.append(f"Mond: {mond.lhs} <= {mond.rhs} is {mond.holds}")
    _emit(ctx, "\n".join(lines), data, row.to_csv())


def _summarise_rows(rows: Sequence[reports.ReportRow]) -> None:
    errors = [row for row in rows if not row.ok]
    log_info(f"Run summary: {len(rows) - len(errors)} rows computed, {len(errors)} errors")
    for row in errors:
        log_info(f"  {row.label}: {row.error}")


def _write_rows(path: Path, rows: List[reports.ReportRow]) -> None:
    if path.suffix.lower() in {".json", ".jsonl"}:
        write_jsonl_log(path, [row.to_dict() for row in rows])
    else:
        write_text(path, reports.emit_csv(rows))
    log_info(f"Rows written to {path}")


@cli.command(name="table1")
@format_option
@bound_option
@jobs_option
@click.option("--rows", "selector", help='Rows such as "DG_3" or "M × 11_5"; "all" includes the large rows.')
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path), help="Also write rows to CSV or JSON Lines.")
@click.pass_context
@_guarded
def table1_cmd(ctx: click.Context, selector: Optional[str], output: Optional[Path]) -> None:
    """Codimensions and bounds of the catalog augmentations."""
    settings = _settings(ctx)
    rows = catalog_io.table1(selector, settings.bound, settings.jobs)
    _summarise_rows(rows)
    if output is not None:
        _write_rows(output, rows)
    if settings.output_format == "json":
        click.echo(reports.emit_json(rows).rstrip("\n"))
    elif settings.output_format == "csv":
        click.echo(reports.emit_csv(rows).rstrip("\n"))
    else:
        click.echo(reports.emit_text(rows).rstrip("\n"))


@cli.command(name="plane-curve")
@format_option
@function_option
@vars_option
@click.option("--branches", type=int, default=1, show_default=True, help="Number of branches r of g = 0.")
@click.pass_context
@_guarded
def plane_curve_cmd(ctx: click.Context, g_value: str, names: Optional[str], branches: int) -> None:
    """Image Milnor number over codimension for a plane-curve parametrization."""
    report = germs.plane_curve_report(_resolve_function(g_value, names), branches)
    text = (
        f"mu {report.mu}  tau {report.tau}  delta {report.delta}  "
        f"mu_I {report.mu_image}  aecod {report.aecod}  quotient {report.quotient}"
    )
    _emit(ctx, text, report.to_dict())


@cli.command(name="conj2-bound")
@format_option
@click.option("--n", "n", type=int, required=True, help="Source dimension.")
@click.pass_context
@_guarded
def conj2_bound_cmd(ctx: click.Context, n: int) -> None:
    """Maximum of (k+1)(n-k) against (n+1)^2/4."""
    result = germs.conjecture2_bound(n)
    lines = [f"k={k}: {v}" for k, v in result.values]
    lines.append(f"max {result.maximum}  bound {result.bound}  attained {str(result.attained).lower()}")
    _emit(ctx, "\n".join(lines), result.to_dict())


@cli.command(name="catalog")
@format_option
@bound_option
@click.option("--verify", is_flag=True, help="Recompute the metadata of every entry.")
@click.option("--all", "include_large", is_flag=True, help="Include large entries when verifying.")
@click.pass_context
@_guarded
def catalog_cmd(ctx: click.Context, verify: bool, include_large: bool) -> None:
    """List catalog entries, or verify their metadata."""
    catalog = catalog_io.load_catalog()
    if not verify:
        entries = list(catalog.entries.values())
        lines = [f"{e.label:<16} {e.kind:<12} {e.provenance}".rstrip() for e in entries]
        data = [{"label": e.label, "kind": e.kind, "provenance": e.provenance, "large": e.large} for e in entries]
        _emit(ctx, "\n".join(lines), data)
        return
    results = catalog_io.verify_catalog(include_large, _settings(ctx).bound)
    failures = [r for r in results if not r.ok]
    lines = [
        f"{'ok ' if r.ok else 'BAD'} {r.label} {r.key}: expected {r.expected}, got {r.actual}"
        for r in results
        if not r.key.startswith("print")
    ]
    data = [
        {"label": r.label, "key": r.key, "expected": str(r.expected), "actual": str(r.actual), "ok": r.ok}
        for r in results
    ]
    _emit(ctx, "\n".join(lines), data)
    log_info(f"Catalog check: {len(results) - len(failures)} ok, {len(failures)} mismatches")
    if failures:
        raise click.ClickException(f"{len(failures)} catalog values do not match recomputation")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point for console scripts; returns the exit code."""
    try:
        cli.main(args=list(argv) if argv is not None else None, prog_name="germforge", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
