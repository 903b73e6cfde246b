"""
Command line interface.

    skewhh verify SCENARIO [--suite NAME ...]
    skewhh homology SCENARIO [--weight r] [--position n] [--family F]
    skewhh cycles SCENARIO --kind V --n 4
    skewhh oracle-compare SCENARIO

Exit codes: 0 when every suite passes on certified windows, 1 on a failed
or uncertified suite, 2 on usage and scenario errors.
"""
from dataclasses import replace
from functools import wraps
from typing import Optional
import json
import logging
import sys

import click

from modules.complexes import FAMILIES, VARIANTS, select_family
from modules.config import FORMATS, SUITES, ScenarioConfig, load_config
from modules.cycles import special_cycles
from modules.errors import SkewHochschildError
from modules.homology import ROUTES, certify
from modules.notation import render_a_element
from modules.verifier import run_suites
from modules.windows import Margin, build_finite_complex
from utily.helpers import format_table, profile_table

logger = logging.getLogger(__name__)

USAGE_ERROR = 2


def _parse_margin(ctx, param, value: Optional[str]) -> Optional[Margin]:
    if value is None:
        return None
    try:
        parts = [int(p) for p in value.split(",")]
    except ValueError:
        raise click.BadParameter("expected N or INDEX,DEGREE,TENSOR") from None
    if len(parts) == 1:
        parts *= 3
    if len(parts) != 3 or min(parts) < 0:
        raise click.BadParameter("expected N or INDEX,DEGREE,TENSOR with non-negative entries")
    return Margin(*parts)


def run_options(command):
    """Options shared by every subcommand that reads a scenario"""
    @click.argument("scenario", type=click.Path(exists=True, dir_okay=False))
    @click.option("--format", "fmt", type=click.Choice(FORMATS), default=None, help="Output format.")
    @click.option("--margin", callback=_parse_margin, default=None, help="Halo margin N or INDEX,DEGREE,TENSOR.")
    @click.option("--seed", type=int, default=None, help="Seed of the randomized checks.")
    @click.option("--variant", type=click.Choice(VARIANTS), default=None, help="Y boundary implementation.")
    @click.option("--jobs", type=int, default=None, help="Worker threads for block solving.")
    @wraps(command)
    def wrapper(scenario, fmt, margin, seed, variant, jobs, **kwargs):
        try:
            config = load_config(scenario).with_run(format=fmt, seed=seed, variant=variant, jobs=jobs)
            return command(config, margin, **kwargs)
        except (SkewHochschildError, ValueError) as exc:
            logger.error(str(exc))
            click.echo(f"error: {exc}", err=True)
            sys.exit(USAGE_ERROR)
    return wrapper


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Debug logging on stderr.")
@click.option("--progress", is_flag=True, help="Progress bars on stderr.")
@click.pass_context
def skewhh(ctx, verbose: bool, progress: bool):
    """Hochschild homology of the skew polynomial rings E(A, u, alpha, p)"""
    logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s", force=True)
    ctx.ensure_object(dict)
    ctx.obj["progress"] = progress


def _emit_report(report, config: ScenarioConfig, timings: bool):
    if config.run.format == "json":
        click.echo(report.to_json(timings))
    else:
        click.echo(report.table(timings))
    sys.exit(0 if report.passed else 1)


@skewhh.command()
@run_options
@click.option("--suite", "suites", multiple=True, type=click.Choice(SUITES), help="Run only these suites.")
@click.option("--timings", is_flag=True, help="Include wall time per suite.")
@click.pass_context
def verify(ctx, config: ScenarioConfig, margin: Optional[Margin], suites, timings: bool):
    """Run the verification suites of a scenario"""
    report = run_suites(config, list(suites) or None, ctx.obj["progress"], margin)
    _emit_report(report, config, timings)


@skewhh.command("oracle-compare")
@run_options
@click.option("--timings", is_flag=True, help="Include wall time.")
@click.pass_context
def oracle_compare(ctx, config: ScenarioConfig, margin: Optional[Margin], timings: bool):
    """Compare the small complex with the canonical complex on a tiny window"""
    report = run_suites(config, ["bar-oracle"], ctx.obj["progress"], margin)
    _emit_report(report, config, timings)


@skewhh.command()
@run_options
@click.option("--weight", type=int, default=None, help="Restrict to one weight.")
@click.option("--position", type=int, default=None, help="Report one total degree.")
@click.option("--family", type=click.Choice(FAMILIES), default=None, help="Complex family (default from [run]).")
@click.option("--route", type=click.Choice(ROUTES), default="total")
@click.option("--representatives", is_flag=True, help="Keep class representatives.")
@click.pass_context
def homology(ctx, config: ScenarioConfig, margin: Optional[Margin], weight: Optional[int],
             position: Optional[int], family: Optional[str], route: str, representatives: bool):
    """Certified homology dimensions of one family on the scenario window"""
    kind = family or config.run.family
    if kind == "X":
        raise click.UsageError("the X family is built by the x-twisted-exactness suite, not from a scenario")
    window = config.build_window()
    weights = (weight,) if weight is not None else window.weights
    window = replace(window, weights=weights)
    spec = config.build_spec()
    reports = []
    for r in (weights if kind == "Wtilde" else [None]):
        chosen = select_family(kind, spec, variant=config.run.variant if kind == "Y" else "corrected",
                               weights=weights, r=r)
        used = margin or config.build_margin(chosen.minimum_margin())
        fc = build_finite_complex(chosen, window, used, config.run.max_basis, config.run.max_entries)
        reports.append(certify(fc, route=route, jobs=config.run.jobs, progress=ctx.obj["progress"],
                               representatives=representatives, max_entries=config.run.max_entries))

    if config.run.format == "json":
        for report in reports:
            click.echo(report.to_json())
    else:
        top = window.max_tensor
        profiles = {}
        for report in reports:
            for r in weights:
                dims = report.dimensions(r)
                if dims or r not in profiles:
                    profiles[r] = dims
        if position is not None:
            column = f"H{position}"
            rows = [{"weight": r, column: dims.get(position, 0)} for r, dims in sorted(profiles.items())]
            click.echo(format_table(rows, ["weight", column]))
        else:
            click.echo(profile_table(profiles, top))
        for report in reports:
            for block in report.uncertified():
                click.echo(f"uncertified: weight {block.weight}, degree {block.degree}", err=True)
            if representatives:
                for block in report.blocks:
                    for text in block.representatives:
                        click.echo(f"  H{block.degree} weight {block.weight}: {text}")
    certified = all(report.certified for report in reports)
    sys.exit(0 if certified else 1)


@skewhh.command()
@run_options
@click.option("--kind", type=click.Choice(["U", "L", "V", "W"]), required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--j", "j", type=int, default=None, help="Lower index of U^n_j.")
def cycles(config: ScenarioConfig, margin: Optional[Margin], kind: str, n: int, j: Optional[int]):
    """Print one of the explicit elements U^n_j, L_n, V_n or W_n"""
    spec = config.build_spec()
    value = special_cycles(kind, spec, n, j)
    names = spec.base.variable_names()
    text = render_a_element(value) if kind == "U" else value.describe(names)
    if config.run.format == "json":
        click.echo(json.dumps({"kind": kind, "n": n, "j": j, "value": text}, sort_keys=True))
    else:
        click.echo(text)


def main(argv=None) -> int:
    """Entry point; returns the exit code instead of raising SystemExit"""
    try:
        skewhh.main(args=argv, prog_name="skewhh", standalone_mode=True)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else (0 if exc.code is None else 1)
    return 0
