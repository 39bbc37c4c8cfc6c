#!/usr/bin/env python3
"""Command-line interface for picardcusps."""

import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import click
from rich.console import Console
from rich.logging import RichHandler

from . import __version__
from .utils.config import OUTPUT_FORMATS, TORSION_CONVENTIONS, Config, create_default_config, load_config
from .utils.validators import InvariantViolation, ValidationError

logger = logging.getLogger(__name__)


def setup_logging(level: str) -> None:
    """Route all logging through rich on stderr; stdout carries reports only."""

    logging.basicConfig(
        level=level.upper(),
        format="%(name)s: %(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_time=False, show_path=False)],
        force=True,
    )


class PicardGroup(click.Group):
    """Click group mapping input errors to exit 1 and invariant violations to exit 2."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            result = super().main(args=args, prog_name=prog_name, complete_var=complete_var,
                                  standalone_mode=False, **extra)
            code = result if isinstance(result, int) else 0
        except click.ClickException as e:
            e.show()
            code = 1
        except click.Abort:
            click.echo("Aborted!", err=True)
            code = 1
        except ValidationError as e:
            click.echo(f"Error: {e}", err=True)
            code = 1
        except InvariantViolation as e:
            click.echo(f"Invariant violated: {e}", err=True)
            code = 2

        if standalone_mode:
            sys.exit(code)
        return code


def parse_primes(text: Optional[str]) -> List[int]:
    """'5,7,11' -> [5, 7, 11]; empty or None -> []."""

    if not text:
        return []
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValidationError(f"expected a comma-separated list of primes, got {text!r}")


def parse_range(text: str) -> Tuple[int, int]:
    """'1000:10000' -> (1000, 10000)."""

    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise ValidationError(f"expected a range LO:HI, got {text!r}")


def emit(text: str) -> None:
    click.echo(text, nl=False)


def _config(ctx: click.Context) -> Config:
    return ctx.obj["config"]


@click.group(cls=PicardGroup)
@click.version_option(version=__version__, prog_name="picardcusps")
@click.option('--config', 'config_path', type=click.Path(path_type=Path), help='Configuration file (JSON)')
@click.option('--format', 'output_format', type=click.Choice(OUTPUT_FORMATS), help='Report format')
@click.option('--cache', 'cache_path', type=click.Path(path_type=Path), help='Scan cache file')
@click.option('--no-cache', is_flag=True, help='Ignore and do not write the scan cache')
@click.option('--torsion-convention', type=click.Choice(TORSION_CONVENTIONS),
              help='Read h_{k,q} as #Cl[q] (torsion) or as the q-primary order (primary)')
@click.option('--workers', type=int, help='Worker processes for scans')
@click.option('--verbose', is_flag=True, help='Enable verbose logging')
@click.pass_context
def cli(ctx, config_path, output_format, cache_path, no_cache, torsion_convention, workers, verbose):
    """picardcusps - cusp counts of Picard modular surfaces."""

    config = load_config(config_path)
    config.update_from_dict({
        "output_format": output_format,
        "cache_path": str(cache_path) if cache_path else None,
        "cache_enabled": False if no_cache else None,
        "torsion_convention": torsion_convention,
        "scan_workers": workers,
        "log_level": "DEBUG" if verbose else None,
    })
    setup_logging(config.log_level)

    ctx.ensure_object(dict)
    ctx.obj["config"] = config


# --- classgroup ---------------------------------------------------------------


@cli.command()
@click.option('--disc', type=int, required=True, help='Negative fundamental discriminant')
@click.pass_context
def classgroup(ctx, disc):
    """Reduced forms, structure and 3-torsion of a class group."""

    from .arithmetic.classgroup import class_group
    from .catalog.records import ClassGroupRecord
    from .catalog.report import format_classgroup

    group = class_group(disc)
    record = ClassGroupRecord(
        disc=disc,
        h=group.h,
        structure=list(group.structure),
        forms=[list(f.as_tuple()) for f in group.forms],
        generators=[list(g.as_tuple()) for g in group.generators],
        h3=group.torsion_order(3),
        h3_primary=group.primary_order(3),
    )
    emit(format_classgroup(record, _config(ctx).output_format))


# --- cusps --------------------------------------------------------------------


def _level_options(command):
    command = click.option('--iwahori', help='Iwahori primes, comma-separated (split only)')(command)
    command = click.option('--xi', help='Subset of the Iwahori primes')(command)
    command = click.option('--v1', help='Primes at the other vertex v1')(command)
    command = click.option('--v2', help='Primes at the other vertex v2 (split only)')(command)
    return command


def _kf_config(fld, iwahori, xi, v1, v2):
    from .lattices.cusp_formulas import KfConfig

    return KfConfig.build(fld, iwahori=parse_primes(iwahori), xi=parse_primes(xi),
                          v1=parse_primes(v1), v2=parse_primes(v2))


def _emit_results(ctx, results: Sequence) -> None:
    from .catalog.report import format_cusp_results

    emit(format_cusp_results(results, _config(ctx).output_format))


@cli.group()
def cusps():
    """Closed-form cusp counts."""
    pass


@cusps.command('std')
@click.option('--disc', type=int, required=True, help='Negative fundamental discriminant')
@click.pass_context
def cusps_std(ctx, disc):
    """Cusps of the standard lattice (the class number)."""

    from .arithmetic.quadfield import field_from_disc
    from .lattices.cusp_formulas import evaluate

    _emit_results(ctx, [evaluate("std", field_from_disc(disc))])


@cusps.command('congruence')
@click.option('--disc', type=int, required=True, help='Negative fundamental discriminant')
@click.option('--p1', help='Split primes in P1')
@click.option('--p2', help='Split primes in P2')
@click.option('--b', 'borel', help='Primes in B')
@click.pass_context
def cusps_congruence(ctx, disc, p1, p2, borel):
    """Cusps of the congruence subgroup Gamma(P1, P2, B)."""

    from .arithmetic.quadfield import field_from_disc
    from .lattices.cusp_formulas import CongruenceLevel, evaluate

    fld = field_from_disc(disc)
    level = CongruenceLevel(fld, frozenset(parse_primes(p1)), frozenset(parse_primes(p2)),
                            frozenset(parse_primes(borel)))
    _emit_results(ctx, [evaluate("congruence", fld, level=level)])


@cusps.command('maximal')
@click.option('--disc', type=int, required=True, help='Negative fundamental discriminant')
@_level_options
@click.option('--normalizer', is_flag=True, help='Also report the normalizer index')
@click.pass_context
def cusps_maximal(ctx, disc, iwahori, xi, v1, v2, normalizer):
    """Cusps of a maximal lattice given its local types."""

    from .arithmetic.quadfield import field_from_disc
    from .lattices.cusp_formulas import evaluate

    convention = _config(ctx).torsion_convention
    fld = field_from_disc(disc)
    config = _kf_config(fld, iwahori, xi, v1, v2)
    results = [evaluate("maximal", fld, config=config, convention=convention)]
    if normalizer:
        name = "normalizer_bound" if config.iwahori else "normalizer_std"
        results.append(evaluate(name, fld, config=config, convention=convention))
    _emit_results(ctx, results)


@cusps.command('higher')
@click.option('--disc', type=int, required=True, help='Negative fundamental discriminant')
@click.option('--r', 'rank', type=int, required=True, help='Rank r of SU(r+1, r)')
@_level_options
@click.option('--std', 'standard', is_flag=True, help='Standard lattice instead of a maximal one')
@click.option('--normalizer', is_flag=True, help='Also report the normalizer index')
@click.pass_context
def cusps_higher(ctx, disc, rank, iwahori, xi, v1, v2, standard, normalizer):
    """Cusps of simple-type lattices in SU(r+1, r)."""

    from .arithmetic.quadfield import field_from_disc
    from .lattices.cusp_formulas import evaluate

    convention = _config(ctx).torsion_convention
    fld = field_from_disc(disc)
    if standard:
        results = [evaluate("std_higher", fld, r=rank)]
    else:
        config = _kf_config(fld, iwahori, xi, v1, v2)
        results = [evaluate("higher", fld, config=config, r=rank, convention=convention)]
    if normalizer:
        results.append(evaluate("higher_normalizer", fld, r=rank, convention=convention))
    _emit_results(ctx, results)


@cusps.command('family')
@click.option('--disc', type=int, required=True, help='Negative fundamental discriminant')
@click.option('--count', type=int, default=3, show_default=True, help='Number of inert primes to use')
@click.pass_context
def cusps_family(ctx, disc, count):
    """Non-isomorphic maximal lattices with h/h_{k,3} cusps each."""

    from .arithmetic.quadfield import field_from_disc
    from .lattices.cusp_formulas import evaluate, one_cusped_family

    fld = field_from_disc(disc)
    _emit_results(ctx, [evaluate("maximal", fld, config=c) for c in one_cusped_family(fld, count)])


# --- oracles ------------------------------------------------------------------


@cli.group()
def oracle():
    """Brute-force checks of the formulas."""
    pass


@oracle.command('modp')
@click.option('--disc', type=int, required=True, help='Negative fundamental discriminant')
@click.option('--p', 'prime', type=int, required=True, help='Odd prime')
@click.option('--subgroup', type=click.Choice(['full', 'p1', 'p2', 'borel']), default='borel', show_default=True)
@click.pass_context
def oracle_modp(ctx, disc, prime, subgroup):
    """Orbits of a parahoric reduction on the isotropic points mod p."""

    from .arithmetic.quadfield import field_from_disc
    from .catalog.records import OrbitRecord, OrbitReport
    from .catalog.report import format_orbit_report
    from .lattices.modp import ModPModel, Subgroup

    config = _config(ctx)
    fld = field_from_disc(disc)
    model = ModPModel(fld, prime, config.oracle_max_prime)
    orbits = model.orbits(Subgroup(subgroup))
    report = OrbitReport(
        disc=disc,
        p=prime,
        splitting=model.kind.value,
        subgroup=subgroup,
        point_count=model.count,
        orbit_count=len(orbits),
        orbits=[OrbitRecord(size=o.size, representative=[list(c) for c in o.representative]) for o in orbits],
    )
    emit(format_orbit_report(report, config.output_format))


@oracle.command('zink')
@click.option('--disc', type=int, required=True, help='Negative fundamental discriminant')
@click.option('--height', type=int, help='Height bound for the line search')
@click.option('--word-length', type=int, default=0, show_default=True,
              help='Also check class invariance under sample words of this length')
@click.pass_context
def oracle_zink(ctx, disc, height, word_length):
    """Isotropic lines realizing every ideal class."""

    from .arithmetic.classgroup import class_group
    from .arithmetic.quadfield import field_from_disc
    from .catalog.records import LineWitness
    from .catalog.report import format_witnesses
    from .lattices.hermitian_lines import class_invariance_check, gamma_std_sample, realize_all_classes

    config = _config(ctx)
    height = height if height is not None else config.zink_height_bound
    fld = field_from_disc(disc)
    found = realize_all_classes(fld, height)

    witnesses = []
    for c in class_group(disc).forms:
        line = found.get(c)
        witnesses.append(LineWitness(
            disc=disc,
            class_label=c.label,
            coords=[list(v) for v in line.coords] if line else None,
            height=line.height if line else None,
            height_bound=height,
        ))

    if word_length > 0:
        sample = gamma_std_sample(fld, config.sample_bound)
        for c, line in found.items():
            if not class_invariance_check(fld, line, sample, word_length):
                raise InvariantViolation(f"{fld}: class {c} is not invariant under the sample")

    emit(format_witnesses(witnesses, config.output_format))


# --- scans --------------------------------------------------------------------


def _scanner(ctx):
    from .catalog.scanner import CatalogScanner

    return CatalogScanner(_config(ctx))


@cli.group()
def scan():
    """Catalog scans over fundamental discriminants."""
    pass


@scan.command('one-cusped')
@click.option('--max', 'max_abs_disc', type=int, required=True, help='Largest |disc| to scan')
@click.option('--class-numbers', default='1,3,9,27', show_default=True,
              help='Class numbers always listed in the markdown table')
@click.pass_context
def scan_one_cusped(ctx, max_abs_disc, class_numbers):
    """Fields whose maximal lattices have one cusp (h = h_{k,3})."""

    from .catalog.report import format_one_cusped

    records = _scanner(ctx).scan_one_cusped(max_abs_disc)
    emit(format_one_cusped(records, _config(ctx).output_format, parse_primes(class_numbers)))


@scan.command('n-cusped')
@click.option('--n', 'n', type=int, required=True, help='Cusp bound N')
@click.option('--max', 'max_abs_disc', type=int, required=True, help='Largest |disc| to scan')
@click.pass_context
def scan_n_cusped(ctx, n, max_abs_disc):
    """Fields with h/h_{k,3} <= N."""

    from .catalog.records import NCuspedSummary
    from .catalog.report import format_n_cusped

    records, largest = _scanner(ctx).scan_n_cusped(n, max_abs_disc)
    summary = NCuspedSummary(n=n, max_abs_disc=max_abs_disc, count=len(records), largest_abs_disc=largest)
    emit(format_n_cusped(records, summary, _config(ctx).output_format))


@scan.command('growth')
@click.option('--range', 'ranges', multiple=True, required=True, help='Range LO:HI; repeat for each decade')
@click.pass_context
def scan_growth(ctx, ranges):
    """Minimum of h/h_{k,3} per |disc| range."""

    from .catalog.report import format_growth

    rows = _scanner(ctx).growth_report([parse_range(r) for r in ranges])
    emit(format_growth(rows, _config(ctx).output_format))


@scan.command('higher')
@click.option('--r', 'rank', type=int, required=True, help='Rank r >= 2')
@click.option('--max', 'max_abs_disc', type=int, required=True, help='Largest |disc| to scan')
@click.pass_context
def scan_higher(ctx, rank, max_abs_disc):
    """One-cusped maximal simple-type lattices in SU(r+1, r)."""

    from .catalog.report import format_higher

    rows = _scanner(ctx).higher_one_cusped(rank, max_abs_disc)
    emit(format_higher(rows, _config(ctx).output_format))


@scan.command('higher-n-cusped')
@click.option('--r', 'rank', type=int, required=True, help='Rank r >= 1')
@click.option('--n', 'n', type=int, required=True, help='Cusp bound N')
@click.option('--max', 'max_abs_disc', type=int, required=True, help='Largest |disc| to scan')
@click.pass_context
def scan_higher_n_cusped(ctx, rank, n, max_abs_disc):
    """Fields whose maximal simple-type lattice in SU(r+1, r) has at most N cusps."""

    from .catalog.report import format_higher

    rows = _scanner(ctx).scan_higher_n_cusped(rank, n, max_abs_disc)
    emit(format_higher(rows, _config(ctx).output_format))


# --- configuration ------------------------------------------------------------


@cli.group('config')
def config_group():
    """Configuration management."""
    pass


@config_group.command('show')
@click.pass_context
def config_show(ctx):
    """Print the effective configuration as JSON."""

    from .utils.formatters import json_line

    click.echo(json_line(_config(ctx).to_dict()))


@config_group.command('init')
@click.argument('path', type=click.Path(path_type=Path))
def config_init(path):
    """Write a default configuration file."""

    if path.exists():
        raise ValidationError(f"{path} already exists")
    create_default_config(path)
    click.echo(f"Wrote default configuration to {path}", err=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command tree and return its exit code."""
    return cli.main(args=list(argv) if argv is not None else None, prog_name="picardcusps",
                    standalone_mode=False)


if __name__ == '__main__':
    cli()
