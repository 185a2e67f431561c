"""Command-line interface: ``steinervdc <subcommand>``.

Exit codes: 0 success, 1 usage or input error, 2 invariant failure,
3 numeric failure.
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

import click

from . import __version__, _accel
from .angles import DyadicAngle, gap, vdc_prefix
from .angles import discrepancy as exact_discrepancy
from .experiment import DirectionSequence, NumericError, compare_sequences, format_table, iterate
from .grid import SupportError, rearrange_radial, steiner_direction, sup_distance
from .gridio import format_profile_csv, read_grid, write_grid, write_pgm
from .inputs import BUILTINS, builtin

EXIT_USAGE, EXIT_INVARIANT, EXIT_NUMERIC = 1, 2, 3


class InvariantFailure(Exception):
    pass


def _stanza(ctx: click.Context, **extra) -> dict:
    params = {"command": ctx.info_name, "version": __version__, "backend": _accel.BACKEND}
    params.update({k: v for k, v in ctx.params.items() if v is not None})
    params.update(extra)
    return params


def _stanza_lines(stanza: dict) -> str:
    return "".join(f"# {k}={v}\n" for k, v in stanza.items())


def _angle(ctx, param, value):
    if value is None:
        return None
    try:
        return DyadicAngle.parse(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


def _load_input(path, name, resolution, half_width):
    if path and name:
        raise click.UsageError("give either --input or --builtin, not both")
    if path:
        return read_grid(path), str(path)
    return builtin(name or "bump", resolution, half_width), f"builtin:{name or 'bump'}"


def input_options(fn):
    fn = click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), help="Grid file.")(fn)
    fn = click.option("--builtin", "builtin_name", type=click.Choice(sorted(BUILTINS)), help="Built-in input (default bump).")(fn)
    return fn


def common_options(fn):
    fn = click.option("--resolution", default=128, show_default=True, type=click.IntRange(min=1))(fn)
    fn = click.option("--half-width", default=2.0, show_default=True, type=click.FloatRange(min=0, min_open=True))(fn)
    fn = click.option("--seed", default=0, show_default=True, type=int)(fn)
    return fn


@click.group()
@click.version_option(__version__)
def cli():
    """Iterated Steiner symmetrization along van der Corput directions."""


@cli.command()
@click.option("--count", required=True, type=int, help="Number of angles theta_0..theta_{count-1}.")
@click.option("--gaps", is_flag=True, help="Add the increments theta_n - theta_{n-1}.")
@click.option("--discrepancy", is_flag=True, help="Add D_N at power-of-two prefix lengths N = n+1.")
@click.pass_context
def vdc(ctx, count, gaps, discrepancy):
    """Print van der Corput angles as exact turn fractions."""
    if count < 1:
        raise click.BadParameter("count must be at least 1", param_hint="--count")
    out = click.get_text_stream("stdout")
    out.write(_stanza_lines(_stanza(ctx)))
    cols = ["n", "theta_turns", "theta_radians"]
    if gaps:
        cols += ["gap_turns", "gap_radians"]
    if discrepancy:
        cols += ["D_N", "D_N_decimal"]
    out.write(",".join(cols) + "\n")
    angles = vdc_prefix(count)
    for n, a in enumerate(angles):
        row = [str(n), str(a), repr(a.radians)]
        if gaps:
            if n == 0:
                row += ["", ""]
            else:
                g = gap(n)
                row += [str(g), repr(2 * math.pi * float(g))]
        if discrepancy:
            size = n + 1
            if size & (size - 1) == 0:
                d = exact_discrepancy(angles[:size]).value
                row += [str(d), repr(float(d))]
            else:
                row += ["", ""]
        out.write(",".join(row) + "\n")


@cli.command()
@input_options
@common_options
@click.option("--angle", required=True, callback=_angle, help="Direction as a turn fraction, e.g. 3/8 or 3/2^3.")
@click.option("--output", type=click.Path(dir_okay=False), help="Write the result in grid format.")
@click.option("--pgm", type=click.Path(dir_okay=False), help="Also write an 8-bit PGM image.")
@click.option("--renormalize", is_flag=True, help="Rescale interpolated rotations to the input mass.")
@click.pass_context
def symmetrize(ctx, input_path, builtin_name, resolution, half_width, seed, angle, output, pgm, renormalize):
    """Steiner symmetrization of one grid along one direction."""
    f, desc = _load_input(input_path, builtin_name, resolution, half_width)
    g = steiner_direction(f, angle, renormalize)
    drift = (g.mass - f.mass) / f.mass if f.mass else 0.0
    stanza = _stanza(ctx, input=desc, angle=str(angle))
    if output:
        write_grid(output, g, stanza)
    if pgm:
        write_pgm(pgm, g, stanza)
    click.echo(f"mass_drift={drift!r}")
    click.echo(f"sup_change={sup_distance(f, g)!r}")


@cli.command()
@input_options
@common_options
@click.option("--output", type=click.Path(dir_okay=False), help="Write f* in grid format.")
@click.option("--profile", type=click.Path(dir_okay=False), help="Write the radial profile as CSV.")
@click.option("--pgm", type=click.Path(dir_okay=False), help="Also write an 8-bit PGM image.")
@click.pass_context
def rearrange(ctx, input_path, builtin_name, resolution, half_width, seed, output, profile, pgm):
    """Symmetric decreasing rearrangement f* of a grid."""
    f, desc = _load_input(input_path, builtin_name, resolution, half_width)
    g = rearrange_radial(f)
    stanza = _stanza(ctx, input=desc)
    if output:
        write_grid(output, g, stanza)
    if profile:
        Path(profile).write_text(format_profile_csv(g, stanza))
    if pgm:
        write_pgm(pgm, g, stanza)
    click.echo(f"sup_distance={sup_distance(f, g)!r}")


def _sequence(text, seed):
    try:
        return DirectionSequence.parse(text, seed)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--seq") from None


@cli.command("iterate")
@input_options
@common_options
@click.option("--seq", "seq_text", default="vdc", show_default=True, help="vdc, golden, random[:SEED] or fixed:a,b,...")
@click.option("--steps", default=256, show_default=True, type=click.IntRange(min=0))
@click.option("--stride", default=1, show_default=True, type=click.IntRange(min=1))
@click.option("--frame", type=click.Choice(["rotating", "fixed"]), default="rotating", show_default=True)
@click.option("--renormalize", is_flag=True)
@click.option("--report", type=click.Path(dir_okay=False), help="Report CSV path (default: stdout).")
@click.option("--output", type=click.Path(dir_okay=False), help="Write the final grid.")
@click.option("--pgm", type=click.Path(dir_okay=False), help="Write the final grid as PGM.")
@click.option("--assert-converged", type=float, default=None,
              help="Exit 2 unless final distance <= THRESHOLD x initial distance.")
@click.pass_context
def iterate_cmd(ctx, input_path, builtin_name, resolution, half_width, seed, seq_text, steps, stride, frame,
                renormalize, report, output, pgm, assert_converged):
    """Iterate Steiner symmetrizations and report convergence to f*."""
    f, desc = _load_input(input_path, builtin_name, resolution, half_width)
    seq = _sequence(seq_text, seed)
    rep, final = iterate(f, seq, steps, frame=frame, stride=stride, renormalize=renormalize, descriptor=desc)
    rep.header = {**_stanza(ctx), **rep.header}
    text = rep.to_csv()
    if report:
        Path(report).write_text(text)
    else:
        click.echo(text, nl=False)
    if output:
        write_grid(output, final, rep.header)
    if pgm:
        write_pgm(pgm, final, rep.header)
    if assert_converged is not None:
        ratio = rep.final.distance / rep.initial.distance if rep.initial.distance else 0.0
        if ratio > assert_converged:
            raise InvariantFailure(f"distance ratio {ratio:.4g} exceeds {assert_converged}")
        click.echo(f"# converged: distance ratio {ratio:.4g} <= {assert_converged}", err=True)


@cli.command()
@input_options
@common_options
@click.option("--seq", "seq_texts", multiple=True, default=("vdc", "golden"), show_default=True,
              help="Repeat for each sequence to compare.")
@click.option("--steps", default=256, show_default=True, type=click.IntRange(min=0))
@click.option("--output", type=click.Path(dir_okay=False), help="Write the table here (default: stdout).")
@click.pass_context
def compare(ctx, input_path, builtin_name, resolution, half_width, seed, seq_texts, steps, output):
    """Final observables of several direction sequences on the same input."""
    f, desc = _load_input(input_path, builtin_name, resolution, half_width)
    seqs = [_sequence(s, seed) for s in seq_texts]
    rows = compare_sequences(f, seqs, steps, descriptor=desc)
    text = _stanza_lines(_stanza(ctx, input=desc)) + format_table(rows)
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


@cli.command()
@click.argument("suite", type=click.Choice(["angles", "rearrange", "grid", "experiment", "all"]))
def verify(suite):
    """Run the invariant suites; one summary line per check."""
    from .verify import run_suite

    failures = 0
    for name, check, passed, kind in run_suite(suite):
        failures += not passed
        click.echo(f"{name}/{check}: {'PASS' if passed else 'FAIL'} ({kind})")
    if failures:
        raise InvariantFailure(f"{failures} check(s) failed")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="steinervdc", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except InvariantFailure as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INVARIANT
    except NumericError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_NUMERIC
    except (SupportError, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    return 0


def entry():
    sys.exit(main())
