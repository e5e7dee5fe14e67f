"""Command-line front end.

Exit codes: 0 when everything passes, 1 when a check or invariant fails,
2 on unreadable or malformed input. Set ``MUKAILEDGER_LOG`` (e.g. ``DEBUG``)
for diagnostics on stderr; the default is quiet.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import ledger, models, mukai
from .errors import InputError, LedgerError
from .exactalg import ExactMatrix, hnf, snf
from .lattice import IntegralLattice, LatticeMap, is_isometry, orthogonal_complement

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
LOG_ENV = "MUKAILEDGER_LOG"


class InputProblem(click.ClickException):
    exit_code = EXIT_INPUT


def _fail_input(msg: str):
    raise InputProblem(msg)


def _setup_logging() -> None:
    level = os.environ.get(LOG_ENV, "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


# -- parsing ---------------------------------------------------------------

def parse_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        _fail_input(f"malformed integer vector {text!r}")


def parse_matrix(text: str) -> ExactMatrix:
    """``"2,4;4,2"`` or a JSON array of arrays."""
    text = text.strip()
    try:
        if text.startswith("["):
            rows = json.loads(text)
            if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                raise ValueError
            if any(isinstance(x, bool) or not isinstance(x, int) for r in rows for x in r):
                raise ValueError
        else:
            rows = [[int(x) for x in r.split(",") if x.strip() != ""] for r in text.split(";") if r.strip()]
        return ExactMatrix(rows)
    except (ValueError, InputError):
        _fail_input(f"malformed integer matrix {text!r}")


def _matrix_arg(inline: str | None, file: str | None) -> ExactMatrix:
    if (inline is None) == (file is None):
        _fail_input("give exactly one of --inline or --file")
    if file is not None:
        try:
            inline = Path(file).read_text(encoding="utf-8")
        except OSError as exc:
            _fail_input(f"cannot read {file}: {exc.strerror or exc}")
    return parse_matrix(inline)


def _fmt_matrix(m: ExactMatrix) -> str:
    if m.rows == 0:
        return "[]"
    return "\n".join("  [" + ", ".join(str(x) for x in m.row(i)) + "]" for i in range(m.rows))


def _surface(name: str) -> mukai.SurfaceModel:
    try:
        return mukai.surface_by_name(name)
    except InputError as exc:
        _fail_input(str(exc))


def _mukai_vector(surface: mukai.SurfaceModel, text: str) -> mukai.MukaiVector:
    try:
        return mukai.MukaiVector.of(surface, parse_vector(text))
    except InputError as exc:
        _fail_input(str(exc))


def _frac(x) -> str:
    return models.render(Fraction(x))


# -- commands --------------------------------------------------------------

@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main() -> None:
    """Exact Mukai-lattice and divisor-class computations for the singular moduli spaces M10 and M6."""
    _setup_logging()


def _load_target(target: str, profile: str | None):
    if target in models.CANNED:
        return models.CANNED[target]()[1], profile or target
    try:
        model = ledger.load_model(target)
    except InputError as exc:
        _fail_input(str(exc))
    try:
        models.profile_for(model, profile)
    except InputError as exc:
        _fail_input(str(exc))
    return model, profile or model.name


@main.command()
@click.argument("target")
@click.option("--json", "as_json", is_flag=True, help="Emit the machine-readable report.")
@click.option("--profile", type=click.Choice(sorted(models.PROFILES)), default=None,
              help="Expectation profile for a JSON model whose name is not m10 or m6.")
@click.option("--workers", type=click.IntRange(1, 64), default=1, show_default=True,
              help="Evaluate independent checks in parallel.")
def verify(target: str, as_json: bool, profile: str | None, workers: int) -> None:
    """Run the verification suite on m10, m6, all, or a model JSON file."""
    if target == "all":
        reports = models.run_suite("all", workers)
    else:
        model, prof = _load_target(target, profile)
        reports = [models.verify_model(model, prof, workers)]
    if as_json:
        if len(reports) == 1:
            click.echo(reports[0].to_json(), nl=False)
        else:
            ok = all(r.passed for r in reports)
            doc = {"verdict": "pass" if ok else "fail", "suites": [r.as_dict() for r in reports]}
            click.echo(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        click.echo("\n".join(r.to_text() for r in reports), nl=False)
    sys.exit(EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL)


@main.group("mukai")
def mukai_group() -> None:
    """Mukai vectors, pairings and Hilbert polynomials."""


_surface_opt = click.option("--surface", default="k3", show_default=True, help="k3 or abelian.")


@mukai_group.command("vector")
@_surface_opt
@click.option("--rank", type=int, required=True)
@click.option("--c1", default="0", help="c1 in NS coordinates, comma separated.")
@click.option("--c2", required=True, help="Integer or fraction a/b.")
def mukai_vector_cmd(surface: str, rank: int, c1: str, c2: str) -> None:
    """Mukai vector of a class with given rank, c1 and c2."""
    s = _surface(surface)
    try:
        v = mukai.mukai_vector_of(s, rank, parse_vector(c1), Fraction(c2))
    except (InputError, ValueError, ZeroDivisionError) as exc:
        _fail_input(str(exc))
    click.echo(str(v))


@mukai_group.command("pair")
@_surface_opt
@click.option("--v", "v", required=True, help="Mukai vector r,c...,s")
@click.option("--w", "w", required=True, help="Mukai vector r,c...,s")
def mukai_pair_cmd(surface: str, v: str, w: str) -> None:
    """Mukai pairing c.c' - rs' - sr'."""
    s = _surface(surface)
    click.echo(str(mukai.mukai_pairing(_mukai_vector(s, v), _mukai_vector(s, w))))


@mukai_group.command("chi")
@_surface_opt
@click.option("--v", "v", required=True)
@click.option("--w", "w", required=True)
def mukai_chi_cmd(surface: str, v: str, w: str) -> None:
    """Euler pairing xi(a, b) = chi(a.b) of two Mukai vectors."""
    s = _surface(surface)
    click.echo(str(mukai.euler_pairing(_mukai_vector(s, v), _mukai_vector(s, w))))


@mukai_group.command("hilbert")
@_surface_opt
@click.option("--v", "v", required=True)
def mukai_hilbert_cmd(surface: str, v: str) -> None:
    """Hilbert polynomial n -> chi(E(nH))."""
    s = _surface(surface)
    click.echo(str(mukai.hilbert_polynomial(s, _mukai_vector(s, v))))


@main.group("lattice")
def lattice_group() -> None:
    """Normal forms, complements and isometry checks."""


_inline = click.option("--inline", default=None, help='Matrix like "2,4;4,2".')
_file = click.option("--file", default=None, type=click.Path(dir_okay=False), help="File with a matrix.")


@lattice_group.command("snf")
@_inline
@_file
def lattice_snf(inline, file) -> None:
    """Smith normal form U M V = S."""
    d = snf(_matrix_arg(inline, file))
    diag = ", ".join(str(x) for x in d.diagonal)
    click.echo(f"diag({diag})")
    click.echo(f"S =\n{_fmt_matrix(d.S)}\nU =\n{_fmt_matrix(d.U)}\nV =\n{_fmt_matrix(d.V)}")


@lattice_group.command("hnf")
@_inline
@_file
def lattice_hnf(inline, file) -> None:
    """Row Hermite normal form U M = H."""
    h, u = hnf(_matrix_arg(inline, file))
    click.echo(f"H =\n{_fmt_matrix(h)}\nU =\n{_fmt_matrix(u)}")


@lattice_group.command("complement")
@click.option("--mukai", "mukai_surface", default=None, help="Use the Mukai lattice of k3 or abelian.")
@click.option("--gram", default=None, help="Gram matrix of the ambient lattice, inline.")
@click.option("--v", "vectors", multiple=True, required=True, help="Vector to be orthogonal to (repeatable).")
def lattice_complement(mukai_surface, gram, vectors) -> None:
    """Saturated orthogonal complement with its restricted Gram."""
    if (mukai_surface is None) == (gram is None):
        _fail_input("give exactly one of --mukai or --gram")
    lat = mukai.mukai_lattice(_surface(mukai_surface)) if mukai_surface else _lattice(gram)
    vs = [parse_vector(v) for v in vectors]
    try:
        sub = orthogonal_complement(lat, vs)
    except InputError as exc:
        _fail_input(str(exc))
    click.echo("basis: " + models.render(sub.basis))
    click.echo("gram: " + models.render(sub.gram.entries))


def _lattice(text: str) -> IntegralLattice:
    try:
        return IntegralLattice(parse_matrix(text))
    except InputError as exc:
        _fail_input(str(exc))


@lattice_group.command("isometry")
@click.option("--source", required=True, help="Source Gram, inline.")
@click.option("--target", required=True, help="Target Gram, inline.")
@click.option("--map", "fmap", required=True, help="Matrix whose columns are images of the source basis.")
def lattice_isometry(source, target, fmap) -> None:
    """Check F^T G_target F == G_source; exit 1 with a witness on failure."""
    try:
        f = LatticeMap(_lattice(source), _lattice(target), parse_matrix(fmap))
    except InputError as exc:
        _fail_input(str(exc))
    res = is_isometry(f)
    if res.ok:
        click.echo("isometry")
        return
    click.echo(f"not an isometry: pair {res.witness}: source {res.source_value}, image {res.target_value}")
    sys.exit(EXIT_FAIL)


@main.group("model")
def model_group() -> None:
    """Export and check resolution-model JSON."""


@model_group.command("export")
@click.argument("target", type=click.Choice(sorted(models.CANNED)))
@click.option("-o", "--output", default=None, type=click.Path(dir_okay=False), help="Write here instead of stdout.")
def model_export(target: str, output: str | None) -> None:
    """Write a canned model in the JSON schema."""
    text = ledger.dumps_model(models.CANNED[target]()[1])
    if output is None:
        click.echo(text, nl=False)
        return
    try:
        Path(output).write_text(text, encoding="utf-8")
    except OSError as exc:
        _fail_input(f"cannot write {output}: {exc.strerror or exc}")


@model_group.command("check")
@click.argument("path")
def model_check(path: str) -> None:
    """Validate a model JSON file (structure and invariants only)."""
    try:
        model = ledger.load_model(path)
    except InputError as exc:
        _fail_input(str(exc))
    try:
        rep = ledger.validate(model)
    except LedgerError as exc:
        _fail_input(str(exc))
    if rep.ok:
        click.echo(f"{model.name}: valid")
        return
    for v in rep.violations:
        click.echo(f"{model.name}: {v.invariant}: {v.detail} [{v.citation}]")
    sys.exit(EXIT_FAIL)


if __name__ == "__main__":  # pragma: no cover
    main()
