import click

from app.cli.deps import CommandError, handle_errors, load, load_vector, out_option, save
from app.core.config import settings
from app.schemas.composition import CompositionAlgebraFile, CompositionOfFormsFile, TripleMapFile
from app.services import composition_service


@click.command()
@click.option("--composition", "composition_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--a", "a_file", type=click.Path(exists=True, dir_okay=False), help="Point of C3 with q3(a) = 1.")
@click.option("--b", "b_file", type=click.Path(exists=True, dir_okay=False), help="Point of C2 with q2(b) = 1.")
@click.option("--cap", type=click.IntRange(min=0), default=None, help="Candidates tried when searching for a, b.")
@click.option("--iso-out", type=click.Path(dir_okay=False), help="Also write the isomorphism (Id, f, g).")
@out_option
@handle_errors
def octonionify(composition_file, a_file, b_file, cap, iso_out, out):
    """Build the octonion algebra of a composition from norm-one points."""
    M = load(composition_file, CompositionOfFormsFile).to_model()
    composition_service.validate_composition(M)
    if (a_file is None) != (b_file is None):
        raise click.UsageError("give both --a and --b, or neither")
    if a_file is None:
        points = composition_service.find_norm_one_points(M, settings.NORM_SEARCH_CAP if cap is None else cap)
        if points is None:
            raise CommandError("no norm-one points found; pass --a and --b")
        a, b = points
    else:
        a, b = load_vector(a_file), load_vector(b_file)
    algebra, iso, _ = composition_service.octonionify(M, a, b)
    save(out, CompositionAlgebraFile.from_model(algebra), CompositionAlgebraFile)
    if iso_out:
        save(iso_out, TripleMapFile.from_model(iso), TripleMapFile)
    click.echo(f"octonion algebra with unity {algebra.unity.to_strings()} written to {out}")
