import click

from app.cli.deps import handle_errors, load, load_vector, out_option, save
from app.schemas.cubic import CubicNormStructureFile
from app.services import cubic_service


@click.command()
@click.option("--algebra", "algebra_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--p", "p_file", required=True, type=click.Path(exists=True, dir_okay=False), help="Invertible element.")
@click.option("--normalize", is_flag=True, help="Replace p by N(p)^-1 U_p p first.")
@out_option
@handle_errors
def isotope(algebra_file, p_file, normalize, out):
    """Write the validated isotope of an algebra at p (N(p) = 1 unless --normalize)."""
    A = load(algebra_file, CubicNormStructureFile).to_model()
    p = load_vector(p_file)
    if normalize:
        p, _ = cubic_service.normalize_isotope(A, p)
    Ap = cubic_service.isotope(A, p)
    save(out, CubicNormStructureFile.from_model(Ap), CubicNormStructureFile)
    click.echo(f"isotope with unity {Ap.basepoint.to_strings()} written to {out}")
