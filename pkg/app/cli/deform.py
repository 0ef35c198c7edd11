import click

from app.cli.deps import CommandError, handle_errors, load, load_frame, out_option, save
from app.schemas.composition import CompositionOfFormsFile
from app.schemas.cubic import CubicNormStructureFile
from app.services import albert_service


@click.command()
@click.option("--algebra", "algebra_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--frame", "frame_file", type=click.Path(exists=True, dir_okay=False),
              help="Frame file (default: the distinguished frame).")
@out_option
@handle_errors
def deform(algebra_file, frame_file, out):
    """Write the composition of forms carried by the coordinate spaces of a frame."""
    A = load(algebra_file, CubicNormStructureFile).to_model()
    frame = load_frame(frame_file, A.ring)
    if not albert_service.is_frame_of(A, frame):
        raise CommandError("the given elements do not form a frame")
    M = albert_service.deform(A, frame)
    save(out, CompositionOfFormsFile.from_model(M), CompositionOfFormsFile)
    click.echo(f"deformation over {M.ring} written to {out}")
