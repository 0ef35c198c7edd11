import click

from app.cli.deps import handle_errors, load, load_frame, out_option, save
from app.core.config import settings
from app.models.albert import Frame
from app.schemas.albert import FrameFile
from app.schemas.composition import TripleMapFile
from app.schemas.cubic import CubicNormStructureFile
from app.schemas.quadspace import LinearMapFile
from app.services import albert_service


@click.command()
@click.option("--algebra", "algebra_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--phi", "phi_file", type=click.Path(exists=True, dir_okay=False), help="Automorphism (27x27 map).")
@click.option("--mover-seed", type=int, default=None, help="Search a frame-moving automorphism instead of --phi.")
@click.option("--source", "source_file", type=click.Path(exists=True, dir_okay=False),
              help="Source frame (default: distinguished).")
@click.option("--target", "target_file", type=click.Path(exists=True, dir_okay=False),
              help="Target frame (default: the image of the source).")
@click.option("--frame-out", type=click.Path(dir_okay=False), help="Also write the target frame.")
@out_option
@handle_errors
def transport(algebra_file, phi_file, mover_seed, source_file, target_file, frame_out, out):
    """Write the triple induced by an automorphism between two deformations."""
    A = load(algebra_file, CubicNormStructureFile).to_model()
    if (phi_file is None) == (mover_seed is None):
        raise click.UsageError("give exactly one of --phi and --mover-seed")
    if phi_file is not None:
        phi = load(phi_file, LinearMapFile).to_model()
    else:
        A = albert_service.field_view(A)
        _, phi = albert_service.frame_mover(A, mover_seed, settings.FRAME_MOVER_TRIES)
    source = load_frame(source_file, A.ring)
    target: Frame = albert_service.frame_image(A, phi, source) if target_file is None else load_frame(target_file, A.ring)
    t = albert_service.transport(A, phi, source, target)
    save(out, TripleMapFile.from_model(t), TripleMapFile)
    if frame_out:
        save(frame_out, FrameFile.from_model(target), FrameFile)
    click.echo(f"transport triple over {t.ring} written to {out}")
