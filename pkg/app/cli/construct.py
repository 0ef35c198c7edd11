import logging

import click

from app.cli.deps import gamma_option, handle_errors, load, out_option, parse_gamma, parse_ring, ring_option, save
from app.schemas.composition import CompositionAlgebraFile, CompositionOfFormsFile
from app.schemas.cubic import CubicNormStructureFile
from app.services import albert_service, composition_service

logger = logging.getLogger(__name__)


@click.command()
@click.argument("kind", type=click.Choice(["zorn", "para", "h3", "hermitian"]))
@ring_option
@gamma_option
@click.option("--composition", "composition_file", type=click.Path(exists=True, dir_okay=False),
              help="Composition of forms file (required for hermitian).")
@out_option
@handle_errors
def construct(kind, ring, gamma, composition_file, out):
    """Build and validate an algebra, then write it to --out."""
    r = parse_ring(ring)
    if kind == "zorn":
        save(out, CompositionAlgebraFile.from_model(composition_service.zorn_octonion(r)), CompositionAlgebraFile)
    elif kind == "para":
        algebra = composition_service.para(composition_service.zorn_octonion(r))
        save(out, CompositionAlgebraFile.from_model(algebra), CompositionAlgebraFile)
    elif kind == "h3":
        A = albert_service.h3(composition_service.zorn_octonion(r), parse_gamma(r, gamma))
        save(out, CubicNormStructureFile.from_model(A), CubicNormStructureFile)
    else:
        if composition_file is None:
            raise click.UsageError("hermitian needs --composition")
        M = load(composition_file, CompositionOfFormsFile).to_model()
        composition_service.validate_composition(M)
        A = albert_service.hermitian_algebra(M, parse_gamma(M.ring, gamma))
        save(out, CubicNormStructureFile.from_model(A), CubicNormStructureFile)
    logger.info("wrote %s algebra to %s", kind, out)
    click.echo(f"{kind} over {r}: validated, written to {out}")
