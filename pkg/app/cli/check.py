import click

from app.cli.deps import CommandError, handle_errors, load, write_atomic
from app.core.config import settings
from app.schemas.cubic import CubicNormStructureFile
from app.schemas.report import Report, SuiteConfig
from app.services import harness_service


def render(report: Report) -> str:
    width = max([len(c.name) for c in report.checks] + [5])
    lines = [f"suite {report.suite}: {report.verdict.value}"]
    lines.append(f"  {'check'.ljust(width)}  verdict  passed  failed")
    for c in report.checks:
        lines.append(f"  {c.name.ljust(width)}  {c.verdict.value.ljust(7)}  {c.passed:6d}  {c.failed:6d}")
        if c.note:
            lines.append(f"    note: {c.note}")
        if c.failed:
            lines.append(f"    first failure at sample {c.first_failure_index}: {c.counterexample}")
    lines.extend(f"  note: {n}" for n in report.notes)
    lines.append(f"  wall time {report.wall_time:.3f}s")
    return "\n".join(lines)


@click.command()
@click.option("--suite", required=True, type=click.Choice(sorted(harness_service.SUITES)))
@click.option("--ring", default="Fp:7", show_default=True)
@click.option("--samples", type=click.IntRange(min=0), default=None, help="Samples per sampled check.")
@click.option("--seed", type=int, default=None, help="Seed (defaults to ALBERT_SEED).")
@click.option("--gamma", default=None)
@click.option("--algebra", "algebra_file", type=click.Path(exists=True, dir_okay=False),
              help="Cubic norm structure to check instead of the built-in H(M, Gamma).")
@click.option("--mutate", is_flag=True, help="Negative control: perturb one structure constant.")
@click.option("--json", "json_file", type=click.Path(dir_okay=False), help="Write the JSON report here.")
@handle_errors
@click.pass_context
def check(ctx, suite, ring, samples, seed, gamma, algebra_file, mutate, json_file):
    """Run a named suite and exit 0 (pass), 1 (fail) or 3 (only skips)."""
    algebra = None
    if algebra_file is not None:
        algebra = load(algebra_file, CubicNormStructureFile).to_model()
        ring = str(algebra.ring)
    config = SuiteConfig(
        suite=suite,
        ring=ring,
        samples=settings.SAMPLES if samples is None else samples,
        seed=settings.SEED if seed is None else seed,
        gamma=gamma,
        norm_search_cap=settings.NORM_SEARCH_CAP,
        frame_mover_tries=settings.FRAME_MOVER_TRIES,
    )
    if mutate:
        if algebra is not None:
            raise CommandError("--mutate builds its own structures; drop --algebra")
        report = harness_service.mutate_and_expect_failure(config)
    else:
        report = harness_service.run_suite(config, algebra=algebra)
    click.echo(render(report))
    if json_file:
        write_atomic(json_file, report.to_json())
    ctx.exit(report.exit_code)
