import orjson
import pytest
from click.testing import CliRunner

from app.cli.deps import dumps
from app.main import cli
from app.schemas.composition import CompositionAlgebraFile, CompositionOfFormsFile, TripleMapFile
from app.schemas.cubic import CubicNormStructureFile
from app.schemas.quadspace import VectorFile


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def h3_file(tmp_path_factory, h3_f7):
    path = tmp_path_factory.mktemp("algebra") / "h3.json"
    path.write_bytes(dumps(CubicNormStructureFile.from_model(h3_f7)))
    return path


def invoke(runner, *args):
    return runner.invoke(cli, [str(a) for a in args])


# ---------------------------------------------------------
# construct
# ---------------------------------------------------------

def test_construct_zorn(runner, tmp_path):
    out = tmp_path / "zorn.json"
    result = invoke(runner, "construct", "zorn", "--ring", "Fp:7", "--out", out)
    assert result.exit_code == 0, result.output
    algebra = CompositionAlgebraFile.model_validate(orjson.loads(out.read_bytes()))
    assert algebra.object == "composition_algebra"
    assert algebra.unity == ["1", "1", "0", "0", "0", "0", "0", "0"]


def test_construct_rejects_non_unit_gamma(runner, tmp_path):
    out = tmp_path / "h3.json"
    result = invoke(runner, "construct", "h3", "--ring", "Q", "--gamma", "1,0,1", "--out", out)
    assert result.exit_code == 2
    assert "NotAUnitError" in result.output
    assert not out.exists()


def test_construct_rejects_bad_ring(runner, tmp_path):
    result = invoke(runner, "construct", "zorn", "--ring", "Fp:8", "--out", tmp_path / "x.json")
    assert result.exit_code == 2


def test_hermitian_needs_composition(runner, tmp_path):
    result = invoke(runner, "construct", "hermitian", "--ring", "Fp:7", "--out", tmp_path / "x.json")
    assert result.exit_code == 2


# ---------------------------------------------------------
# isotope
# ---------------------------------------------------------

def test_isotope_at_unit_reproduces_the_file(runner, tmp_path, h3_file):
    p = tmp_path / "p.json"
    p.write_bytes(dumps(VectorFile(ring="Fp:7", coords=["1", "1", "1"] + ["0"] * 24)))
    out = tmp_path / "iso.json"
    result = invoke(runner, "isotope", "--algebra", h3_file, "--p", p, "--out", out)
    assert result.exit_code == 0, result.output
    assert out.read_bytes() == h3_file.read_bytes()


def test_isotope_needs_norm_one(runner, tmp_path, h3_file):
    p = tmp_path / "p.json"
    p.write_bytes(dumps(VectorFile(ring="Fp:7", coords=["2", "1", "1"] + ["0"] * 24)))
    out = tmp_path / "iso.json"
    result = invoke(runner, "isotope", "--algebra", h3_file, "--p", p, "--out", out)
    assert result.exit_code == 2
    assert "PreconditionError" in result.output
    result = invoke(runner, "isotope", "--algebra", h3_file, "--p", p, "--normalize", "--out", out)
    assert result.exit_code == 0, result.output


def test_isotope_rejects_short_element(runner, tmp_path, h3_file):
    p = tmp_path / "p.json"
    p.write_bytes(orjson.dumps({"object": "albert_element", "ring": "Fp:7", "coords": ["1"] * 26}))
    result = invoke(runner, "isotope", "--algebra", h3_file, "--p", p, "--out", tmp_path / "iso.json")
    assert result.exit_code == 2


# ---------------------------------------------------------
# check
# ---------------------------------------------------------

def test_check_zorn_writes_report(runner, tmp_path):
    report = tmp_path / "report.json"
    result = invoke(runner, "check", "--suite", "zorn", "--samples", 2, "--json", report)
    assert result.exit_code == 0, result.output
    assert "suite zorn: pass" in result.output
    data = orjson.loads(report.read_bytes())
    assert data["verdict"] == "pass"
    assert data["suite"] == "zorn"


def test_check_mutation_is_detected(runner):
    result = invoke(runner, "check", "--suite", "cns", "--mutate", "--samples", 1)
    assert result.exit_code == 0, result.output
    assert "mutation_detected" in result.output


def test_check_supplied_algebra(runner, h3_file):
    result = invoke(runner, "check", "--suite", "jordan", "--samples", 1, "--algebra", h3_file)
    assert result.exit_code == 0, result.output


def test_check_usage_errors(runner):
    assert invoke(runner, "check", "--suite", "triality").exit_code == 2
    assert invoke(runner, "check", "--suite", "zorn", "--ring", "Fp:8").exit_code == 2
    assert invoke(runner, "check", "--suite", "cns", "--gamma", "1,0,1").exit_code == 2


# ---------------------------------------------------------
# deform, octonionify, transport
# ---------------------------------------------------------

def test_deform_then_octonionify(runner, tmp_path, h3_file):
    composition = tmp_path / "m.json"
    result = invoke(runner, "deform", "--algebra", h3_file, "--out", composition)
    assert result.exit_code == 0, result.output
    M = CompositionOfFormsFile.model_validate(orjson.loads(composition.read_bytes()))
    assert M.ring == "Fp:7"

    out, iso = tmp_path / "o.json", tmp_path / "iso.json"
    result = invoke(runner, "octonionify", "--composition", composition, "--iso-out", iso, "--out", out)
    assert result.exit_code == 0, result.output
    algebra = CompositionAlgebraFile.model_validate(orjson.loads(out.read_bytes()))
    assert algebra.kind.value == "octonion"
    assert TripleMapFile.model_validate(orjson.loads(iso.read_bytes())).object == "triple_map"


def test_octonionify_needs_both_points(runner, tmp_path, h3_file):
    composition = tmp_path / "m.json"
    invoke(runner, "deform", "--algebra", h3_file, "--out", composition)
    a = tmp_path / "a.json"
    a.write_bytes(dumps(VectorFile(ring="Fp:7", coords=["1"] + ["0"] * 7)))
    result = invoke(runner, "octonionify", "--composition", composition, "--a", a, "--out", tmp_path / "o.json")
    assert result.exit_code == 2


def test_transport_with_mover(runner, tmp_path, h3_file):
    out, frame = tmp_path / "t.json", tmp_path / "frame.json"
    result = invoke(
        runner, "transport", "--algebra", h3_file, "--mover-seed", 0, "--frame-out", frame, "--out", out
    )
    assert result.exit_code == 0, result.output
    assert orjson.loads(frame.read_bytes())["object"] == "frame"
    moved = tmp_path / "moved.json"
    result = invoke(runner, "deform", "--algebra", h3_file, "--frame", frame, "--out", moved)
    assert result.exit_code == 0, result.output


def test_transport_needs_exactly_one_map(runner, tmp_path, h3_file):
    phi = tmp_path / "phi.json"
    phi.write_bytes(b"{}")
    out = tmp_path / "t.json"
    assert invoke(runner, "transport", "--algebra", h3_file, "--out", out).exit_code == 2
    result = invoke(runner, "transport", "--algebra", h3_file, "--phi", phi, "--mover-seed", 0, "--out", out)
    assert result.exit_code == 2


# ---------------------------------------------------------
# info and version
# ---------------------------------------------------------

def test_info_lists_suites(runner):
    result = invoke(runner, "info")
    assert result.exit_code == 0
    assert "suites: cns, companions, deform" in result.output
    assert "SEED = 0" in result.output


def test_version(runner):
    result = invoke(runner, "--version")
    assert result.exit_code == 0
    assert "1.0.0" in result.output
