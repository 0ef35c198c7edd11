"""Named, seeded suites over the constructions, and their negative controls."""
import logging
import time
from functools import cached_property
from typing import Callable, Dict, Optional

from app.core.config import settings
from app.core.exceptions import AlbertError, ConfigurationError
from app.models.albert import ALBERT_RANK, CYCLIC, Frame, Gamma, alpha_index, block_offset
from app.models.composition import RANK, AlgebraKind, CompositionAlgebra, CompositionOfForms, TripleMap
from app.models.cubic import CubicNormStructure
from app.models.polynomial import Polynomial, encode
from app.models.quadspace import LinearMap, Vector
from app.models.scalars import RingDescriptor, RingKind
from app.schemas.report import CheckResult, Report, SuiteConfig, Verdict
from app.services import albert_service, composition_service, cubic_service
from app.services.sampling import SampleStream, random_element

logger = logging.getLogger(__name__)


class SuiteContext:
    """Config, report and lazily built fixtures shared by the checks of one suite."""

    def __init__(self, config: SuiteConfig, algebra: Optional[CubicNormStructure] = None):
        self.config = config
        self.supplied = algebra
        self.ring = RingDescriptor.parse(config.ring)
        self.gamma = Gamma.parse(self.ring, config.gamma) if config.gamma else Gamma.unit(self.ring)
        if not self.gamma.is_valid():
            raise ConfigurationError(f"g1 g2 g3 = {self.gamma.product()} is not a unit in {self.ring}")
        self.samples = config.samples
        self.seed = config.seed
        self.report = Report(suite=config.suite, config=config.model_dump(mode="json"))
        if algebra is not None and algebra.ring != self.ring:
            raise ConfigurationError(f"algebra over {algebra.ring}, suite configured for {self.ring}")

    def stream(self, label: str, index: int) -> SampleStream:
        return SampleStream(self.seed, f"{self.config.suite}/{label}", index)

    # Checks

    def check(self, name: str, witness_of: Callable[[], Optional[dict]]) -> CheckResult:
        """One deterministic check; `witness_of` returns a witness or None."""
        result = self.report.add(CheckResult(name=name))
        try:
            witness = witness_of()
        except AlbertError as exc:
            witness = {"error": type(exc).__name__, "message": str(exc)}
        result.record(witness is None, witness)
        return result

    def sampled(self, name: str, witness_of: Callable[[int], Optional[dict]], count: Optional[int] = None) -> CheckResult:
        result = self.report.add(CheckResult(name=name))
        for index in range(self.samples if count is None else count):
            try:
                witness = witness_of(index)
            except AlbertError as exc:
                witness = {"error": type(exc).__name__, "message": str(exc)}
            result.record(witness is None, witness, index)
        return result

    def skip(self, name: str, note: str) -> CheckResult:
        logger.info("%s: skipping %s (%s)", self.config.suite, name, note)
        return self.report.add(CheckResult(name=name).skip(note))

    def merge(self, other: Report) -> None:
        for c in other.checks:
            self.report.add(c)

    def note(self, text: str) -> None:
        self.report.notes.append(text)

    # Fixtures

    @cached_property
    def octonions(self) -> CompositionAlgebra:
        algebra = composition_service.zorn_octonion(self.ring)
        if self.config.mutate:
            i, j, k = self._mutation_site()
            self.note(f"mutation: Zorn structure constant ({i}, {j}, {k}) shifted by 1")
            return CompositionAlgebra(algebra.space, algebra.mult.perturbed(i, j, k), algebra.unity, AlgebraKind.OCTONION)
        return algebra

    @cached_property
    def para_algebra(self) -> CompositionAlgebra:
        if self.config.mutate:
            base = composition_service.para(composition_service.zorn_octonion(self.ring))
            i, j, k = self._mutation_site()
            self.note(f"mutation: para structure constant ({i}, {j}, {k}) shifted by 1")
            return CompositionAlgebra(base.space, base.mult.perturbed(i, j, k), None, AlgebraKind.PARA)
        return composition_service.para(self.octonions)

    @cached_property
    def composition(self) -> CompositionOfForms:
        C = self.para_algebra
        return CompositionOfForms(C.space, C.space, C.space, C.mult)

    @cached_property
    def albert(self) -> CubicNormStructure:
        if self.supplied is not None:
            return self.supplied
        M = self.clean_composition()
        A = albert_service.hermitian_algebra(M, self.gamma, validate=not self.config.mutate)
        if self.config.mutate:
            A = self._mutated_adjoint(A)
        return A

    @cached_property
    def field_albert(self) -> CubicNormStructure:
        if self.ring.kind is RingKind.INTEGERS:
            self.note("Peirce and frame computations run over Q, the fraction field of Z")
        return albert_service.field_view(self.albert)

    def clean_composition(self) -> CompositionOfForms:
        C = composition_service.para(composition_service.zorn_octonion(self.ring))
        return CompositionOfForms(C.space, C.space, C.space, C.mult)

    def _mutation_site(self):
        stream = self.stream("mutation", 0)
        return stream.below(RANK), stream.below(RANK), stream.below(RANK)

    def _mutated_adjoint(self, A: CubicNormStructure) -> CubicNormStructure:
        # alpha_j^2 in the e_i coordinate breaks 1^# = 1 and U_{e_j} 1 = e_j;
        # u2[a] u3[b] in the u1[k] coordinate shifts one product of the deformation
        stream = self.stream("mutation", 0)
        i, j, _ = CYCLIC[stream.below(3)]
        a, b, k = stream.below(RANK), stream.below(RANK), stream.below(RANK)
        self.note(f"mutation: adjoint gains alpha{j}^2 in e{i} and u2[{a}] u3[{b}] in u1[{k}]")
        adjoint = list(A.adjoint_polys)
        square = Polynomial(A.ring, ALBERT_RANK, {encode([alpha_index(j), alpha_index(j)]): 1})
        adjoint[alpha_index(i)] = adjoint[alpha_index(i)] + square
        cross = Polynomial(A.ring, ALBERT_RANK, {encode([block_offset(2) + a, block_offset(3) + b]): 1})
        adjoint[block_offset(1) + k] = adjoint[block_offset(1) + k] + cross
        return CubicNormStructure(A.ring, A.rank, A.basepoint, A.norm_poly, adjoint, A.trace_gram)


# Suites

def _zorn_suite(ctx: SuiteContext) -> None:
    O = ctx.octonions
    ring = ctx.ring
    ctx.check("nonsingular", lambda: None if O.space.is_nonsingular() else {"det": str(O.space.gram_determinant())})
    ctx.check("unitality", lambda: composition_service.unitality_defect(O))
    ctx.check("multiplicativity", lambda: composition_service.multiplicativity_defect(O.space, O.space, O.space, O.mult))
    size = ring.size
    if size is not None and size ** (2 * RANK) <= settings.EXHAUSTIVE_PAIR_LIMIT:
        ctx.check("exhaustive_multiplicativity", lambda: composition_service.exhaustive_multiplicativity(O))
    else:
        ctx.skip("exhaustive_multiplicativity", f"{ring} has more than {settings.EXHAUSTIVE_PAIR_LIMIT} pairs")

    def sampled_pair(index: int) -> Optional[dict]:
        stream = ctx.stream("pairs", index)
        x, y = random_element(ring, RANK, stream), random_element(ring, RANK, stream)
        if O.norm(O.multiply(x, y)) == O.norm(x) * O.norm(y):
            return None
        return {"x": x.to_strings(), "y": y.to_strings()}

    ctx.sampled("sampled_multiplicativity", sampled_pair)

    def sl3(index: int) -> Optional[dict]:
        t = composition_service.random_zorn_automorphism(ring, ctx.stream("sl3", index))
        return None if composition_service.is_octonion_automorphism(O, t) else {"map": t.to_strings()}

    ctx.sampled("sl3_automorphisms", sl3, min(ctx.samples, 10))


def _para_suite(ctx: SuiteContext) -> None:
    P = ctx.para_algebra
    ring = ctx.ring
    ctx.check("symmetry", lambda: composition_service.symmetry_defect(P))
    ctx.check("multiplicativity", lambda: composition_service.multiplicativity_defect(P.space, P.space, P.space, P.mult))

    def cyclic(index: int) -> Optional[dict]:
        stream = ctx.stream("delta", index)
        u1, u2, u3 = (random_element(ring, RANK, stream) for _ in range(3))
        d = composition_service.delta(P, u1, u2, u3)
        if d == composition_service.delta(P, u2, u3, u1) == composition_service.delta(P, u3, u1, u2):
            return None
        return {"u1": u1.to_strings(), "u2": u2.to_strings(), "u3": u3.to_strings()}

    ctx.sampled("delta_cyclicity", cyclic)

    def related(index: int) -> Optional[dict]:
        t = composition_service.random_zorn_automorphism(ring, ctx.stream("related", index))
        return None if composition_service.is_related_triple(composition_service.j_triple(t), P) else {"map": t.to_strings()}

    ctx.sampled("related_triples", related, min(ctx.samples, 10))


def _companions_suite(ctx: SuiteContext) -> None:
    M = ctx.composition
    ctx.check("composition", lambda: composition_service.multiplicativity_defect(M.c1, M.c3, M.c2, M.m))

    def identities() -> Optional[dict]:
        m2, m3 = composition_service.companions(M)
        return composition_service.companion_defect(M, m2, m3)

    def para_companions() -> Optional[dict]:
        m2, m3 = composition_service.companions(M)
        if m2 == M.m and m3 == M.m:
            return None
        return {"reason": "companions of a para algebra differ from its product"}

    def scaled() -> Optional[dict]:
        composition_service.scale_composition(M, ctx.gamma)
        return None

    ctx.check("companion_identities", identities)
    ctx.check("para_companions", para_companions)
    ctx.check("scaled_composition", scaled)


def _jordan_suite(ctx: SuiteContext) -> None:
    ctx.merge(cubic_service.check_jordan_axioms(ctx.albert, ctx.samples, ctx.seed))


def _cns_suite(ctx: SuiteContext) -> None:
    ctx.merge(cubic_service.check_cns_axioms(ctx.albert, ctx.samples, ctx.seed))


def _iota_suite(ctx: SuiteContext) -> None:
    ring = ctx.ring
    M = ctx.composition
    ctx.check("composition", lambda: composition_service.multiplicativity_defect(M.c1, M.c3, M.c2, M.m))
    A = albert_service.hermitian_algebra(M, ctx.gamma, validate=False)
    identity = LinearMap.identity(ring, ALBERT_RANK)
    ctx.check("identity", lambda: None if albert_service.iota(TripleMap.identity(ring)) == identity else {})

    def automorphism(index: int) -> Optional[dict]:
        t = composition_service.random_zorn_automorphism(ring, ctx.stream("iota", index))
        phi = albert_service.iota(composition_service.j_triple(t))
        return None if cubic_service.is_automorphism(A, phi) else {"map": t.to_strings()}

    def homomorphism(index: int) -> Optional[dict]:
        s = composition_service.j_triple(composition_service.random_zorn_automorphism(ring, ctx.stream("hom-s", index)))
        t = composition_service.j_triple(composition_service.random_zorn_automorphism(ring, ctx.stream("hom-t", index)))
        if albert_service.iota(s.compose(t)) != albert_service.iota(s).compose(albert_service.iota(t)):
            return {"reason": "iota(s t) != iota(s) iota(t)"}
        if albert_service.iota(t.inverse()) != albert_service.iota(t).inverse():
            return {"reason": "iota(t^-1) != iota(t)^-1"}
        return None

    def non_morphism(index: int) -> Optional[dict]:
        s = composition_service.random_zorn_automorphism(ring, ctx.stream("non-morphism", index))
        if s == LinearMap.identity(ring, RANK):
            return None
        ident = LinearMap.identity(ring, RANK)
        phi = albert_service.iota(TripleMap(s, ident, ident))
        return {"map": s.to_strings()} if cubic_service.is_automorphism(A, phi) else None

    ctx.sampled("automorphism", automorphism)
    ctx.sampled("homomorphism", homomorphism, min(ctx.samples, 10))
    ctx.sampled("non_morphism_control", non_morphism, min(ctx.samples, 5))


def _isotope_suite(ctx: SuiteContext) -> None:
    A = ctx.albert
    ring = ctx.ring
    ctx.check("basepoint", lambda: cubic_service.basepoint_witness(A))

    def isotope_sample(index: int) -> Optional[dict]:
        p0 = albert_service.sparse_unit_point(A, ctx.stream("isotope", index))
        p, _ = cubic_service.normalize_isotope(A, p0)
        Ap = cubic_service.isotope(A, p, validate=False)
        for report in (cubic_service.check_cns_axioms(Ap, 1, ctx.seed), cubic_service.check_jordan_axioms(Ap, 1, ctx.seed)):
            for check in report.checks:
                if check.failed:
                    return {"p": p.to_strings(), "check": check.name, "witness": check.counterexample}
        witness = cubic_service.isotope_coherence_witness(A, Ap, p)
        return None if witness is None else dict(witness, p=p.to_strings())

    ctx.sampled("isotopes", isotope_sample)

    one = A.basepoint
    identity = LinearMap.identity(ring, ALBERT_RANK)
    ctx.check("isotopy_identity", lambda: cubic_service.isotopy_iso_witness(A, identity, one))

    def example(index: int) -> Optional[dict]:
        phi, p, w = albert_service.isotopy_example(A, ctx.stream("isotopy", index))
        witness = cubic_service.isotopy_iso_witness(A, phi, p)
        return None if witness is None else dict(witness, w=w.to_strings())

    def wrong_unity(index: int) -> Optional[dict]:
        phi, _, w = albert_service.isotopy_example(A, ctx.stream("isotopy", index))
        if A.square(w) == one:
            return None
        return None if not cubic_service.verify_isotopy_iso(A, phi, one) else {"w": w.to_strings()}

    count = min(ctx.samples, 5)
    ctx.sampled("isotopy_example", example, count)
    ctx.sampled("wrong_unity_control", wrong_unity, count)


def _moved_frames(ctx: SuiteContext, name: str, witness_of: Callable[[CubicNormStructure, LinearMap, Frame], Optional[dict]]) -> None:
    F = ctx.field_albert
    if not F.ring.is_unit_raw(F.ring.reduce(2)):
        ctx.skip(name, f"frame movers need 2 to be a unit; not the case in {F.ring}")
        return
    e = Frame.distinguished(F.ring)

    def moved(index: int) -> Optional[dict]:
        _, phi = albert_service.frame_mover(F, ctx.seed + index, ctx.config.frame_mover_tries)
        return witness_of(F, phi, e)

    ctx.sampled(name, moved, min(ctx.samples, 5))


def _frames_suite(ctx: SuiteContext) -> None:
    A = ctx.albert
    ring = ctx.ring
    F = ctx.field_albert
    e = Frame.distinguished(ring)
    ctx.check("basepoint", lambda: cubic_service.basepoint_witness(A))
    ctx.check("distinguished_frame", lambda: None if albert_service.is_frame_of(A, e) else {"frame": "distinguished"})
    zero = A.zero()
    ctx.check("unit_is_not_frame", lambda: {"frame": "(1, 0, 0)"} if albert_service.is_frame(A, A.basepoint, zero, zero) else None)

    def peirce() -> Optional[dict]:
        dims = [len(albert_service.peirce_one(A, c)) for c in e]
        if dims != [16, 16, 16] or albert_service.peirce_one(A, A.basepoint):
            return {"dimensions": dims}
        return None

    def coordinates() -> Optional[dict]:
        dims = [len(b) for b in albert_service.coordinate_spaces(A, e)]
        return None if dims == [RANK] * 3 else {"dimensions": dims}

    ctx.check("peirce_dimensions", peirce)
    ctx.check("coordinate_dimensions", coordinates)

    def moved(F: CubicNormStructure, phi: LinearMap, e: Frame) -> Optional[dict]:
        c = albert_service.frame_image(F, phi, e)
        if c == e:
            return {"reason": "frame mover fixes the distinguished frame"}
        dims = [len(b) for b in albert_service.coordinate_spaces(F, c)]
        return None if dims == [RANK] * 3 else {"dimensions": dims}

    _moved_frames(ctx, "moved_frames", moved)


def _deform_suite(ctx: SuiteContext) -> None:
    A = ctx.albert
    F = ctx.field_albert
    e = Frame.distinguished(F.ring)
    ctx.check("basepoint", lambda: cubic_service.basepoint_witness(A))

    def identity_morphism() -> Optional[dict]:
        deformed = albert_service.deform(F, e)
        clean = ctx.clean_composition().base_change(F.ring)
        scaled = composition_service.scale_composition(clean, ctx.gamma.base_change(F.ring))
        return composition_service.morphism_defect(TripleMap.identity(F.ring), deformed, scaled)

    ctx.check("distinguished_deformation", identity_morphism)

    spaces = albert_service.coordinate_spaces(F, e)

    def s_multiplicative(index: int) -> Optional[dict]:
        stream = ctx.stream("peirce", index)
        x = albert_service.random_combination(F.ring, spaces[2], stream)
        y = albert_service.random_combination(F.ring, spaces[1], stream)
        return albert_service.s_multiplicativity_defect(F, spaces, x, y)

    ctx.sampled("s_multiplicativity", s_multiplicative)

    def transported(F: CubicNormStructure, phi: LinearMap, e: Frame) -> Optional[dict]:
        c = albert_service.frame_image(F, phi, e)
        albert_service.transport(F, phi, e, c)
        return None

    _moved_frames(ctx, "transport", transported)


def _octonionify_suite(ctx: SuiteContext) -> None:
    M = ctx.composition
    ctx.check("composition", lambda: composition_service.multiplicativity_defect(M.c1, M.c3, M.c2, M.m))
    points: Dict[str, Vector] = {}

    def search() -> Optional[dict]:
        found = composition_service.find_norm_one_points(M, ctx.config.norm_search_cap)
        if found is None:
            return {"reason": f"no norm-one points within {ctx.config.norm_search_cap} candidates"}
        points["a"], points["b"] = found
        return None

    def round_trip() -> Optional[dict]:
        if not points:
            return {"reason": "no norm-one points"}
        algebra, _, _ = composition_service.octonionify(M, points["a"], points["b"])
        if algebra.unity != M.apply(points["a"], points["b"]):
            return {"reason": "unity is not m(a, b)"}
        _, witness = composition_service.sampled_multiplicativity(
            algebra, ctx.samples, lambda index: ctx.stream("octonionify", index)
        )
        return witness

    ctx.check("norm_one_points", search)
    ctx.check("round_trip", round_trip)


SUITES: Dict[str, Callable[[SuiteContext], None]] = {
    "zorn": _zorn_suite,
    "para": _para_suite,
    "companions": _companions_suite,
    "jordan": _jordan_suite,
    "cns": _cns_suite,
    "iota": _iota_suite,
    "isotope": _isotope_suite,
    "frames": _frames_suite,
    "deform": _deform_suite,
    "octonionify": _octonionify_suite,
}


def run_suite(config: SuiteConfig, algebra: Optional[CubicNormStructure] = None) -> Report:
    if config.suite not in SUITES:
        raise ConfigurationError(f"unknown suite {config.suite!r}; choose from {', '.join(sorted(SUITES))}")
    started = time.perf_counter()
    ctx = SuiteContext(config, algebra)
    logger.info("running %s over %s (%d samples, seed %d)", config.suite, ctx.ring, config.samples, config.seed)
    try:
        SUITES[config.suite](ctx)
    except AlbertError as exc:
        ctx.report.add(CheckResult(name="setup")).record(False, {"error": type(exc).__name__, "message": str(exc)})
    report = ctx.report
    report.wall_time = round(time.perf_counter() - started, 3)
    for check in report.checks:
        if check.failed:
            logger.warning("%s: %s failed %d time(s)", config.suite, check.name, check.failed)
    return report


def mutate_and_expect_failure(config: SuiteConfig) -> Report:
    """Run the suite on a perturbed structure; passes only if the suite reports a counterexample."""
    started = time.perf_counter()
    inner = run_suite(config.model_copy(update={"mutate": True}))
    report = Report(suite=f"{config.suite}-mutation", config=config.model_dump(mode="json"), notes=list(inner.notes))
    detected = report.add(CheckResult(name="mutation_detected"))
    failing = [c for c in inner.checks if c.verdict is Verdict.FAIL]
    if failing:
        detected.record(True)
        report.notes.append(f"first failing check: {failing[0].name}")
    else:
        detected.record(False, {"reason": "mutated structure passed every check"})
    report.wall_time = round(time.perf_counter() - started, 3)
    return report
