from typing import List, Literal, Optional

from pydantic import BaseModel

from app.models.composition import AlgebraKind, BilinearMap, CompositionAlgebra, CompositionOfForms, TripleMap
from app.models.quadspace import LinearMap, Vector
from app.models.scalars import RingDescriptor
from app.schemas.quadspace import QuadraticSpaceBase, RingBound, ring_of, strings


def tensor_strings(m: BilinearMap) -> List[List[List[str]]]:
    return [[strings(cell) for cell in row] for row in m.tensor()]


def tensor_model(ring: RingDescriptor, tensor: List[List[List[str]]]) -> BilinearMap:
    return BilinearMap.from_tensor(ring, [[[ring.element(c).value for c in cell] for cell in row] for row in tensor])


class CompositionAlgebraFile(RingBound):
    object: Literal["composition_algebra"] = "composition_algebra"
    space: QuadraticSpaceBase
    mult: List[List[List[str]]]
    unity: Optional[List[str]] = None
    kind: AlgebraKind

    @classmethod
    def from_model(cls, C: CompositionAlgebra) -> "CompositionAlgebraFile":
        return cls(
            ring=str(C.ring),
            space=QuadraticSpaceBase.from_space(C.space),
            mult=tensor_strings(C.mult),
            unity=None if C.unity is None else C.unity.to_strings(),
            kind=C.kind,
        )

    def to_model(self) -> CompositionAlgebra:
        ring = ring_of(self.ring)
        unity = None if self.unity is None else Vector.of(ring, self.unity)
        return CompositionAlgebra(self.space.to_space(ring), tensor_model(ring, self.mult), unity, self.kind)


class CompositionOfFormsFile(RingBound):
    object: Literal["composition_of_forms"] = "composition_of_forms"
    C1: QuadraticSpaceBase
    C2: QuadraticSpaceBase
    C3: QuadraticSpaceBase
    m: List[List[List[str]]]

    @classmethod
    def from_model(cls, M: CompositionOfForms) -> "CompositionOfFormsFile":
        c1, c2, c3 = (QuadraticSpaceBase.from_space(q) for q in M.forms)
        return cls(ring=str(M.ring), C1=c1, C2=c2, C3=c3, m=tensor_strings(M.m))

    def to_model(self) -> CompositionOfForms:
        ring = ring_of(self.ring)
        forms = (q.to_space(ring) for q in (self.C1, self.C2, self.C3))
        return CompositionOfForms(*forms, tensor_model(ring, self.m))


class TripleMapFile(RingBound):
    object: Literal["triple_map"] = "triple_map"
    t1: List[List[str]]
    t2: List[List[str]]
    t3: List[List[str]]

    @classmethod
    def from_model(cls, t: TripleMap) -> "TripleMapFile":
        return cls(ring=str(t.ring), t1=t.t1.to_strings(), t2=t.t2.to_strings(), t3=t.t3.to_strings())

    def to_model(self) -> TripleMap:
        ring = ring_of(self.ring)
        return TripleMap(*(LinearMap(ring, rows) for rows in (self.t1, self.t2, self.t3)))
