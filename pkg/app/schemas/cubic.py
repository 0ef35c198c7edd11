from typing import List, Literal

from pydantic import BaseModel, Field

from app.models.cubic import CubicNormStructure
from app.models.polynomial import Polynomial
from app.models.quadspace import Vector
from app.models.scalars import RingDescriptor
from app.schemas.quadspace import RingBound, ring_of, strings


class MonomialTerm(BaseModel):
    monomial: List[int]
    coeff: str


def poly_terms(p: Polynomial) -> List[MonomialTerm]:
    return [MonomialTerm(monomial=indices, coeff=str(c)) for indices, c in p.monomials()]


def poly_model(ring: RingDescriptor, nvars: int, terms: List[MonomialTerm]) -> Polynomial:
    return Polynomial.from_indices(ring, nvars, ((t.monomial, ring.element(t.coeff).value) for t in terms))


class CubicNormStructureFile(RingBound):
    object: Literal["cubic_norm_structure"] = "cubic_norm_structure"
    rank: int = Field(gt=0)
    basepoint: List[str]
    norm: List[MonomialTerm]
    adjoint: List[List[MonomialTerm]]
    trace: List[List[str]]

    @classmethod
    def from_model(cls, A: CubicNormStructure) -> "CubicNormStructureFile":
        return cls(
            ring=str(A.ring),
            rank=A.rank,
            basepoint=A.basepoint.to_strings(),
            norm=poly_terms(A.norm_poly),
            adjoint=[poly_terms(p) for p in A.adjoint_polys],
            trace=[strings(row) for row in A.trace_gram],
        )

    def to_model(self) -> CubicNormStructure:
        ring = ring_of(self.ring)
        return CubicNormStructure(
            ring,
            self.rank,
            Vector.of(ring, self.basepoint),
            poly_model(ring, self.rank, self.norm),
            [poly_model(ring, self.rank, terms) for terms in self.adjoint],
            [[ring.element(v).value for v in row] for row in self.trace],
        )
