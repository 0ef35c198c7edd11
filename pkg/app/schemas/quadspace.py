from typing import List, Literal

from pydantic import BaseModel, field_validator

from app.models.quadspace import LinearMap, QuadraticSpace, Vector
from app.models.scalars import RingDescriptor


def ring_of(text: str) -> RingDescriptor:
    return RingDescriptor.parse(text)


def strings(raw) -> List[str]:
    return [str(v) for v in raw]


class RingBound(BaseModel):
    ring: str

    @field_validator("ring")
    @classmethod
    def ring_literal(cls, v: str) -> str:
        return str(RingDescriptor.parse(v))


class QuadraticSpaceBase(BaseModel):
    rank: int
    coeffs: List[List[str]]

    @classmethod
    def from_space(cls, q: QuadraticSpace) -> "QuadraticSpaceBase":
        return QuadraticSpaceBase(rank=q.rank, coeffs=[strings(row) for row in q.coeffs])

    def to_space(self, ring: RingDescriptor) -> QuadraticSpace:
        return QuadraticSpace(ring, self.rank, self.coeffs)


class QuadraticSpaceFile(RingBound, QuadraticSpaceBase):
    object: Literal["quadratic_space"] = "quadratic_space"

    @classmethod
    def from_model(cls, q: QuadraticSpace) -> "QuadraticSpaceFile":
        return cls(ring=str(q.ring), **QuadraticSpaceBase.from_space(q).model_dump())

    def to_model(self) -> QuadraticSpace:
        return self.to_space(ring_of(self.ring))


class VectorFile(RingBound):
    object: Literal["vector"] = "vector"
    coords: List[str]

    @classmethod
    def from_model(cls, v: Vector) -> "VectorFile":
        return cls(ring=str(v.ring), coords=v.to_strings())

    def to_model(self) -> Vector:
        return Vector.of(ring_of(self.ring), self.coords)


class LinearMapFile(RingBound):
    object: Literal["linear_map"] = "linear_map"
    rows: List[List[str]]

    @classmethod
    def from_model(cls, t: LinearMap) -> "LinearMapFile":
        return cls(ring=str(t.ring), rows=t.to_strings())

    def to_model(self) -> LinearMap:
        return LinearMap(ring_of(self.ring), self.rows)
