from typing import List, Literal, Optional

from pydantic import BaseModel, field_validator

from app.models.albert import ALBERT_RANK, AlbertElement, Frame
from app.models.quadspace import Vector
from app.schemas.quadspace import RingBound, ring_of


class StructuredElement(BaseModel):
    alphas: List[str]
    u1: List[str]
    u2: List[str]
    u3: List[str]


class ElementFile(RingBound):
    object: Literal["albert_element"] = "albert_element"
    coords: List[str]
    structured: Optional[StructuredElement] = None

    @field_validator("coords")
    @classmethod
    def rank_27(cls, v: List[str]) -> List[str]:
        if len(v) != ALBERT_RANK:
            raise ValueError(f"an element has {ALBERT_RANK} coordinates, got {len(v)}")
        return v

    @classmethod
    def from_model(cls, x: Vector, structured: bool = True) -> "ElementFile":
        parts = StructuredElement(**AlbertElement.unflatten(x).structured()) if structured else None
        return cls(ring=str(x.ring), coords=x.to_strings(), structured=parts)

    def to_model(self) -> Vector:
        return Vector.of(ring_of(self.ring), self.coords)


class FrameFile(RingBound):
    object: Literal["frame"] = "frame"
    c1: List[str]
    c2: List[str]
    c3: List[str]

    @classmethod
    def from_model(cls, f: Frame) -> "FrameFile":
        c1, c2, c3 = (c.to_strings() for c in f)
        return cls(ring=str(f.ring), c1=c1, c2=c2, c3=c3)

    def to_model(self) -> Frame:
        ring = ring_of(self.ring)
        return Frame(*(Vector.of(ring, c) for c in (self.c1, self.c2, self.c3)))

