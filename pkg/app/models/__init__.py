# Domain value types, re-exported for convenience
from .scalars import RingDescriptor, RingKind, Scalar
from .polynomial import Polynomial
from .quadspace import LinearMap, QuadraticSpace, Vector
from .composition import AlgebraKind, BilinearMap, CompositionAlgebra, CompositionOfForms, TripleMap
from .cubic import CubicNormStructure, IsotopeOrigin
from .albert import AlbertElement, Frame, Gamma

__all__ = [
    "RingDescriptor",
    "RingKind",
    "Scalar",
    "Polynomial",
    "LinearMap",
    "QuadraticSpace",
    "Vector",
    "AlgebraKind",
    "BilinearMap",
    "CompositionAlgebra",
    "CompositionOfForms",
    "TripleMap",
    "CubicNormStructure",
    "IsotopeOrigin",
    "AlbertElement",
    "Frame",
    "Gamma",
]
