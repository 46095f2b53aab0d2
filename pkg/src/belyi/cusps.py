"""Closed-form lengths and areas for the glued-triangle surface metric.

All quantities live in the complete hyperbolic metric of the punctured
surface built from ideal triangles, where everything has an exact upper
half-plane formula: a horizontal segment of Euclidean width w at height
a has length w/a, the vertical segment from height a to b has length
log(b/a), and the unit-width strip between heights a and b has area
1/a - 1/b.  In the width-d strip of a degree-d cusp the canonical
horocycle loop sits at height 1, so the cusp neighbourhood above it has
area exactly d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ribbon import FaceDecomposition

__all__ = [
    "NonpositiveHeight",
    "InvalidInterval",
    "DegreeNotExceedingL",
    "NTooSmall",
    "NonpositiveR",
    "CuspData",
    "CuspPartition",
    "CuspConstants",
    "horocycle_length",
    "vertical_length",
    "strip_area",
    "trapezium_area",
    "surface_area",
    "small_triangle_area",
    "partition_cusps",
    "has_large_cusps_proxy",
    "l_of_r",
    "cusps_from_faces",
]


class NonpositiveHeight(ValueError):
    """Horocycle height must be positive."""


class InvalidInterval(ValueError):
    """Height interval must satisfy 0 < a <= b (strict for areas)."""


class DegreeNotExceedingL(ValueError):
    """Trapezium area needs cusp degree d > horocycle length l > 0."""


class NTooSmall(ValueError):
    """The degree threshold n / (log n)^2 needs n >= 3."""


class NonpositiveR(ValueError):
    """Collar radius must be positive."""


@dataclass(frozen=True)
class CuspData:
    """One cusp: its face id, degree, and dart cycle in walk order."""

    face_id: int
    degree: int
    darts: tuple[int, ...]

    def __post_init__(self):
        if self.degree != len(self.darts):
            raise ValueError("degree must equal the length of the dart cycle")


@dataclass(frozen=True)
class CuspPartition:
    """Split of the cusps into large (i1) and small (i2) by degree."""

    i1: frozenset[int]
    i2: frozenset[int]
    threshold: float


@dataclass(frozen=True)
class CuspConstants:
    """A horocycle length l and collar radius r tied by ``l_of_r``."""

    l: float
    r: float

    def __post_init__(self):
        expected = l_of_r(self.r)
        if not math.isclose(self.l, expected, rel_tol=1e-9):
            raise ValueError(f"l={self.l} does not match l_of_r({self.r})={expected}")

    @classmethod
    def from_r(cls, r: float) -> "CuspConstants":
        return cls(l_of_r(r), r)


def horocycle_length(a: float, span: float) -> float:
    """Length of a horizontal segment of Euclidean width ``span`` at height ``a``."""
    if a <= 0:
        raise NonpositiveHeight(f"height must be positive, got {a}")
    if span < 0:
        raise ValueError(f"span must be >= 0, got {span}")
    return span / a


def vertical_length(a: float, b: float) -> float:
    """Length of the vertical segment between heights ``a`` and ``b``."""
    if not 0 < a <= b:
        raise InvalidInterval(f"need 0 < a <= b, got a={a}, b={b}")
    return math.log(b / a)


def strip_area(a: float, b: float = math.inf) -> float:
    """Area of the unit-width strip between heights ``a`` and ``b``."""
    if not 0 < a < b:
        raise InvalidInterval(f"need 0 < a < b, got a={a}, b={b}")
    if b == math.inf:
        return 1.0 / a
    return 1.0 / a - 1.0 / b

def trapezium_area(d: float, l: float) -> float:
    """Area between a unit horocycle segment of a degree-``d`` cusp and
    the depth-``l`` horocycle below it.

    Isometric to the unit strip between heights 1 and d/l.
    """
    if not d > l > 0:
        raise DegreeNotExceedingL(f"need d > l > 0, got d={d}, l={l}")
    return 1.0 - l / d


def surface_area(n: int) -> float:
    """Total area of the surface glued from 2n ideal triangles."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return 2.0 * math.pi * n


def small_triangle_area() -> float:
    """Area of the central region of an ideal triangle bounded by its
    three unit horocycle segments: pi minus three unit corner strips.
    """
    return math.pi - 3.0


def cusps_from_faces(fd: FaceDecomposition) -> tuple[CuspData, ...]:
    """One CuspData per face, indexed by face id."""
    return tuple(
        CuspData(i, len(cycle), cycle) for i, cycle in enumerate(fd.faces)
    )


def degree_threshold(n: int) -> float:
    """The large-cusp degree cutoff n / (log n)^2; needs n >= 3."""
    if n < 3:
        raise NTooSmall(f"n must be >= 3 so that log n > 1, got {n}")
    return n / math.log(n) ** 2


def partition_cusps(fd: FaceDecomposition, n: int) -> CuspPartition:
    """Classify cusps: i1 = degrees strictly above n / (log n)^2."""
    threshold = degree_threshold(n)
    i1 = frozenset(i for i, d in enumerate(fd.degrees) if d > threshold)
    i2 = frozenset(range(fd.lht)) - i1
    return CuspPartition(i1, i2, threshold)


def has_large_cusps_proxy(fd: FaceDecomposition, l: float) -> bool:
    """Sufficient combinatorial test for embedded disjoint depth-``l``
    horoballs: every cusp degree strictly exceeds ``l``.

    A cusp of degree d > l keeps its depth-l horoball inside the region
    above its canonical loop.  The converse is false, so this can
    return False for surfaces that do have such horoballs.
    """
    return fd.min_degree > l


def l_of_r(r: float) -> float:
    """Horocycle length paired with collar radius ``r``.

    2*pi / log((e^r + 1) / e^(r-1)); the denominator simplifies to
    1 + log1p(e^-r), which is stable for large r.  Strictly increasing
    in r, tending to 2*pi from below.
    """
    if r <= 0:
        raise NonpositiveR(f"r must be positive, got {r}")
    return 2.0 * math.pi / (1.0 + math.log1p(math.exp(-r)))
