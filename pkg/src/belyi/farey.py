"""Mediant subdivision of the unit interval and horoball footprints.

The ideal triangles of the standard tessellation that lie under the
geodesic from 0 to 1 are generated level by level by mediant insertion:
level 1 is the single triangle (0, 1/2, 1), and level m+1 places one
triangle under every gap of the level-m vertex row.  Level m holds
2^(m-1) triangles and the gaps of row m are at most 1/(m+1), so only
boundedly many triangles can reach into a horizontal strip {y > 1/l}.

The same subdivision drives a developing map: unrolling a cusp of
degree d into its width-d strip puts one ideal triangle under each
integer interval of the top row, and crossing a side replaces an
interval endpoint by the mediant.  Tracking which surface triangle each
developed copy comes from yields the set of triangles met by a cusp's
depth-l horoball.  All vertex coordinates are exact rationals.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .cusps import CuspPartition
from .ribbon import FaceDecomposition, RibbonGraph, rotation

__all__ = [
    "OutOfOrder",
    "LevelCapExceeded",
    "DepthCapExceeded",
    "FareyTriangle",
    "DevelopedTriangle",
    "mediant",
    "vertex_row",
    "enumerate_level",
    "intersects_strip",
    "count_intersecting",
    "n_bound",
    "m_bound",
    "develop_horoball",
    "horoball_footprint",
    "classify_segments",
]

DEFAULT_LEVEL_CAP = 30


class OutOfOrder(ValueError):
    """Mediant endpoints must satisfy p < q."""


class LevelCapExceeded(ValueError):
    """Requested subdivision level exceeds the configured cap."""


class DepthCapExceeded(RuntimeError):
    """Developing map descended past its defensive depth bound."""


def mediant(p: Fraction, q: Fraction) -> Fraction:
    """Mediant (a+c)/(b+d) of p = a/b < q = c/d.

    For consecutive row vertices the result is already in lowest terms;
    Fraction normalisation reduces any other input defensively.
    """
    p = Fraction(p)
    q = Fraction(q)
    if not p < q:
        raise OutOfOrder(f"need p < q, got p={p}, q={q}")
    return Fraction(p.numerator + q.numerator, p.denominator + q.denominator)


@dataclass(frozen=True)
class FareyTriangle:
    """Ideal triangle (left, apex, right) created at a subdivision level."""

    left: Fraction
    apex: Fraction
    right: Fraction
    level: int

    def __post_init__(self):
        if not self.left < self.apex < self.right:
            raise OutOfOrder(f"vertices out of order: {self.left}, {self.apex}, {self.right}")
        if self.apex != mediant(self.left, self.right):
            raise ValueError("apex must be the mediant of the outer vertices")
        if self.level < 1:
            raise ValueError("level must be >= 1")

    @property
    def width(self) -> Fraction:
        return self.right - self.left

    @property
    def apex_height(self) -> Fraction:
        """Top of the outer geodesic semicircle, the triangle's highest point."""
        return self.width / 2


@dataclass(frozen=True)
class DevelopedTriangle:
    """A surface triangle developed into a cusp strip.

    ``vertices`` is (left, apex, right) with apex = math.inf for the
    top-row triangles whose third vertex is the cusp itself.
    ``entry_edge`` is the dart indexing the side the development
    crossed to enter this triangle (None for the top row).
    """

    surface_triangle: int
    entry_edge: int | None
    vertices: tuple


def vertex_row(m: int, level_cap: int = DEFAULT_LEVEL_CAP) -> list[Fraction]:
    """Vertex row after m rounds of mediant insertion (2^m + 1 points)."""
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    if m > level_cap:
        raise LevelCapExceeded(f"m={m} exceeds cap {level_cap}")
    row = [Fraction(0), Fraction(1)]
    for _ in range(m):
        nxt = []
        for a, b in zip(row, row[1:]):
            nxt.append(a)
            nxt.append(mediant(a, b))
        nxt.append(row[-1])
        row = nxt
    return row


def enumerate_level(m: int, level_cap: int = DEFAULT_LEVEL_CAP) -> list[FareyTriangle]:
    """The 2^(m-1) triangles created at subdivision step m >= 1."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if m > level_cap:
        raise LevelCapExceeded(f"m={m} exceeds cap {level_cap}")
    row = vertex_row(m - 1, level_cap)
    return [
        FareyTriangle(a, mediant(a, b), b, m) for a, b in zip(row, row[1:])
    ]


def intersects_strip(t: FareyTriangle, l) -> bool:
    """Whether the triangle reaches into the open strip {y > 1/l}.

    Reduces to the apex height of the outer semicircle; exact when l is
    rational (ints and floats are converted exactly).
    """
    lq = Fraction(l)
    if lq <= 0:
        raise ValueError(f"l must be positive, got {l}")
    return (t.right - t.left) * lq > 2


def count_intersecting(l, level_cap: int = DEFAULT_LEVEL_CAP) -> int:
    """Number of subdivision triangles meeting the open strip {y > 1/l}.

    A level-m triangle sits under a gap of row m-1, whose gaps are at
    most 1/m, so levels with 2m >= l contribute nothing and the scan
    stops there.
    """
    lq = Fraction(l)
    if lq <= 0:
        raise ValueError(f"l must be positive, got {l}")
    deepest = math.ceil(lq / 2) - 1  # levels with 2m >= l cannot reach the strip
    if deepest > level_cap:
        raise LevelCapExceeded(f"needed level {deepest} exceeds cap {level_cap}")
    count = 0
    row = [Fraction(0), Fraction(1)]
    for _ in range(deepest):
        nxt = []
        for a, b in zip(row, row[1:]):
            if (b - a) * lq > 2:
                count += 1
            nxt.append(a)
            nxt.append(mediant(a, b))
        nxt.append(row[-1])
        row = nxt
    return count


def n_bound(l) -> int:
    """Closed-form bound 2^(floor(l/2)+1) - 1 on ``count_intersecting``."""
    if l <= 0:
        raise ValueError(f"l must be positive, got {l}")
    return 2 ** (math.floor(l / 2) + 1) - 1


def m_bound(l) -> int:
    """Segment-count bound 3 * l * n_bound(l), rounded up for non-integral l."""
    if l <= 0:
        raise ValueError(f"l must be positive, got {l}")
    if isinstance(l, int):
        return 3 * l * n_bound(l)
    return math.ceil(3 * Fraction(l) * n_bound(l))


def develop_horoball(
    g: RibbonGraph,
    fd: FaceDecomposition,
    j: int,
    l,
    depth_cap: int | None = None,
) -> list[DevelopedTriangle]:
    """Developed triangles of cusp j's strip meeting the horoball {y > d_j/l}.

    The strip of a degree-d cusp has one top-row triangle per dart of
    the face cycle; each carries the corner dart of that walk position.
    A triangle entered through the side indexed by dart ``a`` has its
    remaining sides indexed by rotation(a) on the right child interval
    and rotation(rotation(a)) on the left one (the orientation-
    preserving convention; see the wrap-around of the top row, where
    the right side of column t and the left side of column t+1 must be
    the same edge).  Descent stops as soon as a child's apex height
    drops to d_j/l, which also bounds the depth.

    For d_j > l the horoball stays above the canonical loop and the
    development is empty.
    """
    lq = Fraction(l)
    if lq <= 0:
        raise ValueError(f"l must be positive, got {l}")
    d_j = fd.degrees[j]
    if d_j > lq:
        return []
    height = Fraction(d_j) / lq
    if depth_cap is None:
        depth_cap = int(lq // 2) + 2
    m = g.matching
    out: list[DevelopedTriangle] = []
    queue: deque[tuple[int, Fraction, Fraction, int]] = deque()
    for t, corner in enumerate(fd.faces[j]):
        out.append(
            DevelopedTriangle(corner // 3, None, (Fraction(t), math.inf, Fraction(t + 1)))
        )
        if Fraction(1, 2) > height:
            # cross the bottom side of the top-row triangle
            queue.append((m[rotation(corner)], Fraction(t), Fraction(t + 1), 1))
    while queue:
        a, p, q, depth = queue.popleft()
        if depth > depth_cap:
            raise DepthCapExceeded(f"development passed depth {depth_cap} for cusp {j}")
        mid = Fraction(p.numerator + q.numerator, p.denominator + q.denominator)
        out.append(DevelopedTriangle(a // 3, a, (p, mid, q)))
        if q - mid > 2 * height:
            queue.append((m[rotation(a)], mid, q, depth + 1))
        if mid - p > 2 * height:
            queue.append((m[rotation(rotation(a))], p, mid, depth + 1))
    return out


def horoball_footprint(
    g: RibbonGraph,
    fd: FaceDecomposition,
    j: int,
    l,
    depth_cap: int | None = None,
) -> frozenset[int]:
    """Surface triangles whose developed copy meets cusp j's depth-l horoball."""
    return frozenset(
        dt.surface_triangle for dt in develop_horoball(g, fd, j, l, depth_cap)
    )


def classify_segments(
    g: RibbonGraph,
    fd: FaceDecomposition,
    partition: CuspPartition,
    l,
) -> tuple[frozenset[int], frozenset[int]]:
    """Split the darts of large cusps by horoball contact.

    A dart goes to s2 when its triangle lies in the footprint of some
    cusp of degree <= l, else to s1.  Triangle granularity makes this a
    conservative overcount of actual trapezium contact, but each small
    cusp still contributes at most 3 * d_j * n_bound(l) <= m_bound(l)
    darts, so |s2| <= m_bound(l) * lht.
    """
    lq = Fraction(l)
    if lq <= 0:
        raise ValueError(f"l must be positive, got {l}")
    hot: set[int] = set()
    for j, d in enumerate(fd.degrees):
        if d <= lq:
            hot.update(horoball_footprint(g, fd, j, l))
    s_all = [dart for i in partition.i1 for dart in fd.faces[i]]
    s2 = frozenset(dart for dart in s_all if dart // 3 in hot)
    s1 = frozenset(s_all) - s2
    return s1, s2
