"""Explicit two-sided division of the surface and the resulting
Cheeger-constant upper bound.

Every large cusp (degree above n / (log n)^2) is split by a cut curve
drawn in its strip: two vertical segments from the canonical loop up to
height Y plus a horocyclic arc of Euclidean width k = floor(d/2) at
that height.  Side 1 of each split is labelled A, side 2 and every
small cusp B, and each triangle takes the majority label of its three
darts.  The boundary of the division is then the cut curves plus the
minority-dart horocycle segments -- at most one per triangle -- so its
total length is exactly measurable, as are the two areas.  The
quotient length / min(area) is a certified upper bound for the Cheeger
constant of the glued-triangle metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .cusps import CuspData, CuspPartition, degree_threshold, partition_cusps
from .farey import m_bound
from .ribbon import FaceDecomposition, RibbonGraph

__all__ = [
    "CuspNotInI1",
    "MissingCut",
    "EmptyI1",
    "DisconnectedSurface",
    "ParameterOutOfRange",
    "HypothesisNotMet",
    "CuspCut",
    "Division",
    "Certificate",
    "build_cusp_cut",
    "assign_labels",
    "cheeger_upper_bound",
    "certificate",
    "in_f_star",
    "sum_degrees_i1_bound_check",
]


class CuspNotInI1(ValueError):
    """Cut construction is defined only for cusps above the degree threshold."""


class MissingCut(ValueError):
    """A large cusp has no cut (or a cut was supplied for a small cusp)."""


class EmptyI1(RuntimeError):
    """No cusp exceeds the degree threshold; no cut is fabricated."""


class DisconnectedSurface(RuntimeError):
    """The pipeline needs a connected surface."""


class ParameterOutOfRange(ValueError):
    """A certificate or cut parameter violates its admissible range."""


class HypothesisNotMet(RuntimeError):
    """The face count exceeds c * log n, so the degree-mass bound does not apply."""


@dataclass(frozen=True)
class CuspCut:
    """Cut curve of one large cusp and the two side areas it creates.

    The curve has length 2*log(y) + k/y: two verticals from the
    canonical loop (height 1) to height y plus a width-k horocyclic arc
    at height y.  Side 1 is the k-wide box below the arc; side 2 is the
    rest of the cusp region, so the two areas sum to the degree
    exactly.
    """

    face_id: int
    k: int
    y: float
    eta_length: float
    side1_area: float
    side2_area: float


@dataclass(frozen=True)
class Division:
    """A two-label division of the whole surface.

    Cusp sides of large cusps carry fixed labels (side 1 A, side 2 B),
    small cusps carry B, and ``triangle_labels[v]`` is the majority
    label of triangle v.  ``boundary_segments`` holds the minority
    darts; the full boundary is those unit segments plus the cut
    curves.
    """

    n: int
    i1: tuple[int, ...]
    i2: tuple[int, ...]
    cuts: tuple[CuspCut, ...]
    triangle_labels: tuple[str, ...]
    boundary_segments: frozenset[int]
    boundary_length: float
    area_a: float
    area_b: float
    h_upper: float

    @property
    def num_i1(self) -> int:
        return len(self.i1)

    @property
    def labels(self) -> dict[tuple[str, int], str]:
        """Label of every domain: cusp sides, small cusps, triangles."""
        out: dict[tuple[str, int], str] = {}
        for i in self.i1:
            out[("cusp_side1", i)] = "A"
            out[("cusp_side2", i)] = "B"
        for i in self.i2:
            out[("cusp", i)] = "B"
        for v, lab in enumerate(self.triangle_labels):
            out[("triangle", v)] = lab
        return out


@dataclass(frozen=True)
class Certificate:
    """The closed-form bound package for given (epsilon, c, l, n)."""

    epsilon: float
    c: float
    l: float
    n: int
    lambda_: float
    length_bound: float
    area_bound: float
    quotient_bound: float
    prob_floor: float


def build_cusp_cut(cusp: CuspData, n: int, y_factor: float = 1.0) -> CuspCut:
    """Cut curve for a large cusp, split at k = floor(d/2) segments.

    The cut height is y = y_factor * n * d, giving a curve of length
    2*log(y) + k/y <= 2*log(n*d*y_factor) + 1.
    """
    if n < 3:
        raise ParameterOutOfRange(f"n must be >= 3, got {n}")
    if y_factor <= 0:
        raise ParameterOutOfRange(f"y_factor must be positive, got {y_factor}")
    d = cusp.degree
    if d <= degree_threshold(n):
        raise CuspNotInI1(
            f"cusp {cusp.face_id} has degree {d} <= threshold {degree_threshold(n)}"
        )
    y = y_factor * n * d
    if y <= 1.0:
        raise ParameterOutOfRange(f"cut height y={y} must exceed the canonical loop height 1")
    k = d // 2
    eta_length = 2.0 * math.log(y) + k / y
    side1 = k * (1.0 - 1.0 / y)
    side2 = d - side1  # equals (d-k)*(1 - 1/y) + d/y; this form conserves exactly
    return CuspCut(cusp.face_id, k, y, eta_length, side1, side2)


def assign_labels(
    g: RibbonGraph,
    fd: FaceDecomposition,
    partition: CuspPartition,
    cuts: Mapping[int, CuspCut],
) -> Division:
    """Label every domain and collect the division boundary.

    Darts in the first k walk positions of a large-cusp face (the face
    cycle is anchored at its minimal dart) border side 1 and carry A;
    all other darts carry B.  A triangle takes the majority label of
    its three darts, so it has either no minority dart or exactly one,
    and those minority darts are the unit boundary segments.
    """
    if not partition.i1:
        raise EmptyI1("no cusp exceeds the degree threshold")
    missing = partition.i1 - set(cuts)
    if missing:
        raise MissingCut(f"no cut for cusp {min(missing)}")
    extra = set(cuts) - partition.i1
    if extra:
        raise CuspNotInI1(f"cut supplied for small cusp {min(extra)}")

    total = g.num_darts
    side_a = bytearray(total)  # 1 where the dart borders a side-1 arc
    for i in partition.i1:
        cycle = fd.faces[i]
        k = cuts[i].k
        for t in range(k):
            side_a[cycle[t]] = 1

    labels: list[str] = []
    boundary: list[int] = []
    for v in range(g.num_vertices):
        base = 3 * v
        a0, a1, a2 = side_a[base], side_a[base + 1], side_a[base + 2]
        votes = a0 + a1 + a2
        if votes >= 2:
            labels.append("A")
            if votes == 2:
                boundary.append(base + (1 if a1 == 0 else (0 if a0 == 0 else 2)))
        else:
            labels.append("B")
            if votes == 1:
                boundary.append(base + (1 if a1 == 1 else (0 if a0 == 1 else 2)))

    i1_sorted = tuple(sorted(partition.i1))
    cut_list = tuple(cuts[i] for i in i1_sorted)
    eta_total = math.fsum(c.eta_length for c in cut_list)
    boundary_length = float(len(boundary)) + eta_total

    tri_area = math.pi - 3.0
    num_a_triangles = labels.count("A")
    area_a = math.fsum(c.side1_area for c in cut_list) + tri_area * num_a_triangles
    area_b = (
        math.fsum(c.side2_area for c in cut_list)
        + math.fsum(fd.degrees[i] for i in partition.i2)
        + tri_area * (g.num_vertices - num_a_triangles)
    )
    if not (area_a > 0 and area_b > 0):
        raise ParameterOutOfRange("both sides of the division must have positive area")
    h_upper = boundary_length / min(area_a, area_b)

    return Division(
        n=g.n,
        i1=i1_sorted,
        i2=tuple(sorted(partition.i2)),
        cuts=cut_list,
        triangle_labels=tuple(labels),
        boundary_segments=frozenset(boundary),
        boundary_length=boundary_length,
        area_a=area_a,
        area_b=area_b,
        h_upper=h_upper,
    )


def cheeger_upper_bound(
    g: RibbonGraph,
    fd: FaceDecomposition,
    n: int,
    y_factor: float = 1.0,
) -> Division:
    """Full pipeline: partition cusps, cut the large ones, label, measure.

    The returned division is an explicit separating set, so ``h_upper``
    is a true upper bound for the Cheeger constant of the surface.
    """
    if n != g.n:
        raise ValueError(f"n={n} does not match the graph's n={g.n}")
    if not fd.connected:
        raise DisconnectedSurface("the sampled graph is disconnected")
    partition = partition_cusps(fd, n)
    if not partition.i1:
        raise EmptyI1("no cusp exceeds the degree threshold")
    cuts = {
        i: build_cusp_cut(CuspData(i, fd.degrees[i], fd.faces[i]), n, y_factor)
        for i in partition.i1
    }
    return assign_labels(g, fd, partition, cuts)


def certificate(epsilon: float, c: float, l: float, n: int) -> Certificate:
    """Closed-form bound package for the division construction.

    lambda is the asymptotic balance factor of the cusp splits; the
    length bound covers 2n unit segments plus the cut curves; the area
    bound is lambda times the degree mass of large cusps; the quotient
    bound is their limiting ratio (2/3)(1+epsilon)^2.  Also reports the
    probability floor 1 - 2/c for the sampled family the bounds target.
    """
    if epsilon <= 0:
        raise ParameterOutOfRange(f"epsilon must be positive, got {epsilon}")
    if c <= 0:
        raise ParameterOutOfRange(f"c must be positive, got {c}")
    if l <= 0:
        raise ParameterOutOfRange(f"l must be positive, got {l}")
    if n < 3:
        raise ParameterOutOfRange(f"n must be >= 3, got {n}")
    log_n = math.log(n)
    big_m = m_bound(l)
    lambda_ = (
        (1.0 / (2.0 * (1.0 + epsilon) ** 2))
        * (1.0 - 2.0 * c * big_m * log_n**3 / n)
        * (1.0 - log_n**2 * l / n)
    )
    length_bound = 2.0 * n + 3.0 * c * log_n**2
    area_bound = lambda_ * (6.0 - c / log_n) * n
    quotient_bound = (2.0 / 3.0) * (1.0 + epsilon) ** 2
    prob_floor = 1.0 - 2.0 / c
    return Certificate(
        epsilon, c, l, n, lambda_, length_bound, area_bound, quotient_bound, prob_floor
    )


def in_f_star(fd: FaceDecomposition, epsilon_l: float, c: float, n: int) -> bool:
    """Membership in the good family: the large-cusp proxy holds at
    ``epsilon_l`` and the face count is at most c * log n."""
    if c <= 0:
        raise ParameterOutOfRange(f"c must be positive, got {c}")
    if n < 3:
        raise ParameterOutOfRange(f"n must be >= 3, got {n}")
    return fd.min_degree > epsilon_l and fd.lht <= c * math.log(n)


def sum_degrees_i1_bound_check(
    fd: FaceDecomposition,
    partition: CuspPartition,
    c: float,
    n: int,
) -> bool:
    """Check the large-cusp degree mass bound sum_{i1} d_i >= (6 - c/log n) n.

    Valid whenever lht <= c * log n (each small cusp holds at most
    n/(log n)^2 degree mass and there are at most lht of them); callers
    should treat HypothesisNotMet as "skip", not as failure.
    """
    log_n = math.log(n)
    if fd.lht > c * log_n:
        raise HypothesisNotMet(f"lht={fd.lht} exceeds c*log(n)={c * log_n}")
    mass = sum(fd.degrees[i] for i in partition.i1)
    return mass >= (6.0 - c / log_n) * n
