"""Oriented cubic graphs encoded as dart permutation systems.

A graph of size parameter ``n`` has ``2n`` vertices and ``6n`` darts;
dart ``d`` belongs to vertex ``d // 3``.  The vertex rotation is the
same for every graph: at vertex ``v`` the darts ``(3v, 3v+1, 3v+2)``
form a 3-cycle.  A graph is therefore determined by its edge pairing
alone -- a fixed-point-free involution on the darts -- and sampling a
uniform random pairing realises the configuration-model measure on
oriented cubic graphs.

Faces are the orbits of ``rotation o pairing``, i.e. the left-hand-turn
closed walks.  When one ideal hyperbolic triangle is glued per vertex
(sides matched at midpoints, orientation preserved) the faces are the
cusps of the resulting surface, and the face degree is the number of
unit horocycle segments on the cusp's canonical horocycle loop.  Since
every triangle carries three segments, degrees always sum to ``6n``.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "DuplicateDart",
    "SelfPairedDart",
    "WrongDartCount",
    "MaxRejectionsExceeded",
    "RibbonGraph",
    "FaceDecomposition",
    "vertex_of",
    "rotation",
    "derive_seed",
    "from_matching",
    "sample",
    "sample_connected",
    "faces",
]


class DuplicateDart(ValueError):
    """A dart appears in more than one pair of a matching."""

    def __init__(self, dart: int):
        self.dart = dart
        super().__init__(f"dart {dart} appears in more than one pair")


class SelfPairedDart(ValueError):
    """A matching pair of the form (d, d); the pairing must be fixed-point free."""

    def __init__(self, dart: int):
        self.dart = dart
        super().__init__(f"dart {dart} is paired with itself")


class WrongDartCount(ValueError):
    """The matching does not cover [0, 6n) exactly."""

    def __init__(self, dart: int, reason: str):
        self.dart = dart
        super().__init__(f"dart {dart} {reason}")


class MaxRejectionsExceeded(RuntimeError):
    """Rejection sampling for a connected graph exhausted its budget."""


def vertex_of(dart: int) -> int:
    """Vertex owning a dart."""
    return dart // 3


def rotation(dart: int) -> int:
    """Cyclic successor of ``dart`` at its vertex: (3v, 3v+1, 3v+2)."""
    r = dart % 3
    return dart - r + (r + 1) % 3


def derive_seed(*parts: object) -> int:
    """Stable 64-bit sub-seed from a tuple of ints/strings.

    Uses a keyed hash of the decimal representations, so derived seed
    streams are reproducible across processes and platforms.
    """
    text = "/".join(str(p) for p in parts)
    digest = hashlib.blake2b(text.encode("ascii"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


@dataclass(frozen=True)
class RibbonGraph:
    """An oriented cubic graph: size parameter plus edge involution.

    ``matching[d]`` is the dart glued to dart ``d``.  The rotation is
    implicit (the fixed 3-cycles per vertex), so two graphs are equal
    exactly when their matchings are.
    """

    n: int
    matching: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        total = 6 * self.n
        m = self.matching
        if len(m) != total:
            raise WrongDartCount(len(m), f"matching has length {len(m)}, expected {total}")
        for d in range(total):
            e = m[d]
            if e == d:
                raise SelfPairedDart(d)
            if not 0 <= e < total:
                raise WrongDartCount(e, "is outside [0, 6n)")
            if m[e] != d:
                raise DuplicateDart(d)

    @property
    def num_darts(self) -> int:
        return 6 * self.n

    @property
    def num_vertices(self) -> int:
        return 2 * self.n

    @property
    def num_edges(self) -> int:
        return 3 * self.n

    def alpha(self, dart: int) -> int:
        """Edge partner of a dart."""
        return self.matching[dart]

    def phi(self, dart: int) -> int:
        """Face successor: rotation applied to the edge partner."""
        return rotation(self.matching[dart])

    def pairs(self) -> list[tuple[int, int]]:
        """The matching as a sorted list of (low, high) dart pairs."""
        return [(d, self.matching[d]) for d in range(self.num_darts) if d < self.matching[d]]

    def to_json_dict(self) -> dict:
        return {"n": self.n, "matching": [[a, b] for a, b in self.pairs()]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "RibbonGraph":
        return from_matching(int(data["n"]), [tuple(p) for p in data["matching"]])


@dataclass(frozen=True)
class FaceDecomposition:
    """Left-hand-turn faces of a ribbon graph.

    ``faces`` are the orbits of the face permutation, each listed in
    walk order starting from its smallest dart; ``degrees`` are the
    orbit lengths.  ``genus`` is defined only for connected graphs.
    """

    faces: tuple[tuple[int, ...], ...]
    degrees: tuple[int, ...]
    lht: int
    genus: int | None
    connected: bool

    @property
    def min_degree(self) -> int:
        return min(self.degrees)

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    @property
    def sum_degrees(self) -> int:
        return sum(self.degrees)


def from_matching(n: int, matching: Iterable[Sequence[int]]) -> RibbonGraph:
    """Build a validated graph from a list of dart pairs.

    The pairs must cover [0, 6n) exactly once with no self-pairs.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    total = 6 * n
    alpha = [-1] * total
    for pair in matching:
        a, b = pair
        if a == b:
            raise SelfPairedDart(a)
        for d in (a, b):
            if not 0 <= d < total:
                raise WrongDartCount(d, "is outside [0, 6n)")
            if alpha[d] != -1:
                raise DuplicateDart(d)
        alpha[a] = b
        alpha[b] = a
    for d in range(total):
        if alpha[d] == -1:
            raise WrongDartCount(d, "is not covered by any pair")
    return RibbonGraph(n, tuple(alpha))


def sample(n: int, seed: int) -> RibbonGraph:
    """Uniform random graph: a uniform perfect matching on the 6n darts.

    Deterministic function of (n, seed); every matching is equally
    likely, including those with loops and multiple edges.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    total = 6 * n
    rng = random.Random(seed)
    darts = list(range(total))
    rng.shuffle(darts)
    alpha = [0] * total
    for i in range(0, total, 2):
        a, b = darts[i], darts[i + 1]
        alpha[a] = b
        alpha[b] = a
    return RibbonGraph(n, tuple(alpha))


def _is_transitive(matching: Sequence[int], total: int) -> bool:
    """Whether rotation and matching generate a transitive dart action.

    Rotation orbits are the per-vertex dart blocks, so transitivity is
    exactly connectivity of the underlying graph; union-find over the
    vertices via the matched pairs decides it.
    """
    num_vertices = total // 3
    parent = list(range(num_vertices))
    for d in range(total):
        e = matching[d]
        if e < d:
            continue
        a = d // 3
        b = e // 3
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            parent[b] = a
    root = 0
    while parent[root] != root:
        root = parent[root]
    for v in range(num_vertices):
        r = v
        while parent[r] != r:
            parent[r] = parent[parent[r]]
            r = parent[r]
        if r != root:
            return False
    return True


def sample_connected(
    n: int,
    seed: int,
    max_rejections: int = 10_000,
    return_rejections: bool = False,
) -> RibbonGraph | tuple[RibbonGraph, int]:
    """First connected graph along a deterministic seed sequence.

    Attempt 0 reuses ``seed`` itself (so the result agrees with
    ``sample`` whenever that draw is already connected); attempt k > 0
    uses ``derive_seed(seed, k)``.
    """
    for attempt in range(max_rejections + 1):
        s = seed if attempt == 0 else derive_seed(seed, attempt)
        g = sample(n, s)
        if _is_transitive(g.matching, g.num_darts):
            return (g, attempt) if return_rejections else g
    raise MaxRejectionsExceeded(
        f"no connected sample for n={n} after {max_rejections} rejections"
    )


def faces(g: RibbonGraph) -> FaceDecomposition:
    """Trace the left-hand-turn faces of a graph.

    Orbits of the face permutation partition the darts; the face count,
    degrees, connectivity and (when connected) the genus follow from
    the orbit structure via the Euler characteristic.
    """
    total = g.num_darts
    m = g.matching
    seen = bytearray(total)
    orbits: list[tuple[int, ...]] = []
    for start in range(total):
        if seen[start]:
            continue
        cycle = []
        d = start
        while not seen[d]:
            seen[d] = 1
            cycle.append(d)
            e = m[d]
            r = e % 3
            d = e - r + (r + 1) % 3
        orbits.append(tuple(cycle))
    degrees = tuple(len(c) for c in orbits)
    lht = len(orbits)
    assert sum(degrees) == total
    connected = _is_transitive(m, total)
    genus: int | None = None
    if connected:
        # chi = V - E + F = -n + lht for a cubic graph on 2n vertices
        assert (g.n - lht) % 2 == 0
        genus = 1 + (g.n - lht) // 2
        assert genus >= 0
    return FaceDecomposition(tuple(orbits), degrees, lht, genus, connected)
