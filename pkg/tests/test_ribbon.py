from __future__ import annotations

import random

import pytest
from scipy.stats import chi2

from belyi.ribbon import (
    DuplicateDart,
    MaxRejectionsExceeded,
    SelfPairedDart,
    WrongDartCount,
    derive_seed,
    faces,
    from_matching,
    rotation,
    sample,
    sample_connected,
    vertex_of,
)

THETA_TORUS = [(0, 3), (1, 4), (2, 5)]  # parallel cyclic orders at the two vertices
THETA_SPHERE = [(0, 3), (1, 5), (2, 4)]  # opposite cyclic orders


def all_matchings(elements: list[int]):
    """Every perfect matching of an even-sized list, by brute recursion."""
    if not elements:
        yield []
        return
    first = elements[0]
    for i in range(1, len(elements)):
        partner = elements[i]
        rest = elements[1:i] + elements[i + 1 :]
        for rest_match in all_matchings(rest):
            yield [(first, partner)] + rest_match


def naive_face_orbits(n: int, pairs: list[tuple[int, int]]) -> list[tuple[int, ...]]:
    """Independent orbit tracer: explicit permutation dicts, no shared code."""
    total = 6 * n
    alpha = {}
    for a, b in pairs:
        alpha[a] = b
        alpha[b] = a
    sigma = {d: 3 * (d // 3) + (d % 3 + 1) % 3 for d in range(total)}
    phi = {d: sigma[alpha[d]] for d in range(total)}
    orbits = []
    remaining = set(range(total))
    while remaining:
        start = min(remaining)
        cyc = [start]
        d = phi[start]
        while d != start:
            cyc.append(d)
            d = phi[d]
        remaining -= set(cyc)
        orbits.append(tuple(cyc))
    return orbits


class TestDartConventions:
    def test_vertex_blocks(self):
        assert [vertex_of(d) for d in range(6)] == [0, 0, 0, 1, 1, 1]

    def test_rotation_is_three_cycles(self):
        for v in range(4):
            base = 3 * v
            assert rotation(base) == base + 1
            assert rotation(base + 1) == base + 2
            assert rotation(base + 2) == base


class TestFromMatching:
    def test_theta_graph_valid(self):
        g = from_matching(1, THETA_TORUS)
        assert g.n == 1
        assert g.num_vertices == 2 and g.num_edges == 3 and g.num_darts == 6
        assert g.pairs() == THETA_TORUS

    def test_self_paired_dart(self):
        with pytest.raises(SelfPairedDart) as err:
            from_matching(1, [(0, 0), (1, 4), (2, 5)])
        assert err.value.dart == 0

    def test_wrong_dart_count_missing(self):
        with pytest.raises(WrongDartCount):
            from_matching(2, [(0, 3), (1, 4), (2, 5), (6, 9), (7, 10)])

    def test_wrong_dart_count_out_of_range(self):
        with pytest.raises(WrongDartCount) as err:
            from_matching(1, [(0, 3), (1, 4), (2, 6)])
        assert err.value.dart == 6

    def test_duplicate_dart(self):
        with pytest.raises(DuplicateDart) as err:
            from_matching(1, [(0, 3), (0, 4), (2, 5)])
        assert err.value.dart == 0

    def test_json_round_trip(self):
        g = sample(4, 99)
        assert from_matching(4, g.to_json_dict()["matching"]) == g


class TestSample:
    def test_deterministic(self):
        assert sample(1, 42) == sample(1, 42)
        assert sample(100, 7) == sample(100, 7)

    def test_closure_under_validation(self):
        g = sample(100, 7)
        assert from_matching(100, g.pairs()) == g

    def test_uniform_over_the_15_matchings(self):
        # brute-force enumeration is the oracle for the sample space
        space = {tuple(sorted(tuple(sorted(p)) for p in m)) for m in all_matchings(list(range(6)))}
        assert len(space) == 15
        trials = 100_000
        counts: dict[tuple, int] = {m: 0 for m in space}
        for seed in range(trials):
            g = sample(1, seed)
            counts[tuple(g.pairs())] += 1
        expected = trials / 15
        stat = sum((c - expected) ** 2 / expected for c in counts.values())
        # 99.9% critical value of chi-square with 14 degrees of freedom
        assert stat < chi2.ppf(0.999, df=14)

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            sample(0, 1)


class TestFaces:
    def test_sphere_orientation(self):
        fd = faces(from_matching(1, THETA_SPHERE))
        assert fd.lht == 3
        assert fd.genus == 0
        assert sorted(fd.degrees) == [2, 2, 2]
        assert fd.connected

    def test_torus_orientation(self):
        fd = faces(from_matching(1, THETA_TORUS))
        assert fd.lht == 1
        assert fd.genus == 1
        assert fd.degrees == (6,)
        assert fd.connected

    def test_degree_sum_and_partition_of_darts(self):
        for seed in range(20):
            g = sample(25, seed)
            fd = faces(g)
            assert fd.sum_degrees == 6 * g.n
            seen = sorted(d for cycle in fd.faces for d in cycle)
            assert seen == list(range(g.num_darts))

    def test_euler_identity_on_connected_samples(self):
        for seed in range(40):
            g = sample(12, seed)
            fd = faces(g)
            if fd.connected:
                assert fd.genus is not None
                assert 2 - 2 * fd.genus == 2 * g.n - 3 * g.n + fd.lht
                assert fd.genus >= 0
            else:
                assert fd.genus is None

    def test_cycles_anchored_at_minimal_dart(self):
        fd = faces(sample(10, 3))
        for cycle in fd.faces:
            assert cycle[0] == min(cycle)

    @pytest.mark.parametrize("n", [1, 2])
    def test_orbit_oracle_exhaustive(self, n):
        for m in all_matchings(list(range(6 * n))):
            pairs = [tuple(sorted(p)) for p in m]
            fd = faces(from_matching(n, pairs))
            oracle = naive_face_orbits(n, pairs)
            assert sorted(fd.faces) == sorted(oracle)

    def test_orbit_oracle_sampled(self):
        for seed in range(10):
            g = sample(5, seed)
            fd = faces(g)
            assert sorted(fd.faces) == sorted(naive_face_orbits(5, g.pairs()))

    def test_relabeling_invariance(self):
        rng = random.Random(2024)
        for seed in range(15):
            n = rng.choice([3, 5, 8])
            g = sample(n, seed)
            fd = faces(g)
            # rotation-preserving dart bijection: permute vertices, spin corners
            perm = list(range(2 * n))
            rng.shuffle(perm)
            spin = [rng.randrange(3) for _ in range(2 * n)]
            psi = [3 * perm[d // 3] + (d % 3 + spin[d // 3]) % 3 for d in range(6 * n)]
            conj = [0] * (6 * n)
            for d in range(6 * n):
                conj[psi[d]] = psi[g.matching[d]]
            fd2 = faces(from_matching(n, [(d, conj[d]) for d in range(6 * n) if d < conj[d]]))
            assert fd2.lht == fd.lht
            assert fd2.connected == fd.connected
            assert fd2.genus == fd.genus
            assert sorted(fd2.degrees) == sorted(fd.degrees)


class TestSampleConnected:
    def test_always_connected_at_n1(self):
        for m in all_matchings(list(range(6))):
            assert faces(from_matching(1, m)).connected

    def test_deterministic(self):
        assert sample_connected(2, 5) == sample_connected(2, 5)

    def test_agrees_with_sample_when_first_draw_connected(self):
        g = sample(5, 3)
        assert faces(g).connected
        assert sample_connected(5, 3) == g

    def test_skips_disconnected_draw(self):
        # seed 0 at n=3 gives a disconnected sample
        assert not faces(sample(3, 0)).connected
        g, rejections = sample_connected(3, 0, return_rejections=True)
        assert rejections >= 1
        assert faces(g).connected

    def test_large_sample_connected(self):
        g = sample_connected(1000, 3)
        assert faces(g).connected

    def test_rejection_budget(self):
        with pytest.raises(MaxRejectionsExceeded):
            sample_connected(3, 0, max_rejections=0)


class TestDeriveSeed:
    def test_stable_and_distinct(self):
        assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
        seen = {derive_seed(0, n, t) for n in range(10) for t in range(10)}
        assert len(seen) == 100
