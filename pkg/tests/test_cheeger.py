from __future__ import annotations

import math

import pytest

from belyi.cheeger import (
    CuspNotInI1,
    DisconnectedSurface,
    EmptyI1,
    HypothesisNotMet,
    MissingCut,
    ParameterOutOfRange,
    assign_labels,
    build_cusp_cut,
    certificate,
    cheeger_upper_bound,
    in_f_star,
    sum_degrees_i1_bound_check,
)
from belyi.cusps import CuspData, cusps_from_faces, partition_cusps, surface_area
from belyi.ribbon import derive_seed, faces, from_matching, sample


def pipeline(n, seed, y_factor=1.0):
    g = sample(n, seed)
    fd = faces(g)
    return g, fd, cheeger_upper_bound(g, fd, n, y_factor)


class TestBuildCuspCut:
    def test_formula_example(self):
        cut = build_cusp_cut(CuspData(0, 100, tuple(range(100))), 1000)
        assert cut.y == 10**5
        assert cut.k == 50
        assert cut.eta_length == pytest.approx(23.026350929940456, rel=1e-14)

    def test_side_areas_conserve_exactly(self):
        for d, n in [(100, 1000), (37, 50), (6001, 2000)]:
            cut = build_cusp_cut(CuspData(0, d, tuple(range(d))), n)
            assert cut.side1_area + cut.side2_area == d

    def test_side_imbalance_small(self):
        for d in (100, 101):
            cut = build_cusp_cut(CuspData(0, d, tuple(range(d))), 1000)
            assert abs(cut.side1_area - cut.side2_area) <= 1 + d / cut.y

    def test_eta_length_cap(self):
        for d, n, yf in [(100, 1000, 1.0), (321, 47, 2.5)]:
            cut = build_cusp_cut(CuspData(0, d, tuple(range(d))), n, yf)
            assert cut.eta_length <= 2 * math.log(n * d * yf) + 1

    def test_eta_eventually_increasing_in_y_factor(self):
        cusp = CuspData(0, 50, tuple(range(50)))
        lengths = [build_cusp_cut(cusp, 100, yf).eta_length for yf in (1, 2, 4, 8, 16)]
        assert all(a < b for a, b in zip(lengths, lengths[1:]))

    def test_arc_term_decreasing_in_y_factor(self):
        cusp = CuspData(0, 50, tuple(range(50)))
        arcs = [
            build_cusp_cut(cusp, 100, yf).k / build_cusp_cut(cusp, 100, yf).y
            for yf in (1, 2, 4)
        ]
        assert arcs[0] > arcs[1] > arcs[2]

    def test_small_cusp_rejected(self):
        with pytest.raises(CuspNotInI1):
            build_cusp_cut(CuspData(0, 2, (0, 1)), 1000)

    def test_bad_parameters(self):
        cusp = CuspData(0, 100, tuple(range(100)))
        with pytest.raises(ParameterOutOfRange):
            build_cusp_cut(cusp, 2)
        with pytest.raises(ParameterOutOfRange):
            build_cusp_cut(cusp, 1000, 0.0)


class TestAssignLabels:
    def test_missing_cut(self):
        g = sample(10, 1)
        fd = faces(g)
        partition = partition_cusps(fd, 10)
        with pytest.raises(MissingCut):
            assign_labels(g, fd, partition, {})

    def test_extra_cut_rejected(self):
        g = sample(10, 1)
        fd = faces(g)
        partition = partition_cusps(fd, 10)
        cusps = cusps_from_faces(fd)
        cuts = {i: build_cusp_cut(cusps[i], 10) for i in partition.i1}
        if partition.i2:
            j = min(partition.i2)
            cuts[j] = cuts[min(partition.i1)]
            with pytest.raises(CuspNotInI1):
                assign_labels(g, fd, partition, cuts)

    def test_majority_rule_against_recount(self):
        # independently rebuild the dart labels and re-derive the boundary
        for seed in range(10):
            g, fd, division = pipeline(30, derive_seed(31, seed))
            partition = partition_cusps(fd, 30)
            dart_is_a = {}
            for i in range(fd.lht):
                cycle = fd.faces[i]
                k = fd.degrees[i] // 2 if i in partition.i1 else 0
                for pos, dart in enumerate(cycle):
                    dart_is_a[dart] = pos < k
            expected_boundary = set()
            for v in range(g.num_vertices):
                trio = [3 * v, 3 * v + 1, 3 * v + 2]
                votes = sum(dart_is_a[d] for d in trio)
                majority_a = votes >= 2
                assert division.triangle_labels[v] == ("A" if majority_a else "B")
                minority = [d for d in trio if dart_is_a[d] != majority_a]
                assert len(minority) <= 1
                expected_boundary.update(minority)
            assert division.boundary_segments == expected_boundary

    def test_unanimous_triangle_contributes_nothing(self):
        for seed in range(5):
            g, fd, division = pipeline(30, derive_seed(77, seed))
            boundary_triangles = {d // 3 for d in division.boundary_segments}
            for v in range(g.num_vertices):
                if v not in boundary_triangles:
                    # all three darts agree with the triangle label
                    assert division.triangle_labels[v] in ("A", "B")
            assert len(division.boundary_segments) <= 2 * g.n

    def test_label_map_covers_domains(self):
        _, fd, division = pipeline(20, 3)
        labels = division.labels
        assert len(labels) == 2 * len(division.i1) + len(division.i2) + 2 * 20
        for i in division.i1:
            assert labels[("cusp_side1", i)] == "A"
            assert labels[("cusp_side2", i)] == "B"
        for i in division.i2:
            assert labels[("cusp", i)] == "B"


class TestCheegerUpperBound:
    def test_area_conservation(self):
        for n, seed in [(10, 4), (100, 5), (1000, 6)]:
            _, _, division = pipeline(n, seed)
            assert division.area_a + division.area_b == pytest.approx(
                surface_area(n), abs=1e-9
            )

    def test_quotient_definition_exact(self):
        _, _, division = pipeline(200, 9)
        assert division.h_upper * min(division.area_a, division.area_b) == pytest.approx(
            division.boundary_length, rel=1e-12
        )

    def test_boundary_length_decomposition(self):
        _, _, division = pipeline(150, 10)
        eta_total = math.fsum(c.eta_length for c in division.cuts)
        assert division.boundary_length == pytest.approx(
            len(division.boundary_segments) + eta_total, rel=1e-12
        )
        assert division.boundary_length <= 2 * 150 + eta_total

    def test_balance_allowance(self):
        for seed in range(10):
            _, fd, division = pipeline(60, derive_seed(41, seed))
            allowance = (
                2 * 60 * (math.pi - 3)
                + len(division.i1)
                + sum(fd.degrees[i] for i in division.i2)
            )
            assert abs(division.area_a - division.area_b) <= allowance + 1e-9

    def test_disconnected_rejected(self):
        g = sample(3, 0)
        fd = faces(g)
        assert not fd.connected
        with pytest.raises(DisconnectedSurface):
            cheeger_upper_bound(g, fd, 3)

    def test_n_mismatch_rejected(self):
        g = sample(5, 3)
        fd = faces(g)
        with pytest.raises(ValueError):
            cheeger_upper_bound(g, fd, 6)

    def test_h_upper_reasonable_at_moderate_n(self):
        _, _, division = pipeline(2000, 12)
        assert 0 < division.h_upper < 1


class TestCertificate:
    def test_quotient_bound(self):
        cert = certificate(0.1, 3, 4, 100)
        assert cert.quotient_bound == pytest.approx(0.8066666666666668, rel=1e-14)

    def test_length_bound(self):
        cert = certificate(0.1, 3, 4, 100)
        assert cert.length_bound == pytest.approx(390.8683319772224, rel=1e-14)

    def test_prob_floor(self):
        assert certificate(0.1, 10, 4, 100).prob_floor == pytest.approx(0.8)

    def test_lambda_limit_half(self):
        cert = certificate(1e-9, 1, 4, 10**12)
        assert cert.lambda_ == pytest.approx(0.5, abs=1e-4)

    def test_area_bound_consistency(self):
        cert = certificate(0.2, 2, 4, 10**6)
        log_n = math.log(10**6)
        assert cert.area_bound == pytest.approx(
            cert.lambda_ * (6 - 2 / log_n) * 10**6, rel=1e-12
        )

    def test_parameter_validation(self):
        with pytest.raises(ParameterOutOfRange):
            certificate(0, 1, 4, 100)
        with pytest.raises(ParameterOutOfRange):
            certificate(0.1, 0, 4, 100)
        with pytest.raises(ParameterOutOfRange):
            certificate(0.1, 1, 0, 100)
        with pytest.raises(ParameterOutOfRange):
            certificate(0.1, 1, 4, 2)


class TestInFStar:
    def test_lht_condition(self):
        fd = faces(from_matching(1, [(0, 3), (1, 4), (2, 5)]))
        # single face of degree 6: proxy holds at l=2, lht=1 <= c log n
        assert in_f_star(fd, 2, 1, 100) is True

    def test_proxy_failure(self):
        fd = faces(from_matching(1, [(0, 3), (1, 5), (2, 4)]))
        assert in_f_star(fd, 4, 10, 100) is False

    def test_lht_cap_binds(self):
        fd = faces(from_matching(1, [(0, 3), (1, 4), (2, 5)]))
        assert in_f_star(fd, 2, 0.01, 100) is False  # 1 > 0.01 * log(100)


class TestDegreeMassBound:
    def test_single_face(self):
        fd = faces(from_matching(1, [(0, 3), (1, 4), (2, 5)]))
        # scale-free check: a single face holds all 6n degree mass
        for n, seed in [(10, 2), (50, 7)]:
            fd = faces(sample(n, seed))
            partition = partition_cusps(fd, n)
            c = fd.lht / math.log(n) + 1e-9
            assert sum_degrees_i1_bound_check(fd, partition, c, n) is True

    def test_monte_carlo(self):
        for seed in range(50):
            n = 200
            fd = faces(sample(n, derive_seed(61, seed)))
            partition = partition_cusps(fd, n)
            c = 10.0
            if fd.lht > c * math.log(n):
                continue
            assert sum_degrees_i1_bound_check(fd, partition, c, n) is True

    def test_hypothesis_not_met(self):
        fd = faces(sample(100, 1))
        partition = partition_cusps(fd, 100)
        with pytest.raises(HypothesisNotMet):
            sum_degrees_i1_bound_check(fd, partition, 1e-6, 100)


class TestEmptyI1:
    def test_error_carries_no_fake_cut(self):
        # a partition with an empty large side must be reported, not patched
        g = sample(10, 1)
        fd = faces(g)
        from belyi.cusps import CuspPartition

        empty = CuspPartition(frozenset(), frozenset(range(fd.lht)), float("inf"))
        with pytest.raises(EmptyI1):
            assign_labels(g, fd, empty, {})

    def test_all_hexagon_surface_has_no_large_cusp(self):
        # honeycomb torus: every face degree 6 < threshold once n >= 170
        m = 14
        n = m * m

        def vert(x, y, side):
            return 2 * ((x % m) * m + (y % m)) + side

        pairs = []
        for x in range(m):
            for y in range(m):
                a = vert(x, y, 0)
                for slot, b in enumerate(
                    [vert(x, y, 1), vert(x - 1, y, 1), vert(x, y - 1, 1)]
                ):
                    pairs.append((3 * a + slot, 3 * b + slot))
        g = from_matching(n, pairs)
        fd = faces(g)
        assert fd.connected
        assert set(fd.degrees) == {6}
        assert fd.genus == 1
        with pytest.raises(EmptyI1):
            cheeger_upper_bound(g, fd, n)
