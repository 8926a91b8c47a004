import math

import pytest

from arrangelab.arrangement import build
from arrangelab.constructions import convex_position, random_simple
from arrangelab.errors import NotConvexPosition
from arrangelab.heuristics import (
    AlgorithmTrace,
    alternating_convex_coloring,
    greedy_maximal_is_lines,
    iterated_is_coloring,
    pair_cell_cover,
    parity_cell_coloring,
    refined_cell_cover,
    sweep_vertex_coloring,
    vertex_guards,
)
from arrangelab.hypergraph import (
    cell_zone,
    exact_chromatic_number,
    exact_min_vertex_cover,
    line_cell,
    validate,
    vertex_cell,
)


class TestGreedyMaximalIS:
    def test_triangle(self, triangle):
        res = greedy_maximal_is_lines(triangle)
        assert res.result.size == 1
        assert validate(line_cell(triangle), res.result).ok

    def test_cross(self, cross):
        assert greedy_maximal_is_lines(cross).result.size == 1

    def test_sqrt_bound_and_maximality(self):
        for seed in range(10):
            n = 4 + seed
            arr = build(random_simple(n, seed=200 + seed))
            res = greedy_maximal_is_lines(arr)
            hg = line_cell(arr)
            members = res.result.members
            assert 4 * len(members) ** 2 >= n
            assert validate(hg, res.result).ok
            for extra in set(range(n)) - members:
                grown = members | {extra}
                assert any(e <= grown for e in hg.edges), "set was not maximal"

    def test_seeded_shuffle_deterministic(self):
        arr = build(random_simple(9, seed=31))
        a = greedy_maximal_is_lines(arr, order_seed=5)
        b = greedy_maximal_is_lines(arr, order_seed=5)
        assert a.steps == b.steps and a.result == b.result

    def test_trace_replay_and_jsonl(self, triangle):
        res = greedy_maximal_is_lines(triangle)
        assert res.replay() == res.result
        steps = AlgorithmTrace.steps_from_jsonl(res.to_jsonl())
        assert steps == res.steps


class TestIteratedColoring:
    def test_cross_two_colors(self, cross_lines):
        res = iterated_is_coloring(cross_lines, n0=1)
        assert res.metrics["colors_used"] == 2

    def test_triangle_three_colors(self, triangle_lines):
        res = iterated_is_coloring(triangle_lines, n0=1)
        assert res.metrics["colors_used"] == 3
        assert validate(line_cell(build(triangle_lines)), res.result).ok

    def test_n16_bound(self):
        lines = random_simple(16, seed=4)
        res = iterated_is_coloring(lines)
        assert res.metrics["colors_used"] <= 2 * math.isqrt(16) + 4
        assert res.metrics["validated"]

    def test_classes_independent_in_full_hypergraph(self):
        lines = random_simple(10, seed=8)
        res = iterated_is_coloring(lines)
        hg = line_cell(build(lines))
        colors = res.result.colors
        for color in set(colors):
            cls = {i for i, c in enumerate(colors) if c == color}
            assert not any(e <= cls for e in hg.edges)

    def test_exact_variant(self):
        lines = random_simple(8, seed=12)
        res = iterated_is_coloring(lines, use_exact=True)
        assert res.metrics["validated"]

    def test_replay(self):
        lines = random_simple(7, seed=3)
        res = iterated_is_coloring(lines)
        assert res.replay() == res.result


class TestAlternatingConvex:
    def test_three_lines_pattern(self):
        cert = alternating_convex_coloring(convex_position(3))
        assert cert.colors == (0, 1, 0)
        # the extreme-slope cell is monochromatic: improper for odd counts
        report = validate(line_cell(build(convex_position(3))), cert)
        assert not report.ok
        assert report.violations[0].edge == (0, 2)

    def test_five_lines_classes(self):
        cert = alternating_convex_coloring(convex_position(5))
        assert cert.colors == (0, 1, 0, 1, 0)
        sizes = sorted((cert.colors.count(0), cert.colors.count(1)))
        assert sizes == [2, 3]

    def test_even_counts_proper(self):
        for n in (2, 4, 6, 8):
            lines = convex_position(n)
            cert = alternating_convex_coloring(lines)
            assert validate(line_cell(build(lines)), cert).ok

    def test_single_line(self):
        cert = alternating_convex_coloring(convex_position(1))
        assert cert.colors == (0,)
        assert validate(line_cell(build(convex_position(1))), cert).ok

    def test_rejects_non_convex(self):
        lines = random_simple(6, seed=19)
        with pytest.raises(NotConvexPosition):
            alternating_convex_coloring(lines)

    def test_odd_counts_have_no_proper_two_coloring(self):
        for n in (3, 5):
            chi, _ = exact_chromatic_number(line_cell(build(convex_position(n))))
            assert chi == 3


class TestSweepColoring:
    def test_triangle_three_distinct(self, triangle):
        res = sweep_vertex_coloring(triangle)
        assert sorted(res.three_coloring.colors) == [0, 1, 2]
        assert res.tri_failures == ()
        assert validate(vertex_cell(triangle, 3), res.two_coloring).ok

    def test_cross_vacuous(self, cross):
        res = sweep_vertex_coloring(cross)
        assert res.three_coloring.colors == (0,)
        assert validate(vertex_cell(cross, 3), res.two_coloring).ok

    def test_line_neighbors_always_differ(self):
        # property of the greedy pass; the trichromatic repair may relax it
        for seed in range(6):
            arr = build(random_simple(6 + seed, seed=300 + seed))
            colors = sweep_vertex_coloring(arr, repair=False).three_coloring.colors
            for v in arr.vertices:
                for prev in v.left_neighbor_on_line.values():
                    if prev is not None:
                        assert colors[v.id] != colors[prev]

    def test_bounded_cells_always_trichromatic(self):
        for seed in range(8):
            arr = build(random_simple(5 + seed, seed=400 + seed))
            res = sweep_vertex_coloring(arr, repair=False)
            colors = res.three_coloring.colors
            for cell in arr.cells:
                if cell.bounded and len(cell.boundary_vertices) >= 3:
                    assert len({colors[v] for v in cell.boundary_vertices}) == 3

    def test_merged_proper_over_trials(self):
        for seed in range(12):
            arr = build(random_simple(4 + seed % 8, seed=500 + seed))
            res = sweep_vertex_coloring(arr)
            assert validate(vertex_cell(arr, 3), res.two_coloring).ok

    def test_determinism(self):
        arr = build(random_simple(9, seed=77))
        a = sweep_vertex_coloring(arr)
        b = sweep_vertex_coloring(arr)
        assert a.three_coloring == b.three_coloring
        assert a.trace.steps == b.trace.steps

    def test_trace_replay_survives_repair(self):
        # find an instance where the greedy pass fails and repair rewrites it
        for seed in range(40):
            arr = build(random_simple(5 + seed % 6, seed=seed))
            res = sweep_vertex_coloring(arr)
            assert res.trace.replay() == res.three_coloring
            if res.repaired:
                break
        else:
            raise AssertionError("no repaired instance found in the sample")


class TestVertexGuards:
    def test_triangle_all_vertices(self, triangle):
        res = vertex_guards(triangle)
        assert sorted(res.result.members) == [0, 1, 2]

    def test_cross_single_vertex(self, cross):
        res = vertex_guards(cross)
        assert sorted(res.result.members) == [0]

    @pytest.mark.parametrize("n,seed", [(5, 1), (8, 2), (10, 3), (12, 4)])
    def test_valid_and_bounded(self, n, seed):
        arr = build(random_simple(n, seed=600 + seed))
        res = vertex_guards(arr)
        assert validate(vertex_cell(arr, 2), res.result).ok
        assert 6 * res.result.size <= n * n + 12 * n
        assert res.replay() == res.result


class TestParityColoring:
    def test_cross_checkerboard(self, cross):
        cert = parity_cell_coloring(cross)
        assert sorted(cert.colors) == [0, 0, 1, 1]
        assert validate(cell_zone(cross), cert).ok

    def test_triangle(self, triangle):
        assert validate(cell_zone(triangle), parity_cell_coloring(triangle)).ok

    @pytest.mark.parametrize("seed", range(6))
    def test_random_proper(self, seed):
        arr = build(random_simple(3 + seed, seed=700 + seed))
        cert = parity_cell_coloring(arr)
        assert validate(cell_zone(arr), cert).ok
        dual_sep = {(a, b) for a, b, _ in arr.dual_edges}
        for a, b in dual_sep:
            assert cert.colors[a] != cert.colors[b]


class TestPairCover:
    def test_cross_one_cell(self, cross):
        assert pair_cell_cover(cross).result.size == 1

    def test_triangle(self, triangle):
        res = pair_cell_cover(triangle)
        assert res.result.size <= 2
        assert validate(cell_zone(triangle), res.result).ok

    @pytest.mark.parametrize("n,seed", [(5, 5), (9, 6), (12, 7)])
    def test_bound_and_validity(self, n, seed):
        arr = build(random_simple(n, seed=800 + seed))
        res = pair_cell_cover(arr)
        assert validate(cell_zone(arr), res.result).ok
        assert 2 * res.result.size <= n + 1
        assert res.result.size * res.metrics["max_cell_size"] >= n
        assert res.replay() == res.result


class TestRefinedCover:
    def test_triangle_single_cell(self, triangle):
        res = refined_cell_cover(triangle)
        assert res.result.size == 1
        assert res.metrics["phase_counts"][1] == 0
        assert res.metrics["phase_counts"][2] == 1

    def test_cross(self, cross):
        assert refined_cell_cover(cross).result.size == 1

    @pytest.mark.parametrize("n,seed", [(6, 1), (12, 2), (20, 3)])
    def test_validity_and_metrics(self, n, seed):
        arr = build(random_simple(n, seed=900 + seed))
        res = refined_cell_cover(arr)
        assert validate(cell_zone(arr), res.result).ok
        assert res.result.size * res.metrics["max_cell_size"] >= n
        assert res.metrics["ceil_half_reference"] == (n + 1) // 2
        assert res.replay() == res.result

    @pytest.mark.parametrize("n,seed", [(5, 11), (7, 12), (8, 13)])
    def test_never_below_exact(self, n, seed):
        arr = build(random_simple(n, seed=arr_seed(seed)))
        hg = cell_zone(arr)
        exact = exact_min_vertex_cover(hg, limit=len(arr.cells))
        assert refined_cell_cover(arr).result.size >= exact.size
        assert pair_cell_cover(arr).result.size >= exact.size


def arr_seed(seed):
    return 1000 + seed
