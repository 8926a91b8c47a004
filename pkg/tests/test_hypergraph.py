import itertools

import pytest

from arrangelab.arrangement import build
from arrangelab.constructions import convex_position, random_simple
from arrangelab.errors import BudgetExceeded, MalformedCertificate, TooLarge
from arrangelab.hypergraph import (
    Certificate,
    Hypergraph,
    cell_zone,
    exact_chromatic_number,
    exact_max_independent_set,
    exact_min_vertex_cover,
    forall_proper_colorings,
    line_cell,
    proper_colorings,
    validate,
    vertex_cell,
)

from oracles import (
    naive_chromatic_number,
    naive_max_independent_set,
    naive_min_vertex_cover,
)


class TestBuilders:
    def test_line_cell_cross(self, cross):
        hg = line_cell(cross)
        assert [sorted(e) for e in hg.edges] == [[0, 1]]
        assert hg.total_multiplicity == 4

    def test_line_cell_triangle(self, triangle):
        hg = line_cell(triangle)
        assert sorted(tuple(sorted(e)) for e in hg.edges) == [
            (0, 1), (0, 1, 2), (0, 2), (1, 2),
        ]
        assert hg.total_multiplicity == 7

    def test_line_cell_convex_contains_full_edge(self):
        arr = build(convex_position(5))
        hg = line_cell(arr)
        assert frozenset(range(5)) in hg.edges

    def test_vertex_cell_cross(self, cross):
        hg = vertex_cell(cross, 2)
        assert [sorted(e) for e in hg.edges] == [[0]]
        assert hg.total_multiplicity == 4

    def test_vertex_cell_triangle(self, triangle):
        coloring_hg = vertex_cell(triangle, 3)
        # only the bounded triangle has three boundary vertices
        assert [sorted(e) for e in coloring_hg.edges] == [[0, 1, 2]]
        covering_hg = vertex_cell(triangle, 2)
        edges = sorted(tuple(sorted(e)) for e in covering_hg.edges)
        assert edges == [(0,), (0, 1), (0, 1, 2), (0, 2), (1,), (1, 2), (2,)]

    def test_cell_zone(self, triangle):
        hg = cell_zone(triangle)
        assert all(len(e) == 6 for e in hg.edges)
        assert hg.total_multiplicity == 3

    def test_cell_zone_cross_dedups_equal_zones(self, cross):
        hg = cell_zone(cross)
        assert len(hg.edges) == 1 and len(hg.edges[0]) == 4
        assert hg.labels[0] == (0, 1)

    def test_hypergraph_json_schema(self, triangle):
        payload = line_cell(triangle).to_json()
        assert list(payload.keys()) == ["num_vertices", "edges", "labels"]
        assert payload["num_vertices"] == 3
        assert all(e == sorted(e) for e in payload["edges"])
        assert len(payload["edges"]) == len(payload["labels"])

    def test_cell_zone_is_dual_of_line_cell(self):
        for n, seed in ((3, 1), (4, 2), (5, 3)):
            arr = build(random_simple(n, seed=seed))
            # raw incidences: line i on cell c's boundary <-> cell c in zone i
            by_cells = {(c.id, i) for c in arr.cells for i in c.boundary_lines}
            by_zones = {(cid, i) for i, zone in enumerate(arr.zones) for cid in zone}
            assert by_cells == by_zones


class TestValidate:
    def test_coloring_ok_and_violation(self, triangle):
        hg = line_cell(triangle)
        good = Certificate(kind="coloring", colors=(0, 1, 2))
        assert validate(hg, good).ok
        bad = Certificate(kind="coloring", colors=(0, 0, 1))
        report = validate(hg, bad)
        assert not report.ok
        assert report.violations[0].edge == (0, 1)

    def test_independent_set(self, triangle):
        hg = line_cell(triangle)
        assert validate(hg, Certificate(kind="independent_set", members=frozenset({0}))).ok
        report = validate(hg, Certificate(kind="independent_set", members=frozenset({0, 1})))
        assert not report.ok and report.violations[0].edge == (0, 1)

    def test_vertex_cover(self, triangle):
        hg = line_cell(triangle)
        assert validate(hg, Certificate(kind="vertex_cover", members=frozenset({1, 2}))).ok
        report = validate(hg, Certificate(kind="vertex_cover", members=frozenset({2})))
        assert not report.ok and report.violations[0].reason == "edge untouched"

    def test_singleton_edges_exempt_for_coloring_only(self):
        hg = Hypergraph.from_edges(2, [[0], [0, 1]], ["a", "b"])
        assert validate(hg, Certificate(kind="coloring", colors=(0, 1))).ok
        cover = validate(hg, Certificate(kind="vertex_cover", members=frozenset({1})))
        assert not cover.ok  # singleton edge still demands coverage

    def test_malformed(self, triangle):
        hg = line_cell(triangle)
        with pytest.raises(MalformedCertificate):
            validate(hg, Certificate(kind="coloring", colors=(0, 1)))
        with pytest.raises(MalformedCertificate):
            validate(hg, Certificate(kind="vertex_cover", members=frozenset({7})))

    def test_dedup_does_not_change_verdicts(self):
        dup = Hypergraph.from_edges(3, [[0, 1], [0, 1], [1, 2]], ["x", "y", "z"])
        plain = Hypergraph.from_edges(3, [[0, 1], [1, 2]], ["x", "z"])
        for cert in (
            Certificate(kind="coloring", colors=(0, 0, 1)),
            Certificate(kind="independent_set", members=frozenset({0, 2})),
            Certificate(kind="vertex_cover", members=frozenset({1})),
        ):
            assert validate(dup, cert).ok == validate(plain, cert).ok


class TestExactSolvers:
    def test_triangle_values(self, triangle):
        hg = line_cell(triangle)
        assert exact_max_independent_set(hg).size == 1
        assert exact_min_vertex_cover(hg).size == 2
        chi, cert = exact_chromatic_number(hg)
        assert chi == 3 and validate(hg, cert).ok

    def test_cross_values(self, cross):
        hg = line_cell(cross)
        assert exact_max_independent_set(hg).size == 1
        assert exact_min_vertex_cover(hg).size == 1
        assert exact_chromatic_number(hg)[0] == 2

    def test_lexicographic_tiebreak(self):
        hg = Hypergraph.from_edges(4, [[0, 1], [2, 3]], ["a", "b"])
        cert = exact_max_independent_set(hg)
        assert sorted(cert.members) == [0, 2]

    def test_vertex_cell_min2_forced_singletons(self, triangle):
        cover = exact_min_vertex_cover(vertex_cell(triangle, 2))
        assert sorted(cover.members) == [0, 1, 2]

    def test_is_bound_two_thirds(self):
        arr = build(random_simple(7, seed=17))
        size = exact_max_independent_set(line_cell(arr)).size
        assert size <= 4  # floor(2*7/3)

    def test_too_large(self):
        hg = Hypergraph.from_edges(30, [[i, i + 1] for i in range(29)], range(29))
        with pytest.raises(TooLarge):
            exact_max_independent_set(hg, limit=24)
        with pytest.raises(TooLarge):
            exact_chromatic_number(hg, limit=24)

    def test_env_override(self, monkeypatch):
        hg = Hypergraph.from_edges(30, [[i, i + 1] for i in range(29)], range(29))
        monkeypatch.setenv("ARRANGE_LAB_LIMIT", "32")
        assert exact_max_independent_set(hg).size == 15

    @pytest.mark.parametrize("n,seed", [(2, 0), (3, 4), (4, 8), (5, 15), (6, 16), (7, 23)])
    def test_against_naive_enumeration(self, n, seed):
        arr = build(random_simple(n, seed=seed))
        for hg in (line_cell(arr), cell_zone(arr)):
            if hg.num_vertices > 12:
                continue
            assert exact_max_independent_set(hg).size == naive_max_independent_set(
                hg.num_vertices, hg.edges
            )
            assert exact_min_vertex_cover(hg).size == naive_min_vertex_cover(
                hg.num_vertices, hg.edges
            )
            if hg.num_vertices <= 8:
                assert exact_chromatic_number(hg)[0] == naive_chromatic_number(
                    hg.num_vertices, hg.edges
                )

    @pytest.mark.parametrize("n,seed", [(4, 3), (5, 6), (6, 10), (8, 2)])
    def test_duality(self, n, seed):
        hg = line_cell(build(random_simple(n, seed=seed)))
        is_cert = exact_max_independent_set(hg)
        vc_cert = exact_min_vertex_cover(hg)
        assert is_cert.size + vc_cert.size == hg.num_vertices
        assert vc_cert.members == frozenset(range(n)) - is_cert.members
        assert validate(hg, is_cert).ok and validate(hg, vc_cert).ok


class TestProperColoringEnumeration:
    def test_cross_two_colorings(self, cross):
        hg = line_cell(cross)
        assert sorted(proper_colorings(hg, 2)) == [(0, 1), (1, 0)]

    def test_triangle_has_none(self, triangle):
        assert list(proper_colorings(line_cell(triangle), 2)) == []

    def test_balance_bound_n6(self):
        arr = build(random_simple(6, seed=0))
        hg = line_cell(arr)
        worst = 0

        def visit(coloring):
            nonlocal worst
            worst = max(worst, coloring.count(0), coloring.count(1))

        count = forall_proper_colorings(hg, 2, visit)
        # n/2 + (sqrt(n-1)-1)/2 for n=6 is 3.618..., so classes cap at 3.
        assert count == 2 and worst == 3

    def test_budget(self, triangle):
        with pytest.raises(BudgetExceeded):
            list(proper_colorings(line_cell(triangle), 3, budget=10))

    def test_balance_bound_on_two_colorable_families(self):
        # tangent families with even counts are 2-colorable, so enumeration
        # is nonempty and exercises the class-size cap for real
        for n in (4, 6, 8):
            hg = line_cell(build(convex_position(n)))
            colorings = list(proper_colorings(hg, 2))
            assert colorings, "even tangent families admit proper 2-colorings"
            for coloring in colorings:
                largest = max(coloring.count(0), coloring.count(1))
                lhs = 2 * largest - n + 1
                assert lhs <= 0 or lhs * lhs <= n - 1

    def test_counts_match_enumeration(self):
        arr = build(random_simple(4, seed=5))
        hg = line_cell(arr)
        slow = [
            col
            for col in itertools.product(range(2), repeat=4)
            if all(len({col[v] for v in e}) > 1 for e in hg.edges if len(e) > 1)
        ]
        assert sorted(proper_colorings(hg, 2)) == sorted(slow)


class TestCertificates:
    def test_normalization(self):
        cert = Certificate(kind="coloring", colors=(5, 2, 5, 7))
        assert cert.normalized().colors == (0, 1, 0, 2)

    def test_json_roundtrip(self):
        col = Certificate(kind="coloring", colors=(0, 1, 0))
        assert Certificate.from_json(col.to_json()) == col
        cov = Certificate(kind="vertex_cover", members=frozenset({2, 0}))
        assert Certificate.from_json(cov.to_json()) == cov
        assert cov.to_json()["set"] == [0, 2]

    def test_kind_payload_mismatch(self):
        with pytest.raises(MalformedCertificate):
            Certificate(kind="coloring", members=frozenset({0}))
        with pytest.raises(MalformedCertificate):
            Certificate(kind="independent_set", colors=(0,))
        with pytest.raises(MalformedCertificate):
            Certificate(kind="banana", colors=(0,))
