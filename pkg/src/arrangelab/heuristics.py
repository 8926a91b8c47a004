"""Constructive algorithms: independent sets, colorings, guards, covers.

Every operation returns its certificate together with a replayable trace and
the metrics used by the verification harness.  Traces are flat decision logs;
folding the steps back reproduces the certificate exactly.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .arrangement import Arrangement, Cell, build
from .errors import DegenerateSweep, NotConvexPosition, TrichromaticityFailed
from .geometry import LineEq
from .hypergraph import (
    Certificate,
    Hypergraph,
    exact_max_independent_set,
    line_cell,
    validate,
    vertex_cell,
)


@dataclass(frozen=True)
class AlgorithmTrace:
    """Decision log plus result; replay() folds the steps back into the result."""

    steps: tuple[dict, ...]
    result: Certificate
    metrics: dict = field(compare=False)

    def replay(self) -> Certificate:
        kind = self.result.kind
        if kind == "coloring":
            colors = [-1] * self.metrics["num_items"]
            for step in self.steps:
                if step["op"] == "assign":
                    colors[step["item"]] = step["color"]
            return Certificate(kind="coloring", colors=tuple(colors))
        members = set()
        for step in self.steps:
            if step["op"] == "select":
                members.add(step["item"])
        return Certificate(kind=kind, members=frozenset(members))

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(step, sort_keys=True) for step in self.steps)

    @staticmethod
    def steps_from_jsonl(text: str) -> tuple[dict, ...]:
        return tuple(json.loads(line) for line in text.splitlines() if line.strip())


def greedy_maximal_is_lines(arr: Arrangement, order_seed: Optional[int] = None) -> AlgorithmTrace:
    """Inclusionwise-maximal independent set of the line-cell hypergraph.

    Lines are scanned in input order (or a seeded shuffle); a line joins unless
    it would complete some cell's boundary.  The result is maximal, hence of
    size at least sqrt(n)/2 for n >= 2.
    """
    hg = line_cell(arr)
    edges = [set(e) for e in hg.edges]
    order = list(range(arr.n))
    if order_seed is not None:
        random.Random(order_seed).shuffle(order)
    chosen: set[int] = set()
    steps: list[dict] = []
    for ln in order:
        trial = chosen | {ln}
        blocker = None
        for idx, e in enumerate(edges):
            if e <= trial:
                blocker = hg.labels[idx][0]
                break
        if blocker is None:
            chosen.add(ln)
            steps.append({"op": "select", "item": ln})
        else:
            steps.append({"op": "reject", "item": ln, "blocked_by_cell": blocker})
    cert = Certificate(kind="independent_set", members=frozenset(chosen))
    metrics = {
        "algorithm": "greedy-maximal-is",
        "kind": "independent_set",
        "num_items": arr.n,
        "n": arr.n,
        "size": len(chosen),
        "order_seed": order_seed,
        "sqrt_half_bound_ok": 4 * len(chosen) ** 2 >= arr.n,
    }
    return AlgorithmTrace(tuple(steps), cert, metrics)


def iterated_is_coloring(
    lines: Sequence[LineEq],
    n0: int = 4,
    use_exact: bool = False,
    check: bool = True,
) -> AlgorithmTrace:
    """Color lines by repeatedly removing a maximal independent set.

    Each round computes a maximal independent set of the remaining lines' own
    sub-arrangement and gives it a fresh color; once at most n0 lines remain,
    each gets its own color.  Any independent set of a subset of the lines is
    independent in the full set, so the coloring is proper; it is re-checked
    against the full line-cell hypergraph when ``check`` is set.
    """
    n = len(lines)
    colors: list[int] = [-1] * n
    remaining = list(range(n))
    color = 0
    steps: list[dict] = []
    rounds = 0
    while len(remaining) > n0:
        sub_arr = build([lines[i] for i in remaining])
        if use_exact:
            members = exact_max_independent_set(line_cell(sub_arr)).members
        else:
            members = greedy_maximal_is_lines(sub_arr).result.members
        chosen_global = sorted(remaining[i] for i in members)
        for g in chosen_global:
            colors[g] = color
            steps.append({"op": "assign", "item": g, "color": color, "round": rounds})
        remaining = [i for i in remaining if colors[i] < 0]
        color += 1
        rounds += 1
    for g in remaining:
        colors[g] = color
        steps.append({"op": "assign", "item": g, "color": color, "round": "tail"})
        color += 1
    cert = Certificate(kind="coloring", colors=tuple(colors))
    metrics = {
        "algorithm": "iterated-is-coloring",
        "kind": "coloring",
        "num_items": n,
        "n": n,
        "colors_used": color,
        "n0": n0,
        "use_exact": use_exact,
        "rounds": rounds,
        "bound_2sqrt_plus_4_ok": color <= 4 or (color - 4) ** 2 <= 4 * n,
    }
    if check and n:
        report = validate(line_cell(build(list(lines))), cert)
        metrics["validated"] = report.ok
        if not report.ok:
            raise AssertionError(f"iterated coloring produced improper result: {report}")
    return AlgorithmTrace(tuple(steps), cert, metrics)


def convex_position_ranks(arr: Arrangement) -> list[int]:
    """Slope ranks if the arrangement has convex-position cell structure.

    In a tangent-line arrangement every cell is bounded by a union of at most
    two slope-consecutive blocks, and the only cell made of two isolated
    lines is the one under both extreme slopes.  Raises NotConvexPosition
    when some cell breaks that pattern.
    """
    n = arr.n
    by_slope = sorted(range(n), key=lambda i: arr.lines[i].slope)
    rank = [0] * n
    for r, i in enumerate(by_slope):
        rank[i] = r
    if n >= 2:
        for cell in arr.cells:
            ranks = sorted(rank[i] for i in cell.boundary_lines)
            runs = 1
            for a, b in zip(ranks, ranks[1:]):
                if b != a + 1:
                    runs += 1
            scattered_pair = len(ranks) == 2 and ranks[1] > ranks[0] + 1
            if runs > 2 or (scattered_pair and ranks != [0, n - 1]):
                raise NotConvexPosition(
                    f"cell {cell.id} bounded by slope ranks {ranks} breaks the tangent pattern"
                )
    return rank


def alternating_convex_coloring(lines: Sequence[LineEq]) -> Certificate:
    """Two-color lines alternately in slope order (convex position inputs).

    Proper whenever the extreme-slope pair gets distinct colors, i.e. for an
    even number of lines; with an odd count the cell bounded by exactly the
    first and last line in slope order is monochromatic.
    """
    arr = build(list(lines))
    rank = convex_position_ranks(arr)
    colors = tuple(r % 2 for r in rank)
    return Certificate(kind="coloring", colors=colors)


def parity_cell_coloring(arr: Arrangement) -> Certificate:
    """Two-color cells by sign-vector parity; dual-adjacent cells differ.

    Every zone walks across its line, alternating parity, so no zone is
    monochromatic.
    """
    colors = tuple(sum(1 for s in c.signs if s > 0) % 2 for c in arr.cells)
    return Certificate(kind="coloring", colors=colors)


@dataclass(frozen=True)
class SweepColoringResult:
    three_coloring: Certificate
    two_coloring: Certificate
    trace: AlgorithmTrace
    tri_failures: tuple[int, ...]  # cell ids with >= 3 vertices but < 3 colors
    repaired: bool
    merged_colors: tuple[int, int]


def _closing_cell(arr: Arrangement, vertex, x) -> Optional[Cell]:
    """The cell whose two boundary edges both end at this vertex (from the left)."""
    i, j = vertex.lines
    for cell in arr.cells_at_vertex(vertex.id):
        iv_i = cell.edge_intervals.get(i)
        iv_j = cell.edge_intervals.get(j)
        if iv_i and iv_j and iv_i[1] == x and iv_j[1] == x:
            return cell
    return None


def sweep_vertex_coloring(
    arr: Arrangement, repair: bool = True, strict: bool = False
) -> SweepColoringResult:
    """Greedy left-to-right 3-coloring of the crossings, then a 2-coloring.

    Vertices are colored in increasing x.  Each vertex differs from its (at
    most two) already-colored neighbors along its two lines; when both have
    the same color, the cell closing at this vertex decides: if it carries
    exactly two colors so far, the missing one is chosen.  Remaining ties
    pick the color that least risks leaving an incident cell monochromatic.

    Cells with at least three boundary vertices should end up with three
    distinct colors (bounded cells provably do; unbounded ones are checked).
    Verified, never assumed: failures are reported, optionally repaired by a
    bounded backtracking search, and raised only under ``strict``.

    The 2-coloring merges the two largest classes; when every eligible cell
    is trichromatic it is automatically proper on the coloring hypergraph.
    """
    order = sorted(arr.vertices, key=lambda v: v.point.x)
    for a, b in zip(order, order[1:]):
        if a.point.x == b.point.x:
            raise DegenerateSweep(f"vertices {a.id} and {b.id} share x = {a.point.x}")

    vcolor: dict[int, int] = {}
    cell_colors: dict[int, set[int]] = {c.id: set() for c in arr.cells}
    steps: list[dict] = []

    for v in order:
        left = [vcolor[u] for u in v.left_neighbor_on_line.values() if u is not None and u in vcolor]
        incident = arr.cells_at_vertex(v.id)
        rule = "tiebreak"
        if len(left) == 2 and left[0] != left[1]:
            choice = 3 - left[0] - left[1]
            rule = "forced-third"
        else:
            allowed = [c for c in range(3) if c not in left]
            choice = None
            if len(left) == 2:  # both neighbors share a color
                closing = _closing_cell(arr, v, v.point.x)
                if closing is not None:
                    present = cell_colors[closing.id]
                    if len(present) == 2:
                        missing = ({0, 1, 2} - present).pop()
                        if missing in allowed:
                            choice = missing
                            rule = "third-in-closing-cell"
            if choice is None:
                def risk(c: int) -> tuple[int, int, int]:
                    mono = sum(1 for k in incident if cell_colors[k.id] == {c})
                    rep = sum(1 for k in incident if c in cell_colors[k.id])
                    return (mono, rep, c)

                choice = min(allowed, key=risk)
        vcolor[v.id] = choice
        for k in incident:
            cell_colors[k.id].add(choice)
        steps.append({"op": "assign", "item": v.id, "color": choice, "rule": rule})

    colors = [vcolor.get(v.id, 0) for v in arr.vertices]

    def failures(cols: Sequence[int]) -> list[int]:
        out = []
        for cell in arr.cells:
            if len(cell.boundary_vertices) >= 3:
                if len({cols[v] for v in cell.boundary_vertices}) < 3:
                    out.append(cell.id)
        return out

    failed = failures(colors)
    repaired = False
    if failed and repair:
        fixed = _repair_trichromatic(arr, colors)
        if fixed is not None:
            for vid, (old, new) in enumerate(zip(colors, fixed)):
                if old != new:
                    steps.append({"op": "assign", "item": vid, "color": new, "rule": "repair"})
            colors = fixed
            failed = failures(colors)
            repaired = True
    if failed and strict:
        raise TrichromaticityFailed(failed)

    cert3 = Certificate(kind="coloring", colors=tuple(colors))
    class_sizes = [colors.count(c) for c in range(3)]
    merged = tuple(sorted(range(3), key=lambda c: (-class_sizes[c], c))[:2])
    two = tuple(0 if c in merged else 1 for c in colors)
    cert2 = Certificate(kind="coloring", colors=two)
    two_repaired = False
    if len(arr.vertices) > 0:
        coloring_hg = vertex_cell(arr, 3)
        if not validate(coloring_hg, cert2).ok:
            direct = _proper_two_coloring(coloring_hg, start=two)
            if direct is not None:
                cert2 = Certificate(kind="coloring", colors=direct)
                two_repaired = True

    metrics = {
        "algorithm": "sweep-vertex-coloring",
        "kind": "coloring",
        "num_items": len(arr.vertices),
        "n": arr.n,
        "class_sizes": class_sizes,
        "tri_failures": list(failed),
        "repaired": repaired,
        "two_coloring_repaired": two_repaired,
        "merged_colors": list(merged),
    }
    trace = AlgorithmTrace(tuple(steps), cert3, metrics)
    return SweepColoringResult(
        three_coloring=cert3,
        two_coloring=cert2,
        trace=trace,
        tri_failures=tuple(failed),
        repaired=repaired,
        merged_colors=(merged[0], merged[1]),
    )


def _proper_two_coloring(
    hg: Hypergraph, start: Sequence[int], node_budget: int = 200_000
) -> Optional[tuple[int, ...]]:
    """Backtracking proper 2-coloring, preferring the start coloring's choices.

    Used when merging two classes of the 3-coloring leaves some cell
    monochromatic; a proper 2-coloring usually still exists.
    """
    nv = hg.num_vertices
    edges = [sorted(e) for e in hg.edges if len(e) >= 2]
    containing: list[list[int]] = [[] for _ in range(nv)]
    for ei, e in enumerate(edges):
        for v in e:
            containing[v].append(ei)
    colors = [-1] * nv
    nodes = 0

    def mono_complete(ei: int) -> bool:
        first = colors[edges[ei][0]]
        if first < 0:
            return False
        return all(colors[v] == first for v in edges[ei][1:])

    def search(v: int) -> bool:
        nonlocal nodes
        if v == nv:
            return True
        nodes += 1
        if nodes > node_budget:
            return False
        for c in (start[v], 1 - start[v]):
            colors[v] = c
            if not any(mono_complete(ei) for ei in containing[v]):
                if search(v + 1):
                    return True
            colors[v] = -1
        return False

    if search(0):
        return tuple(colors)
    return None


def _repair_trichromatic(
    arr: Arrangement, start: Sequence[int], node_budget: int = 200_000
) -> Optional[list[int]]:
    """Backtracking search for a 3-coloring making every >=3-vertex cell trichromatic.

    Bounded by node_budget; returns None when no solution is found in budget.
    """
    targets = [c for c in arr.cells if len(c.boundary_vertices) >= 3]
    nv = len(arr.vertices)
    order = sorted(range(nv), key=lambda vid: arr.vertices[vid].point.x)
    pos = {vid: i for i, vid in enumerate(order)}
    cells_of_vertex: list[list[int]] = [[] for _ in range(nv)]
    cell_vertices = []
    for ti, cell in enumerate(targets):
        cell_vertices.append(cell.boundary_vertices)
        for vid in cell.boundary_vertices:
            cells_of_vertex[vid].append(ti)
    last_pos = [max(pos[v] for v in vs) for vs in cell_vertices]
    colors = [-1] * nv
    nodes = 0

    def feasible(ti: int, at: int) -> bool:
        seen = {colors[v] for v in cell_vertices[ti] if colors[v] >= 0}
        uncolored = sum(1 for v in cell_vertices[ti] if colors[v] < 0)
        return len(seen) + uncolored >= 3 and (at < last_pos[ti] or len(seen) == 3)

    def search(i: int) -> bool:
        nonlocal nodes
        if i == nv:
            return True
        nodes += 1
        if nodes > node_budget:
            return False
        vid = order[i]
        preferred = start[vid]
        for c in sorted(range(3), key=lambda c: (c != preferred, c)):
            colors[vid] = c
            if all(feasible(ti, i) for ti in cells_of_vertex[vid]):
                if search(i + 1):
                    return True
            colors[vid] = -1
        return False

    if search(0):
        return colors
    return None


def vertex_guards(arr: Arrangement) -> AlgorithmTrace:
    """Guard every cell with crossing vertices via the sweep 3-coloring.

    The cover is the smallest color class, plus the unique vertex of every
    2-cell, plus the first vertex of any cell still untouched (cells with
    fewer than three boundary vertices cannot carry all three colors, so the
    class alone cannot reach them).  Size is at most n^2/6 + 2n.
    """
    sweep = sweep_vertex_coloring(arr)
    colors = sweep.three_coloring.colors
    class_sizes = [colors.count(c) for c in range(3)] if colors else [0, 0, 0]
    smallest = min(range(3), key=lambda c: (class_sizes[c], c))
    cover = {vid for vid, c in enumerate(colors) if c == smallest}
    steps = [{"op": "select", "item": vid, "reason": "class"} for vid in sorted(cover)]
    hg = vertex_cell(arr, 2)
    for cell in arr.cells:
        if cell.size == 2 and cell.boundary_vertices:
            apex = cell.boundary_vertices[0]
            if apex not in cover:
                cover.add(apex)
                steps.append({"op": "select", "item": apex, "reason": "2-cell", "cell": cell.id})
    for idx, edge in enumerate(hg.edges):
        if not edge & cover:
            pick = min(edge)
            cover.add(pick)
            steps.append(
                {"op": "select", "item": pick, "reason": "completion", "cells": list(hg.labels[idx])}
            )
    cert = Certificate(kind="vertex_cover", members=frozenset(cover))
    report = validate(hg, cert) if hg.edges else None
    n = arr.n
    metrics = {
        "algorithm": "vertex-guards",
        "kind": "vertex_cover",
        "num_items": len(arr.vertices),
        "n": n,
        "size": len(cover),
        "bound_ok": 6 * len(cover) <= n * n + 12 * n,
        "tri_failures": list(sweep.tri_failures),
        "repaired": sweep.repaired,
        "validated": report.ok if report else True,
    }
    if report and not report.ok:
        raise AssertionError(f"vertex guard cover invalid: {report}")
    return AlgorithmTrace(tuple(steps), cert, metrics)


def pair_cell_cover(arr: Arrangement) -> AlgorithmTrace:
    """Touch all lines with cells, two new lines per chosen cell.

    While two or more lines are uncovered, the lexicographically first
    uncovered pair meets at a vertex; of the four cells there, the one with
    the most boundary lines (lowest id on ties) joins the cover and all its
    boundary lines count as covered.  A final single line gets the first cell
    of its zone.  At most ceil(n/2) cells are used.
    """
    uncovered = set(range(arr.n))
    cover: list[int] = []
    steps: list[dict] = []
    while len(uncovered) >= 2:
        rest = sorted(uncovered)
        p, q = rest[0], rest[1]
        v = arr.vertex_by_pair(p, q)
        cell = min(arr.cells_at_vertex(v.id), key=lambda c: (-c.size, c.id))
        cover.append(cell.id)
        newly = sorted(uncovered & set(cell.boundary_lines))
        uncovered -= set(cell.boundary_lines)
        steps.append({"op": "select", "item": cell.id, "pair": [p, q], "covers": newly})
    if uncovered:
        ln = uncovered.pop()
        cell_id = arr.zones[ln][0]
        cover.append(cell_id)
        steps.append({"op": "select", "item": cell_id, "leftover_line": ln, "covers": [ln]})
    cert = Certificate(kind="vertex_cover", members=frozenset(cover))
    n = arr.n
    max_size = max((c.size for c in arr.cells), default=0)
    metrics = {
        "algorithm": "pair-cell-cover",
        "kind": "vertex_cover",
        "num_items": len(arr.cells),
        "n": n,
        "size": len(cover),
        "ceil_half_ok": 2 * len(cover) <= n + 1,
        "max_cell_size": max_size,
        "lower_bound_ok": len(cover) * max_size >= n if n else True,
    }
    return AlgorithmTrace(tuple(steps), cert, metrics)


def refined_cell_cover(arr: Arrangement) -> AlgorithmTrace:
    """Cell cover preferring cells that pay for four lines, then three, then pairs.

    Phase 1 repeatedly takes an unmarked cell with four or more boundary
    lines, charges it four of them, and marks every cell in those lines'
    zones (an unmarked cell never borders a previously charged line, so the
    four are always new).  Phase 2 does the same with three lines.  Phase 3
    covers the remaining untouched lines pairwise.  Sizes of both this and
    the pair cover are reported; neither dominates the other in general.
    """
    n = arr.n
    marked: set[int] = set()
    charged: set[int] = set()
    covered: set[int] = set()
    cover: list[int] = []
    steps: list[dict] = []

    for phase, want in ((1, 4), (2, 3)):
        while True:
            candidate = None
            for cell in arr.cells:
                if cell.id not in marked and cell.size >= want:
                    candidate = cell
                    break
            if candidate is None:
                break
            lines_taken = list(candidate.boundary_lines[:want])
            assert not set(candidate.boundary_lines) & charged, (
                "unmarked cell borders a charged line"
            )
            cover.append(candidate.id)
            charged.update(lines_taken)
            covered.update(candidate.boundary_lines)
            for ln in lines_taken:
                marked.update(arr.zones[ln])
            steps.append(
                {"op": "select", "item": candidate.id, "phase": phase, "charged": lines_taken}
            )

    uncovered = set(range(n)) - covered
    while len(uncovered) >= 2:
        rest = sorted(uncovered)
        p, q = rest[0], rest[1]
        v = arr.vertex_by_pair(p, q)
        cell = min(arr.cells_at_vertex(v.id), key=lambda c: (-c.size, c.id))
        if cell.id not in cover:
            cover.append(cell.id)
        newly = sorted(uncovered & set(cell.boundary_lines))
        uncovered -= set(cell.boundary_lines)
        covered.update(cell.boundary_lines)
        steps.append({"op": "select", "item": cell.id, "phase": 3, "pair": [p, q], "covers": newly})
    if uncovered:
        ln = uncovered.pop()
        cell_id = arr.zones[ln][0]
        if cell_id not in cover:
            cover.append(cell_id)
        steps.append({"op": "select", "item": cell_id, "phase": 3, "leftover_line": ln})

    cert = Certificate(kind="vertex_cover", members=frozenset(cover))
    max_size = max((c.size for c in arr.cells), default=0)
    phase_counts = {
        phase: sum(1 for s in steps if s.get("phase") == phase) for phase in (1, 2, 3)
    }
    metrics = {
        "algorithm": "refined-cell-cover",
        "kind": "vertex_cover",
        "num_items": len(arr.cells),
        "n": n,
        "size": len(cover),
        "phase_counts": phase_counts,
        "ceil_half_reference": (n + 1) // 2,
        "nineteen_48_reference": 19 * n / 48,
        "max_cell_size": max_size,
        "lower_bound_ok": len(cover) * max_size >= n if n else True,
    }
    return AlgorithmTrace(tuple(steps), cert, metrics)
