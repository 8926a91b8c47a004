"""Cell/vertex/zone structure of a simple line arrangement.

Construction is incremental: each new line splits every cell it crosses.
Cells are identified by their sign vectors (one sign per line, +1 = strictly
below).  A cell's edge on a line is recovered as the 1-D feasibility interval
of the remaining constraints along that line, which also yields boundary
vertices, boundedness, zones, and the dual graph, all in exact arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import NotSimple
from .geometry import (
    LineEq,
    Point,
    format_rational,
    intersect,
    is_simple,
    side,
)

# An edge interval endpoint: Fraction, or None for unbounded.
Interval = tuple[Optional[Fraction], Optional[Fraction], Optional[int], Optional[int]]


@dataclass(frozen=True)
class Vertex:
    id: int
    point: Point
    lines: tuple[int, int]
    # Per incident line, the id of the previous crossing along that line in
    # increasing x; None when this is the line's first crossing.
    left_neighbor_on_line: dict[int, Optional[int]] = field(compare=False, hash=False)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "x": format_rational(self.point.x),
            "y": format_rational(self.point.y),
            "lines": list(self.lines),
        }


@dataclass(frozen=True)
class Cell:
    id: int
    signs: tuple[int, ...]
    boundary_lines: tuple[int, ...]
    boundary_vertices: tuple[int, ...]
    bounded: bool
    witness: Point
    # Per boundary line, the open x-interval of the cell's edge on it
    # (None endpoint = unbounded ray).
    edge_intervals: dict[int, tuple[Optional[Fraction], Optional[Fraction]]] = field(
        compare=False, hash=False
    )

    @property
    def size(self) -> int:
        return len(self.boundary_lines)

    def signs_string(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "signs": self.signs_string(),
            "boundary_lines": list(self.boundary_lines),
            "bounded": self.bounded,
        }


@dataclass(frozen=True)
class Arrangement:
    lines: tuple[LineEq, ...]
    vertices: tuple[Vertex, ...]
    cells: tuple[Cell, ...]
    zones: tuple[tuple[int, ...], ...]
    dual_edges: tuple[tuple[int, int, int], ...]  # (cell_lo, cell_hi, separating line)

    @property
    def n(self) -> int:
        return len(self.lines)

    def vertex_by_pair(self, i: int, j: int) -> Vertex:
        return self._pair_index[(min(i, j), max(i, j))]

    def cell_by_signs(self, signs: tuple[int, ...]) -> Cell:
        return self._sign_index[signs]

    def cells_at_vertex(self, vertex_id: int) -> tuple[Cell, ...]:
        return self._vertex_cells[vertex_id]

    def __post_init__(self):
        pair_index = {v.lines: v for v in self.vertices}
        sign_index = {c.signs: c for c in self.cells}
        vertex_cells: dict[int, list[Cell]] = {v.id: [] for v in self.vertices}
        for cell in self.cells:
            for vid in cell.boundary_vertices:
                vertex_cells[vid].append(cell)
        object.__setattr__(self, "_pair_index", pair_index)
        object.__setattr__(self, "_sign_index", sign_index)
        object.__setattr__(
            self, "_vertex_cells", {vid: tuple(cs) for vid, cs in vertex_cells.items()}
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "lines": [line.to_json() for line in self.lines],
            "vertices": [v.to_json() for v in self.vertices],
            "cells": [c.to_json() for c in self.cells],
            "zones": [list(zone) for zone in self.zones],
        }


def _edge_interval(
    lines: Sequence[LineEq],
    constraints: Sequence[tuple[int, int]],
    target: int,
) -> Optional[Interval]:
    """Open x-interval on line `target` where every (line, sign) constraint holds.

    Returns (lo, hi, lo_line, hi_line) with None endpoints for unbounded, or
    None when the interval is empty.  lo_line/hi_line are the constraint lines
    binding at the finite endpoints, i.e. the crossing partners.
    """
    line_t = lines[target]
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    lo_line: Optional[int] = None
    hi_line: Optional[int] = None
    for j, sign in constraints:
        if j == target:
            continue
        line_j = lines[j]
        k = line_j.a - line_t.a
        t = (line_j.c - line_t.c) / k
        if (sign > 0) == (k > 0):
            if hi is None or t < hi:
                hi, hi_line = t, j
        else:
            if lo is None or t > lo:
                lo, lo_line = t, j
    if lo is not None and hi is not None and not lo < hi:
        return None
    return (lo, hi, lo_line, hi_line)


def _interval_sample(lo: Optional[Fraction], hi: Optional[Fraction]) -> Fraction:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def build(lines: Sequence[LineEq]) -> Arrangement:
    """Construct the full arrangement; deterministic for a given input order."""
    report = is_simple(lines)
    if not report.ok:
        raise NotSimple(report)
    lines = tuple(lines)
    n = len(lines)

    # Vertices, ids in lexicographic pair order, with per-line left neighbors.
    pair_points = {
        (i, j): intersect(lines[i], lines[j])
        for i, j in itertools.combinations(range(n), 2)
    }
    pairs = sorted(pair_points)
    pair_ids = {pair: vid for vid, pair in enumerate(pairs)}
    on_line: dict[int, list[tuple[Fraction, int]]] = {i: [] for i in range(n)}
    for (i, j), p in pair_points.items():
        vid = pair_ids[(i, j)]
        on_line[i].append((p.x, vid))
        on_line[j].append((p.x, vid))
    left_neighbor: dict[int, dict[int, Optional[int]]] = {vid: {} for vid in pair_ids.values()}
    for i, entries in on_line.items():
        entries.sort()
        prev = None
        for _, vid in entries:
            left_neighbor[vid][i] = prev
            prev = vid
    vertices = tuple(
        Vertex(pair_ids[pair], pair_points[pair], pair, left_neighbor[pair_ids[pair]])
        for pair in pairs
    )

    # Incremental insertion over sign-vector cells carrying interior witnesses.
    cells_wip: list[tuple[tuple[int, ...], Point]] = [((), Point(Fraction(0), Fraction(0)))]
    for k in range(n):
        line_k = lines[k]
        next_cells: list[tuple[tuple[int, ...], Point]] = []
        for signs, witness in cells_wip:
            constraints = tuple(zip(range(k), signs))
            interval = _edge_interval(lines, constraints, k)
            if interval is None:
                # Whole open cell is strictly on one side; the witness tells which.
                s_w = side(line_k, witness)
                next_cells.append((signs + (s_w,), witness))
                continue
            lo, hi, lo_line, hi_line = interval
            x_star = _interval_sample(lo, hi)
            p_star = Point(x_star, line_k.y_at(x_star))
            # p_star sits in the relative interior of the new edge shared by
            # both halves.  The half on side s gets the midpoint of p_star and
            # a point on one of its surviving old facets; with no old facets
            # (first insertion) the halves are half-planes.
            facet = lo_line if lo_line is not None else hi_line
            for s in (1, -1):
                if facet is None:
                    half_witness = Point(x_star, p_star.y - s)
                else:
                    sub = [(j, sj) for j, sj in constraints if j != facet]
                    sub.append((k, s))
                    fi = _edge_interval(lines, sub, facet)
                    assert fi is not None, "split facet lost its edge"
                    xq = _interval_sample(fi[0], fi[1])
                    pq = Point(xq, lines[facet].y_at(xq))
                    half_witness = Point((p_star.x + pq.x) / 2, (p_star.y + pq.y) / 2)
                next_cells.append((signs + (s,), half_witness))
        cells_wip = next_cells

    # Boundary pass: edges, vertices, boundedness per cell.
    cells: list[Cell] = []
    for cid, (signs, witness) in enumerate(cells_wip):
        constraints = tuple(zip(range(n), signs))
        boundary_lines: list[int] = []
        vertex_ids: set[int] = set()
        intervals: dict[int, tuple[Optional[Fraction], Optional[Fraction]]] = {}
        bounded = n > 0
        for i in range(n):
            interval = _edge_interval(lines, constraints, i)
            if interval is None:
                continue
            lo, hi, lo_line, hi_line = interval
            boundary_lines.append(i)
            intervals[i] = (lo, hi)
            if lo is None or hi is None:
                bounded = False
            if lo_line is not None:
                vertex_ids.add(pair_ids[(min(i, lo_line), max(i, lo_line))])
            if hi_line is not None:
                vertex_ids.add(pair_ids[(min(i, hi_line), max(i, hi_line))])
        if not boundary_lines:
            bounded = False
        cells.append(
            Cell(
                id=cid,
                signs=signs,
                boundary_lines=tuple(boundary_lines),
                boundary_vertices=tuple(sorted(vertex_ids)),
                bounded=bounded,
                witness=witness,
                edge_intervals=intervals,
            )
        )

    zones = tuple(
        tuple(c.id for c in cells if i in c.edge_intervals) for i in range(n)
    )

    sign_index = {c.signs: c for c in cells}
    assert len(sign_index) == len(cells), "cells must have pairwise distinct sign vectors"
    dual: set[tuple[int, int, int]] = set()
    for cell in cells:
        for i in cell.boundary_lines:
            flipped = list(cell.signs)
            flipped[i] = -flipped[i]
            neighbor = sign_index[tuple(flipped)]
            a, b = sorted((cell.id, neighbor.id))
            dual.add((a, b, i))

    return Arrangement(
        lines=lines,
        vertices=vertices,
        cells=tuple(cells),
        zones=zones,
        dual_edges=tuple(sorted(dual)),
    )


def zones(arr: Arrangement) -> tuple[tuple[int, ...], ...]:
    """Per-line cell-id lists; cell c is in line l's zone iff l bounds c."""
    return arr.zones


@dataclass(frozen=True)
class DualGraph:
    num_cells: int
    edges: tuple[tuple[int, int, int], ...]
    adjacency: tuple[tuple[int, ...], ...]
    bipartition: tuple[int, ...]  # sign-vector parity, 0 or 1 per cell
    connected: bool


def dual_graph(arr: Arrangement) -> DualGraph:
    """Cells as nodes, edge-sharing cells adjacent; bipartite by sign parity."""
    adj: list[set[int]] = [set() for _ in arr.cells]
    for a, b, _ in arr.dual_edges:
        adj[a].add(b)
        adj[b].add(a)
    parity = tuple(sum(1 for s in c.signs if s > 0) % 2 for c in arr.cells)
    seen = {0} if arr.cells else set()
    stack = [0] if arr.cells else []
    while stack:
        node = stack.pop()
        for other in adj[node]:
            if other not in seen:
                seen.add(other)
                stack.append(other)
    return DualGraph(
        num_cells=len(arr.cells),
        edges=arr.dual_edges,
        adjacency=tuple(tuple(sorted(s)) for s in adj),
        bipartition=parity,
        connected=len(seen) == len(arr.cells),
    )
