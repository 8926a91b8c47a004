"""Hypergraphs over an arrangement, certificates, and exact solvers.

The three hypergraph views:

* ``line_cell``   - vertices are lines, one hyperedge per cell (its boundary lines).
* ``vertex_cell`` - vertices are crossings, one hyperedge per cell (its boundary
  vertices); ``min_cell_size=2`` keeps every cell (covering flavor),
  ``min_cell_size=3`` keeps cells that are at least triangles, i.e. have three
  or more boundary vertices (coloring flavor; an edge with fewer vertices can
  never carry three colors, and unbounded cells bounded by s lines only have
  s-1 vertices).
* ``cell_zone``   - vertices are cells, one hyperedge per line (its zone).

Edges are deduplicated; multiplicity is recorded in ``labels``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

from .arrangement import Arrangement
from .errors import BudgetExceeded, MalformedCertificate, TooLarge

DEFAULT_EXACT_LIMIT = 24
DEFAULT_ENUM_BUDGET = 4_000_000

ENV_LIMIT = "ARRANGE_LAB_LIMIT"


def exhaustive_limit(override: Optional[int] = None) -> int:
    """Configured exact-solver limit; the ARRANGE_LAB_LIMIT env var wins."""
    if override is not None:
        return override
    env = os.environ.get(ENV_LIMIT)
    if env:
        return int(env)
    return DEFAULT_EXACT_LIMIT


@dataclass(frozen=True)
class Hypergraph:
    num_vertices: int
    edges: tuple[frozenset[int], ...]
    labels: tuple[tuple[object, ...], ...]  # provenance per edge; len = multiplicity

    @classmethod
    def from_edges(
        cls, num_vertices: int, edges: Iterable[Iterable[int]], labels: Iterable[object]
    ) -> "Hypergraph":
        merged: dict[frozenset[int], list[object]] = {}
        for edge, label in zip(edges, labels):
            e = frozenset(edge)
            if not e:
                raise ValueError("empty hyperedge")
            if max(e) >= num_vertices or min(e) < 0:
                raise ValueError("edge vertex out of range")
            merged.setdefault(e, []).append(label)
        ordered = sorted(merged, key=lambda e: tuple(sorted(e)))
        return cls(
            num_vertices=num_vertices,
            edges=tuple(ordered),
            labels=tuple(tuple(merged[e]) for e in ordered),
        )

    @property
    def total_multiplicity(self) -> int:
        return sum(len(lab) for lab in self.labels)

    def to_json(self) -> dict:
        return {
            "num_vertices": self.num_vertices,
            "edges": [sorted(e) for e in self.edges],
            "labels": [list(lab) for lab in self.labels],
        }


@dataclass(frozen=True)
class Certificate:
    kind: str  # "coloring" | "independent_set" | "vertex_cover"
    colors: Optional[tuple[int, ...]] = None
    members: Optional[frozenset[int]] = None

    def __post_init__(self):
        if self.kind == "coloring":
            if self.colors is None or self.members is not None:
                raise MalformedCertificate("coloring certificates carry colors only")
        elif self.kind in ("independent_set", "vertex_cover"):
            if self.members is None or self.colors is not None:
                raise MalformedCertificate(f"{self.kind} certificates carry a vertex set")
        else:
            raise MalformedCertificate(f"unknown certificate kind {self.kind!r}")

    @property
    def num_colors(self) -> int:
        if self.colors is None:
            raise MalformedCertificate("not a coloring")
        return len(set(self.colors))

    @property
    def size(self) -> int:
        if self.members is None:
            raise MalformedCertificate("not a vertex set certificate")
        return len(self.members)

    def normalized(self) -> "Certificate":
        """Relabel colors to 0..k-1 by first occurrence."""
        if self.colors is None:
            return self
        mapping: dict[int, int] = {}
        out = []
        for c in self.colors:
            if c not in mapping:
                mapping[c] = len(mapping)
            out.append(mapping[c])
        return Certificate(kind="coloring", colors=tuple(out))

    def to_json(self) -> dict:
        if self.kind == "coloring":
            return {"kind": self.kind, "colors": list(self.colors)}
        return {"kind": self.kind, "set": sorted(self.members)}

    @classmethod
    def from_json(cls, payload: dict) -> "Certificate":
        kind = payload["kind"]
        if kind == "coloring":
            return cls(kind=kind, colors=tuple(payload["colors"]))
        return cls(kind=kind, members=frozenset(payload["set"]))


def line_cell(arr: Arrangement) -> Hypergraph:
    """Vertices are lines; each cell contributes its boundary-line set."""
    return Hypergraph.from_edges(
        arr.n,
        (c.boundary_lines for c in arr.cells),
        (c.id for c in arr.cells),
    )


def vertex_cell(arr: Arrangement, min_cell_size: int = 3) -> Hypergraph:
    """Vertices are crossings; each qualifying cell contributes its vertex set.

    min_cell_size=2: every cell (covering); min_cell_size=3: cells with at
    least three boundary vertices (coloring).
    """
    if min_cell_size not in (2, 3):
        raise ValueError("min_cell_size must be 2 or 3")
    if min_cell_size == 2:
        chosen = [c for c in arr.cells if c.size >= 2 and c.boundary_vertices]
    else:
        chosen = [c for c in arr.cells if len(c.boundary_vertices) >= 3]
    return Hypergraph.from_edges(
        len(arr.vertices),
        (c.boundary_vertices for c in chosen),
        (c.id for c in chosen),
    )


def cell_zone(arr: Arrangement) -> Hypergraph:
    """Vertices are cells; each line contributes its zone."""
    return Hypergraph.from_edges(
        len(arr.cells),
        (zone for zone in arr.zones),
        range(arr.n),
    )


@dataclass(frozen=True)
class Violation:
    edge_index: int
    edge: tuple[int, ...]
    labels: tuple[object, ...]
    reason: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    kind: str
    violations: tuple[Violation, ...] = ()

    def __str__(self) -> str:
        if self.ok:
            return f"{self.kind}: ok"
        head = self.violations[0]
        return f"{self.kind}: {len(self.violations)} violations, first {head.reason} on edge {head.edge}"


def validate(h: Hypergraph, cert: Certificate) -> ValidationReport:
    """Check a certificate against a hypergraph, listing every violated edge.

    Coloring properness skips edges of size <= 1 (a singleton can never be
    bichromatic); covering semantics keep them.
    """
    violations: list[Violation] = []
    if cert.kind == "coloring":
        if len(cert.colors) != h.num_vertices:
            raise MalformedCertificate(
                f"coloring length {len(cert.colors)} != num_vertices {h.num_vertices}"
            )
        if any(c < 0 for c in cert.colors):
            raise MalformedCertificate("negative color index")
        for idx, edge in enumerate(h.edges):
            if len(edge) <= 1:
                continue
            colors = {cert.colors[v] for v in edge}
            if len(colors) == 1:
                violations.append(
                    Violation(idx, tuple(sorted(edge)), h.labels[idx], "monochromatic")
                )
    else:
        members = cert.members
        if members and (min(members) < 0 or max(members) >= h.num_vertices):
            raise MalformedCertificate("member vertex out of range")
        for idx, edge in enumerate(h.edges):
            if cert.kind == "independent_set":
                if edge <= members:
                    violations.append(
                        Violation(idx, tuple(sorted(edge)), h.labels[idx], "edge fully contained")
                    )
            else:
                if not edge & members:
                    violations.append(
                        Violation(idx, tuple(sorted(edge)), h.labels[idx], "edge untouched")
                    )
    return ValidationReport(ok=not violations, kind=cert.kind, violations=tuple(violations))


def exact_max_independent_set(h: Hypergraph, limit: Optional[int] = None) -> Certificate:
    """Maximum-cardinality independent set by branch and bound.

    Deterministic: among maximum sets, returns the lexicographically smallest
    (as a sorted vertex tuple).
    """
    limit = exhaustive_limit(limit)
    if h.num_vertices > limit:
        raise TooLarge(f"{h.num_vertices} vertices exceeds exact limit {limit}")
    nv = h.num_vertices
    edges = [set(e) for e in h.edges]
    containing: list[list[int]] = [[] for _ in range(nv)]
    for ei, e in enumerate(edges):
        for v in e:
            containing[v].append(ei)
    remaining = [len(e) for e in edges]

    best: list[Optional[tuple[int, ...]]] = [None]

    def consider(chosen: list[int]) -> None:
        cand = tuple(chosen)
        cur = best[0]
        if cur is None or len(cand) > len(cur) or (len(cand) == len(cur) and cand < cur):
            best[0] = cand

    def search(v: int, chosen: list[int]) -> None:
        if v == nv:
            consider(chosen)
            return
        cur = best[0]
        if cur is not None and len(chosen) + (nv - v) < len(cur):
            return
        # Include v when no edge becomes fully contained.
        blocked = False
        for ei in containing[v]:
            if remaining[ei] == 1:
                blocked = True
                break
        if not blocked:
            for ei in containing[v]:
                remaining[ei] -= 1
            chosen.append(v)
            search(v + 1, chosen)
            chosen.pop()
            for ei in containing[v]:
                remaining[ei] += 1
        search(v + 1, chosen)

    search(0, [])
    return Certificate(kind="independent_set", members=frozenset(best[0] or ()))


def exact_min_vertex_cover(h: Hypergraph, limit: Optional[int] = None) -> Certificate:
    """Minimum vertex cover as the complement of the maximum independent set.

    S is a vertex cover iff V minus S is independent, so the complement of a
    maximum independent set is a minimum cover.
    """
    is_cert = exact_max_independent_set(h, limit)
    cover = frozenset(range(h.num_vertices)) - is_cert.members
    return Certificate(kind="vertex_cover", members=cover)


def _coloring_edges(h: Hypergraph) -> list[set[int]]:
    return [set(e) for e in h.edges if len(e) >= 2]


def exact_chromatic_number(
    h: Hypergraph, limit: Optional[int] = None
) -> tuple[int, Certificate]:
    """Smallest k admitting a proper coloring, by backtracking.

    Vertices are tried by decreasing degree; vertex colors are canonical
    (a vertex may only open one new color), which breaks color symmetry.
    """
    limit = exhaustive_limit(limit)
    if h.num_vertices > limit:
        raise TooLarge(f"{h.num_vertices} vertices exceeds exact limit {limit}")
    nv = h.num_vertices
    if nv == 0:
        return 0, Certificate(kind="coloring", colors=())
    edges = _coloring_edges(h)
    if not edges:
        return 1, Certificate(kind="coloring", colors=(0,) * nv)

    degree = [0] * nv
    for e in edges:
        for v in e:
            degree[v] += 1
    order = sorted(range(nv), key=lambda v: (-degree[v], v))
    rank = {v: i for i, v in enumerate(order)}
    edge_vertices = [sorted(e, key=lambda v: rank[v]) for e in edges]
    containing: list[list[int]] = [[] for _ in range(nv)]
    for ei, e in enumerate(edges):
        for v in e:
            containing[v].append(ei)

    colors = [-1] * nv

    def edge_monochromatic_complete(ei: int) -> bool:
        vs = edge_vertices[ei]
        first = colors[vs[0]]
        if first < 0:
            return False
        for v in vs[1:]:
            c = colors[v]
            if c < 0 or c != first:
                return False
        return True

    def search(pos: int, k: int, used: int) -> bool:
        if pos == nv:
            return True
        v = order[pos]
        for c in range(min(used + 1, k)):
            colors[v] = c
            ok = True
            for ei in containing[v]:
                if edge_monochromatic_complete(ei):
                    ok = False
                    break
            if ok and search(pos + 1, k, max(used, c + 1)):
                return True
            colors[v] = -1
        return False

    for k in range(1, nv + 1):
        if search(0, k, 0):
            cert = Certificate(kind="coloring", colors=tuple(colors))
            return k, cert
    raise AssertionError("unreachable: nv colors always suffice")


def proper_colorings(
    h: Hypergraph, k: int, budget: Optional[int] = None
) -> Iterator[tuple[int, ...]]:
    """Yield every proper k-coloring (as labeled tuples) exactly once.

    Singleton edges are exempt, matching validate().  Raises BudgetExceeded
    when k**num_vertices exceeds the enumeration budget.
    """
    budget = DEFAULT_ENUM_BUDGET if budget is None else budget
    if k**h.num_vertices > budget:
        raise BudgetExceeded(f"{k}^{h.num_vertices} colorings exceed budget {budget}")
    nv = h.num_vertices
    edges = _coloring_edges(h)
    containing: list[list[int]] = [[] for _ in range(nv)]
    for ei, e in enumerate(edges):
        for v in e:
            containing[v].append(ei)
    edge_lists = [sorted(e) for e in edges]
    colors = [-1] * nv

    def complete_mono(ei: int) -> bool:
        first = colors[edge_lists[ei][0]]
        if first < 0:
            return False
        for v in edge_lists[ei][1:]:
            if colors[v] != first:
                return False
        return True

    def rec(v: int):
        if v == nv:
            yield tuple(colors)
            return
        for c in range(k):
            colors[v] = c
            if not any(complete_mono(ei) for ei in containing[v]):
                yield from rec(v + 1)
            colors[v] = -1

    yield from rec(0)


def forall_proper_colorings(
    h: Hypergraph,
    k: int,
    visitor: Callable[[tuple[int, ...]], None],
    budget: Optional[int] = None,
) -> int:
    """Invoke visitor on every proper k-coloring; returns the count visited."""
    count = 0
    for coloring in proper_colorings(h, k, budget):
        visitor(coloring)
        count += 1
    return count
