"""Instance generators: random arrangements, tangent families, witness gadgets,
and the recursive chain used by the chromatic lower bound.

The gadget doubles a flattened copy against its reflection; the mirror half is
shifted horizontally (an order-preserving move) because reflection alone
reproduces every internal crossing at the same x-coordinate, which would make
the sweep degenerate.  The chain stacks copies of the previous level along
parabola-tangent center lines with pure y-maps, so all copies keep identical
internal crossing x-positions and the inherited witness markers stay aligned.
All constructed parameters are exact rationals, verified after construction;
slope bands and squeeze factors shrink on a ladder until the checks pass.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .arrangement import build
from .errors import BudgetExceeded, GenerationExhausted, LimitExceeded
from .geometry import (
    LineEq,
    _Infinity,
    apply_y_map,
    flatten,
    intersect,
    is_simple,
    reflect_y,
    side,
    snapshots,
    y_order_at,
)
from .hypergraph import line_cell

DEFAULT_GADGET_LIMIT = 64


def random_simple(n: int, seed: int, coeff_bound: int = 100) -> list[LineEq]:
    """n lines y = -a*x + c with integer a, c in [-coeff_bound, coeff_bound].

    Passes the strict simplicity check (pairwise crossing, no concurrences,
    distinct crossing x-coordinates); offending proposals are resampled, so
    the output is deterministic per seed.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > 2 * coeff_bound + 1:
        raise GenerationExhausted(f"only {2*coeff_bound+1} distinct slopes available")
    rng = random.Random(seed)
    lines: list[LineEq] = []
    slopes: set[Fraction] = set()
    points: set[tuple[Fraction, Fraction]] = set()
    xs: set[Fraction] = set()
    budget = 400 * n + 100
    while len(lines) < n:
        if budget <= 0:
            raise GenerationExhausted(f"coeff_bound {coeff_bound} too small for n={n}")
        budget -= 1
        a = Fraction(rng.randint(-coeff_bound, coeff_bound))
        c = Fraction(rng.randint(-coeff_bound, coeff_bound))
        cand = LineEq(a, Fraction(1), c)
        if cand.a in slopes:
            continue
        new_points = []
        ok = True
        for line in lines:
            p = intersect(cand, line)
            if (p.x, p.y) in points or p.x in xs or any(p.x == q[0] for q in new_points):
                ok = False
                break
            new_points.append((p.x, p.y))
        if not ok:
            continue
        lines.append(cand)
        slopes.add(cand.a)
        points.update(new_points)
        xs.update(px for px, _ in new_points)
    return lines


def convex_position(n: int) -> list[LineEq]:
    """Tangent lines to y = x^2 at x = 1..n: line i is y = 2i*x - i^2.

    Slope order equals index order; simple for every n (tangent crossings at
    x = (i+j)/2 are pairwise distinct points).
    """
    if n < 1:
        raise ValueError("n must be positive")
    return [LineEq.from_slope_intercept(2 * i, -i * i) for i in range(1, n + 1)]


@dataclass(frozen=True)
class WitnessSet:
    """Snapshots such that every line pair is adjacent in at least one of them."""

    snapshot_indices: tuple[int, ...]
    covered_pairs: dict[tuple[int, int], int]

    @property
    def size(self) -> int:
        return len(self.snapshot_indices)

    def to_json(self) -> dict:
        return {
            "snapshots": list(self.snapshot_indices),
            "covered_pairs": {f"{i},{j}": s for (i, j), s in sorted(self.covered_pairs.items())},
        }


def _adjacent_pairs(order: Sequence[int]) -> set[tuple[int, int]]:
    return {(min(a, b), max(a, b)) for a, b in zip(order, order[1:])}


def greedy_witness(lines: Sequence[LineEq]) -> WitnessSet:
    """Greedy set cover over snapshots: most new adjacent pairs first, leftmost ties."""
    n = len(lines)
    if n < 2:
        return WitnessSet((), {})
    snaps = snapshots(lines)
    adjacency = [_adjacent_pairs(s.order) for s in snaps]
    uncovered = {(i, j) for i in range(n) for j in range(i + 1, n)}
    chosen: list[int] = []
    covered: dict[tuple[int, int], int] = {}
    while uncovered:
        best = max(range(len(snaps)), key=lambda i: (len(adjacency[i] & uncovered), -i))
        gained = adjacency[best] & uncovered
        if not gained:
            raise AssertionError("pair not adjacent in any snapshot")
        for pair in gained:
            covered[pair] = best
        uncovered -= gained
        chosen.append(best)
    return WitnessSet(tuple(sorted(chosen)), covered)


def verify_witness(lines: Sequence[LineEq], witness: WitnessSet) -> bool:
    """Every pair adjacent in at least one chosen snapshot."""
    n = len(lines)
    if n < 2:
        return witness.size == 0
    snaps = snapshots(lines)
    covered = set()
    for idx in witness.snapshot_indices:
        covered |= _adjacent_pairs(snaps[idx].order)
    return {(i, j) for i in range(n) for j in range(i + 1, n)} <= covered


def _shift_x(lines: Sequence[LineEq], delta: Fraction) -> list[LineEq]:
    """Translate (x, y) -> (x + delta, y); preserves all vertical orders."""
    return [
        LineEq.from_slope_intercept(l.slope, l.intercept - l.slope * delta) for l in lines
    ]


@dataclass(frozen=True)
class Gadget:
    lines: tuple[LineEq, ...]
    witness: WitnessSet
    q: int
    witness_source: str = "greedy"

    @property
    def witness_bound_ok(self) -> bool:
        """Whether the returned witness met the 2^(q+1) target size."""
        return self.witness.size <= 2 ** (self.q + 1)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "lines": [l.to_json() for l in self.lines],
            "witness": self.witness.to_json(),
            "witness_bound_ok": self.witness_bound_ok,
        }


def gadget_G(q: int, limit: int = DEFAULT_GADGET_LIMIT) -> Gadget:
    """2^q lines with a small witness set (target size 2^(q+1)).

    Doubles by induction: flatten the previous gadget into a small positive
    slope band with crossings pushed below a horizontal line, reflect, shift
    the mirror right, and take the union.  Band, push depth, and shift shrink
    on ladders until the union is strictly simple and the halves stay
    vertically separated over the inherited witness intervals.

    Two witnesses are computed and the smaller one returned: the greedy set
    cover over all snapshots, and a recursive witness carried through the
    doubling (previous intervals re-serve both halves after the shift; the
    fresh cross pairs get their own cover).  Both meet the 2^(q+1) target
    throughout the supported range; witness_bound_ok reports the measured
    outcome rather than assuming it.
    """
    if q < 0:
        raise ValueError("q must be nonnegative")
    if 2**q > limit:
        raise LimitExceeded(f"2^{q} lines exceed limit {limit}")
    lines: list[LineEq] = [LineEq.from_slope_intercept(0, 0)]
    intervals: list[tuple[Fraction, Fraction]] = []
    for _ in range(q):
        lines, intervals = _double_gadget(lines, intervals)
    recursive = _witness_from_intervals(lines, intervals)
    greedy = greedy_witness(lines)
    if recursive is not None and recursive.size < greedy.size:
        return Gadget(tuple(lines), recursive, q, witness_source="recursive")
    return Gadget(tuple(lines), greedy, q, witness_source="greedy")


def _halves_separated(gp: list[LineEq], gpp: list[LineEq], x: Fraction) -> bool:
    """Mirror half strictly above the flattened half at x.

    min over gpp minus max over gp is concave in x, so holding at both
    endpoints of an interval certifies the whole interval.
    """
    return max(l.y_at(x) for l in gp) < min(l.y_at(x) for l in gpp)


def _double_gadget(
    lines: list[LineEq], intervals: list[tuple[Fraction, Fraction]]
) -> tuple[list[LineEq], list[tuple[Fraction, Fraction]]]:
    """One doubling step; returns the union and its witness intervals."""
    min_width = min((hi - lo for lo, hi in intervals), default=Fraction(2))
    chosen = None
    for t in range(14):
        band_lo, band_hi = Fraction(1, 4 * 2**t), Fraction(1, 2 * 2**t)
        for push in range(14):
            half = flatten(lines, band_lo, band_hi, -(2**push), below=True)
            for s in range(14):
                delta = min(Fraction(1, 3 * 2**s), min_width / 2 ** (s + 1))
                mirrored = _shift_x(reflect_y(half), delta)
                candidate = half + mirrored
                if not is_simple(candidate, strict=True).ok:
                    continue
                shrunk = [(lo + delta, hi) for lo, hi in intervals]
                if any(not lo < hi for lo, hi in shrunk):
                    continue
                if all(
                    _halves_separated(half, mirrored, lo)
                    and _halves_separated(half, mirrored, hi)
                    for lo, hi in shrunk
                ):
                    chosen = (candidate, shrunk)
                    break
            if chosen:
                break
        if chosen:
            break
    if chosen is None:
        raise AssertionError("gadget doubling found no generic parameters")
    candidate, shrunk = chosen

    # Cover the fresh cross pairs greedily over the union's snapshots.
    n = len(candidate)
    half_n = n // 2
    snaps = snapshots(candidate)
    adjacency = [_adjacent_pairs(s.order) for s in snaps]
    uncovered = {(i, j) for i in range(half_n) for j in range(half_n, n)}
    extra: list[tuple[Fraction, Fraction]] = []
    while uncovered:
        best = max(range(len(snaps)), key=lambda i: (len(adjacency[i] & uncovered), -i))
        gained = adjacency[best] & uncovered
        assert gained, "cross pair not adjacent in any snapshot"
        uncovered -= gained
        lo, hi = _finite(snaps[best].x_lo), _finite(snaps[best].x_hi)
        if lo is None and hi is None:
            lo, hi = Fraction(0), Fraction(1)
        elif lo is None:
            lo = hi - 1
        elif hi is None:
            hi = lo + 1
        extra.append((lo, hi))
    return candidate, shrunk + extra


def _witness_from_intervals(
    lines: list[LineEq], intervals: list[tuple[Fraction, Fraction]]
) -> Optional[WitnessSet]:
    """Convert witness intervals to snapshot indices; None if coverage broke."""
    n = len(lines)
    if n < 2:
        return WitnessSet((), {})
    snaps = snapshots(lines)
    uppers = [s.x_hi for s in snaps[:-1]]

    def snapshot_index(x: Fraction) -> int:
        idx = 0
        for bound in uppers:
            if x < bound:
                break
            idx += 1
        return idx

    indices = sorted({snapshot_index((lo + hi) / 2) for lo, hi in intervals})
    covered: dict[tuple[int, int], int] = {}
    for idx in indices:
        for pair in _adjacent_pairs(snaps[idx].order):
            covered.setdefault(pair, idx)
    if len(covered) < n * (n - 1) // 2:
        return None
    return WitnessSet(tuple(indices), covered)


def gadget_grid_check(gadget: Gadget) -> bool:
    """Bounded cells whose corners all mix the two halves have at most 4 sides."""
    n = len(gadget.lines)
    if n < 4:
        return True
    half = n // 2
    arr = build(list(gadget.lines))
    for cell in arr.cells:
        if not cell.bounded or not cell.boundary_vertices:
            continue
        cross_only = all(
            (arr.vertices[v].lines[0] < half) != (arr.vertices[v].lines[1] < half)
            for v in cell.boundary_vertices
        )
        if cross_only and cell.size > 4:
            return False
    return True


@dataclass(frozen=True)
class ChainInstance:
    """Level-i instance of the recursive lower-bound construction.

    ``witness_tail`` holds the x-markers of the still-unconsumed witness
    snapshots.  A single affine map cannot pin several markers to prescribed
    coordinates at once, so the exact positions are carried along instead.
    ``strip`` is the x-interval where top-level copies cross each other,
    placed inside the consumed witness window.
    """

    k: int
    level: int
    lines: tuple[LineEq, ...]
    copy_map: tuple[int, ...]
    witness_tail: tuple[Fraction, ...]
    tail_windows: tuple[tuple[Optional[Fraction], Optional[Fraction]], ...]
    strip: Optional[tuple[Fraction, Fraction]]

    @property
    def num_copies(self) -> int:
        return self.k + 1

    @property
    def copy_size(self) -> int:
        return len(self.lines) // (self.k + 1) if self.level > 0 else len(self.lines)

    def to_json(self) -> dict:
        from .geometry import format_rational

        return {
            "k": self.k,
            "level": self.level,
            "lines": [l.to_json() for l in self.lines],
            "copy_map": list(self.copy_map),
            "witness": [format_rational(x) for x in self.witness_tail],
        }


def _finite(endpoint) -> Optional[Fraction]:
    return None if isinstance(endpoint, _Infinity) else endpoint


def _strip_inside(u: Optional[Fraction], v: Optional[Fraction]) -> tuple[Fraction, Fraction]:
    if u is None and v is None:
        return Fraction(0), Fraction(1)
    if u is None:
        return v - 2, v - 1
    if v is None:
        return u + 1, u + 2
    return u + (v - u) / 3, u + 2 * (v - u) / 3


def _marker_inside(u: Optional[Fraction], v: Optional[Fraction]) -> Fraction:
    if u is None and v is None:
        return Fraction(0)
    if u is None:
        return v - 1
    if v is None:
        return u + 1
    return (u + v) / 2


def chain_L(k: int, i: int, limit: int = DEFAULT_GADGET_LIMIT) -> ChainInstance:
    """Level-i chain: (k+1)^(i+1) lines built from k+1 squeezed copies per level.

    Requires k+1 to be a power of two.  Each level consumes the leftmost
    remaining witness window: the copies are squeezed onto parabola tangents
    whose pairwise crossings fall in a strip inside that window, so copy
    blocks swap their vertical order across the strip, stay separated at
    every remaining marker, and any two lines of different copies cross in
    the strip.  Geometric properties are re-verified by
    verify_chain_geometry.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if (k + 1) & k:
        raise ValueError("k+1 must be a power of two")
    if (k + 1) ** (i + 1) > limit:
        raise LimitExceeded(f"(k+1)^{i+1} lines exceed limit {limit}")
    q = (k + 1).bit_length() - 1
    base = gadget_G(q, limit=limit)
    snaps = snapshots(list(base.lines))
    chosen = list(base.witness.snapshot_indices)
    if i > len(chosen):
        # Any superset of a witness set is a witness set: pad with unchosen
        # snapshots (left to right) so deeper levels stay constructible.
        chosen = sorted(set(chosen) | set(range(len(snaps))))
    windows = [(_finite(snaps[s].x_lo), _finite(snaps[s].x_hi)) for s in chosen]
    if i > len(windows):
        raise LimitExceeded(
            f"level {i} exceeds the {len(windows)} available snapshots; the chain ends there"
        )
    lines = list(base.lines)
    copy_map = [0] * len(lines)
    strip: Optional[tuple[Fraction, Fraction]] = None
    for _level in range(1, i + 1):
        u, v = windows[0]
        tail = windows[1:]
        a, b = _strip_inside(u, v)
        xis = [a + (c + 1) * (b - a) / (k + 2) for c in range(k + 1)]
        check_xs = [a, b] + [_marker_inside(*w) for w in tail]
        reach = max(max(abs(l.y_at(x)) for l in lines) for x in check_xs) + 1
        gap = min(
            abs((2 * xc * x - xc * xc) - (2 * xd * x - xd * xd))
            for x in check_xs
            for xc, xd in itertools.combinations(xis, 2)
        )
        alpha = gap / (4 * reach)
        grown = None
        for _t in range(16):
            copies = [apply_y_map(lines, alpha, 2 * xc, -xc * xc) for xc in xis]
            candidate = [l for copy in copies for l in copy]
            if (
                _squeeze_ok(copies, a, b, check_xs)
                and is_simple(candidate).ok
                and _strip_quadrilaterals_ok(copies, (a + b) / 2)
            ):
                grown = candidate
                break
            alpha = alpha / 4
        if grown is None:
            raise AssertionError("chain squeeze found no generic parameters")
        copy_map = [c for c in range(k + 1) for _ in range(len(lines))]
        lines = grown
        windows = tail
        strip = (a, b)
    return ChainInstance(
        k=k,
        level=i,
        lines=tuple(lines),
        copy_map=tuple(copy_map),
        witness_tail=tuple(_marker_inside(*w) for w in windows),
        tail_windows=tuple(windows),
        strip=strip,
    )


def _squeeze_ok(
    copies: list[list[LineEq]],
    a: Fraction,
    b: Fraction,
    check_xs: Sequence[Fraction],
) -> bool:
    """Blocks pairwise separated at every checkpoint; cross crossings in (a, b)."""
    for x in check_xs:
        spans = sorted(
            (min(l.y_at(x) for l in copy), max(l.y_at(x) for l in copy)) for copy in copies
        )
        for (_, hi1), (lo2, _) in zip(spans, spans[1:]):
            if not hi1 < lo2:
                return False
    for ca, cb in itertools.combinations(copies, 2):
        for la in ca:
            for lb in cb:
                if not a < intersect(la, lb).x < b:
                    return False
    return True


def _strip_quadrilaterals_ok(copies: list[list[LineEq]], mid: Fraction) -> bool:
    """Strip-adjacent pairs of any two copies must bound an untouched 4-line cell.

    The candidate cell is the convex hull of the pairs' four mutual crossings;
    it survives as an arrangement cell iff every other line leaves all four
    corners strictly on one side (no line can pass through a corner, which
    would be a concurrence).
    """
    ordered = [sorted(copy, key=lambda l: -l.y_at(mid)) for copy in copies]
    all_lines = [l for copy in copies for l in copy]
    for ca, cb in itertools.combinations(ordered, 2):
        for pa, qa in zip(ca, ca[1:]):
            for pb, qb in zip(cb, cb[1:]):
                quad = {pa, qa, pb, qb}
                corners = [
                    intersect(u, v) for u in (pa, qa) for v in (pb, qb)
                ]
                for other in all_lines:
                    if other in quad:
                        continue
                    sides = {side(other, p) for p in corners}
                    if len(sides) != 1 or 0 in sides:
                        return False
    return True


@dataclass(frozen=True)
class ChainGeometryReport:
    ok: bool
    size_ok: bool
    same_copy_clear_of_strip: bool
    blocks_contiguous_at_markers: bool
    quadrilaterals_ok: Optional[bool]  # None when the arrangement was not built

    def __str__(self) -> str:
        return (
            f"size={self.size_ok} strip={self.same_copy_clear_of_strip} "
            f"markers={self.blocks_contiguous_at_markers} quads={self.quadrilaterals_ok}"
        )


def verify_chain_geometry(inst: ChainInstance, build_arrangement: bool = True) -> ChainGeometryReport:
    """Machine-check the construction's properties.

    (i)  at every tail marker the copies appear as contiguous blocks, so
         within-copy adjacency is global adjacency;
    (ii) no two same-copy lines cross inside the strip, and all cross-copy
         crossings land inside it;
    (iii) any two strip-adjacent lines of one copy bound a common 4-line cell
         with any such pair of any other copy (checked on the built
         arrangement unless disabled).
    """
    lines = list(inst.lines)
    size_ok = len(lines) == (inst.k + 1) ** (inst.level + 1)
    strip_ok = True
    contiguous = True
    quads: Optional[bool] = None
    if inst.level > 0:
        a, b = inst.strip
        for p, q in itertools.combinations(range(len(lines)), 2):
            x = intersect(lines[p], lines[q]).x
            inside = a < x < b
            same = inst.copy_map[p] == inst.copy_map[q]
            if same and inside:
                strip_ok = False
            if not same and not inside:
                strip_ok = False
        for x in inst.witness_tail:
            order = y_order_at(lines, x)
            blocks = [inst.copy_map[idx] for idx in order]
            for c in set(blocks):
                first = blocks.index(c)
                last = len(blocks) - 1 - blocks[::-1].index(c)
                if last - first + 1 != blocks.count(c):
                    contiguous = False
        if build_arrangement:
            quads = _quadrilaterals_ok(inst)
    ok = size_ok and strip_ok and contiguous and quads is not False
    return ChainGeometryReport(ok, size_ok, strip_ok, contiguous, quads)


def _quadrilaterals_ok(inst: ChainInstance) -> bool:
    a, b = inst.strip
    mid = (a + b) / 2
    order = y_order_at(list(inst.lines), mid)
    arr = build(list(inst.lines))
    cell_line_sets = {tuple(sorted(c.boundary_lines)) for c in arr.cells}
    pairs_by_copy: dict[int, list[tuple[int, int]]] = {}
    for c in range(inst.k + 1):
        block = [idx for idx in order if inst.copy_map[idx] == c]
        pairs_by_copy[c] = list(zip(block, block[1:]))
    for c, d in itertools.combinations(range(inst.k + 1), 2):
        for pa in pairs_by_copy[c]:
            for pb in pairs_by_copy[d]:
                quad = tuple(sorted(set(pa) | set(pb)))
                if quad not in cell_line_sets:
                    return False
    return True


@dataclass(frozen=True)
class ChainPropertyReport:
    mode: str  # "exhaustive" | "sampled"
    checked: int
    counterexamples: tuple[tuple[int, ...], ...]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def verify_chain_property(
    inst: ChainInstance,
    budget: int = 1_000_000,
    samples: Optional[int] = None,
    seed: int = 0,
    max_counterexamples: int = 10,
) -> ChainPropertyReport:
    """Every k-coloring has a monochromatic cell or a same-colored adjacent
    pair at some remaining witness marker.

    Exhaustive when k^n fits the budget and no sample count is given;
    otherwise uniform sampling.  Counterexample colorings are returned for
    replay (none are expected).
    """
    lines = list(inst.lines)
    n = len(lines)
    k = inst.k
    arr = build(lines)
    edge_masks = []
    for e in line_cell(arr).edges:
        mask = 0
        for vtx in e:
            mask |= 1 << vtx
        edge_masks.append(mask)
    marker_orders = [y_order_at(lines, x) for x in inst.witness_tail]

    def satisfied(coloring: Sequence[int]) -> bool:
        masks = [0] * k
        for idx, color in enumerate(coloring):
            masks[color] |= 1 << idx
        for em in edge_masks:
            for cm in masks:
                if em & ~cm == 0:
                    return True
        for order in marker_orders:
            for p, q in zip(order, order[1:]):
                if coloring[p] == coloring[q]:
                    return True
        return False

    bad: list[tuple[int, ...]] = []
    if samples is None:
        if k**n > budget:
            raise BudgetExceeded(f"{k}^{n} colorings exceed budget {budget}")
        checked = 0
        for coloring in itertools.product(range(k), repeat=n):
            checked += 1
            if not satisfied(coloring):
                if len(bad) < max_counterexamples:
                    bad.append(coloring)
        return ChainPropertyReport("exhaustive", checked, tuple(bad))
    rng = random.Random(seed)
    for _ in range(samples):
        coloring = tuple(rng.randrange(k) for _ in range(n))
        if not satisfied(coloring):
            if len(bad) < max_counterexamples:
                bad.append(coloring)
    return ChainPropertyReport("sampled", samples, tuple(bad))
