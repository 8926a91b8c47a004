"""Deterministic SVG pictures of arrangements and certificates.

The viewport is the bounding box of the crossing vertices with a 20% margin;
all geometry is clipped to it with exact arithmetic and only formatted to
fixed decimals at emission time, so identical inputs yield identical bytes.

Certificate styling:

* line coloring        - lines stroked per color class;
* line independent set - chosen lines thick;
* vertex certificates  - chosen crossings marked with large circles;
* cell cover           - chosen cells shaded; one path per covered cell;
* cell coloring        - every cell shaded in its class color.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .arrangement import Arrangement
from .errors import MalformedCertificate
from .hypergraph import Certificate

PALETTE = (
    "#d62728",
    "#1f77b4",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#e377c2",
    "#17becf",
    "#bcbd22",
    "#7f7f7f",
)

_SCALE = 10_000


def _fmt(q: Fraction) -> str:
    """Fixed 4-decimal formatting computed in exact arithmetic."""
    scaled = round(q * _SCALE)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), _SCALE)
    return f"{sign}{whole}.{frac:04d}"


def infer_domain(arr: Arrangement, cert: Certificate) -> str:
    """Guess whether a certificate speaks about lines, vertices, or cells."""
    length = len(cert.colors) if cert.colors is not None else None
    candidates = []
    for domain, count in (
        ("lines", arr.n),
        ("vertices", len(arr.vertices)),
        ("cells", len(arr.cells)),
    ):
        if length is not None:
            if length == count:
                candidates.append(domain)
        else:
            if cert.members and max(cert.members) < count:
                candidates.append(domain)
            elif not cert.members:
                candidates.append(domain)
    if not candidates:
        raise MalformedCertificate("certificate does not fit lines, vertices, or cells")
    return candidates[0]


def _viewport(arr: Arrangement) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    if arr.vertices:
        xs = [v.point.x for v in arr.vertices]
        ys = [v.point.y for v in arr.vertices]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
    else:
        cs = [line.c for line in arr.lines] or [Fraction(0)]
        x0, x1 = Fraction(-1), Fraction(1)
        y0, y1 = min(cs) - 1, max(cs) + 1
    width = x1 - x0
    height = y1 - y0
    pad_x = width / 5 if width else Fraction(1)
    pad_y = height / 5 if height else Fraction(1)
    pad = max(pad_x, pad_y)
    return x0 - pad, y0 - pad, x1 + pad, y1 + pad


def _clip_line(line, box) -> Optional[tuple[Fraction, Fraction, Fraction, Fraction]]:
    x0, y0, x1, y1 = box
    lo_x, hi_x = x0, x1
    # y = c - a*x must stay within [y0, y1]
    a, c = line.a, line.c
    if a == 0:
        if not y0 <= c <= y1:
            return None
    else:
        xa = (c - y0) / a
        xb = (c - y1) / a
        lo_bound, hi_bound = min(xa, xb), max(xa, xb)
        lo_x = max(lo_x, lo_bound)
        hi_x = min(hi_x, hi_bound)
    if lo_x > hi_x:
        return None
    return lo_x, line.y_at(lo_x), hi_x, line.y_at(hi_x)


def _clip_cell(arr: Arrangement, cell, box) -> list[tuple[Fraction, Fraction]]:
    """Sutherland-Hodgman clip of the viewport rectangle by the cell's half-planes."""
    x0, y0, x1, y1 = box
    polygon: list[tuple[Fraction, Fraction]] = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    for idx, sign in enumerate(cell.signs):
        line = arr.lines[idx]

        def value(p):
            return sign * (line.c - line.a * p[0] - p[1])

        clipped: list[tuple[Fraction, Fraction]] = []
        for i in range(len(polygon)):
            p, q = polygon[i], polygon[(i + 1) % len(polygon)]
            vp, vq = value(p), value(q)
            if vp >= 0:
                clipped.append(p)
            if (vp > 0 > vq) or (vp < 0 < vq):
                t = vp / (vp - vq)
                clipped.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
        polygon = clipped
        if not polygon:
            break
    return polygon


def render_svg(
    arr: Arrangement,
    certificate: Optional[Certificate] = None,
    domain: Optional[str] = None,
    size: int = 640,
) -> str:
    """Serialize the arrangement (and an optional certificate) as SVG text."""
    if certificate is not None and domain is None:
        domain = infer_domain(arr, certificate)
    if certificate is not None:
        count = {"lines": arr.n, "vertices": len(arr.vertices), "cells": len(arr.cells)}[domain]
        if certificate.colors is not None and len(certificate.colors) != count:
            raise MalformedCertificate(
                f"coloring of length {len(certificate.colors)} does not match {count} {domain}"
            )
        if certificate.members is not None and certificate.members:
            if max(certificate.members) >= count:
                raise MalformedCertificate(f"member id out of range for {count} {domain}")

    box = _viewport(arr)
    x0, y0, x1, y1 = box
    view = f"{_fmt(x0)} {_fmt(-y1)} {_fmt(x1 - x0)} {_fmt(y1 - y0)}"
    stroke_w = _fmt((x1 - x0) / 320)
    thick_w = _fmt(3 * (x1 - x0) / 320)
    dot_r = _fmt((x1 - x0) / 120)
    guard_r = _fmt((x1 - x0) / 60)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="{view}">',
        f'<rect class="bg" x="{_fmt(x0)}" y="{_fmt(-y1)}" width="{_fmt(x1 - x0)}" '
        f'height="{_fmt(y1 - y0)}" fill="#ffffff"/>',
    ]

    shaded = 0
    if certificate is not None and domain == "cells":
        parts.append('<g class="cells">')
        for cell in arr.cells:
            if certificate.members is not None:
                if cell.id not in certificate.members:
                    continue
                fill, opacity = "#ffd67e", "0.85"
            else:
                fill = PALETTE[certificate.colors[cell.id] % len(PALETTE)]
                opacity = "0.25"
            polygon = _clip_cell(arr, cell, box)
            if len(polygon) < 3:
                continue
            points = " ".join(f"{_fmt(px)},{_fmt(-py)}" for px, py in polygon)
            shaded += 1
            parts.append(
                f'<path class="cell-shade" d="M {points} Z" fill="{fill}" '
                f'fill-opacity="{opacity}" stroke="none"/>'
            )
        parts.append("</g>")

    parts.append('<g class="lines">')
    for idx, line in enumerate(arr.lines):
        seg = _clip_line(line, box)
        if seg is None:
            continue
        sx0, sy0, sx1, sy1 = seg
        stroke = "#000000"
        width = stroke_w
        if certificate is not None and domain == "lines":
            if certificate.colors is not None:
                stroke = PALETTE[certificate.colors[idx] % len(PALETTE)]
            elif idx in certificate.members:
                width = thick_w
        parts.append(
            f'<line class="line line-{idx}" x1="{_fmt(sx0)}" y1="{_fmt(-sy0)}" '
            f'x2="{_fmt(sx1)}" y2="{_fmt(-sy1)}" stroke="{stroke}" stroke-width="{width}"/>'
        )
    parts.append("</g>")

    parts.append('<g class="vertices">')
    for v in arr.vertices:
        marked = False
        fill = "#000000"
        if certificate is not None and domain == "vertices":
            if certificate.members is not None:
                marked = v.id in certificate.members
            elif certificate.colors is not None:
                fill = PALETTE[certificate.colors[v.id] % len(PALETTE)]
                marked = True
        radius = guard_r if marked else dot_r
        cls = "vertex guard" if marked else "vertex"
        parts.append(
            f'<circle class="{cls}" cx="{_fmt(v.point.x)}" cy="{_fmt(-v.point.y)}" '
            f'r="{radius}" fill="{fill}"/>'
        )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
