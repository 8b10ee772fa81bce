"""Static SVG drawing of a fibre when sigma has rank 2."""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .expansion import FibreComplex

WIDTH = HEIGHT = 400
MARGIN = 40


def fibre_svg(F: FibreComplex, labels=("l1", "l2")) -> str:
    """Vertices, bounded edges and unbounded rays of a rank-2 fibre."""
    if any(len(x) != 2 for x in F.positions.values()):
        raise ValueError("figures are only drawn for rank-2 sigma")
    pts = list(F.positions.values()) or [(Fraction(0), Fraction(0))]
    extent = max([Fraction(1)] + [abs(c) for p in pts for c in p])
    ray_len = extent / 2
    span = extent + ray_len
    scale = Fraction(WIDTH - 2 * MARGIN) / span

    def xy(p):
        return (float(MARGIN + p[0] * scale), float(HEIGHT - MARGIN - p[1] * scale))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="6" refY="3" orient="auto">'
        '<path d="M0,0 L6,3 L0,6 z" fill="black"/></marker></defs>',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    ox, oy = xy((0, 0))
    ex, _ = xy((span, 0))
    _, ey = xy((0, span))
    out.append(f'<line x1="{ox:.2f}" y1="{oy:.2f}" x2="{ex:.2f}" y2="{oy:.2f}" stroke="#bbb"/>')
    out.append(f'<line x1="{ox:.2f}" y1="{oy:.2f}" x2="{ox:.2f}" y2="{ey:.2f}" stroke="#bbb"/>')
    out.append(f'<text x="{ex:.2f}" y="{oy + 16:.2f}" font-size="12">{escape(labels[0])}</text>')
    out.append(f'<text x="{ox - 20:.2f}" y="{ey:.2f}" font-size="12">{escape(labels[1])}</text>')
    for name, P in F.polyhedra.items():
        if P.dim != 1:
            continue
        if len(P.vertices) == 2:
            (x1, y1), (x2, y2) = (xy(F.positions[v]) for v in P.vertices)
            out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                       f'stroke="black" stroke-width="2"/>')
        elif len(P.vertices) == 1:
            start = F.positions[P.vertices[0]]
            d = P.recession[0]
            norm = max(abs(c) for c in d)
            end = tuple(s + ray_len * c / norm for s, c in zip(start, d))
            (x1, y1), (x2, y2) = xy(start), xy(end)
            out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                       f'stroke="black" stroke-width="2" marker-end="url(#arrow)"/>')
    for v, p in F.positions.items():
        x, y = xy(p)
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="blue"/>')
        out.append(f'<text x="{x + 6:.2f}" y="{y - 6:.2f}" font-size="12">{escape(v)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
