"""Arcs of an N-cycle inside F_N, as JSON-ready records and as SVG."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .coding import NCycle, segment
from .qform import Form, sign


@dataclass(frozen=True)
class PlotArc:
    """Piece of the geodesic of `form` inside F_N, in the direction of travel."""

    start: tuple[Fraction, Fraction]  # (x, y^2)
    end: tuple[Fraction, Fraction]
    form: Form
    tag: str
    center: Fraction
    radius2: Fraction

    def to_dict(self) -> dict:
        return {"from": [fmt(self.start[0]), fmt_sqrt(self.start[1])],
                "to": [fmt(self.end[0]), fmt_sqrt(self.end[1])],
                "form": self.form.tolist(), "tag": self.tag}


def fmt(v: Fraction | float) -> float:
    return float(f"{float(v):.15g}")


def fmt_sqrt(v: Fraction) -> float:
    return float(f"{math.sqrt(v):.15g}")


def cycle_arcs(c: NCycle) -> list[PlotArc]:
    out = []
    for _, q, _, tag in c.rows():
        seg = segment(c.N, q)
        if seg is None:
            raise AssertionError(f"{q} does not meet F_N")
        lo = (seg.lo, seg.height2(seg.lo))
        hi = (seg.hi, seg.height2(seg.hi))
        start, end = (lo, hi) if sign(q.a) == 1 else (hi, lo)
        out.append(PlotArc(start, end, q, tag.symbol, seg.center, seg.radius2))
    return out


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
            "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")


def _domain_path(N: int, sx, sy, scale: float, top: float) -> str:
    """Outline of F_N: two vertical sides over the arcs |tau - k| = 1.

    Over [k - 1/2, k + 1/2] the lower boundary is the circle at k, except
    near 0 where the circles at -1 and 1 come down to the cusp.
    """
    h = N / 2
    low = math.sqrt(3) / 2
    r = f"{scale:.3f}"
    parts = [f"M {sx(-h)} {sy(top)} L {sx(-h)} {sy(low)}"]
    for k in range(-(N - 1) // 2, (N - 1) // 2 + 1):
        if k == 0:
            parts.append(f"A {r} {r} 0 0 1 {sx(0)} {sy(0)} A {r} {r} 0 0 1 {sx(0.5)} {sy(low)}")
        else:
            parts.append(f"A {r} {r} 0 0 1 {sx(k + 0.5)} {sy(low)}")
    parts.append(f"L {sx(h)} {sy(top)}")
    return " ".join(parts)


def render_svg(c: NCycle, width: int = 960) -> str:
    """Deterministic SVG of the cycle's arcs over the strip |x| <= (N+1)/2."""
    N = c.N
    arcs = cycle_arcs(c)
    xmin, xmax = -(N + 1) / 2, (N + 1) / 2
    ymax = max([math.sqrt(a.radius2) for a in arcs] + [math.sqrt(N) / 2 + 1, 1.5]) * 1.05
    scale = width / (xmax - xmin)
    height = int(math.ceil(ymax * scale)) + 20

    def sx(x: float) -> str:
        return f"{(float(x) - xmin) * scale:.3f}"

    def sy(y: float) -> str:
        return f"{height - 10 - float(y) * scale:.3f}"

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>N-cycle of {c.forms[0]} at level {N}</title>',
        f'<line x1="0" y1="{sy(0)}" x2="{width}" y2="{sy(0)}" stroke="#999" stroke-width="1"/>',
        f'<path d="{_domain_path(N, sx, sy, scale, ymax)}" fill="none" stroke="#444" stroke-width="1.2"/>',
    ]
    for k in range(-(N - 1) // 2, (N - 1) // 2 + 1):
        if (k * k + 1) % N == 0:
            lines.append(f'<circle cx="{sx(k)}" cy="{sy(1)}" r="3" fill="#000"><title>{k}+i</title></circle>')
    for i, a in enumerate(arcs):
        r = math.sqrt(a.radius2) * scale
        x0, y0 = float(a.start[0]), math.sqrt(a.start[1])
        x1, y1 = float(a.end[0]), math.sqrt(a.end[1])
        sweep = 1 if x1 > x0 else 0
        color = _PALETTE[i % len(_PALETTE)]
        lines.append(
            f'<path d="M {sx(x0)} {sy(y0)} A {r:.3f} {r:.3f} 0 0 {sweep} {sx(x1)} {sy(y1)}" '
            f'fill="none" stroke="{color}" stroke-width="2">'
            f'<title>{i}: {a.form} case {a.tag}</title></path>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
