"""Static SVG figures of planar scenes and certificate steps."""

from __future__ import annotations

from .configurations import Scene
from .coverage import residual_sequence
from .errors import DimensionError, EmptyBody
from .geometry import ConvexBody, Direction, HalfSpace, bounding_box, dilate_about, is_empty, vertices_2d
from .numeric import FLOAT
from .planks import Plank, plank_as_body

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")
SIZE = 600


def _num(x) -> str:
    s = f"{float(x):.6f}"
    return "0.000000" if s == "-0.000000" else s


def _points(pts) -> str:
    # y is flipped so that the figure reads with y pointing up
    return " ".join(f"{_num(x)},{_num(-y)}" for x, y in pts)


def _polygon(body: ConvexBody, **attrs) -> str:
    try:
        pts = vertices_2d(body)
    except EmptyBody:
        return ""
    extra = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())
    if len(pts) <= 2:
        a, b = (pts[0], pts[-1])
        return f'<line x1="{_num(a[0])}" y1="{_num(-a[1])}" x2="{_num(b[0])}" y2="{_num(-b[1])}" {extra}/>'
    return f'<polygon points="{_points(pts)}" {extra}/>'


def _line(frame: ConvexBody, h, label, color, sw, dash, fs) -> list:
    """Boundary line of a halfspace clipped to the frame, with a text label."""
    n = h.normal
    norm = FLOAT.norm(n)
    unit = tuple(c / norm for c in n)
    level = h.offset / norm
    seg = plank_as_body(Plank(Direction(unit, FLOAT), level, level), frame)
    if is_empty(seg):
        return []
    pts = vertices_2d(seg)
    a, b = pts[0], pts[-1]
    return [
        f'<line x1="{_num(a[0])}" y1="{_num(-a[1])}" x2="{_num(b[0])}" y2="{_num(-b[1])}" '
        f'stroke="{color}" stroke-width="{sw}" stroke-dasharray="{dash}"/>',
        f'<text x="{_num(b[0])}" y="{_num(-b[1])}" font-size="{fs}" fill="{color}">{label}</text>',
    ]


def render_scene(scene: Scene, peel=None, step=None) -> str:
    """SVG for a planar scene.

    ``peel`` is a prefix of plank indices whose residual is shaded; ``step`` is
    a certificate :class:`PeelStep` whose dilation witness is drawn.
    """
    if scene.dim != 2:
        raise DimensionError("only planar scenes can be rendered")
    scene = scene.to_backend(FLOAT)
    body = scene.body
    (x0, y0), (x1, y1) = bounding_box(body)
    span = max(x1 - x0, y1 - y0, 1e-9)
    pad = 0.1 * span
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
    frame = ConvexBody.box((x0, y0), (x1, y1), FLOAT)
    w, h = x1 - x0, y1 - y0
    sw = _num(span / 300)
    fs = _num(span / 25)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" '
        f'height="{SIZE * h / w:.0f}" viewBox="{_num(x0)} {_num(-y1)} {_num(w)} {_num(h)}">',
        f'<rect x="{_num(x0)}" y="{_num(-y1)}" width="{_num(w)}" height="{_num(h)}" fill="#ffffff"/>',
    ]
    for i, p in enumerate(scene.planks):
        color = PALETTE[i % len(PALETTE)]
        out.append(_polygon(plank_as_body(p, frame), fill=color, fill_opacity="0.3", stroke=color, stroke_width=sw))
    if peel:
        seq = residual_sequence(body, [scene.planks[i] for i in peel])
        if seq.ok and seq.bodies and not is_empty(seq.bodies[-1]):
            out.append(_polygon(seq.bodies[-1].to_backend(FLOAT), fill="#999999", fill_opacity="0.5", stroke="none"))
    out.append(_polygon(body, fill="none", stroke="#000000", stroke_width=sw))
    if step is not None and step.dilation is not None:
        wit = step.dilation
        before = step.body_before.to_backend(FLOAT)
        after = step.body_after.to_backend(FLOAT)
        out.append(_polygon(after, fill="#bbbbbb", fill_opacity="0.5", stroke="#555555", stroke_width=sw))
        dilated = dilate_about(before, tuple(float(c) for c in wit.p), float(wit.rho))
        out.append(_polygon(dilated, fill="none", stroke="#000000", stroke_width=sw, stroke_dasharray=sw))
        for h_, label in ((wit.h1, "H1"), (wit.h2, "H2")):
            hf = HalfSpace(tuple(float(c) for c in h_.normal), float(h_.offset))
            out += _line(frame, hf, label, "#d62728", sw, _num(4 * span / 300), fs)
        px, py = (float(c) for c in wit.p)
        out.append(f'<circle cx="{_num(px)}" cy="{_num(-py)}" r="{_num(span / 100)}" fill="#000000"/>')
        out.append(f'<text x="{_num(px)}" y="{_num(-py)}" font-size="{fs}" fill="#000000">p</text>')
    out.append("</svg>")
    return "\n".join(s for s in out if s) + "\n"
