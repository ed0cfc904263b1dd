"""Per-diagram SVG rendering with the OPM shape vocabulary.

Objects are rectangles, processes ellipses and states rounded rectangles
drawn inside their owner. The layout is a fixed three-column grid: objects
alternate between the outer columns and processes stack in the centre. An
in-zoomed anchor is drawn as a large ellipse enclosing its subprocesses;
an unfolded anchor sits at the top of the centre column. Endpoints of
shown links that are not members of the diagram are drawn as dashed
context shapes.
"""

from __future__ import annotations

import math
import textwrap
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .diagnostics import errors_only
from .errors import InvalidModel
from .kinds import LinkKind, NodeKind, Refinement
from .model import Model, ObjectEntity
from .names import slugify
from .refinement import check_consistency
from .validator import validate

WRAP = 18
CHAR_W = 7.0
LINE_H = 15.0
PAD = 10.0
STATE_PAD = 6.0
STATE_GAP = 6.0
MIN_W = 80.0
MIN_H = 40.0
COL_GAP = 60.0
ROW_GAP = 30.0
INNER_GAP = 16.0
MARGIN = 20.0
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Placement:
    id: str
    x: float
    y: float
    w: float
    h: float
    shape: str  # "object" | "process" | "state"
    role: str  # "member" | "anchor" | "context"
    lines: tuple[str, ...]
    owner: str | None = None

    @property
    def cx(self) -> float:
        return self.x + self.w / 2

    @property
    def cy(self) -> float:
        return self.y + self.h / 2

    def contains(self, other: Placement) -> bool:
        return (
            self.x <= other.x
            and self.y <= other.y
            and other.x + other.w <= self.x + self.w
            and other.y + other.h <= self.y + self.h
        )


@dataclass(frozen=True)
class Route:
    link: str
    kind: LinkKind
    points: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class Layout:
    diagram: str
    width: float
    height: float
    placements: tuple[Placement, ...]
    routes: tuple[Route, ...]

    def placement(self, eid: str) -> Placement | None:
        for p in self.placements:
            if p.id == eid:
                return p
        return None


def wrap_label(text: str) -> tuple[str, ...]:
    return tuple(textwrap.wrap(text, WRAP)) or (text,)


def _text_box(lines) -> tuple[float, float]:
    return CHAR_W * max(len(s) for s in lines), LINE_H * len(lines)


class _Block:
    """A column item: one shape plus anything nested inside it."""

    def __init__(self, w: float, h: float, place):
        self.w, self.h, self.place = w, h, place


def _state_sizes(obj: ObjectEntity):
    sizes = []
    for st in obj.states:
        lines = wrap_label(st.name)
        tw, th = _text_box(lines)
        sizes.append((st, lines, tw + 2 * STATE_PAD, th + STATE_PAD))
    return sizes


def _object_block(obj: ObjectEntity, role: str) -> _Block:
    lines = wrap_label(obj.name)
    tw, th = _text_box(lines)
    label_h = th + 2 * PAD
    states = _state_sizes(obj)
    row_w = sum(s[2] for s in states) + STATE_GAP * max(len(states) - 1, 0) + 2 * PAD
    row_h = max((s[3] for s in states), default=0.0)
    w = max(MIN_W, tw + 2 * PAD, row_w if states else 0.0)
    h = max(MIN_H, label_h + (row_h + PAD if states else 0.0))

    def place(x: float, y: float) -> list[Placement]:
        out = [Placement(obj.id, x, y, w, h, "object", role, lines)]
        sx = x + (w - (row_w - 2 * PAD)) / 2
        for st, slines, sw, sh in states:
            out.append(Placement(st.id, sx, y + label_h, sw, sh, "state", role, slines, obj.id))
            sx += sw + STATE_GAP
        return out

    return _Block(w, h, place)


def _process_size(name: str) -> tuple[tuple[str, ...], float, float]:
    lines = wrap_label(name)
    tw, th = _text_box(lines)
    return lines, max(MIN_W, (tw + 2 * PAD) * SQRT2), max(MIN_H, (th + 2 * PAD) * SQRT2)


def _process_block(eid: str, name: str, role: str) -> _Block:
    lines, w, h = _process_size(name)
    return _Block(w, h, lambda x, y: [Placement(eid, x, y, w, h, "process", role, lines)])


def _zoom_block(model: Model, anchor: str, inner: list[str]) -> _Block:
    """Anchor ellipse circumscribing the rectangle that holds the title and subprocesses."""
    title = wrap_label(model.label(anchor))
    tw, th = _text_box(title)
    subs = [(eid, *_process_size(model.label(eid))) for eid in inner]
    inner_w = max([tw] + [s[2] for s in subs]) + 2 * PAD
    inner_h = th + sum(s[3] for s in subs) + INNER_GAP * len(subs) + 2 * PAD
    w, h = inner_w * SQRT2, inner_h * SQRT2

    def place(x: float, y: float) -> list[Placement]:
        out = [Placement(anchor, x, y, w, h, "process", "anchor", title)]
        top = y + (h - inner_h) / 2 + PAD + th + INNER_GAP
        for eid, lines, sw, sh in subs:
            out.append(Placement(eid, x + (w - sw) / 2, top, sw, sh, "process", "member", lines))
            top += sh + INNER_GAP
        return out

    return _Block(w, h, place)


def _block_for(model: Model, eid: str, role: str) -> _Block:
    ent = model.entities[eid]
    if isinstance(ent, ObjectEntity):
        return _object_block(ent, role)
    return _process_block(eid, ent.name, role)


def layout(model: Model, diagram: str) -> Layout:
    d = model.diagram(diagram)
    errors = errors_only(validate(model) + check_consistency(model))
    if errors:
        raise InvalidModel(errors)
    rest = sorted((e for e in d.members_entities if e not in d.constituents), key=model.label)
    members = list(d.constituents) + rest
    context: set[str] = set()
    for lid in d.members_links:
        link = model.links[lid]
        for end in (link.source.target, link.destination.target):
            owner = model.owner_of(end)
            if owner not in members and owner != d.anchor:
                context.add(owner)
    ctx = sorted(context, key=model.label)

    def kind(eid):
        return model.entities[eid].kind

    zoom_inner = list(d.constituents) if d.refinement is Refinement.ZOOM else []
    objects = [(e, "member") for e in members if kind(e) is NodeKind.OBJECT]
    objects += [(e, "context") for e in ctx if kind(e) is NodeKind.OBJECT]
    centre: list[_Block] = []
    if d.anchor is not None:
        if zoom_inner:
            centre.append(_zoom_block(model, d.anchor, zoom_inner))
        else:
            centre.append(_block_for(model, d.anchor, "anchor"))
    centre += [_block_for(model, e, "member") for e in members if kind(e) is NodeKind.PROCESS and e not in zoom_inner]
    centre += [_block_for(model, e, "context") for e in ctx if kind(e) is NodeKind.PROCESS]
    left = [_block_for(model, e, role) for e, role in objects[0::2]]
    right = [_block_for(model, e, role) for e, role in objects[1::2]]

    placements: list[Placement] = []
    x = MARGIN
    bottom = MARGIN
    for column in (left, centre, right):
        if not column:
            continue
        col_w = max(b.w for b in column)
        y = MARGIN
        for block in column:
            placements += block.place(x + (col_w - block.w) / 2, y)
            y += block.h + ROW_GAP
        bottom = max(bottom, y - ROW_GAP)
        x += col_w + COL_GAP
    width = x - COL_GAP + MARGIN if placements else 2 * MARGIN
    height = bottom + MARGIN if placements else 2 * MARGIN

    by_id = {p.id: p for p in placements}
    routes = []
    links = sorted(
        (model.links[lid] for lid in d.members_links),
        key=lambda l: (model.label(l.source.target), model.label(l.destination.target), l.kind.order),
    )
    for link in links:
        a, b = by_id.get(link.source.target), by_id.get(link.destination.target)
        if a is not None and b is not None:
            routes.append(Route(link.id, link.kind, _route(a, b)))
    return Layout(diagram, width, height, tuple(placements), tuple(routes))


def _boundary(p: Placement, dx: float, dy: float) -> tuple[float, float]:
    """Point where a ray from the centre of ``p`` along (dx, dy) leaves its shape."""
    if dx == 0 and dy == 0:
        return p.cx, p.cy
    if p.shape == "process":
        t = 1.0 / math.hypot(dx / (p.w / 2), dy / (p.h / 2))
    else:
        tx = (p.w / 2) / abs(dx) if dx else math.inf
        ty = (p.h / 2) / abs(dy) if dy else math.inf
        t = min(tx, ty)
    return p.cx + dx * t, p.cy + dy * t


def _route(a: Placement, b: Placement) -> tuple[tuple[float, float], ...]:
    if a.contains(b) or b.contains(a):
        inner, outer = (b, a) if a.contains(b) else (a, b)
        start = _boundary(inner, 0.0, -1.0)
        end = _boundary(outer, inner.cx - outer.cx, -outer.h)
        pts = (start, end) if inner is a else (end, start)
        return pts
    dx, dy = b.cx - a.cx, b.cy - a.cy
    return (_boundary(a, dx, dy), _boundary(b, -dx, -dy))


# -- SVG --------------------------------------------------------------------

STROKE = {"object": "#2e7d32", "process": "#1565c0", "state": "#8d6e00"}

_MARKERS = """<defs>
<marker id="m-aggregation" viewBox="0 0 12 12" refX="12" refY="6" markerWidth="12" markerHeight="12" markerUnits="userSpaceOnUse" orient="auto"><path d="M0,0 L12,6 L0,12 z" fill="#000000"/></marker>
<marker id="m-exhibition" viewBox="0 0 12 12" refX="12" refY="6" markerWidth="12" markerHeight="12" markerUnits="userSpaceOnUse" orient="auto"><path d="M0,0 L12,6 L0,12 z" fill="#ffffff" stroke="#000000"/><path d="M3,3.5 L8,6 L3,8.5 z" fill="#000000"/></marker>
<marker id="m-generalization" viewBox="0 0 12 12" refX="12" refY="6" markerWidth="12" markerHeight="12" markerUnits="userSpaceOnUse" orient="auto"><path d="M0,0 L12,6 L0,12 z" fill="#ffffff" stroke="#000000"/></marker>
<marker id="m-instantiation" viewBox="0 0 12 12" refX="12" refY="6" markerWidth="12" markerHeight="12" markerUnits="userSpaceOnUse" orient="auto"><path d="M0,0 L12,6 L0,12 z" fill="#ffffff" stroke="#000000"/><circle cx="4" cy="6" r="2" fill="#000000"/></marker>
<marker id="m-arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="10" markerHeight="10" markerUnits="userSpaceOnUse" orient="auto"><path d="M0,0 L10,5 L0,10" fill="none" stroke="#000000"/></marker>
<marker id="m-arrow-start" viewBox="0 0 10 10" refX="0" refY="5" markerWidth="10" markerHeight="10" markerUnits="userSpaceOnUse" orient="auto"><path d="M10,0 L0,5 L10,10" fill="none" stroke="#000000"/></marker>
<marker id="m-agent" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="10" markerHeight="10" markerUnits="userSpaceOnUse" orient="auto"><circle cx="5" cy="5" r="4.5" fill="#000000"/></marker>
<marker id="m-instrument" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="10" markerHeight="10" markerUnits="userSpaceOnUse" orient="auto"><circle cx="5" cy="5" r="4.5" fill="#ffffff" stroke="#000000"/></marker>
</defs>"""

_END_MARKER = {
    LinkKind.AGGREGATION: "m-aggregation",
    LinkKind.EXHIBITION: "m-exhibition",
    LinkKind.GENERALIZATION: "m-generalization",
    LinkKind.INSTANTIATION: "m-instantiation",
    LinkKind.CONSUMPTION: "m-arrow",
    LinkKind.RESULT: "m-arrow",
    LinkKind.EFFECT: "m-arrow",
    LinkKind.AGENT: "m-agent",
    LinkKind.INSTRUMENT: "m-instrument",
}


def _n(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _text(p: Placement, cy: float) -> str:
    top = cy - LINE_H * len(p.lines) / 2 + LINE_H * 0.75
    spans = "".join(
        f'<tspan x="{_n(p.cx)}" y="{_n(top + i * LINE_H)}">{escape(line)}</tspan>' for i, line in enumerate(p.lines)
    )
    return f'<text class="opm-label" text-anchor="middle" font-family="sans-serif" font-size="12">{spans}</text>'


def _shape(p: Placement, model: Model, zoom: bool) -> list[str]:
    attrs = f'data-id={quoteattr(p.id)} data-role="{p.role}"'
    dash = ' stroke-dasharray="5 3"' if p.role == "context" else ""
    stroke = f'stroke="{STROKE[p.shape]}" stroke-width="2"{dash}'
    if p.shape == "process":
        out = [
            f'<ellipse class="opm-process" {attrs} cx="{_n(p.cx)}" cy="{_n(p.cy)}" '
            f'rx="{_n(p.w / 2)}" ry="{_n(p.h / 2)}" fill="#ffffff" {stroke}/>'
        ]
        if p.role == "anchor" and zoom:
            # title sits in the top band of the enclosing ellipse
            title_h = LINE_H * len(p.lines)
            inner_h = p.h / SQRT2
            out.append(_text(p, p.y + (p.h - inner_h) / 2 + PAD + title_h / 2))
        else:
            out.append(_text(p, p.cy))
        return out
    if p.shape == "state":
        return [
            f'<rect class="opm-state" {attrs} data-owner={quoteattr(p.owner or "")} x="{_n(p.x)}" y="{_n(p.y)}" '
            f'width="{_n(p.w)}" height="{_n(p.h)}" rx="8" ry="8" fill="#ffffff" {stroke}/>',
            _text(p, p.cy),
        ]
    ent = model.entities[p.id]
    label_cy = p.y + PAD + LINE_H * len(p.lines) / 2 if getattr(ent, "states", ()) else p.cy
    return [
        f'<rect class="opm-object" {attrs} x="{_n(p.x)}" y="{_n(p.y)}" width="{_n(p.w)}" height="{_n(p.h)}" '
        f'fill="#ffffff" {stroke}/>',
        _text(p, label_cy),
    ]


def to_svg(layout: Layout, model: Model) -> str:
    d = model.diagram(layout.diagram)
    zoom = d.refinement is Refinement.ZOOM
    w, h = _n(layout.width), _n(layout.height)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f"<title>{escape(model.name)}: {escape(layout.diagram)}</title>",
        _MARKERS,
    ]
    anchors = [p for p in layout.placements if p.role == "anchor"]
    others = [p for p in layout.placements if p.role != "anchor"]
    out.append('<g class="anchor">')
    for p in anchors:
        out += _shape(p, model, zoom)
    out.append("</g>")
    out.append('<g class="links" fill="none" stroke="#000000" stroke-width="1.5">')
    for r in layout.routes:
        pts = " ".join(f"{_n(x)},{_n(y)}" for x, y in r.points)
        start = ' marker-start="url(#m-arrow-start)"' if r.kind is LinkKind.EFFECT else ""
        out.append(
            f'<polyline class="opm-link opm-{r.kind.value}" data-id={quoteattr(r.link)} points="{pts}"'
            f'{start} marker-end="url(#{_END_MARKER[r.kind]})"/>'
        )
    out.append("</g>")
    out.append('<g class="entities">')
    for p in others:
        out += _shape(p, model, zoom)
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def svg_filename(model: Model, diagram: str) -> str:
    return f"{slugify(model.name)}-{diagram}.svg"


def render_diagram(model: Model, diagram: str) -> str:
    return to_svg(layout(model, diagram), model)
