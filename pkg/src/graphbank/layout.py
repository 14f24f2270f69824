"""Deterministic geometry and SVG rendering of annotation graphs.

Tokens sit on a fixed horizontal grid in surface order, never reordered;
phrase nodes float above at a height given by their distance from the
terminals; edges are straight lines that simply cross when yields are
discontinuous, because the crossing *is* the information.  Secondary links
are drawn dashed.  Childless nodes (possible while a sentence is in
progress) are parked on the right with a warning disc.

Layout is a pure function of the graph and three numbers, and the SVG
serialization formats every coordinate with one decimal, so equal graphs
produce byte-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .graph import AnnotationGraph
from .tagsets import UNLABELED

GRID = 80
ROWHEIGHT = 60
MARGIN = 50


@dataclass(frozen=True)
class TokenGlyph:
    position: int
    form: str
    pos_tag: str
    x: float
    y: float


@dataclass(frozen=True)
class NodeGlyph:
    node_id: int
    category: str
    x: float
    y: float
    depth: int
    childless: bool


@dataclass(frozen=True)
class EdgeGlyph:
    parent: int
    child: int
    function: str
    x1: float
    y1: float
    x2: float
    y2: float

    @property
    def label_x(self) -> float:
        return (self.x1 + self.x2) / 2

    @property
    def label_y(self) -> float:
        return (self.y1 + self.y2) / 2


@dataclass(frozen=True)
class LinkGlyph:
    source: int
    target: int
    function: str | None
    x1: float
    y1: float
    x2: float
    y2: float


@dataclass(frozen=True)
class Geometry:
    width: float
    height: float
    baseline: float
    tokens: tuple[TokenGlyph, ...]
    nodes: tuple[NodeGlyph, ...]
    edges: tuple[EdgeGlyph, ...]
    links: tuple[LinkGlyph, ...]


def layout(
    graph: AnnotationGraph,
    grid: int = GRID,
    rowheight: int = ROWHEIGHT,
    margin: int = MARGIN,
) -> Geometry:
    """Compute anchors: token x from surface position, node x from the
    midpoint of its outermost direct children, node y from nesting depth."""
    depths = _depths(graph)
    max_depth = max(depths.values(), default=0)
    baseline = float(margin + max_depth * rowheight)

    anchors: dict[int, tuple[float, float]] = {}
    token_glyphs = []
    for tok in graph.tokens:
        x = float((tok.position - 1) * grid + margin)
        anchors[tok.position] = (x, baseline)
        token_glyphs.append(TokenGlyph(tok.position, tok.form, tok.pos_tag, x, baseline))

    children: dict[int, list[int]] = {}
    for child, edge in graph.incoming.items():
        children.setdefault(edge.parent, []).append(child)

    node_glyphs = []
    parked = 0
    for node_id in _bottom_up(graph, depths):
        node = graph.phrase_nodes[node_id]
        depth = depths[node_id]
        y = baseline - depth * rowheight
        kids = children.get(node_id)
        if kids:
            xs = [anchors[c][0] for c in kids]
            x = (min(xs) + max(xs)) / 2
        else:
            x = float((len(graph.tokens) + parked) * grid + margin)
            parked += 1
        anchors[node_id] = (x, y)
        node_glyphs.append(
            NodeGlyph(node_id, node.category, x, y, depth, childless=not kids)
        )
    node_glyphs.sort(key=lambda n: n.node_id)

    edge_glyphs = []
    for child in sorted(graph.incoming):
        edge = graph.incoming[child]
        x1, y1 = anchors[edge.parent]
        x2, y2 = anchors[child]
        edge_glyphs.append(EdgeGlyph(edge.parent, child, edge.function, x1, y1, x2, y2))

    link_glyphs = []
    for link in graph.secondary_links:
        x1, y1 = anchors[link.source]
        x2, y2 = anchors[link.target]
        link_glyphs.append(
            LinkGlyph(link.source, link.target, link.function, x1, y1, x2, y2)
        )

    width = max([a[0] for a in anchors.values()], default=float(margin)) + margin
    height = baseline + 2.0 * 24 + margin / 2  # room for the two token text rows
    return Geometry(
        width=width,
        height=height,
        baseline=baseline,
        tokens=tuple(token_glyphs),
        nodes=tuple(node_glyphs),
        edges=tuple(edge_glyphs),
        links=tuple(link_glyphs),
    )


def _depths(graph: AnnotationGraph) -> dict[int, int]:
    children: dict[int, list[int]] = {}
    for child, edge in graph.incoming.items():
        children.setdefault(edge.parent, []).append(child)
    depths: dict[int, int] = {}

    def depth_of(ref: int) -> int:
        if graph.is_token(ref):
            return 0
        if ref in depths:
            return depths[ref]
        kids = children.get(ref, ())
        d = 1 + max((depth_of(c) for c in kids), default=0)
        depths[ref] = d
        return d

    for node_id in graph.phrase_nodes:
        depth_of(node_id)
    return depths


def _bottom_up(graph: AnnotationGraph, depths: dict[int, int]) -> list[int]:
    return sorted(graph.phrase_nodes, key=lambda n: (depths[n], n))


# --- SVG -----------------------------------------------------------------

_STYLE = (
    "text{font-family:monospace;font-size:13px;text-anchor:middle}"
    ".pos{fill:#555;font-size:11px}"
    ".cat{font-weight:bold}"
    ".fn{fill:#036;font-size:11px}"
    ".fn.unlabeled{fill:#c00}"
    "line.edge{stroke:#333;stroke-width:1}"
    "line.link{stroke:#888;stroke-width:1;stroke-dasharray:4 3}"
    "circle.warn{fill:#c00}"
    "circle.anchor{fill:#333}"
)


def _n(value: float) -> str:
    return f"{value:.1f}"


def render(geometry: Geometry, format: str = "svg") -> str:
    """Serialize geometry to vector text; only SVG is built in.

    Output is byte-deterministic: element order follows the geometry
    tuples, every coordinate is written with one decimal, and there is
    exactly one text element per token, per node label, and per edge or
    link label.
    """
    if format != "svg":
        raise ValueError(f"unsupported format {format!r}")
    g = geometry
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{_n(g.width)}" height="{_n(g.height)}" '
        f'viewBox="0 0 {_n(g.width)} {_n(g.height)}">',
        f"<style>{_STYLE}</style>",
    ]
    for e in g.edges:
        out.append(
            f'<line class="edge" x1="{_n(e.x1)}" y1="{_n(e.y1)}" '
            f'x2="{_n(e.x2)}" y2="{_n(e.y2)}"/>'
        )
    for l in g.links:
        out.append(
            f'<line class="link" x1="{_n(l.x1)}" y1="{_n(l.y1)}" '
            f'x2="{_n(l.x2)}" y2="{_n(l.y2)}"/>'
        )
    for e in g.edges:
        css = "fn unlabeled" if e.function == UNLABELED else "fn"
        out.append(
            f'<text class="{css}" x="{_n(e.label_x)}" y="{_n(e.label_y - 3)}">'
            f"{escape(e.function)}</text>"
        )
    for l in g.links:
        if l.function is not None:
            out.append(
                f'<text class="fn" x="{_n((l.x1 + l.x2) / 2)}" '
                f'y="{_n((l.y1 + l.y2) / 2 + 11)}">{escape(l.function)}</text>'
            )
    for n in g.nodes:
        out.append(f'<circle class="anchor" cx="{_n(n.x)}" cy="{_n(n.y)}" r="3"/>')
        if n.childless:
            out.append(f'<circle class="warn" cx="{_n(n.x)}" cy="{_n(n.y - 16)}" r="4"/>')
        out.append(
            f'<text class="cat" x="{_n(n.x)}" y="{_n(n.y - 6)}">{escape(n.category)}</text>'
        )
    for t in g.tokens:
        out.append(
            f'<text x="{_n(t.x)}" y="{_n(t.y + 18)}">{escape(t.form)}'
            f'<tspan class="pos" x="{_n(t.x)}" y="{_n(t.y + 34)}">'
            f"{escape(t.pos_tag)}</tspan></text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_graph(graph: AnnotationGraph, format: str = "svg", **dims) -> str:
    return render(layout(graph, **dims), format=format)
