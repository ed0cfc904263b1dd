"""Flat node/edge form of a model, with DOT and node-link JSON serializers."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .diagnostics import errors_only
from .errors import InvalidModel
from .model import Model
from .refinement import check_consistency
from .validator import validate

HAS_STATE = "has-state"

DOT_SHAPES = {"object": "box", "process": "ellipse", "state": "Mrecord"}


@dataclass(frozen=True)
class GraphNode:
    id: str
    kind: str
    label: str
    diagrams: tuple[str, ...]


@dataclass(frozen=True)
class GraphEdge:
    source: str
    target: str
    kind: str


@dataclass(frozen=True)
class GraphDoc:
    model: str
    nodes: tuple[GraphNode, ...]
    edges: tuple[GraphEdge, ...]


def to_graph(model: Model) -> GraphDoc:
    """Translate a clean model into a GraphDoc.

    Nodes are ordered by the first diagram (preorder) that shows them, then
    by name; each object's states follow it. Links come first among the
    edges, ordered the same way, then one has-state edge per state.
    """
    errors = errors_only(validate(model) + check_consistency(model))
    if errors:
        raise InvalidModel(errors)
    order = {d.id: i for i, d in enumerate(model.preorder())}
    shown: dict[str, list[str]] = {eid: [] for eid in model.entities}
    for d in model.preorder():
        for eid in d.members_entities:
            shown[eid].append(d.id)

    def first(dids):
        return min((order[d] for d in dids), default=len(order))

    nodes: list[GraphNode] = []
    has_state: list[GraphEdge] = []
    for ent in sorted(model.entities.values(), key=lambda e: (first(shown[e.id]), e.name)):
        dids = tuple(shown[ent.id])
        nodes.append(GraphNode(ent.id, ent.kind.value, ent.name, dids))
        for st in getattr(ent, "states", ()):
            nodes.append(GraphNode(st.id, "state", st.name, dids))
            has_state.append(GraphEdge(ent.id, st.id, HAS_STATE))
    links = sorted(
        model.links.values(),
        key=lambda l: (
            first(model.diagrams_with_link(l.id)),
            model.label(l.source.target),
            model.label(l.destination.target),
            l.kind.order,
        ),
    )
    edges = [GraphEdge(l.source.target, l.destination.target, l.kind.value) for l in links]
    return GraphDoc(model.name, tuple(nodes), tuple(edges + has_state))


def _dot_str(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: GraphDoc) -> str:
    lines = [f"digraph {_dot_str(graph.model)} {{"]
    for node in graph.nodes:
        lines.append(f"  {_dot_str(node.id)} [shape={DOT_SHAPES[node.kind]}, label={_dot_str(node.label)}];")
    for edge in graph.edges:
        lines.append(f"  {_dot_str(edge.source)} -> {_dot_str(edge.target)} [label={_dot_str(edge.kind)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json_graph(graph: GraphDoc) -> str:
    doc = {
        "model": graph.model,
        "nodes": [{"id": n.id, "kind": n.kind, "label": n.label, "diagrams": list(n.diagrams)} for n in graph.nodes],
        "edges": [{"source": e.source, "target": e.target, "kind": e.kind} for e in graph.edges],
    }
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
