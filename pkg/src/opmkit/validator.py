"""Semantic rules over a model.

Error rules
    R1  structural link with illegal endpoint kinds
    R2  procedural link with illegal endpoint kinds
    R3  link endpoint that does not resolve, or whose kind tag is stale
    R4  self-link
    R5  empty, non-canonical or duplicate entity/state name
    R6  state whose recorded owner is not the object holding it
    R7  diagram membership that does not resolve, or an entity/link shown nowhere
    R8  refinement anchor shown outside its parent diagram, or anchoring twice
    R9  malformed diagram tree

Warning rules
    W1  isolated entity (no link touches it or its states)
    W2  process with no enabler and no transforming link
    W3  state never referenced by a link
    W4  entity shown in diagrams that are not on one ancestor chain

The legality table below is the only place endpoint rules are defined;
``model.add_link`` calls :func:`legality` too.
"""

from __future__ import annotations

from itertools import combinations
from typing import TYPE_CHECKING

from .diagnostics import Diagnostic, Severity, sort_key
from .kinds import LinkFamily, LinkKind, NodeKind
from .names import canonical_name, is_entity_name

if TYPE_CHECKING:
    from .model import Model

_O, _P, _S = NodeKind.OBJECT, NodeKind.PROCESS, NodeKind.STATE

TABLE_R: frozenset[tuple[LinkKind, NodeKind, NodeKind]] = frozenset(
    [(k, a, b) for k in (LinkKind.AGGREGATION, LinkKind.EXHIBITION, LinkKind.GENERALIZATION, LinkKind.INSTANTIATION)
     for a, b in ((_O, _O), (_P, _P))]
    + [(LinkKind.CONSUMPTION, a, b) for a, b in ((_O, _P), (_S, _P))]
    + [(LinkKind.RESULT, a, b) for a, b in ((_P, _O), (_P, _S))]
    + [(LinkKind.EFFECT, a, b) for a, b in ((_O, _P), (_P, _O))]
    + [(k, a, b) for k in (LinkKind.AGENT, LinkKind.INSTRUMENT) for a, b in ((_O, _P), (_S, _P))]
)

RULES: dict[str, tuple[Severity, str]] = {
    "R1": (Severity.ERROR, "structural link endpoints must both be objects or both be processes"),
    "R2": (Severity.ERROR, "procedural link endpoints violate the legality table"),
    "R3": (Severity.ERROR, "link endpoint must resolve to an entity or state of the right kind"),
    "R4": (Severity.ERROR, "links may not connect an element to itself"),
    "R5": (Severity.ERROR, "names must be non-empty, canonical and unique"),
    "R6": (Severity.ERROR, "a state must be owned by the object that holds it"),
    "R7": (Severity.ERROR, "diagram members must resolve and every element must be shown somewhere"),
    "R8": (Severity.ERROR, "a refinement anchor appears only in its parent diagram and anchors one diagram"),
    "R9": (Severity.ERROR, "diagrams must form a tree rooted at SD"),
    "W1": (Severity.WARNING, "entity has no links"),
    "W2": (Severity.WARNING, "process has no enabler and no transforming link"),
    "W3": (Severity.WARNING, "state is never referenced"),
    "W4": (Severity.WARNING, "entity appears in diagrams outside one refinement chain"),
}


def legality(kind: LinkKind, source_kind: NodeKind, destination_kind: NodeKind) -> bool:
    return (kind, source_kind, destination_kind) in TABLE_R


def _diag(code: str, subject: str, message: str, target: str | None = None) -> Diagnostic:
    return Diagnostic(code, RULES[code][0], subject, message, target)


def covered_processes(model: Model) -> set[str]:
    """Processes with an enabler or a transforming link.

    A process that exhibits a covered process (an operation it is
    characterised by) counts as covered too.
    """
    covered: set[str] = set()
    exhibits: list[tuple[str, str]] = []
    for link in model.links.values():
        src, dst = link.source.target, link.destination.target
        if link.kind is LinkKind.EXHIBITION:
            exhibits.append((src, dst))
        elif link.kind.family is LinkFamily.PROCEDURAL:
            for end in (src, dst):
                item = model.get(end)
                if item is not None and item.kind is NodeKind.PROCESS:
                    covered.add(end)
    changed = True
    while changed:
        changed = False
        for src, dst in exhibits:
            if dst in covered and src not in covered:
                covered.add(src)
                changed = True
    return covered


def validate(model: Model) -> list[Diagnostic]:
    """Check every rule; return diagnostics ordered by rule code, then subject."""
    out: list[Diagnostic] = []
    out += _check_links(model)
    out += _check_names(model)
    out += _check_diagrams(model)
    out += _check_warnings(model)
    return sorted(out, key=sort_key)


def _check_links(model: Model) -> list[Diagnostic]:
    out = []
    for link in model.links.values():
        subject = model.link_label(link)
        src = model.get(link.source.target)
        dst = model.get(link.destination.target)
        if src is None or dst is None:
            missing = link.source.target if src is None else link.destination.target
            out.append(_diag("R3", subject, f"endpoint {missing!r} does not exist", link.id))
            continue
        if src.kind is not link.source.kind or dst.kind is not link.destination.kind:
            out.append(_diag("R3", subject, "endpoint kind tag does not match the entity", link.id))
        if link.source.target == link.destination.target:
            out.append(_diag("R4", subject, "link connects an element to itself", link.id))
        if not legality(link.kind, src.kind, dst.kind):
            code = "R1" if link.kind.family is LinkFamily.STRUCTURAL else "R2"
            out.append(
                _diag(code, subject, f"{link.kind.value} cannot run from {src.kind.value} to {dst.kind.value}", link.id)
            )
    return out


def _check_names(model: Model) -> list[Diagnostic]:
    out = []
    seen: dict[str, str] = {}
    for eid, ent in model.entities.items():
        name = ent.name
        if not name.strip():
            out.append(_diag("R5", eid, "entity name is empty", eid))
        elif not is_entity_name(name):
            out.append(_diag("R5", name, "entity name is not canonical", eid))
        if name in seen:
            out.append(_diag("R5", name, f"name is shared by {seen[name]!r} and {eid!r}", eid))
        else:
            seen[name] = eid
        state_names: set[str] = set()
        for st in getattr(ent, "states", ()):
            label = f"{name}::{st.name}"
            if not st.name or canonical_name(st.name) != st.name:
                out.append(_diag("R5", label, "state name is empty or not canonical", st.id))
            if st.name in state_names:
                out.append(_diag("R5", label, "duplicate state name within owner", st.id))
            state_names.add(st.name)
            if st.owner != eid:
                out.append(_diag("R6", label, f"state records owner {st.owner!r} but is held by {eid!r}", st.id))
    return out


def _check_diagrams(model: Model) -> list[Diagnostic]:
    out = []
    diagrams = model.diagrams
    root = diagrams.get("SD")
    if root is None:
        out.append(_diag("R9", "SD", "root diagram SD is missing"))
    elif root.parent is not None or root.anchor is not None:
        out.append(_diag("R9", "SD", "root diagram must have no parent and no anchor"))
    reachable = {d.id for d in model.preorder()}
    anchors: dict[str, list[str]] = {}
    for did, d in diagrams.items():
        if did != "SD":
            if d.parent is None or d.anchor is None:
                out.append(_diag("R9", did, "non-root diagram needs a parent and an anchor"))
            elif d.parent not in diagrams:
                out.append(_diag("R9", did, f"parent diagram {d.parent!r} does not exist"))
            elif did not in reachable:
                out.append(_diag("R9", did, "diagram is not reachable from SD (cycle)"))
            if d.anchor is not None:
                if d.anchor not in model.entities:
                    out.append(_diag("R9", did, f"anchor {d.anchor!r} does not exist"))
                else:
                    anchors.setdefault(d.anchor, []).append(did)
        for eid in d.members_entities + d.constituents:
            if eid not in model.entities:
                out.append(_diag("R7", did, f"member entity {eid!r} does not exist"))
        for lid in d.members_links:
            if lid not in model.links:
                out.append(_diag("R7", did, f"member link {lid!r} does not exist"))
    shown = {e for d in diagrams.values() for e in d.members_entities}
    for eid, ent in model.entities.items():
        if eid not in shown:
            out.append(_diag("R7", ent.name, "entity is not shown in any diagram", eid))
    shown_links = {l for d in diagrams.values() for l in d.members_links}
    for lid, link in model.links.items():
        if lid not in shown_links:
            out.append(_diag("R7", model.link_label(link), "link is not shown in any diagram", lid))
    for eid, dids in anchors.items():
        name = model.label(eid)
        if len(dids) > 1:
            out.append(_diag("R8", name, f"anchors several diagrams: {', '.join(sorted(dids))}", eid))
        parents = {diagrams[did].parent for did in dids}
        stray = [did for did in model.diagrams_showing(eid) if did not in parents]
        if stray:
            out.append(_diag("R8", name, f"refinement anchor also shown in {', '.join(stray)}", eid))
    return out


def _check_warnings(model: Model) -> list[Diagnostic]:
    out = []
    touched: set[str] = set()
    for link in model.links.values():
        touched.add(link.source.target)
        touched.add(link.destination.target)
    covered = covered_processes(model)
    for eid, ent in model.entities.items():
        states = getattr(ent, "states", ())
        if eid not in touched and not any(s.id in touched for s in states):
            out.append(_diag("W1", ent.name, "entity has no links", eid))
        if ent.kind is NodeKind.PROCESS and eid not in covered:
            out.append(_diag("W2", ent.name, "process has no enabler and no transforming link", eid))
        for st in states:
            if st.id not in touched:
                out.append(_diag("W3", f"{ent.name}::{st.name}", "state is never referenced", st.id))
        dids = model.diagrams_showing(eid)
        if len(dids) > 1:
            chains = {did: set(model.ancestors(did)) for did in dids}
            for a, b in combinations(dids, 2):
                if a not in chains[b] and b not in chains[a]:
                    out.append(_diag("W4", ent.name, f"shown in unrelated diagrams {a} and {b}", eid))
                    break
    return out
