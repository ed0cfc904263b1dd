"""Hierarchy-building moves: in-zooming a process and unfolding an entity.

Consistency rules reported by :func:`check_consistency` (all errors)
    C1  in-zoom child is missing a parent link incident to its anchor
    C2  anchor is not shown in the parent diagram
    C3  child labels are not exactly parent + 1..n (numbering gap or off-pattern)
    C4  unfold child is missing the aggregation link of a same-kind constituent
"""

from __future__ import annotations

from dataclasses import replace
from typing import Sequence

from .diagnostics import Diagnostic, Severity, sort_key
from .errors import (
    AlreadyRefined,
    DiagramHasChildren,
    DuplicateName,
    EmptyList,
    NotAProcess,
    RefinementError,
)
from .kinds import LinkKind, NodeKind, Refinement
from .model import (
    ROOT,
    Diagram,
    Model,
    ProcessEntity,
    StateDef,
    _add_member,
    _add_member_link,
    _create_entity,
    _create_link,
    canonical_name,
    child_label,
    find_by_name,
    label_ordinal,
    link_id,
)

__all__ = ["Diagram", "in_zoom", "unfold", "check_consistency", "remove_diagram", "next_child_label"]


def next_child_label(model: Model, parent: str) -> str:
    ordinals = [label_ordinal(d.id, parent) or 0 for d in model.children(parent)]
    return child_label(parent, max(ordinals, default=0) + 1)


def _home(model: Model, anchor: str) -> str:
    """The single diagram that shows ``anchor``; it becomes the refinement's parent."""
    showing = model.diagrams_showing(anchor)
    if not showing:
        raise RefinementError(f"{model.label(anchor)!r} is not shown in any diagram")
    if len(showing) > 1:
        raise RefinementError(
            f"{model.label(anchor)!r} is shown in {', '.join(showing)}; "
            "a refinement anchor may appear in its parent diagram only"
        )
    return showing[0]


def _check_anchor(model: Model, anchor: str, names: Sequence[str]) -> list[str]:
    item = model.lookup(anchor)
    if isinstance(item, StateDef):
        raise RefinementError("states cannot be refined")
    if not names:
        raise EmptyList("refinement needs at least one constituent")
    existing = model.refinement_of(anchor)
    if existing is not None:
        raise AlreadyRefined(f"{item.name!r} is already refined by {existing.id}")
    canon = [canonical_name(n) for n in names]
    if len(set(canon)) != len(canon):
        raise DuplicateName("constituent names repeat")
    if item.name in canon:
        raise RefinementError(f"{item.name!r} cannot be refined into itself")
    return canon


def _adopt_or_create(m: Model, name: str, kind: NodeKind, did: str) -> str:
    eid = find_by_name(m, name)
    if eid is None:
        return _create_entity(m, kind, name, did)
    if m.refinement_of(eid) is not None:
        raise RefinementError(f"{name!r} anchors a refinement and cannot be adopted elsewhere")
    _add_member(m, did, eid)
    return eid


def _open_child(m: Model, anchor: str, mode: Refinement) -> str:
    parent = _home(m, anchor)
    did = next_child_label(m, parent)
    m.diagrams[did] = Diagram(did, parent=parent, anchor=anchor, refinement=mode)
    return did


def in_zoom(model: Model, process: str, subprocess_names: Sequence[str]) -> tuple[Model, str]:
    """Refine ``process`` into ordered subprocesses inside a new child diagram.

    Existing processes named in the list are adopted rather than created.
    Every parent-diagram link touching the anchor is carried into the child.
    """
    item = model.lookup(process)
    if not isinstance(item, ProcessEntity):
        raise NotAProcess(f"{model.label(process)!r} is not a process; only processes are in-zoomed")
    names = _check_anchor(model, process, subprocess_names)
    m = model.copy()
    did = _open_child(m, process, Refinement.ZOOM)
    ids = []
    for name in names:
        existing = find_by_name(m, name)
        if existing is not None and not isinstance(m.entities[existing], ProcessEntity):
            raise NotAProcess(f"{name!r} is not a process")
        ids.append(_adopt_or_create(m, name, NodeKind.PROCESS, did))
    m.diagrams[did] = replace(m.diagrams[did], constituents=tuple(ids))
    parent = m.diagrams[m.diagrams[did].parent]
    for lid in parent.members_links:
        if m.links[lid].touches((process,)):
            _add_member_link(m, did, lid)
    return m, did


def unfold(
    model: Model,
    anchor: str,
    member_names: Sequence[str],
    member_kind: NodeKind | Sequence[NodeKind] | None = None,
) -> tuple[Model, str]:
    """Expand ``anchor`` into constituents shown in a new child diagram.

    ``member_kind`` is the kind given to newly created members: one kind
    for all of them, one kind per name, or None for the anchor's own kind.
    Existing entities keep their kind. Every member of the anchor's kind is
    joined to it by an aggregation link (member is part of anchor).
    """
    item = model.lookup(anchor)
    names = _check_anchor(model, anchor, member_names)
    if member_kind is None:
        kinds = [item.kind] * len(names)
    elif isinstance(member_kind, NodeKind):
        kinds = [member_kind] * len(names)
    else:
        kinds = list(member_kind)
        if len(kinds) != len(names):
            raise ValueError("member_kind sequence must match member_names")
    m = model.copy()
    did = _open_child(m, anchor, Refinement.UNFOLD)
    ids = [_adopt_or_create(m, name, kind, did) for name, kind in zip(names, kinds)]
    m.diagrams[did] = replace(m.diagrams[did], constituents=tuple(ids))
    for eid in ids:
        if m.entities[eid].kind is item.kind:
            _create_link(m, LinkKind.AGGREGATION, eid, anchor, did)
    return m, did


def remove_diagram(model: Model, did: str) -> Model:
    """Delete a leaf diagram.

    Entities and links shown only there move up to the parent diagram; later
    siblings are renumbered so labels stay gap-free.
    """
    d = model.diagram(did)
    if d.parent is None:
        raise RefinementError("the root diagram cannot be removed")
    if model.children(did):
        raise DiagramHasChildren(f"{did} has child diagrams; remove them first")
    m = model.copy()
    parent = d.parent
    orphaned: list[str] = []
    for eid in d.members_entities:
        if m.diagrams_showing(eid) == [did]:
            _add_member(m, parent, eid)
    for lid in d.members_links:
        if m.diagrams_with_link(lid) == [did]:
            orphaned.append(lid)
    del m.diagrams[did]
    for lid in orphaned:
        _add_member_link(m, parent, lid)
    gone = label_ordinal(did, parent)
    mapping: dict[str, str] = {}
    if gone is not None:
        for sib in m.children(parent):
            n = label_ordinal(sib.id, parent)
            if n is not None and n > gone:
                _relabel(m, sib.id, child_label(parent, n - 1), mapping)
    if mapping:
        m.diagrams = {
            mapping.get(k, k): replace(v, id=mapping.get(k, k), parent=mapping.get(v.parent, v.parent))
            for k, v in m.diagrams.items()
        }
    m.current = parent if m.current == did else mapping.get(m.current, m.current)
    return m


def _relabel(m: Model, old: str, new: str, mapping: dict[str, str]) -> None:
    mapping[old] = new
    for kid in m.children(old):
        n = label_ordinal(kid.id, old)
        _relabel(m, kid.id, child_label(new, n if n is not None else 0), mapping)


def _c(code: str, subject: str, message: str) -> Diagnostic:
    return Diagnostic(code, Severity.ERROR, subject, message, subject)


def check_consistency(model: Model) -> list[Diagnostic]:
    out = []
    for did, d in model.diagrams.items():
        if d.parent is None or d.anchor is None:
            continue
        parent = model.diagrams.get(d.parent)
        if parent is None or d.anchor not in parent.members_entities:
            out.append(_c("C2", did, f"anchor {model.label(d.anchor)!r} is not shown in parent {d.parent}"))
        if parent is not None and d.refinement is Refinement.ZOOM:
            for lid in parent.members_links:
                link = model.links.get(lid)
                if link is not None and link.touches((d.anchor,)) and lid not in d.members_links:
                    out.append(_c("C1", did, f"inherited link {model.link_label(link)} is missing"))
        if d.refinement is Refinement.UNFOLD:
            anchor = model.entities.get(d.anchor)
            for eid in d.constituents:
                member = model.entities.get(eid)
                if anchor is None or member is None or member.kind is not anchor.kind:
                    continue
                if link_id(LinkKind.AGGREGATION, eid, d.anchor) not in d.members_links:
                    out.append(_c("C4", did, f"aggregation of {member.name!r} into {anchor.name!r} is missing"))
    parents = {d.parent for d in model.diagrams.values() if d.parent is not None} | {ROOT}
    for pid in parents:
        for i, kid in enumerate(model.children(pid), start=1):
            expected = child_label(pid, i)
            if kid.id != expected:
                out.append(_c("C3", kid.id, f"expected label {expected} under {pid}"))
    return sorted(out, key=sort_key)

