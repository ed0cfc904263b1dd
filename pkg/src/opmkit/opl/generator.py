"""Canonical, deterministic text generation for the .opm dialect."""

from __future__ import annotations

from ..diagnostics import errors_only
from ..errors import InvalidModel
from ..kinds import LinkKind, NodeKind, Refinement
from ..model import Model
from ..refinement import check_consistency
from ..validator import validate
from .parser import LINK_VERBS, SUBJECT_IS_DESTINATION

VERB_FOR: dict[LinkKind, str] = {kind: verb for verb, kind in LINK_VERBS.items()}


def quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def generate(model: Model) -> str:
    """Render ``model`` as a canonical document.

    Sections follow diagram preorder. Each non-root section opens with its
    refinement statement; then come declarations (by name), state lists of
    objects first shown in that diagram, and the diagram's links ordered by
    source name, destination name and kind.
    """
    errors = errors_only(validate(model) + check_consistency(model))
    if errors:
        raise InvalidModel(errors)
    lines = [f"model {quote(model.name)}."]
    stated: set[str] = set()
    for d in model.preorder():
        body = []
        implied = NodeKind.PROCESS
        if d.anchor is not None:
            verb = "zooms into" if d.refinement is Refinement.ZOOM else "unfolds to"
            names = ", ".join(quote(model.label(e)) for e in d.constituents)
            body.append(f"{quote(model.label(d.anchor))} {verb} {names}.")
            if d.refinement is Refinement.UNFOLD:
                implied = model.entities[d.anchor].kind
        shown = sorted(
            (model.entities[e] for e in d.members_entities),
            key=lambda ent: ent.name,
        )
        for ent in shown:
            if ent.id in d.constituents and ent.kind is implied:
                continue
            body.append(f"{ent.kind.value} {quote(ent.name)}.")
        for ent in shown:
            if ent.id in stated:
                continue
            stated.add(ent.id)
            states = getattr(ent, "states", ())
            if states:
                body.append(f"{quote(ent.name)} can be {', '.join(quote(s.name) for s in states)}.")
        links = sorted(
            (model.links[lid] for lid in d.members_links),
            key=lambda l: (model.label(l.source.target), model.label(l.destination.target), l.kind.order),
        )
        for link in links:
            verb = VERB_FOR[link.kind]
            subject, obj = link.source.target, link.destination.target
            if verb in SUBJECT_IS_DESTINATION:
                subject, obj = obj, subject
            body.append(f"{quote(model.label(subject))} {verb} {quote(model.label(obj))}.")
        if body:
            lines += ["", f"// {d.id}"] + body
    return "\n".join(lines) + "\n"
