"""Requirement derivation for enabling systems.

A system's functions are the processes it enables through agent or
instrument links, gathered from every diagram of the hierarchy.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import Diagnostic, Severity, sort_key
from .errors import NotAnObject, NotAProcess
from .kinds import LinkFamily, LinkKind, NodeKind
from .model import Model, ObjectEntity, ProcessEntity


@dataclass(frozen=True)
class EnabledFunction:
    process: str
    variant: LinkKind
    diagram: str


@dataclass(frozen=True)
class Requirement:
    system: str
    functions: tuple[EnabledFunction, ...]
    source_diagrams: tuple[str, ...]

    def function_ids(self) -> list[str]:
        return [f.process for f in self.functions]


def _enabling_links(model: Model):
    for link in model.links.values():
        if link.kind.is_enabling:
            yield link, model.owner_of(link.source.target), link.destination.target


def enabling_systems(model: Model, process: str) -> list[str]:
    """Objects enabling ``process`` directly, ordered by name."""
    if not isinstance(model.lookup(process), ProcessEntity):
        raise NotAProcess(f"{model.label(process)!r} is not a process")
    found = {owner for _, owner, dst in _enabling_links(model) if dst == process}
    return sorted(found, key=model.label)


def derive_requirements(model: Model, system: str) -> Requirement:
    if not isinstance(model.lookup(system), ObjectEntity):
        raise NotAnObject(f"{model.label(system)!r} is not an object")
    order = {d.id: i for i, d in enumerate(model.preorder())}
    picked: dict[tuple[str, LinkKind], EnabledFunction] = {}
    for link, owner, process in _enabling_links(model):
        if owner != system:
            continue
        shown = model.diagrams_with_link(link.id)
        fn = EnabledFunction(process, link.kind, shown[0] if shown else "")
        key = (process, link.kind)
        if key not in picked or order.get(fn.diagram, len(order)) < order.get(picked[key].diagram, len(order)):
            picked[key] = fn
    functions = sorted(
        picked.values(),
        key=lambda f: (order.get(f.diagram, len(order)), model.label(f.process), f.variant.order),
    )
    diagrams = sorted({f.diagram for f in functions if f.diagram}, key=lambda d: order.get(d, len(order)))
    return Requirement(system, tuple(functions), tuple(diagrams))


def dangling_report(model: Model) -> list[Diagnostic]:
    """A1: process with no enabler; A2: object used by no procedural link.

    A process that exhibits an enabled process (its assisting operation)
    is treated as enabled.
    """
    enabled = {dst for _, _, dst in _enabling_links(model)}
    exhibits = [
        (l.source.target, l.destination.target) for l in model.links.values() if l.kind is LinkKind.EXHIBITION
    ]
    changed = True
    while changed:
        changed = False
        for src, dst in exhibits:
            if dst in enabled and src not in enabled:
                enabled.add(src)
                changed = True
    used = set()
    for link in model.links.values():
        if link.kind.family is LinkFamily.PROCEDURAL:
            used.add(model.owner_of(link.source.target))
            used.add(model.owner_of(link.destination.target))
    out = []
    for eid, ent in model.entities.items():
        if ent.kind is NodeKind.PROCESS and eid not in enabled:
            out.append(Diagnostic("A1", Severity.WARNING, ent.name, "process has no enabling system", eid))
        elif ent.kind is NodeKind.OBJECT and eid not in used:
            out.append(Diagnostic("A2", Severity.WARNING, ent.name, "object takes part in no procedural link", eid))
    return sorted(out, key=sort_key)


def render_requirement(model: Model, req: Requirement) -> str:
    lines = [f"SYSTEM {model.label(req.system)}"]
    for fn in req.functions:
        lines.append(f"  - {model.label(fn.process)} ({fn.variant.value}, {fn.diagram})")
    return "\n".join(lines) + "\n"


def requirement_document(model: Model, req: Requirement) -> dict:
    """Structured form of a requirement, mirroring :class:`Requirement`."""
    return {
        "system": {"id": req.system, "name": model.label(req.system)},
        "functions": [
            {"process": {"id": f.process, "name": model.label(f.process)}, "variant": f.variant.value, "diagram": f.diagram}
            for f in req.functions
        ],
        "source_diagrams": list(req.source_diagrams),
    }
