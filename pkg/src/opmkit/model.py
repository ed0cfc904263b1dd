"""In-memory OPM model: entities, states, links and the diagram tree.

All public mutation functions are pure: they take a :class:`Model`, copy
it, apply the change to the copy and return ``(new_model, new_id)`` (or just
the new model). Entity, state, link and diagram records are frozen, so a
copy only has to duplicate the id-keyed tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Union

from .errors import (
    AnchorsRefinement,
    DuplicateName,
    DuplicateState,
    EmptyName,
    IllegalEndpoints,
    InvalidName,
    NotAnObject,
    RefinementError,
    SelfLink,
    UnknownDiagram,
    UnknownEntity,
)
from .kinds import LinkKind, NodeKind, Refinement
from .names import STATE_SEP, canonical_name, is_entity_name, slugify
from .validator import legality

ROOT = "SD"


def child_label(parent: str, ordinal: int) -> str:
    if parent == ROOT:
        return f"{ROOT}{ordinal}"
    return f"{parent}.{ordinal}"


def label_ordinal(label: str, parent: str | None) -> int | None:
    """Ordinal encoded in ``label`` relative to ``parent``, or None if the label is off-pattern."""
    if parent is None:
        return None
    prefix = ROOT if parent == ROOT else parent + "."
    rest = label[len(prefix):] if label.startswith(prefix) else ""
    if rest.isdigit() and not rest.startswith("0"):
        return int(rest)
    return None


@dataclass(frozen=True)
class StateDef:
    id: str
    name: str
    owner: str

    kind = NodeKind.STATE


@dataclass(frozen=True)
class ObjectEntity:
    id: str
    name: str
    states: tuple[StateDef, ...] = ()

    kind = NodeKind.OBJECT


@dataclass(frozen=True)
class ProcessEntity:
    id: str
    name: str

    kind = NodeKind.PROCESS


Entity = Union[ObjectEntity, ProcessEntity]


@dataclass(frozen=True)
class Endpoint:
    target: str
    kind: NodeKind


@dataclass(frozen=True)
class Link:
    id: str
    kind: LinkKind
    source: Endpoint
    destination: Endpoint

    def touches(self, ids) -> bool:
        return self.source.target in ids or self.destination.target in ids


@dataclass(frozen=True)
class Diagram:
    """One node of the refinement hierarchy.

    ``constituents`` is the ordered list handed to in-zoom/unfold;
    ``members_entities`` starts with the constituents and then grows in
    insertion order.
    """

    id: str
    parent: str | None = None
    anchor: str | None = None
    refinement: Refinement | None = None
    constituents: tuple[str, ...] = ()
    members_entities: tuple[str, ...] = ()
    members_links: tuple[str, ...] = ()

    @property
    def depth(self) -> int:
        if self.parent is None:
            return 0
        return self.id.count(".") + 1

    def with_entity(self, eid: str) -> Diagram:
        if eid in self.members_entities:
            return self
        return replace(self, members_entities=self.members_entities + (eid,))

    def with_link(self, lid: str) -> Diagram:
        if lid in self.members_links:
            return self
        return replace(self, members_links=self.members_links + (lid,))


@dataclass(eq=False)
class Model:
    """A complete system description.

    Equality is structural: two models are equal when their names,
    entities (by name, kind and ordered states), links (by kind and endpoint
    names) and diagram trees agree. Generated ids and the selected diagram
    are ignored.
    """

    name: str
    entities: dict[str, Entity] = field(default_factory=dict)
    links: dict[str, Link] = field(default_factory=dict)
    diagrams: dict[str, Diagram] = field(default_factory=dict)
    current: str = ROOT

    def copy(self) -> Model:
        return Model(self.name, dict(self.entities), dict(self.links), dict(self.diagrams), self.current)

    # -- lookup -------------------------------------------------------------

    @property
    def entity_count(self) -> int:
        return len(self.entities)

    def get(self, ident: str) -> Entity | StateDef | None:
        ent = self.entities.get(ident)
        if ent is not None:
            return ent
        owner_id, dot, _ = ident.partition(".")
        owner = self.entities.get(owner_id) if dot else None
        if isinstance(owner, ObjectEntity):
            for st in owner.states:
                if st.id == ident:
                    return st
        return None

    def lookup(self, ident: str) -> Entity | StateDef:
        found = self.get(ident)
        if found is None:
            raise UnknownEntity(f"no entity or state with id {ident!r}")
        return found

    def objects(self) -> Iterator[ObjectEntity]:
        return (e for e in self.entities.values() if isinstance(e, ObjectEntity))

    def processes(self) -> Iterator[ProcessEntity]:
        return (e for e in self.entities.values() if isinstance(e, ProcessEntity))

    def states(self) -> Iterator[StateDef]:
        for obj in self.objects():
            yield from obj.states

    def label(self, ident: str) -> str:
        """Display name of an entity, or ``Owner::state`` for a state."""
        item = self.get(ident)
        if item is None:
            return ident
        if isinstance(item, StateDef):
            owner = self.entities.get(item.owner)
            return f"{owner.name if owner else item.owner}{STATE_SEP}{item.name}"
        return item.name

    def owner_of(self, ident: str) -> str:
        """The entity id an endpoint belongs to (a state's owner, otherwise itself)."""
        item = self.get(ident)
        if isinstance(item, StateDef):
            return item.owner
        return ident

    def link_label(self, link: Link) -> str:
        return f"{self.label(link.source.target)} -{link.kind.value}-> {self.label(link.destination.target)}"

    def find_link(self, kind: LinkKind, source: str, destination: str) -> Link | None:
        return self.links.get(link_id(kind, source, destination))

    # -- diagram tree -------------------------------------------------------

    def diagram(self, did: str) -> Diagram:
        try:
            return self.diagrams[did]
        except KeyError:
            raise UnknownDiagram(f"no diagram {did!r}") from None

    def children(self, did: str) -> list[Diagram]:
        kids = [d for d in self.diagrams.values() if d.parent == did and d.id != did]

        def key(d):
            ordinal = label_ordinal(d.id, did)
            return (ordinal is None, ordinal or 0, d.id)

        return sorted(kids, key=key)

    def preorder(self) -> list[Diagram]:
        out: list[Diagram] = []
        seen: set[str] = set()

        def visit(d: Diagram) -> None:
            if d.id in seen:
                return
            seen.add(d.id)
            out.append(d)
            for kid in self.children(d.id):
                visit(kid)

        if ROOT in self.diagrams:
            visit(self.diagrams[ROOT])
        return out

    def refinement_of(self, eid: str) -> Diagram | None:
        for d in self.diagrams.values():
            if d.anchor == eid:
                return d
        return None

    def diagrams_showing(self, eid: str) -> list[str]:
        return [d.id for d in self.preorder() if eid in d.members_entities]

    def diagrams_with_link(self, lid: str) -> list[str]:
        return [d.id for d in self.preorder() if lid in d.members_links]

    def ancestors(self, did: str) -> list[str]:
        """``did`` followed by its ancestors up to the root."""
        chain, cur = [], did
        while cur is not None and cur not in chain:
            chain.append(cur)
            parent = self.diagrams.get(cur)
            cur = parent.parent if parent else None
        return chain

    # -- structural equality -----------------------------------------------

    def canonical(self):
        ents = {e.name: (e.kind.value, tuple(s.name for s in getattr(e, "states", ()))) for e in self.entities.values()}
        links = frozenset((l.kind.value, self.label(l.source.target), self.label(l.destination.target)) for l in self.links.values())
        diagrams = {}
        for d in self.diagrams.values():
            diagrams[d.id] = (
                d.parent,
                self.label(d.anchor) if d.anchor else None,
                d.refinement.value if d.refinement else None,
                tuple(self.label(e) for e in d.constituents),
                frozenset(self.label(e) for e in d.members_entities),
                frozenset(
                    (lk.kind.value, self.label(lk.source.target), self.label(lk.destination.target))
                    for lk in (self.links.get(lid) for lid in d.members_links)
                    if lk is not None
                ),
            )
        return (self.name, ents, links, diagrams)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Model):
            return NotImplemented
        return self.canonical() == other.canonical()

    __hash__ = None  # type: ignore[assignment]


def link_id(kind: LinkKind, source: str, destination: str) -> str:
    return f"{source}~{kind.value}~{destination}"


# -- internal in-place helpers (operate on a private copy) ------------------


def _fresh_id(taken, base: str) -> str:
    if base not in taken:
        return base
    n = 2
    while f"{base}-{n}" in taken:
        n += 1
    return f"{base}-{n}"


def _entity_name(name: str) -> str:
    canon = canonical_name(name)
    if not canon:
        raise EmptyName("entity name is empty")
    if not is_entity_name(canon):
        raise InvalidName(f"entity name {canon!r} may not contain {STATE_SEP!r} or end with ':'")
    return canon


def _add_member(m: Model, did: str, eid: str) -> None:
    m.diagrams[did] = m.diagram(did).with_entity(eid)


def _add_member_link(m: Model, did: str, lid: str) -> None:
    """Show a link in ``did`` and in every in-zoom descendant inheriting it."""
    m.diagrams[did] = m.diagram(did).with_link(lid)
    link = m.links[lid]
    for kid in m.children(did):
        if kid.refinement is Refinement.ZOOM and kid.anchor is not None and link.touches((kid.anchor,)):
            _add_member_link(m, kid.id, lid)


def _create_entity(m: Model, kind: NodeKind, name: str, did: str) -> str:
    canon = _entity_name(name)
    if find_by_name(m, canon) is not None:
        raise DuplicateName(f"an entity named {canon!r} already exists")
    m.diagram(did)
    eid = _fresh_id(m.entities, slugify(canon))
    if kind is NodeKind.OBJECT:
        m.entities[eid] = ObjectEntity(eid, canon)
    elif kind is NodeKind.PROCESS:
        m.entities[eid] = ProcessEntity(eid, canon)
    else:
        raise ValueError(f"cannot create a free-standing {kind.value}")
    _add_member(m, did, eid)
    return eid


def _create_link(m: Model, kind: LinkKind, source: str, destination: str, did: str) -> str:
    src = m.lookup(source)
    dst = m.lookup(destination)
    if source == destination:
        raise SelfLink(f"{m.label(source)!r} cannot be linked to itself")
    if not legality(kind, src.kind, dst.kind):
        raise IllegalEndpoints(kind, src.kind, dst.kind)
    m.diagram(did)
    lid = link_id(kind, source, destination)
    if lid not in m.links:
        m.links[lid] = Link(lid, kind, Endpoint(source, src.kind), Endpoint(destination, dst.kind))
    _add_member_link(m, did, lid)
    return lid


def _drop_links(m: Model, doomed: set[str]) -> None:
    dead = {lid for lid, link in m.links.items() if link.touches(doomed)}
    for lid in dead:
        del m.links[lid]
    if dead:
        for did, d in m.diagrams.items():
            if any(lid in dead for lid in d.members_links):
                m.diagrams[did] = replace(d, members_links=tuple(l for l in d.members_links if l not in dead))


# -- public operations ------------------------------------------------------


def new_model(name: str) -> Model:
    canon = canonical_name(name)
    if not canon:
        raise EmptyName("model name is empty")
    return Model(canon, diagrams={ROOT: Diagram(ROOT)})


def add_object(model: Model, name: str) -> tuple[Model, str]:
    """Add an object to the selected diagram."""
    m = model.copy()
    eid = _create_entity(m, NodeKind.OBJECT, name, m.current)
    return m, eid


def add_process(model: Model, name: str) -> tuple[Model, str]:
    """Add a process to the selected diagram."""
    m = model.copy()
    eid = _create_entity(m, NodeKind.PROCESS, name, m.current)
    return m, eid


def _create_state(m: Model, owner: str, name: str) -> str:
    obj = m.lookup(owner)
    if not isinstance(obj, ObjectEntity):
        raise NotAnObject(f"{m.label(owner)!r} is not an object; only objects have states")
    canon = canonical_name(name)
    if not canon:
        raise EmptyName("state name is empty")
    if any(s.name == canon for s in obj.states):
        raise DuplicateState(f"{obj.name!r} already has a state {canon!r}")
    sid = _fresh_id({s.id for s in obj.states}, f"{obj.id}.{slugify(canon)}")
    m.entities[obj.id] = replace(obj, states=obj.states + (StateDef(sid, canon, obj.id),))
    return sid


def add_state(model: Model, owner: str, name: str) -> tuple[Model, str]:
    m = model.copy()
    sid = _create_state(m, owner, name)
    return m, sid


def add_link(model: Model, kind: LinkKind, source: str, destination: str) -> tuple[Model, str]:
    """Add a link to the selected diagram.

    Links are identified by (kind, source, destination); adding one that
    already exists only makes it visible in the selected diagram.
    """
    m = model.copy()
    lid = _create_link(m, kind, source, destination, m.current)
    return m, lid


def remove_entity(model: Model, ident: str) -> Model:
    """Remove an entity or a state, cascading to links and diagram memberships."""
    item = model.lookup(ident)
    m = model.copy()
    if isinstance(item, StateDef):
        owner = m.entities[item.owner]
        m.entities[owner.id] = replace(owner, states=tuple(s for s in owner.states if s.id != ident))
        _drop_links(m, {ident})
        return m
    anchored = m.refinement_of(ident)
    if anchored is not None:
        raise AnchorsRefinement(f"{item.name!r} anchors diagram {anchored.id}; remove that diagram first")
    for d in m.diagrams.values():
        if d.constituents == (ident,):
            raise RefinementError(f"{item.name!r} is the only constituent of {d.id}; remove that diagram first")
    doomed = {ident} | {s.id for s in getattr(item, "states", ())}
    del m.entities[ident]
    _drop_links(m, doomed)
    for did, d in m.diagrams.items():
        if ident in d.members_entities or ident in d.constituents:
            m.diagrams[did] = replace(
                d,
                members_entities=tuple(e for e in d.members_entities if e != ident),
                constituents=tuple(e for e in d.constituents if e != ident),
            )
    return m


def find_by_name(model: Model, name: str) -> str | None:
    """Exact (case-sensitive) match on the canonical entity name."""
    for eid, ent in model.entities.items():
        if ent.name == name:
            return eid
    return None


def select_diagram(model: Model, did: str) -> Model:
    """Return a model whose subsequent insertions land in diagram ``did``."""
    model.diagram(did)
    m = model.copy()
    m.current = did
    return m


def _show(m: Model, did: str, ident: str) -> None:
    ident = m.owner_of(m.lookup(ident).id)
    anchored = m.refinement_of(ident)
    if anchored is not None and anchored.parent != did:
        raise RefinementError(
            f"{m.label(ident)!r} anchors {anchored.id} and may only appear in {anchored.parent}"
        )
    _add_member(m, did, ident)


def show(model: Model, ident: str) -> Model:
    """Make an existing entity visible in the selected diagram as well."""
    m = model.copy()
    _show(m, m.current, ident)
    return m
