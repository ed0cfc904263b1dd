"""Ontology vocabulary: the three node kinds and the nine link variants."""

from __future__ import annotations

from enum import Enum


class NodeKind(str, Enum):
    OBJECT = "object"
    PROCESS = "process"
    STATE = "state"


class LinkFamily(str, Enum):
    STRUCTURAL = "structural"
    PROCEDURAL = "procedural"


class SubFamily(str, Enum):
    TRANSFORMING = "transforming"
    ENABLING = "enabling"


class LinkKind(str, Enum):
    """A link variant. The value doubles as the export kind tag."""

    AGGREGATION = "aggregation"
    EXHIBITION = "exhibition"
    GENERALIZATION = "generalization"
    INSTANTIATION = "instantiation"
    CONSUMPTION = "consumption"
    RESULT = "result"
    EFFECT = "effect"
    AGENT = "agent"
    INSTRUMENT = "instrument"

    @property
    def family(self) -> LinkFamily:
        if self in _STRUCTURAL:
            return LinkFamily.STRUCTURAL
        return LinkFamily.PROCEDURAL

    @property
    def subfamily(self) -> SubFamily | None:
        """Transforming or enabling for procedural variants, None for structural ones."""
        if self in _TRANSFORMING:
            return SubFamily.TRANSFORMING
        if self in _ENABLING:
            return SubFamily.ENABLING
        return None

    @property
    def is_enabling(self) -> bool:
        return self in _ENABLING

    @property
    def order(self) -> int:
        return _ORDER[self]


_STRUCTURAL = frozenset(
    {LinkKind.AGGREGATION, LinkKind.EXHIBITION, LinkKind.GENERALIZATION, LinkKind.INSTANTIATION}
)
_TRANSFORMING = frozenset({LinkKind.CONSUMPTION, LinkKind.RESULT, LinkKind.EFFECT})
_ENABLING = frozenset({LinkKind.AGENT, LinkKind.INSTRUMENT})
_ORDER = {kind: i for i, kind in enumerate(LinkKind)}


class Refinement(str, Enum):
    """How a child diagram was derived from its anchor."""

    ZOOM = "zoom"
    UNFOLD = "unfold"
