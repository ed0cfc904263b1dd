"""Exception hierarchy raised by model mutations and exporters."""

from __future__ import annotations


class OPMError(Exception):
    """Base class for every error raised by opmkit."""


class EmptyName(OPMError, ValueError):
    pass


class InvalidName(OPMError, ValueError):
    pass


class DuplicateName(OPMError, ValueError):
    pass


class DuplicateState(OPMError, ValueError):
    pass


class UnknownEntity(OPMError, LookupError):
    pass


class UnknownDiagram(OPMError, LookupError):
    pass


class NotAnObject(OPMError, TypeError):
    pass


class NotAProcess(OPMError, TypeError):
    pass


class IllegalEndpoints(OPMError, ValueError):
    """The (kind, source kind, destination kind) triple is not in the legality table."""

    def __init__(self, kind, source_kind, destination_kind):
        self.kind = kind
        self.source_kind = source_kind
        self.destination_kind = destination_kind
        super().__init__(
            f"{kind.value} link cannot run from a {source_kind.value} to a {destination_kind.value}"
        )


class SelfLink(OPMError, ValueError):
    pass


class AnchorsRefinement(OPMError):
    pass


class AlreadyRefined(OPMError):
    pass


class EmptyList(OPMError, ValueError):
    pass


class RefinementError(OPMError):
    """A refinement request that would break the diagram hierarchy."""


class DiagramHasChildren(OPMError):
    pass


class InvalidModel(OPMError):
    """Raised by consumers that require a model free of Error diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(d.render() for d in self.diagnostics[:5])
        super().__init__(f"model has {len(self.diagnostics)} error(s): {lines}")
