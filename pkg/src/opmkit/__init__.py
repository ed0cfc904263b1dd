"""opmkit: an Object-Process Methodology modeling toolkit."""

from .analysis import Requirement, dangling_report, derive_requirements, enabling_systems
from .diagnostics import Diagnostic, Severity
from .errors import OPMError
from .kinds import LinkFamily, LinkKind, NodeKind, Refinement, SubFamily
from .model import (
    ROOT,
    Diagram,
    Endpoint,
    Link,
    Model,
    ObjectEntity,
    ProcessEntity,
    StateDef,
    add_link,
    add_object,
    add_process,
    add_state,
    find_by_name,
    new_model,
    remove_entity,
    select_diagram,
    show,
)
from .opl import generate, parse, parse_with_diagnostics
from .refinement import check_consistency, in_zoom, remove_diagram, unfold
from .validator import legality, validate

__version__ = "0.1.0"

__all__ = [
    "Diagnostic",
    "Diagram",
    "Endpoint",
    "Link",
    "LinkFamily",
    "LinkKind",
    "Model",
    "NodeKind",
    "OPMError",
    "ObjectEntity",
    "ProcessEntity",
    "ROOT",
    "Refinement",
    "Requirement",
    "Severity",
    "StateDef",
    "SubFamily",
    "add_link",
    "add_object",
    "add_process",
    "add_state",
    "check_consistency",
    "dangling_report",
    "derive_requirements",
    "enabling_systems",
    "find_by_name",
    "generate",
    "in_zoom",
    "legality",
    "new_model",
    "parse",
    "parse_with_diagnostics",
    "remove_diagram",
    "remove_entity",
    "select_diagram",
    "show",
    "unfold",
    "validate",
]
