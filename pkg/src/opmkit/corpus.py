"""The bundled reference model: unique HPC system development.

The model is built only through the public operations so that the
refinement hierarchy comes out of ``in_zoom``/``unfold`` exactly as the
shipped ``unique-hpc.opm`` file records it.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .kinds import LinkKind, NodeKind
from .model import ROOT, Model, add_link, add_object, add_process, find_by_name, new_model, select_diagram
from .refinement import in_zoom, unfold

CORPUS_FILE = "unique-hpc.opm"

RND_STEPS = ["Screening", "Prototyping", "Development", "Implementation"]
MICROAI_FUNCTIONS = ["Articles Storage", "Prototypes Storage", "Solutions Storage"]
ASSISTANCE = [f"{step} Assistance" for step in RND_STEPS]


def corpus_path() -> Path:
    return Path(str(resources.files("opmkit") / "data" / CORPUS_FILE))


def build_unique_hpc() -> Model:
    m = new_model("Unique HPC System Development")
    m, system = add_object(m, "Unique HPC System")
    m, creating = add_process(m, "Unique HPC System Creating")
    m, tooling = add_object(m, "HPC Development System")
    m, _ = add_link(m, LinkKind.RESULT, creating, system)
    m, _ = add_link(m, LinkKind.INSTRUMENT, tooling, creating)

    m, sd1 = in_zoom(m, creating, ["Production", "Research and Development"])
    m = select_diagram(m, sd1)
    production = find_by_name(m, "Production")
    rnd = find_by_name(m, "Research and Development")
    m, _ = add_link(m, LinkKind.INSTRUMENT, tooling, production)
    m, _ = add_link(m, LinkKind.RESULT, production, system)
    # R&D improves the tools production relies on
    m, _ = add_link(m, LinkKind.EFFECT, rnd, tooling)

    m, sd11 = unfold(m, rnd, RND_STEPS, NodeKind.PROCESS)
    m = select_diagram(m, sd11)
    m, microai = add_object(m, "MicroAI")
    m, electronic = add_object(m, "Artificial Electronic")
    for name in MICROAI_FUNCTIONS:
        m, proc = add_process(m, name)
        m, _ = add_link(m, LinkKind.INSTRUMENT, microai, proc)
    for step, name in zip(RND_STEPS, ASSISTANCE):
        m, proc = add_process(m, name)
        m, _ = add_link(m, LinkKind.INSTRUMENT, electronic, proc)
        m, _ = add_link(m, LinkKind.EXHIBITION, find_by_name(m, step), proc)
    return select_diagram(m, ROOT)
