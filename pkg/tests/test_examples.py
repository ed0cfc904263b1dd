"""Small worked cases for each public operation."""

import json
import xml.etree.ElementTree as ET

import pytest

from opmkit import (
    LinkKind,
    add_link,
    add_object,
    add_process,
    add_state,
    dangling_report,
    derive_requirements,
    enabling_systems,
    find_by_name,
    new_model,
    parse,
    parse_with_diagnostics,
    remove_entity,
    validate,
)
from opmkit.cli import INVALID, main
from opmkit.corpus import build_unique_hpc
from opmkit.errors import AnchorsRefinement, UnknownEntity
from opmkit.graph import GraphDoc, to_dot, to_graph, to_json_graph
from opmkit.render import layout, render_diagram
from svgcheck import SVG


@pytest.fixture(scope="module")
def corpus():
    return build_unique_hpc()


def test_empty_model_counts():
    m = new_model("Unique HPC System Development")
    assert (m.entity_count, list(m.diagrams)) == (0, ["SD"])


def test_enabling_link_between_corpus_names():
    m = new_model("x")
    m, microai = add_object(m, "MicroAI")
    m, screening = add_process(m, "Screening")
    m, lid = add_link(m, LinkKind.INSTRUMENT, microai, screening)
    assert m.links[lid].kind.is_enabling


def test_remove_object_with_two_links_cascades():
    m = new_model("x")
    m, o = add_object(m, "Tool")
    m, p = add_process(m, "Using")
    m, q = add_process(m, "Storing")
    m, _ = add_link(m, LinkKind.INSTRUMENT, o, p)
    m, _ = add_link(m, LinkKind.INSTRUMENT, o, q)
    assert len(remove_entity(m, o).links) == len(m.links) - 2


def test_corpus_anchor_cannot_be_removed(corpus):
    with pytest.raises(AnchorsRefinement):
        remove_entity(corpus, find_by_name(corpus, "Research and Development"))


def test_find_by_name_is_exact(corpus):
    assert find_by_name(corpus, "MicroAI") is not None
    assert find_by_name(corpus, "Nonexistent") is None
    assert find_by_name(corpus, "  microai ") is None


def test_parse_small_document():
    m = parse('object "MicroAI". process "Screening". "MicroAI" is instrument of "Screening".')
    assert m.entity_count == 2
    assert [l.kind for l in m.links.values()] == [LinkKind.INSTRUMENT]


def test_undeclared_reference_reported_on_line_one():
    model, diags = parse_with_diagnostics('"Ghost" is instrument of "Screening".')
    assert model is None
    assert diags[0].code.startswith("P1") and diags[0].span.line == 1


def test_object_with_state_and_no_links_is_isolated():
    m, o = add_object(new_model("x"), "Valve")
    m, _ = add_state(m, o, "open")
    assert "W1" in {d.code for d in validate(m)}


def test_enabling_edge_cases(corpus):
    m, p = add_process(new_model("x"), "Alone")
    assert enabling_systems(m, p) == []
    with pytest.raises(UnknownEntity):
        enabling_systems(m, "missing")
    m, o = add_object(m, "Idle")
    assert derive_requirements(m, o).functions == ()


def test_artificial_electronic_name_order(corpus):
    req = derive_requirements(corpus, find_by_name(corpus, "Artificial Electronic"))
    assert [corpus.label(p) for p in req.function_ids()] == [
        "Development Assistance",
        "Implementation Assistance",
        "Prototyping Assistance",
        "Screening Assistance",
    ]


def test_single_entity_dangling_reports():
    m, _ = add_process(new_model("x"), "Alone")
    assert [d.code for d in dangling_report(m)] == ["A1"]
    m, _ = add_object(new_model("x"), "Alone")
    assert [d.code for d in dangling_report(m)] == ["A2"]


def test_graph_small_cases():
    empty = to_graph(new_model("e"))
    assert (empty.nodes, empty.edges) == ((), ())
    assert to_dot(GraphDoc("e", (), ())) == 'digraph "e" {\n}\n'
    assert json.loads(to_json_graph(empty)) == {"model": "e", "nodes": [], "edges": []}
    m, o = add_object(new_model("s"), "Valve")
    m, _ = add_state(m, o, "open")
    g = to_graph(m)
    assert (len(g.nodes), [e.kind for e in g.edges]) == (2, ["has-state"])
    assert sum(1 for line in to_dot(g).splitlines() if "->" in line) == 1


def test_one_object_one_process_layout():
    m, o = add_object(new_model("x"), "Tool")
    m, p = add_process(m, "Using")
    m, _ = add_link(m, LinkKind.INSTRUMENT, o, p)
    lay = layout(m, "SD")
    assert (len(lay.placements), len(lay.routes)) == (2, 1)
    a, b = lay.placements
    assert a.x + a.w <= b.x or b.x + b.w <= a.x
    assert layout(m, "SD") == lay


def test_one_process_one_ellipse():
    m, _ = add_process(new_model("x"), "Using")
    root = ET.fromstring(render_diagram(m, "SD"))
    assert len(list(root.iter(SVG + "ellipse"))) == 1


def test_corpus_sd11_element_counts(corpus):
    root = ET.fromstring(render_diagram(corpus, "SD1.1"))
    d = corpus.diagrams["SD1.1"]
    members = [corpus.entities[e] for e in d.members_entities]
    ellipses = [e for e in root.iter(SVG + "ellipse") if e.get("data-role") == "member"]
    rects = [e for e in root.iter(SVG + "rect") if e.get("data-role") == "member"]
    assert len(ellipses) == sum(1 for e in members if e.kind.value == "process") == 11
    assert len(rects) == sum(1 for e in members if e.kind.value == "object") == 2


def test_cli_rejects_structural_violation(tmp_path):
    src = tmp_path / "r1.opm"
    src.write_text('object "A".\nprocess "P".\n"A" is part of "P".\n', encoding="utf-8")
    assert main(["validate", str(src)]) == INVALID
