import xml.etree.ElementTree as ET
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modelgen import random_model
from opmkit import LinkKind, add_link, add_object, add_process, add_state, new_model
from opmkit.corpus import build_unique_hpc
from opmkit.errors import UnknownDiagram
from opmkit.render import layout, render_diagram, svg_filename, wrap_label
from svgcheck import SVG, check_svg_structure


@pytest.fixture(scope="module")
def corpus():
    return build_unique_hpc()


def _inside_ellipse(outer, inner):
    cx, cy, rx, ry = outer.cx, outer.cy, outer.w / 2, outer.h / 2
    corners = [(inner.x, inner.y), (inner.x + inner.w, inner.y), (inner.x, inner.y + inner.h), (inner.x + inner.w, inner.y + inner.h)]
    return all(((x - cx) / rx) ** 2 + ((y - cy) / ry) ** 2 <= 1 + 1e-9 for x, y in corners)


def _overlap(a, b):
    return a.x < b.x + b.w and b.x < a.x + a.w and a.y < b.y + b.h and b.y < a.y + a.h


def test_zoom_anchor_encloses_subprocesses(corpus):
    lay = layout(corpus, "SD1")
    anchor = next(p for p in lay.placements if p.role == "anchor")
    subs = [lay.placement(e) for e in corpus.diagrams["SD1"].constituents]
    assert all(_inside_ellipse(anchor, s) for s in subs)
    context = [p for p in lay.placements if p.role == "context"]
    assert {corpus.label(p.id) for p in context} == {"HPC Development System", "Unique HPC System"}
    assert not any(_overlap(anchor, c) for c in context)


def test_unfold_anchor_drawn_once(corpus):
    lay = layout(corpus, "SD1.1")
    anchors = [p for p in lay.placements if p.role == "anchor"]
    assert [corpus.label(p.id) for p in anchors] == ["Research and Development"]


def test_links_are_drawn_with_kind_classes(corpus):
    svg = render_diagram(corpus, "SD1.1")
    lines = [el for el in ET.fromstring(svg).iter(SVG + "polyline")]
    assert len(lines) == len(corpus.diagrams["SD1.1"].members_links)
    kinds = {el.get("class").split()[1] for el in lines}
    assert kinds == {"opm-instrument", "opm-exhibition", "opm-aggregation"}
    assert all(el.get("marker-end", "").startswith("url(#m-") for el in lines)


def test_corpus_structure(corpus):
    for d in corpus.preorder():
        check_svg_structure(corpus, d.id, render_diagram(corpus, d.id))


def test_states_sit_inside_owner():
    m = new_model("s")
    m, tank = add_object(m, "Tank")
    for name in ("empty", "half full", "full to the brim"):
        m, _ = add_state(m, tank, name)
    m, fill = add_process(m, "Filling")
    m, _ = add_link(m, LinkKind.RESULT, fill, f"{tank}.full-to-the-brim")
    assert check_svg_structure(m, "SD", render_diagram(m, "SD")) == 3
    lay = layout(m, "SD")
    for a, b in combinations([p for p in lay.placements if p.shape == "state"], 2):
        assert not _overlap(a, b)


def test_markup_is_escaped():
    m, _ = add_object(new_model('A & <B> "C"'), 'R&D <"x">')
    root = ET.fromstring(render_diagram(m, "SD"))
    assert root.find(SVG + "title").text == 'A & <B> "C": SD'
    assert svg_filename(m, "SD1.1") == "a-b-c-SD1.1.svg"


def test_unknown_diagram(corpus):
    with pytest.raises(UnknownDiagram):
        render_diagram(corpus, "SD9")


def test_wrap_label():
    assert wrap_label("Short") == ("Short",)
    assert len(wrap_label("Unique HPC System Creating")) == 2


def test_render_is_deterministic(corpus):
    assert render_diagram(corpus, "SD1.1") == render_diagram(build_unique_hpc(), "SD1.1")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_random_models_render_cleanly(seed):
    m = random_model(seed)
    for d in m.preorder():
        check_svg_structure(m, d.id, render_diagram(m, d.id))
        lay = layout(m, d.id)
        if d.refinement is not None and d.refinement.value == "zoom":
            anchor = lay.placement(d.anchor)
            assert all(_inside_ellipse(anchor, lay.placement(e)) for e in d.constituents)
        for p in lay.placements:
            assert 0 <= p.x and p.x + p.w <= lay.width and 0 <= p.y and p.y + p.h <= lay.height
        tops = [p for p in lay.placements if p.shape != "state"]
        for a, b in combinations(tops, 2):
            if a.role == "anchor" or b.role == "anchor":
                continue
            assert not _overlap(a, b), (d.id, a.id, b.id)
