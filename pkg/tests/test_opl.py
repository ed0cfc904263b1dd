import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modelgen import random_model
from opmkit import (
    ROOT,
    Diagram,
    LinkKind,
    NodeKind,
    Refinement,
    add_object,
    find_by_name,
    generate,
    new_model,
    parse,
    parse_with_diagnostics,
)
from opmkit.corpus import build_unique_hpc, corpus_path
from opmkit.errors import InvalidModel
from opmkit.opl import ParseError, quote
from opmkit.opl.lexer import SourceSpan, Tok, tokenize
from opmkit.opl.parser import DEFAULT_MODEL_NAME

KETTLE = """model "Kettle".
object "Water".
process "Boiling".
object "Kettle".
"Water" can be "cold", "hot".
"Boiling" consumes "Water::cold". // trailing comment
"Boiling" yields "Water::hot".
"Kettle" is instrument of "Boiling".
"""


def codes(text):
    _, diags = parse_with_diagnostics(text)
    return [d.code for d in diags]


def first_error(text):
    model, diags = parse_with_diagnostics(text)
    assert model is None
    return next(d for d in diags if d.severity.value == "error")


def test_parse_basic_model():
    m = parse(KETTLE)
    assert m.name == "Kettle"
    water = find_by_name(m, "Water")
    assert [s.name for s in m.entities[water].states] == ["cold", "hot"]
    kinds = sorted(l.kind.value for l in m.links.values())
    assert kinds == ["consumption", "instrument", "result"]
    assert all(lid in m.diagrams[ROOT].members_links for lid in m.links)
    consumption = next(l for l in m.links.values() if l.kind is LinkKind.CONSUMPTION)
    assert m.label(consumption.source.target) == "Water::cold"
    assert '"Boiling" consumes "Water::cold".' in generate(m)


def test_header_is_optional():
    m = parse('object "A".')
    assert m.name == DEFAULT_MODEL_NAME


def test_empty_document_is_empty_model():
    assert parse("") == new_model(DEFAULT_MODEL_NAME)
    assert generate(new_model("E")) == 'model "E".\n'


def test_escapes_round_trip():
    name = 'say "hi" \\ bye'
    m, _ = add_object(new_model("q"), name)
    text = generate(m)
    assert quote(name) in text
    assert find_by_name(parse(text), name) is not None


def test_lexer_spans():
    tokens, errors = tokenize('object "A b".\n  "X" is a "Y".')
    assert errors == []
    assert [t.kind for t in tokens][-1] is Tok.EOF
    string = tokens[1]
    assert (string.value, string.span) == ("A b", SourceSpan(1, 8, 5))
    assert tokens[3].span == SourceSpan(2, 3, 3)


def test_comments_are_ignored_outside_strings():
    m = parse('// header comment\nobject "a // b". // trailing\n')
    assert find_by_name(m, "a // b") is not None


@pytest.mark.parametrize(
    "text, code, line, column",
    [
        ('object "A', "P001", 1, 8),
        ('object "A\\n".', "P002", 1, 10),
        ('object "A" ;.', "P003", 1, 12),
        ('object "A"', "P004", 1, 8),
        ('thing "A".', "P005", 1, 1),
        ('object "A".\nmodel "M".', "P006", 2, 1),
        ('"A" frobs "B".', "P005", 1, 5),
        ('object "A".\n"A" is part of "B".', "P101", 2, 16),
        ('object "A".\nprocess "A".', "P102", 2, 9),
        ('object "A".\n"A" can be "x", "x".', "P103", 2, 17),
        ('process "P".\n"P" can be "x".', "P104", 2, 1),
        ('object "A::b".', "P107", 1, 8),
        ('object "O".\n"O" can be "s".\nprocess "P".\n"O::t" is agent of "P".', "P109", 4, 1),
        ('object "A".\nprocess "P".\n"P" is agent of "A".', "P202", 3, 1),
        ('object "A".\nprocess "P".\n"A" is part of "P".', "P201", 3, 1),
        ('object "A".\n"A" is a "A".', "P204", 2, 1),
        ('object "A".\n"A" zooms into "B".', "P108", 2, 1),
        ('process "P".\nobject "B".\n"P" zooms into "B".', "P108", 3, 16),
    ],
)
def test_error_codes_and_spans(text, code, line, column):
    err = first_error(text)
    assert (err.code, err.span.line, err.span.column) == (code, line, column), err.render()


def test_all_syntax_errors_reported_in_one_pass():
    text = 'object "A"\nobject "B".\nthing "C".\nobject "D'
    assert codes(text) == ["P004", "P005", "P001", "P004"]


def test_parse_error_raises():
    with pytest.raises(ParseError) as info:
        parse('object "A"')
    assert info.value.diagnostics[0].code == "P004"


def test_warnings_do_not_block_parsing():
    model, diags = parse_with_diagnostics('object "Lonely".')
    assert model is not None
    assert [d.code for d in diags] == ["W1"]
    assert diags[0].span.line == 1


def test_refinement_cursor_places_declarations():
    text = """process "Making".
object "Worker".
"Worker" is agent of "Making".
"Making" zooms into "Cutting", "Packing".
object "Blade".
"Blade" is instrument of "Cutting".
"""
    m = parse(text)
    sd1 = m.diagrams["SD1"]
    assert sd1.refinement is Refinement.ZOOM
    blade = find_by_name(m, "Blade")
    assert m.diagrams_showing(blade) == ["SD1"]
    # the parent link touching the anchor is inherited by the child
    assert any(m.links[l].kind is LinkKind.AGENT for l in sd1.members_links)


def test_declared_kind_used_before_declaration():
    text = '''object "Car".
"Car" unfolds to "Wheel", "Driving".
process "Driving".
'''
    m = parse(text)
    assert m.entities[find_by_name(m, "Driving")].kind is NodeKind.PROCESS
    assert m.entities[find_by_name(m, "Wheel")].kind is NodeKind.OBJECT


def test_redeclaration_shows_entity_in_current_diagram():
    text = '''process "P".
object "O".
"O" is instrument of "P".
"P" zooms into "P1".
object "O".
'''
    m = parse(text)
    assert m.diagrams_showing(find_by_name(m, "O")) == ["SD", "SD1"]


def test_anchor_outside_parent_is_rejected():
    text = '''process "P".
"P" zooms into "P1".
process "P".
'''
    assert first_error(text).code == "P105"


def test_corpus_file_is_canonical():
    text = corpus_path().read_text(encoding="utf-8")
    m = parse(text)
    assert m == build_unique_hpc()
    assert generate(m) == text


def test_generate_rejects_invalid_model():
    m, obj = add_object(new_model("x"), "A")
    bad = m.copy()
    bad.diagrams[ROOT] = Diagram(ROOT)
    with pytest.raises(InvalidModel):
        generate(bad)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_round_trip_and_fixpoint(seed):
    m = random_model(seed)
    text = generate(m)
    again = parse(text)
    assert again == m
    assert generate(again) == text


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(list('"\\ab .,:/\n') + ["is ", "object ", "process ", "part of "]), max_size=30).map("".join))
def test_parser_never_crashes(text):
    model, diags = parse_with_diagnostics(text)
    assert model is not None or any(d.severity.value == "error" for d in diags)
    lines = text.split("\n")
    for d in diags:
        assert 1 <= d.span.line <= len(lines)
        assert 1 <= d.span.column <= len(lines[d.span.line - 1]) + 1
        assert d.span.length >= 1
