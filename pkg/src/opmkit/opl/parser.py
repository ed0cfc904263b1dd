"""Parser for the .opm dialect.

Parsing runs in four steps:

1. tokenize and group tokens into period-terminated statements;
2. collect the kind of every declared name (so refinement statements can
   create constituents of the right kind before their declaration);
3. replay declarations, state lists and refinement statements in order.
   A refinement statement opens its child diagram, and every following
   declaration lands there until the next refinement statement;
4. add links to the diagram that was open where each link was written.
   ``"P" consumes "O".`` is stored as a link from O to P.

A name declared again in a later diagram is shown there as well, and a link
repeated in a later diagram likewise. The result is checked by the validator
and the refinement consistency check; any Error discards the model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..diagnostics import Severity
from ..errors import (
    AlreadyRefined,
    DuplicateName,
    DuplicateState,
    EmptyName,
    IllegalEndpoints,
    InvalidName,
    NotAnObject,
    NotAProcess,
    OPMError,
    RefinementError,
    SelfLink,
    UnknownEntity,
)
from ..kinds import LinkFamily, LinkKind, NodeKind
from ..model import (
    ROOT,
    Model,
    ObjectEntity,
    _create_entity,
    _create_link,
    _create_state,
    _show,
    find_by_name,
    new_model,
)
from ..names import STATE_SEP, canonical_name, is_entity_name
from ..refinement import check_consistency, in_zoom, unfold
from ..validator import validate
from .lexer import SourceSpan, Tok, Token, tokenize

LINK_VERBS: dict[str, LinkKind] = {
    "is part of": LinkKind.AGGREGATION,
    "exhibits": LinkKind.EXHIBITION,
    "is a": LinkKind.GENERALIZATION,
    "is instance of": LinkKind.INSTANTIATION,
    "consumes": LinkKind.CONSUMPTION,
    "yields": LinkKind.RESULT,
    "affects": LinkKind.EFFECT,
    "is agent of": LinkKind.AGENT,
    "is instrument of": LinkKind.INSTRUMENT,
}
# Verbs whose grammatical subject is the link destination.
SUBJECT_IS_DESTINATION = frozenset({"consumes"})
LIST_VERBS = {"can be": "statelist", "zooms into": "zoom", "unfolds to": "unfold"}
KEYWORDS = {"model": "header", "object": "decl", "process": "decl"}

DEFAULT_MODEL_NAME = "untitled"


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: Severity
    code: str
    message: str
    span: SourceSpan

    def render(self) -> str:
        return f"{self.code} {self.severity.value} {self.span.line}:{self.span.column}: {self.message}"


class ParseError(OPMError):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        errs = [d for d in diagnostics if d.severity is Severity.ERROR]
        super().__init__("; ".join(d.render() for d in errs[:3]) or "parse failed")


@dataclass
class Statement:
    form: str  # header | decl | statelist | link | zoom | unfold
    head: Token  # keyword for header/decl, subject string otherwise
    verb: str = ""
    args: list[Token] = field(default_factory=list)


_CORE_CODES = {
    UnknownEntity: "P101",
    DuplicateName: "P102",
    DuplicateState: "P103",
    NotAnObject: "P104",
    RefinementError: "P105",
    AlreadyRefined: "P106",
    EmptyName: "P107",
    InvalidName: "P107",
    NotAProcess: "P108",
    SelfLink: "P204",
}


def _code_for(exc: OPMError) -> str:
    if isinstance(exc, IllegalEndpoints):
        return "P201" if exc.kind.family is LinkFamily.STRUCTURAL else "P202"
    for cls, code in _CORE_CODES.items():
        if isinstance(exc, cls):
            return code
    return "P199"


def _err(code: str, message: str, span: SourceSpan) -> ParseDiagnostic:
    return ParseDiagnostic(Severity.ERROR, code, message, span)


def _phrase_span(words: list[Token]) -> SourceSpan:
    first, last = words[0].span, words[-1].span
    if first.line == last.line:
        return SourceSpan(first.line, first.column, last.column + last.length - first.column)
    return first


class _StatementReader:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.diagnostics: list[ParseDiagnostic] = []
        self.last_real = tokens[0].span if tokens else SourceSpan(1, 1)

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind is not Tok.EOF:
            self.pos += 1
            self.last_real = tok.span
        return tok

    def where(self, tok: Token) -> SourceSpan:
        # EOF sits past the last character; point at the last real token instead.
        return self.last_real if tok.kind is Tok.EOF else tok.span

    def expect(self, kind: Tok, what: str) -> Token:
        tok = self.peek()
        if tok.kind is not kind:
            code = "P004" if kind is Tok.DOT else "P007"
            found = tok.kind.value if tok.kind is not Tok.WORD else repr(tok.value)
            raise _Syntax(_err(code, f"expected {what}, found {found}", self.where(tok)))
        return self.take()

    def recover(self) -> None:
        while self.peek().kind not in (Tok.DOT, Tok.EOF):
            self.take()
        if self.peek().kind is Tok.DOT:
            self.take()

    def statements(self) -> list[Statement]:
        out = []
        while self.peek().kind is not Tok.EOF:
            try:
                out.append(self.statement())
            except _Syntax as exc:
                self.diagnostics.append(exc.diagnostic)
                self.recover()
        return out

    def statement(self) -> Statement:
        tok = self.peek()
        if tok.kind is Tok.WORD:
            self.take()
            form = KEYWORDS.get(tok.value)
            if form is None:
                raise _Syntax(_err("P005", f"unknown statement keyword {tok.value!r}", tok.span))
            name = self.expect(Tok.STRING, "a quoted name")
            self.expect(Tok.DOT, "'.'")
            return Statement(form, tok, tok.value, [name])
        if tok.kind is Tok.STRING:
            self.take()
            words = []
            while self.peek().kind is Tok.WORD:
                words.append(self.take())
            if not words:
                nxt = self.peek()
                raise _Syntax(_err("P007", "expected a verb after the name", self.where(nxt)))
            verb = " ".join(w.value for w in words)
            if verb in LINK_VERBS:
                target = self.expect(Tok.STRING, "a quoted name")
                self.expect(Tok.DOT, "'.'")
                return Statement("link", tok, verb, [target])
            if verb in LIST_VERBS:
                args = [self.expect(Tok.STRING, "a quoted name")]
                while self.peek().kind is Tok.COMMA:
                    self.take()
                    args.append(self.expect(Tok.STRING, "a quoted name"))
                self.expect(Tok.DOT, "'.'")
                return Statement(LIST_VERBS[verb], tok, verb, args)
            raise _Syntax(_err("P005", f"unknown verb {verb!r}", _phrase_span(words)))
        raise _Syntax(_err("P007", f"unexpected {tok.kind.value}", tok.span))


class _Syntax(Exception):
    def __init__(self, diagnostic: ParseDiagnostic):
        self.diagnostic = diagnostic


def parse_with_diagnostics(text: str) -> tuple[Model | None, list[ParseDiagnostic]]:
    """Parse a document; return the model (or None on any error) and all diagnostics."""
    tokens, lex_errors = tokenize(text)
    diags = [_err(e.code, e.message, e.span) for e in lex_errors]
    reader = _StatementReader(tokens)
    statements = reader.statements()
    diags += reader.diagnostics
    if diags:
        return None, sorted(diags, key=_span_key)
    builder = _Builder(statements)
    model = builder.run()
    diags = builder.diagnostics
    if model is not None:
        diags += builder.semantic_diagnostics(model)
    if any(d.severity is Severity.ERROR for d in diags):
        return None, sorted(diags, key=_span_key)
    return model, sorted(diags, key=_span_key)


def parse(text: str) -> Model:
    """Parse a document, raising :class:`ParseError` if it has any error."""
    model, diags = parse_with_diagnostics(text)
    if model is None:
        raise ParseError(diags)
    return model


def _span_key(d: ParseDiagnostic):
    return (d.span.line, d.span.column, d.code)


class _Builder:
    def __init__(self, statements: list[Statement]):
        self.statements = statements
        self.diagnostics: list[ParseDiagnostic] = []
        self.spans: dict[str, SourceSpan] = {}
        self.declared: dict[str, NodeKind] = {}
        self.model: Model | None = None

    def fail(self, code: str, message: str, span: SourceSpan) -> None:
        self.diagnostics.append(_err(code, message, span))

    def name(self, tok: Token) -> str | None:
        canon = canonical_name(tok.value)
        if not canon:
            self.fail("P107", "name is empty", tok.span)
            return None
        return canon

    def run(self) -> Model | None:
        stmts = self.statements
        title = DEFAULT_MODEL_NAME
        for i, st in enumerate(stmts):
            if st.form == "header":
                if i != 0:
                    self.fail("P006", "the model header must be the first statement", st.head.span)
                    continue
                title = self.name(st.args[0]) or DEFAULT_MODEL_NAME
        for st in stmts:
            if st.form == "decl":
                name = self.name(st.args[0])
                kind = NodeKind(st.verb)
                if name is None:
                    continue
                if not is_entity_name(name):
                    self.fail("P107", f"entity names may not contain {STATE_SEP!r} or end with ':'", st.args[0].span)
                elif self.declared.setdefault(name, kind) is not kind:
                    self.fail("P102", f"{name!r} is declared as both object and process", st.args[0].span)
        if self.diagnostics:
            return None

        m = new_model(title)
        cursor = ROOT
        pending: list[tuple[Statement, str]] = []
        for st in stmts:
            try:
                if st.form == "decl":
                    self._declare(m, st, cursor)
                elif st.form == "statelist":
                    self._states(m, st)
                elif st.form in ("zoom", "unfold"):
                    result = self._refine(m, st)
                    if result is not None:
                        m, cursor = result
                elif st.form == "link":
                    pending.append((st, cursor))
            except OPMError as exc:
                self.fail(_code_for(exc), str(exc), st.args[0].span if st.form == "decl" else st.head.span)
        for st, did in pending:
            src = self._resolve(m, st.head)
            dst = self._resolve(m, st.args[0])
            if st.verb in SUBJECT_IS_DESTINATION:
                src, dst = dst, src
            if src is None or dst is None:
                continue
            try:
                lid = _create_link(m, LINK_VERBS[st.verb], src, dst, did)
                self.spans.setdefault(lid, st.head.span)
            except OPMError as exc:
                self.fail(_code_for(exc), str(exc), st.head.span)
        if self.diagnostics:
            return None
        m.current = ROOT
        return m

    def _declare(self, m: Model, st: Statement, cursor: str) -> None:
        tok = st.args[0]
        name = canonical_name(tok.value)
        eid = find_by_name(m, name)
        if eid is None:
            eid = _create_entity(m, NodeKind(st.verb), name, cursor)
            self.spans[eid] = tok.span
        else:
            _show(m, cursor, eid)

    def _states(self, m: Model, st: Statement) -> None:
        owner_name = self.name(st.head)
        if owner_name is None:
            return
        owner = find_by_name(m, owner_name)
        if owner is None:
            self.fail("P101", f"{owner_name!r} is not declared before its states", st.head.span)
            return
        if not isinstance(m.entities[owner], ObjectEntity):
            self.fail("P104", f"{owner_name!r} is a process; only objects have states", st.head.span)
            return
        for tok in st.args:
            try:
                sid = _create_state(m, owner, tok.value)
                self.spans[sid] = tok.span
            except OPMError as exc:
                self.fail(_code_for(exc), str(exc), tok.span)

    def _refine(self, m: Model, st: Statement) -> tuple[Model, str] | None:
        anchor_name = self.name(st.head)
        names = [self.name(t) for t in st.args]
        if anchor_name is None or None in names:
            return None
        anchor = find_by_name(m, anchor_name)
        if anchor is None:
            self.fail("P101", f"{anchor_name!r} is not declared", st.head.span)
            return None
        if st.form == "zoom":
            for tok, name in zip(st.args, names):
                if self.declared.get(name) is NodeKind.OBJECT:
                    self.fail("P108", f"{name!r} is an object and cannot be a subprocess", tok.span)
                    return None
            m, did = in_zoom(m, anchor, names)
        else:
            anchor_kind = m.entities[anchor].kind
            kinds = [self.declared.get(n, anchor_kind) for n in names]
            m, did = unfold(m, anchor, names, kinds)
        self.spans.setdefault(did, st.head.span)
        for tok, eid in zip(st.args, m.diagrams[did].constituents):
            self.spans.setdefault(eid, tok.span)
        return m, did

    def _resolve(self, m: Model, tok: Token) -> str | None:
        name = self.name(tok)
        if name is None:
            return None
        eid = find_by_name(m, name)
        if eid is not None:
            return eid
        owner_name, sep, state_name = name.partition(STATE_SEP)
        if sep:
            owner = find_by_name(m, owner_name.strip())
            if owner is not None:
                for st in getattr(m.entities[owner], "states", ()):
                    if st.name == state_name.strip():
                        return st.id
                self.fail("P109", f"{owner_name.strip()!r} has no state {state_name.strip()!r}", tok.span)
                return None
        self.fail("P101", f"{name!r} is not declared", tok.span)
        return None

    def semantic_diagnostics(self, model: Model) -> list[ParseDiagnostic]:
        out = []
        fallback = self.statements[0].head.span if self.statements else SourceSpan(1, 1)
        for d in validate(model) + check_consistency(model):
            span = self.spans.get(d.target or "", fallback)
            if d.is_error:
                num = int(d.code[1:])
                code = f"P2{num:02d}" if d.code.startswith("R") else f"P2{10 + num}"
                out.append(_err(code, f"[{d.code}] {d.subject}: {d.message}", span))
            else:
                out.append(ParseDiagnostic(Severity.WARNING, d.code, f"{d.subject}: {d.message}", span))
        return out
