"""Command-line entry point.

Exit status: 0 success, 1 validation errors (or warnings under --strict),
2 usage or I/O errors. Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import derive_requirements, render_requirement, requirement_document
from .corpus import corpus_path
from .diagnostics import Severity
from .errors import InvalidModel, NotAnObject
from .graph import to_dot, to_graph, to_json_graph
from .model import Model, find_by_name
from .opl import generate, parse_with_diagnostics
from .refinement import check_consistency
from .render import render_diagram, svg_filename
from .validator import validate

OK, INVALID, USAGE = 0, 1, 2


class _Abort(Exception):
    def __init__(self, status: int, message: str = ""):
        self.status = status
        self.message = message


def _err(*lines: str) -> None:
    for line in lines:
        print(line, file=sys.stderr)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _Abort(USAGE, f"cannot read {path}: {exc}") from None


def _load(path: str) -> Model:
    model, diags = parse_with_diagnostics(_read(path))
    if model is None:
        _err(*(f"{path}:{d.render()}" for d in diags))
        raise _Abort(INVALID)
    return model


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _Abort(USAGE, f"cannot write {path}: {exc}") from None


def cmd_validate(args) -> int:
    model, diags = parse_with_diagnostics(_read(args.path))
    if model is None:
        _err(*(f"{args.path}:{d.render()}" for d in diags))
        return INVALID
    findings = validate(model) + check_consistency(model)
    _err(*(d.render() for d in findings))
    if any(d.is_error for d in findings):
        return INVALID
    if args.strict and any(d.severity is Severity.WARNING for d in findings):
        return INVALID
    return OK


def cmd_fmt(args) -> int:
    original = _read(args.path)
    model = _load(args.path)
    text = generate(model)
    if text != original:
        _write(Path(args.path), text)
    return OK


def cmd_render(args) -> int:
    model = _load(args.path)
    targets = [args.diagram] if args.diagram else [d.id for d in model.preorder()]
    for did in targets:
        if did not in model.diagrams:
            raise _Abort(USAGE, f"no diagram {did!r}; known: {', '.join(d.id for d in model.preorder())}")
    out_dir = Path(args.out)
    for did in targets:
        dest = out_dir / svg_filename(model, did)
        _write(dest, render_diagram(model, did))
        print(dest)
    return OK


def cmd_export(args) -> int:
    graph = to_graph(_load(args.path))
    text = to_dot(graph) if args.format == "dot" else to_json_graph(graph)
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return OK


def cmd_requirements(args) -> int:
    model = _load(args.path)
    system = find_by_name(model, args.system)
    if system is None:
        raise _Abort(USAGE, f"no system named {args.system!r}")
    try:
        req = derive_requirements(model, system)
    except NotAnObject as exc:
        raise _Abort(USAGE, str(exc)) from None
    if args.format == "json":
        sys.stdout.write(json.dumps(requirement_document(model, req), indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(render_requirement(model, req))
    return OK


def cmd_example(args) -> int:
    print(corpus_path())
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opmkit", description="Object-Process Methodology modeling toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="report validator and refinement diagnostics")
    p.add_argument("path")
    p.add_argument("--strict", action="store_true", help="treat warnings as failures")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("fmt", help="rewrite a file in canonical form")
    p.add_argument("path")
    p.set_defaults(func=cmd_fmt)

    p = sub.add_parser("render", help="write one SVG per diagram")
    p.add_argument("path")
    p.add_argument("diagram", nargs="?", help="diagram id (default: all diagrams)")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("export", help="export the model graph")
    p.add_argument("path")
    p.add_argument("--format", choices=("dot", "json"), default="json")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("requirements", help="derive the functions of an enabling system")
    p.add_argument("path")
    p.add_argument("system")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_requirements)

    p = sub.add_parser("example", help="print the path of the bundled example model")
    p.set_defaults(func=cmd_example)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Abort as exc:
        if exc.message:
            _err(exc.message)
        return exc.status
    except InvalidModel as exc:
        _err(*(d.render() for d in exc.diagnostics))
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
