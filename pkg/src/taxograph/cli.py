"""Command-line interface.

Exit codes: 0 success, 1 validation error (or differing graphs for
``diff``), 2 parse error, 3 golden mismatch, 64 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence, TextIO

from . import __version__
from .cuts import CutSelector, cut, export_label_vector, union
from .dcase import BUNDLED, DataDir, build_dcase, default_records, default_thesaurus, export_data, golden_diff, golden_sets
from .errors import ParseError, TaxographError
from .formats import (
    dumps_document,
    export_edges,
    import_edges,
    load_graph,
    load_label_set,
    load_records,
    load_thesaurus,
    loads_graph,
    read_text,
    write_text,
)
from .framework import LabelSpec, merge_label_set
from .graph import ERROR, TaxonomyGraph, validate

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_GOLDEN = 3
EXIT_USAGE = 64

THESAURUS_ENV = "TAXOGRAPH_THESAURUS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _thesaurus(args):
    path = args.thesaurus or os.environ.get(THESAURUS_ENV)
    return load_thesaurus(path) if path else default_thesaurus(_data(args))


def _records(args):
    if getattr(args, "no_records", False):
        return []
    if getattr(args, "records", None):
        return load_records(args.records)
    return default_records(_data(args))


def _data(args) -> DataDir:
    root = getattr(args, "data_dir", None)
    return DataDir(root) if root else BUNDLED


def _read_graph(path: str, stdin: TextIO) -> TaxonomyGraph:
    if path == "-":
        return loads_graph(stdin.read(), "<stdin>")
    return load_graph(path)


def _base_graph(args, stdin) -> TaxonomyGraph:
    if getattr(args, "empty", False):
        return TaxonomyGraph()
    if args.graph:
        return _read_graph(args.graph, stdin)
    return build_dcase(_thesaurus(args), _records(args), _data(args)).graph


def _emit(text: str, out: str | None, stdout: TextIO) -> None:
    if out and out != "-":
        write_text(out, text)
    else:
        stdout.write(text)


def _print_report(report, stream: TextIO) -> None:
    for line in report.lines():
        print(line, file=stream)


# -- subcommands -------------------------------------------------------------


def cmd_init(args, stdin, stdout, stderr) -> int:
    if not args.dcase:
        raise UsageError("init: only --dcase initialization is available")
    data = _data(args)
    build = build_dcase(_thesaurus(args), _records(args), data)
    if args.report:
        _print_report(build.report, stderr)
    text = export_edges(build.graph) if args.format == "edges" else dumps_document(build.graph)
    _emit(text, args.out, stdout)
    diff = golden_diff(build.graph, golden_sets(data), build.stages)
    if diff:
        for line in diff.lines():
            print(f"golden mismatch: {line}", file=stderr)
        return EXIT_GOLDEN
    return EXIT_OK


def _extend(args, raws, stdin, stdout, stderr) -> int:
    graph = _base_graph(args, stdin)
    graph, report = merge_label_set(
        graph, raws, args.cluster, args.kind, _thesaurus(args), (), _records(args), source=args.source
    )
    report_stream = stderr if args.out == "-" else stdout
    _print_report(report, report_stream)
    if args.out:
        _emit(dumps_document(graph), args.out, stdout)
    return EXIT_INVALID if report.errors else EXIT_OK


def cmd_add(args, stdin, stdout, stderr) -> int:
    return _extend(args, [LabelSpec(args.label, kind=args.label_kind)], stdin, stdout, stderr)


def cmd_merge(args, stdin, stdout, stderr) -> int:
    return _extend(args, load_label_set(args.file), stdin, stdout, stderr)


def cmd_cut(args, stdin, stdout, stderr) -> int:
    graph = _base_graph(args, stdin)
    try:
        selector = CutSelector(
            kinds=frozenset(args.kind or ()),
            clusters=frozenset(args.cluster or ()),
            labels=frozenset(args.label or ()),
            mode=args.mode,
        )
    except ValueError as exc:
        raise UsageError(f"cut: {exc}") from None
    sub = cut(graph, selector)
    if args.vector:
        _emit("".join(f"{t}\n" for t in export_label_vector(sub)), args.out, stdout)
    else:
        _emit(dumps_document(sub), args.out, stdout)
    return EXIT_OK


def cmd_vector(args, stdin, stdout, stderr) -> int:
    graph = _read_graph(args.file, stdin) if args.file else _base_graph(args, stdin)
    _emit("".join(f"{t}\n" for t in export_label_vector(graph, args.ordering)), args.out, stdout)
    return EXIT_OK


def cmd_union(args, stdin, stdout, stderr) -> int:
    a = _read_graph(args.a, stdin)
    b = _read_graph(args.b, stdin)
    _emit(dumps_document(union(a, b, _thesaurus(args))), args.out, stdout)
    return EXIT_OK


def cmd_validate(args, stdin, stdout, stderr) -> int:
    graph = _read_graph(args.file, stdin)
    issues = validate(graph, _thesaurus(args))
    for issue in issues:
        print(issue, file=stdout)
    errors = [i for i in issues if i.severity == ERROR]
    print(f"{len(graph)} labels, {len(errors)} errors, {len(issues) - len(errors)} warnings", file=stdout)
    return EXIT_INVALID if errors else EXIT_OK


def cmd_export_edges(args, stdin, stdout, stderr) -> int:
    _emit(export_edges(_read_graph(args.file, stdin)), args.out, stdout)
    return EXIT_OK


def cmd_import_edges(args, stdin, stdout, stderr) -> int:
    text = stdin.read() if args.file == "-" else read_text(args.file)
    _emit(dumps_document(import_edges(text, args.file)), args.out, stdout)
    return EXIT_OK


def cmd_diff(args, stdin, stdout, stderr) -> int:
    a = _read_graph(args.a, stdin)
    b = _read_graph(args.b, stdin)
    lines = [f"- {t}" for t in sorted(a.texts - b.texts)]
    lines += [f"+ {t}" for t in sorted(b.texts - a.texts)]
    for text in sorted(a.texts & b.texts):
        if a.kinds_of(text) != b.kinds_of(text):
            old = ",".join(sorted(map(str, a.kinds_of(text))))
            new = ",".join(sorted(map(str, b.kinds_of(text))))
            lines.append(f"~ {text} subsets {old} -> {new}")
    for name in sorted(a.cluster_names | b.cluster_names):
        old = set(a.cluster(name).members) if name in a.cluster_names else set()
        new = set(b.cluster(name).members) if name in b.cluster_names else set()
        for text in sorted(old - new):
            lines.append(f"- @{name} {text}")
        for text in sorted(new - old):
            lines.append(f"+ @{name} {text}")
    old_edges, new_edges = set(a.cross_edges), set(b.cross_edges)
    lines += [f"- edge {x}\t{y}" for x, y, _ in sorted(old_edges - new_edges, key=str)]
    lines += [f"+ edge {x}\t{y}" for x, y, _ in sorted(new_edges - old_edges, key=str)]
    for line in lines:
        print(line, file=stdout)
    return EXIT_INVALID if lines else EXIT_OK


def cmd_export_data(args, stdin, stdout, stderr) -> int:
    for path in export_data(args.directory):
        print(path, file=stdout)
    return EXIT_OK


# -- parser --------------------------------------------------------------------------


def _add_thesaurus(p):
    p.add_argument("--thesaurus", metavar="PATH", help=f"thesaurus file (default: ${THESAURUS_ENV} or bundled)")


def _add_records(p):
    p.add_argument("--records", metavar="PATH", help="curation-record file (default: bundled)")
    p.add_argument("--no-records", action="store_true", help="apply no curation records")


def _add_graph(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--graph", metavar="FILE", help="taxonomy to start from (default: DCASE taxonomy)")
    g.add_argument("--empty", action="store_true", help="start from an empty taxonomy")
    p.add_argument("--data-dir", metavar="DIR", help="read DCASE data files from DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="taxograph", description="Extensible cluster-graph taxonomy for sound scene labels.")
    parser.add_argument("--version", action="version", version=f"taxograph {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("init", help="build the DCASE taxonomy and check it against the golden sets")
    p.add_argument("--dcase", action="store_true", required=True)
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--format", choices=("json", "edges"), default="json")
    p.add_argument("--report", action="store_true", help="print the curation report to stderr")
    p.add_argument("--data-dir", metavar="DIR", help="read DCASE data files from DIR instead of the bundle")
    _add_thesaurus(p)
    _add_records(p)
    p.set_defaults(func=cmd_init)

    for name, func, helptext in (
        ("add", cmd_add, "add one raw label"),
        ("merge", cmd_merge, "merge a label-set file"),
    ):
        p = sub.add_parser(name, help=helptext)
        if name == "add":
            p.add_argument("label")
            p.add_argument("--label-kind", choices=("object", "action"))
        else:
            p.add_argument("file")
        p.add_argument("--cluster", required=True)
        p.add_argument("--kind", required=True, action="append", choices=("event", "environment", "context"))
        p.add_argument("--source", help="source set id, selects scoped curation records")
        p.add_argument("--out", metavar="FILE", help="write the updated taxonomy ('-' for stdout)")
        _add_graph(p)
        _add_thesaurus(p)
        _add_records(p)
        p.set_defaults(func=func)

    p = sub.add_parser("cut", help="extract a sub-taxonomy")
    p.add_argument("--kind", action="append", choices=("event", "environment", "context"))
    p.add_argument("--cluster", action="append")
    p.add_argument("--label", action="append")
    p.add_argument("--mode", choices=("intersection", "union"), default="intersection")
    p.add_argument("--vector", action="store_true", help="print the sorted label vector instead")
    p.add_argument("--out", metavar="FILE")
    _add_graph(p)
    _add_thesaurus(p)
    _add_records(p)
    p.set_defaults(func=cmd_cut)

    p = sub.add_parser("vector", help="print the label vector of a taxonomy, one label per line")
    p.add_argument("file", nargs="?", help="taxonomy file (default: DCASE taxonomy)")
    p.add_argument("--ordering", choices=("lexicographic", "insertion"), default="lexicographic")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_vector, graph=None, empty=False, data_dir=None, thesaurus=None)

    p = sub.add_parser("union", help="synonym-aware union of two taxonomies")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--out", metavar="FILE")
    _add_thesaurus(p)
    p.set_defaults(func=cmd_union)

    p = sub.add_parser("validate", help="check taxonomy invariants")
    p.add_argument("file")
    _add_thesaurus(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("export-edges", help="convert a taxonomy to an edge list")
    p.add_argument("file")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_export_edges)

    p = sub.add_parser("import-edges", help="convert an edge list to a taxonomy document")
    p.add_argument("file")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_import_edges)

    p = sub.add_parser("diff", help="compare two taxonomies")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("export-data", help="write the bundled DCASE data files to a directory")
    p.add_argument("directory")
    p.set_defaults(func=cmd_export_data)
    return parser


def main(argv: Sequence[str] | None = None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("taxograph: a subcommand is required")
        return args.func(args, stdin, stdout, stderr)
    except UsageError as exc:
        print(parser.format_usage().rstrip(), file=stderr)
        print(exc, file=stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_PARSE
    except (TaxographError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
