"""Command line interface.

Exit codes::

    0  success
    1  I/O failure (missing or unreadable file)
    2  usage error
    3  malformed XML or invalid index file
    4  query grammar error or unsupported feature
    5  Not-Found-Element (search path absent from the index)
    6  unknown export target
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import (EmptyDocument, GrammarError, IndexFormatError, MalformedXml, MixedContent,
                     PathNotFound, UnknownTarget)
from .fca.dot import to_dot
from .query.parser import parse_query
from .retrieval import direct_answers, run_query
from .store import IndexFile, build_index, load_index, save_index

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_GRAMMAR = 4
EXIT_NOT_FOUND = 5
EXIT_UNKNOWN_TARGET = 6

log = logging.getLogger("fcaxml")


def _err(message: str) -> None:
    print(f"fcaxml: {message}", file=sys.stderr)


def cmd_index(args) -> int:
    source = Path(args.input)
    try:
        data = source.read_bytes()
    except FileNotFoundError:
        _err(f"file not found: {source}")
        return EXIT_IO
    except OSError as exc:
        _err(f"cannot read {source}: {exc.strerror}")
        return EXIT_IO
    try:
        idx = build_index(data, str(source))
    except (MalformedXml, MixedContent, EmptyDocument) as exc:
        _err(f"{source}: {exc}")
        return EXIT_INPUT
    try:
        save_index(idx, args.output)
    except OSError as exc:
        _err(f"cannot write {args.output}: {exc.strerror}")
        return EXIT_IO
    print(f"data items: {len(idx.items)}")
    print(f"parent contexts: {len(idx.classification.order)}")
    print(f"view concepts: {len(idx.view.lattice)}")
    return EXIT_OK


def _load(path: str) -> IndexFile | int:
    try:
        return load_index(path)
    except FileNotFoundError:
        _err(f"file not found: {path}")
        return EXIT_IO
    except OSError as exc:
        _err(f"cannot read {path}: {exc.strerror}")
        return EXIT_IO
    except IndexFormatError as exc:
        _err(str(exc))
        return EXIT_INPUT


def cmd_query(args) -> int:
    idx = _load(args.index)
    if isinstance(idx, int):
        return idx
    try:
        pq = parse_query(args.query)
    except GrammarError as exc:
        _err(str(exc))
        return EXIT_GRAMMAR
    try:
        if args.direct:
            answers = direct_answers(idx.tree, idx.view, pq)
            ans = None
        else:
            _, ans, answers = run_query(idx.view, idx.tree, pq)
    except PathNotFound as exc:
        _err(str(exc))
        return EXIT_NOT_FOUND

    if args.levels and ans is not None:
        for level, bucket in ans.ranked:
            print(f"# level {level}: " + " ".join(item.label for item in bucket))
    if args.json:
        rows = [{"level": a.level, "item": a.item.label, "path": a.path,
                 "tag": a.item.leaf_tag_key, "value": a.item.value} for a in answers]
        print(json.dumps(rows, ensure_ascii=False, indent=1))
    else:
        for a in answers:
            level = "-" if a.level is None else str(a.level)
            print(f"{level}\t{a.path}\t{a.item.leaf_tag_key}\t{a.item.value}")
    return EXIT_OK


def _resolve_target(idx: IndexFile, target: str) -> int | None:
    """Node id of a parent context, or None for the view."""
    if target == "view":
        return None
    by_path = {idx.tree.path_key(p): p for p in idx.classification.order}
    if target in by_path:
        return by_path[target]
    by_key = [p for p in idx.classification.order if idx.tree.tag_key(p) == target]
    if len(by_key) == 1:
        return by_key[0]
    raise UnknownTarget(target)


def _view_group(idx: IndexFile):
    structural = [p for p in idx.view.element_paths
                  if idx.view.path_dictionary.get(p) is not None
                  and idx.view.context.attributes[idx.view.path_dictionary[p]] == p]
    depth = {p: p.count("/") for p in structural}

    def group(i: int) -> str | None:
        intent = idx.view.lattice.concepts[i].intent
        inside = [p for p in structural if p in intent]
        return max(inside, key=lambda p: (depth[p], p)) if inside else None

    return group


def cmd_export(args) -> int:
    idx = _load(args.index)
    if isinstance(idx, int):
        return idx
    try:
        node = _resolve_target(idx, args.target)
    except UnknownTarget:
        _err(f"unknown target: {args.target}")
        return EXIT_UNKNOWN_TARGET
    if node is None:
        view = idx.view
        group = _view_group(idx) if args.group else None
        text = to_dot(view.lattice, view.context.objects, view.context.attributes,
                      name="view", group=group)
    else:
        ctx = idx.classification.contexts[node]
        text = to_dot(idx.classification.lattices[node], ctx.objects, ctx.attributes,
                      name=idx.tree.path_key(node))
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            _err(f"cannot write {args.output}: {exc.strerror}")
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_inspect(args) -> int:
    idx = _load(args.index)
    if isinstance(idx, int):
        return idx
    view = idx.view
    print(f"source: {idx.source_name} sha256:{idx.source_digest}")
    print(f"data items: {len(idx.items)}")
    for item in idx.items:
        row = view.context.row_of(item.label)
        attrs = ", ".join(a for a in view.context.attributes if a in row)
        print(f"  {item.label}\t{item.value}\t{{{attrs}}}")
    print(f"parent contexts: {len(idx.classification.order)}")
    for p in idx.classification.order:
        ctx = idx.classification.contexts[p]
        print(f"  {idx.tree.path_key(p)}\t{len(ctx.objects)} x {len(ctx.attributes)}"
              f"\t{len(idx.classification.lattices[p])} concepts")
    print(f"view concepts: {len(view.lattice)}")
    print(f"path dictionary: {len(view.path_dictionary)}")
    for key in view.path_dictionary:
        print(f"  {key}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fcaxml",
                                     description="Concept-lattice indexing and querying of XML")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="index an XML document")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("query", help="run a query against an index")
    p.add_argument("index")
    p.add_argument("-q", "--query", required=True)
    p.add_argument("--levels", action="store_true", help="print the ranked answer buckets")
    p.add_argument("--direct", action="store_true", help="bypass the lattice (tree-walk oracle)")
    p.add_argument("--json", action="store_true", help="structured output")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("export", help="write a Hasse diagram")
    p.add_argument("index")
    p.add_argument("--target", required=True, help="parent node path or key, or 'view'")
    p.add_argument("--format", choices=["dot"], default="dot")
    p.add_argument("--group", action="store_true", help="cluster view concepts by parent node")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("inspect", help="summarize an index")
    p.add_argument("index")
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="fcaxml: %(levelname)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
