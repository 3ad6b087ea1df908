"""Index files: canonical JSON with sorted keys, written atomically."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import warnings
from dataclasses import dataclass
from pathlib import Path

from .builder import (Classification, GeneralizedView, build_generalized_view,
                      conceptual_classification)
from .errors import IndexFormatError
from .fca.context import FormalContext
from .fca.lattice import ConceptLattice, FormalConcept
from .xmlmodel import DataItem, XmlNode, XmlTree, extract_leaf_data, parse_document

FORMAT_VERSION = 1


class StaleIndexWarning(UserWarning):
    pass


@dataclass(frozen=True)
class IndexFile:
    source_name: str
    source_digest: str
    tree: XmlTree
    items: tuple[DataItem, ...]
    classification: Classification
    view: GeneralizedView
    format_version: int = FORMAT_VERSION


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def build_index(data: bytes, source_name: str) -> IndexFile:
    tree = parse_document(data)
    items = tuple(extract_leaf_data(tree))
    classification = conceptual_classification(tree, items)
    view = build_generalized_view(tree, items, classification)
    return IndexFile(source_name, digest(data), tree, items, classification, view)


# encoding

def _ordered(labels, order) -> list[str]:
    return [x for x in order if x in labels]


def _encode_context(ctx: FormalContext) -> dict:
    n = len(ctx.attributes)
    return {
        "objects": list(ctx.objects),
        "attributes": list(ctx.attributes),
        "rows": ["".join("1" if row >> j & 1 else "0" for j in range(n)) for row in ctx.rows],
    }


def _encode_lattice(lat: ConceptLattice, ctx: FormalContext) -> dict:
    return {
        "concepts": [[_ordered(c.extent, ctx.objects), _ordered(c.intent, ctx.attributes)]
                     for c in lat.concepts],
        "edges": [list(e) for e in lat.cover_edges],
        "top": lat.top,
        "bottom": lat.bottom,
    }


def encode(idx: IndexFile) -> dict:
    tree = idx.tree
    contexts = {}
    for p in idx.classification.order:
        ctx = idx.classification.contexts[p]
        entry = _encode_context(ctx)
        entry["node"] = p
        entry["lattice"] = _encode_lattice(idx.classification.lattices[p], ctx)
        contexts[tree.path_key(p)] = entry
    view = idx.view
    view_entry = _encode_context(view.context)
    view_entry["lattice"] = _encode_lattice(view.lattice, view.context)
    view_entry["path_dictionary"] = dict(view.path_dictionary)
    view_entry["leaf_paths"] = list(view.leaf_paths)
    view_entry["element_paths"] = list(view.element_paths)
    return {
        "format_version": idx.format_version,
        "source": {"name": idx.source_name, "sha256": idx.source_digest},
        "tree": [[n.tag, n.position, n.parent, n.text] for n in tree],
        "data_items": [{"id": i.item_id, "value": i.value, "leaf_node": i.leaf_node,
                        "tag_key": i.leaf_tag_key} for i in idx.items],
        "parent_order": [tree.path_key(p) for p in idx.classification.order],
        "contexts": contexts,
        "view": view_entry,
    }


def dumps(idx: IndexFile) -> str:
    return json.dumps(encode(idx), sort_keys=True, indent=1, ensure_ascii=False) + "\n"


# decoding

def _decode_context(entry: dict) -> FormalContext:
    rows = []
    for bits in entry["rows"]:
        mask = 0
        for j, ch in enumerate(bits):
            if ch == "1":
                mask |= 1 << j
        rows.append(mask)
    return FormalContext(tuple(entry["objects"]), tuple(entry["attributes"]), tuple(rows))


def _decode_lattice(entry: dict, ctx: FormalContext) -> ConceptLattice:
    concepts = tuple(FormalConcept(frozenset(ext), frozenset(intent))
                     for ext, intent in entry["concepts"])
    edges = tuple(tuple(e) for e in entry["edges"])
    n = len(concepts)
    indices = [entry["top"], entry["bottom"], *(i for e in edges for i in e)]
    if any(not isinstance(i, int) or not 0 <= i < n for i in indices):
        raise IndexFormatError("lattice refers to a concept index out of range")
    for c in concepts:
        if ctx.derive_intent(c.extent) != c.intent or ctx.derive_extent(c.intent) != c.extent:
            raise IndexFormatError("lattice holds a pair that is not a formal concept")
    return ConceptLattice(concepts, edges, entry["top"], entry["bottom"])


def decode(doc: dict) -> IndexFile:
    try:
        version = doc["format_version"]
        if version != FORMAT_VERSION:
            raise IndexFormatError(f"unsupported index format version {version}")
        raw_nodes = doc["tree"]
        children: list[list[int]] = [[] for _ in raw_nodes]
        for i, (_, _, parent, _) in enumerate(raw_nodes):
            if parent is not None:
                children[parent].append(i)
        tree = XmlTree(XmlNode(i, tag, pos, parent, tuple(children[i]), text)
                       for i, (tag, pos, parent, text) in enumerate(raw_nodes))
        items = tuple(DataItem(d["id"], d["value"], d["leaf_node"], d["tag_key"])
                      for d in doc["data_items"])
        order = []
        contexts = {}
        lattices = {}
        for path in doc["parent_order"]:
            entry = doc["contexts"][path]
            node = entry["node"]
            order.append(node)
            contexts[node] = _decode_context(entry)
            lattices[node] = _decode_lattice(entry["lattice"], contexts[node])
        v = doc["view"]
        view_context = _decode_context(v)
        view = GeneralizedView(
            context=view_context,
            lattice=_decode_lattice(v["lattice"], view_context),
            path_dictionary=dict(v["path_dictionary"]),
            items=items,
            leaf_paths=tuple(v["leaf_paths"]),
            element_paths=tuple(v["element_paths"]),
        )
        return IndexFile(doc["source"]["name"], doc["source"]["sha256"], tree, items,
                         Classification(tuple(order), contexts, lattices), view, version)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, IndexFormatError):
            raise
        raise IndexFormatError(f"invalid index file: {exc!r}") from None


def loads(text: str) -> IndexFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IndexFormatError(f"index is not valid JSON: {exc}") from None
    return decode(doc)


def save_index(idx: IndexFile, path: str | os.PathLike) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps(idx))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def check_source(idx: IndexFile, base_dir: str | os.PathLike | None = None) -> bool | None:
    """True if the source document is unchanged, False if stale, None if not found."""
    candidates = [Path(idx.source_name)]
    if base_dir is not None:
        candidates.append(Path(base_dir) / idx.source_name)
    for candidate in candidates:
        if candidate.is_file():
            return digest(candidate.read_bytes()) == idx.source_digest
    return None


def load_index(path: str | os.PathLike) -> IndexFile:
    path = Path(path)
    idx = loads(path.read_text(encoding="utf-8"))
    if check_source(idx, path.parent) is False:
        warnings.warn(f"source document {idx.source_name!r} changed since it was indexed",
                      StaleIndexWarning, stacklevel=2)
    return idx
