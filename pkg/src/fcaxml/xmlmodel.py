"""Ordered XML element trees with canonical positional paths.

Only elements and their text are modelled.  XML attributes, comments and
processing instructions are dropped at parse time, and data lives at the
leaves only (mixed content is rejected).
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .errors import EmptyDocument, MalformedXml, MixedContent


@dataclass(frozen=True)
class XmlNode:
    node_id: int
    tag: str
    position: int
    parent: int | None
    children: tuple[int, ...]
    text: str | None

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class DataItem:
    """One textual leaf value.  ``item_id`` is 1-based, in document order."""

    item_id: int
    value: str
    leaf_node: int
    leaf_tag_key: str

    @property
    def label(self) -> str:
        return f"D{self.item_id}"


@dataclass(frozen=True)
class CanonicalPath:
    steps: tuple[tuple[str, int], ...]

    def __str__(self) -> str:
        return "/".join(f"{tag}[{pos}]" for tag, pos in self.steps)


class XmlTree:
    """Immutable element tree; node ids are assigned in document (pre-)order."""

    def __init__(self, nodes):
        self.nodes: tuple[XmlNode, ...] = tuple(nodes)
        if not self.nodes:
            raise EmptyDocument("tree has no nodes")

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[XmlNode]:
        return iter(self.nodes)

    def __eq__(self, other) -> bool:
        return isinstance(other, XmlTree) and self.nodes == other.nodes

    def __hash__(self) -> int:
        return hash(self.nodes)

    @property
    def root(self) -> XmlNode:
        return self.nodes[0]

    def node(self, node_id: int) -> XmlNode:
        return self.nodes[node_id]

    def _tag_path(self, node_id: int) -> tuple[str, ...]:
        tags = []
        current: int | None = node_id
        while current is not None:
            n = self.nodes[current]
            tags.append(n.tag)
            current = n.parent
        return tuple(reversed(tags))

    @cached_property
    def _indexed_tags(self) -> frozenset[tuple[tuple[str, ...], str]]:
        # A child tag is written with its position wherever parents sharing
        # the same tag path ever repeat it, so keys line up across siblings
        # of the same shape (one author vs. two authors).
        repeated = set()
        for n in self.nodes:
            seen: dict[str, int] = {}
            for child in n.children:
                tag = self.nodes[child].tag
                seen[tag] = seen.get(tag, 0) + 1
            parent_path = self._tag_path(n.node_id)
            for tag, count in seen.items():
                if count > 1:
                    repeated.add((parent_path, tag))
        return frozenset(repeated)

    def tag_key(self, node_id: int) -> str:
        n = self.nodes[node_id]
        if n.parent is None:
            return n.tag
        if (self._tag_path(n.parent), n.tag) in self._indexed_tags:
            return f"{n.tag}[{n.position}]"
        return n.tag

    def canonical_path(self, node_id: int) -> CanonicalPath:
        steps = []
        current: int | None = node_id
        while current is not None:
            n = self.nodes[current]
            steps.append((n.tag, n.position))
            current = n.parent
        return CanonicalPath(tuple(reversed(steps)))

    def path_key(self, node_id: int) -> str:
        """Slash-joined canonical tag keys from the root, e.g. ``bib/book[1]``."""
        keys = []
        current: int | None = node_id
        while current is not None:
            keys.append(self.tag_key(current))
            current = self.nodes[current].parent
        return "/".join(reversed(keys))

    @cached_property
    def _by_path_key(self) -> dict[str, int]:
        return {self.path_key(n.node_id): n.node_id for n in self.nodes}

    def resolve(self, path: CanonicalPath) -> int:
        if not path.steps:
            raise KeyError(path)
        tag, pos = path.steps[0]
        if tag != self.root.tag or pos != 0:
            raise KeyError(str(path))
        current = self.root
        for tag, pos in path.steps[1:]:
            for child in current.children:
                c = self.nodes[child]
                if c.tag == tag and c.position == pos:
                    current = c
                    break
            else:
                raise KeyError(str(path))
        return current.node_id

    def resolve_key(self, key: str) -> int:
        try:
            return self._by_path_key[key]
        except KeyError:
            raise KeyError(key) from None

    def descendants(self, node_id: int) -> Iterator[int]:
        """Proper descendants in document order."""
        stack = list(reversed(self.nodes[node_id].children))
        while stack:
            current = stack.pop()
            yield current
            stack.extend(reversed(self.nodes[current].children))

    def is_ancestor(self, ancestor: int, node_id: int) -> bool:
        current = self.nodes[node_id].parent
        while current is not None:
            if current == ancestor:
                return True
            current = self.nodes[current].parent
        return False

    def leaves(self) -> list[int]:
        return [n.node_id for n in self.nodes if n.is_leaf]


def _error_position(exc: ET.ParseError) -> tuple[int | None, int | None]:
    position = getattr(exc, "position", None)
    if position is None:
        return None, None
    return position


def parse_document(data: bytes | str) -> XmlTree:
    """Parse XML text into an :class:`XmlTree`.

    Whitespace-only text is dropped and all other text is trimmed.  An element
    carrying both text and element children raises :class:`MixedContent`.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    if not data.strip():
        raise EmptyDocument("document is empty")
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = _error_position(exc)
        raise MalformedXml(str(exc).split(":")[0], line, column) from None

    nodes: list[dict] = []

    def visit(elem: ET.Element, parent: int | None, position: int) -> int:
        node_id = len(nodes)
        record = {"tag": elem.tag, "position": position, "parent": parent,
                  "children": [], "text": None}
        nodes.append(record)
        text = (elem.text or "").strip()
        children = list(elem)
        tails = [c.tail for c in children if c.tail and c.tail.strip()]
        if children and (text or tails):
            raise MixedContent(f"element <{elem.tag}> mixes text and child elements")
        counts: dict[str, int] = {}
        for child in children:
            pos = counts.get(child.tag, 0)
            counts[child.tag] = pos + 1
            record["children"].append(visit(child, node_id, pos))
        if not children:
            record["text"] = text or None
        return node_id

    visit(root, None, 0)
    return XmlTree(
        XmlNode(i, r["tag"], r["position"], r["parent"], tuple(r["children"]), r["text"])
        for i, r in enumerate(nodes)
    )


def extract_leaf_data(tree: XmlTree) -> list[DataItem]:
    items = []
    for n in tree:
        if n.is_leaf and n.text:
            items.append(DataItem(len(items) + 1, n.text, n.node_id, tree.tag_key(n.node_id)))
    return items


def parent_nodes_bottom_up(tree: XmlTree) -> list[int]:
    """Nodes with element children, in post-order (the root comes last)."""
    order: list[int] = []
    stack: list[tuple[int, bool]] = [(tree.root.node_id, False)]
    while stack:
        node_id, expanded = stack.pop()
        n = tree.node(node_id)
        if n.is_leaf:
            continue
        if expanded:
            order.append(node_id)
            continue
        stack.append((node_id, True))
        for child in reversed(n.children):
            stack.append((child, False))
    return order


def canonical_tag_key(tree: XmlTree, node: int) -> str:
    return tree.tag_key(node)
