"""Per-node formal contexts and the flattened generalized view of a document.

Every parent node gets a context (conceptual classification).  The view puts
all data items in a single context whose attributes are

* the item's own leaf tag key (``author[0]``),
* one structural attribute per ancestor path (``bib/book[0]``, ``bib``),
* a nominally scaled content attribute (``value=Daniel Glazman``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import NotAParentNode
from .fca.context import FormalContext
from .fca.lattice import ConceptLattice, build_lattice
from .fca.scaling import MultiValuedContext, scale_context
from .xmlmodel import DataItem, XmlTree, parent_nodes_bottom_up

VALUE_ATTRIBUTE = "value"


def content_attribute(value: str) -> str:
    return f"{VALUE_ATTRIBUTE}={value}"


def leaf_key_universe(tree: XmlTree) -> list[str]:
    """Tag keys of every leaf element, in order of first appearance."""
    return list(dict.fromkeys(tree.tag_key(n.node_id) for n in tree if n.is_leaf))


def build_parent_context(tree: XmlTree, items: Sequence[DataItem], parent: int) -> FormalContext:
    """Context of one parent node.

    Leaf children contribute every data item of the document as objects over
    the document-wide leaf tag keys; a datum is incident to a key when its
    leaf hangs directly below ``parent`` under that key.  Parent children are
    objects over the union of their own children's keys.  A node with both
    kinds of children gets both blocks.
    """
    node = tree.node(parent)
    if node.is_leaf:
        raise NotAParentNode(f"node {parent} (<{node.tag}>) has no element children")
    leaf_children = [c for c in node.children if tree.node(c).is_leaf]
    inner_children = [c for c in node.children if not tree.node(c).is_leaf]

    objects: list[str] = []
    attributes: dict[str, None] = {}
    pairs: list[tuple[str, str]] = []
    if leaf_children:
        attributes.update(dict.fromkeys(leaf_key_universe(tree)))
        below = set(leaf_children)
        for item in items:
            objects.append(item.label)
            if item.leaf_node in below:
                pairs.append((item.label, item.leaf_tag_key))
    for child in inner_children:
        label = tree.tag_key(child)
        objects.append(label)
        for grandchild in tree.node(child).children:
            key = tree.tag_key(grandchild)
            attributes.setdefault(key, None)
            pairs.append((label, key))
    return FormalContext.from_pairs(objects, list(attributes), pairs)


@dataclass(frozen=True)
class Classification:
    """Contexts and lattices of every parent node, keyed by node id."""

    order: tuple[int, ...]
    contexts: Mapping[int, FormalContext]
    lattices: Mapping[int, ConceptLattice]


def conceptual_classification(tree: XmlTree, items: Sequence[DataItem]) -> Classification:
    order = tuple(parent_nodes_bottom_up(tree))
    contexts = {p: build_parent_context(tree, items, p) for p in order}
    lattices = {p: build_lattice(contexts[p]) for p in order}
    return Classification(order, contexts, lattices)


@dataclass(frozen=True)
class GeneralizedView:
    context: FormalContext
    lattice: ConceptLattice
    path_dictionary: Mapping[str, int]
    items: tuple[DataItem, ...]
    leaf_paths: tuple[str, ...]
    element_paths: tuple[str, ...]

    def item(self, label: str) -> DataItem:
        return self.items[self.context.object_index[label]]

    def attribute_for(self, path_or_key: str) -> str | None:
        j = self.path_dictionary.get(path_or_key)
        return None if j is None else self.context.attributes[j]


def item_attributes(tree: XmlTree, item: DataItem) -> list[str]:
    """Leaf key plus ancestor paths, innermost first (content attribute excluded)."""
    attrs = [item.leaf_tag_key]
    parent = tree.node(item.leaf_node).parent
    while parent is not None:
        attrs.append(tree.path_key(parent))
        parent = tree.node(parent).parent
    return attrs


def build_generalized_view(tree: XmlTree, items: Sequence[DataItem],
                           classification: Classification | None = None) -> GeneralizedView:
    """Flatten the document into one context and build its lattice.

    ``classification`` is accepted for pipeline symmetry; the view is derived
    from the tree so that every parent context's structure is represented by
    the ancestor-path attributes.
    """
    structural = [tree.path_key(n.node_id) for n in tree if not n.is_leaf]
    leaf_keys = leaf_key_universe(tree)

    labels = [item.label for item in items]
    content = MultiValuedContext.from_triples(
        labels, [VALUE_ATTRIBUTE],
        ((item.label, VALUE_ATTRIBUTE, item.value) for item in items))
    scaled = scale_context(content)

    attributes = list(dict.fromkeys(structural + leaf_keys + list(scaled.attributes)))
    pairs = []
    for item in items:
        for attr in item_attributes(tree, item):
            pairs.append((item.label, attr))
        for attr in scaled.row_of(item.label):
            pairs.append((item.label, attr))
    context = FormalContext.from_pairs(labels, attributes, pairs)

    index = context.attribute_index
    path_dictionary: dict[str, int] = {}
    for n in tree:
        path = tree.path_key(n.node_id)
        key = tree.tag_key(n.node_id)
        # parents resolve to their structural attribute, leaves to their tag key
        path_dictionary[path] = index[key] if n.is_leaf else index[path]
    for key in leaf_keys:
        path_dictionary.setdefault(key, index[key])

    return GeneralizedView(
        context=context,
        lattice=build_lattice(context),
        path_dictionary=path_dictionary,
        items=tuple(items),
        leaf_paths=tuple(tree.path_key(item.leaf_node) for item in items),
        element_paths=tuple(tree.path_key(n.node_id) for n in tree),
    )
