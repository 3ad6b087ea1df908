"""Answering queries by inserting a query concept into the generalized view."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping

from .builder import GeneralizedView
from .errors import EmptyIntent, UnknownAttribute, UnknownObject
from .fca.context import FormalContext
from .fca.incremental import insert_object
from .fca.lattice import ConceptLattice, upper_neighborhood
from .query.evaluate import QueryConcept, build_query_concept, direct_elements, plan_query
from .query.parser import ParsedQuery
from .xmlmodel import DataItem, XmlTree

log = logging.getLogger(__name__)

QUERY_OBJECT = "Q"


@dataclass(frozen=True)
class AugmentedView:
    base: GeneralizedView
    query: QueryConcept
    context: FormalContext
    lattice: ConceptLattice
    query_concept_position: int
    insertion_log: tuple[str, ...]


@dataclass(frozen=True)
class AnswerSet:
    ranked: tuple[tuple[int, tuple[DataItem, ...]], ...]
    flattened: tuple[DataItem, ...]
    levels: Mapping[str, int]

    def __len__(self) -> int:
        return len(self.flattened)


@dataclass(frozen=True)
class Answer:
    level: int | None  # None for answers produced by the direct pipeline
    item: DataItem
    path: str


@dataclass(frozen=True)
class AnswerList:
    answers: tuple[Answer, ...]
    fallback_used: bool = False

    def __iter__(self):
        return iter(self.answers)

    def __len__(self) -> int:
        return len(self.answers)


def insert_query(view: GeneralizedView, q: QueryConcept) -> AugmentedView:
    """Insert the query as a pseudo-object into a copy of the view lattice."""
    if not q.intent:
        raise EmptyIntent("query concept has an empty intent")
    missing = q.intent - set(view.context.attributes)
    if missing:
        raise UnknownAttribute(", ".join(sorted(missing)))
    lattice, context = insert_object(view.lattice, view.context, QUERY_OBJECT, q.intent)
    closed = context.closure(q.intent)
    position = lattice.index_of_intent(closed)
    assert position is not None and QUERY_OBJECT in lattice.concepts[position].extent
    return AugmentedView(view, q, context, lattice, position, lattice.insertion_log)


def search_answers(av: AugmentedView) -> AnswerSet:
    """Collect extents level by level above the query concept.

    Level ``k`` holds the concepts at shortest upward distance ``k`` from the
    query concept.  Concepts with an empty intent are skipped, the query
    pseudo-object is dropped, and an item is kept at its lowest level.
    """
    lat = av.lattice
    items_by_label = {item.label: item for item in av.base.items}
    seen: dict[str, int] = {}
    ranked = []
    level = 0
    while True:
        upper = upper_neighborhood(lat, av.query_concept_position, level)
        if not upper:
            break
        bucket = set()
        for i in upper:
            concept = lat.concepts[i]
            if concept.intent:
                bucket |= concept.extent
        bucket.discard(QUERY_OBJECT)
        fresh = sorted((items_by_label[g] for g in bucket if g not in seen),
                       key=lambda item: item.item_id)
        for item in fresh:
            seen[item.label] = level
        if fresh:
            ranked.append((level, tuple(fresh)))
        level += 1
    flattened = tuple(item for _, bucket in ranked for item in bucket)
    return AnswerSet(tuple(ranked), flattened, seen)


def is_relevant(obj: DataItem | str, q: QueryConcept, view: GeneralizedView) -> bool:
    label = obj.label if isinstance(obj, DataItem) else obj
    if label not in view.context.object_index:
        raise UnknownObject(label)
    return bool(view.context.row_of(label) & q.intent)


def _expand(tree: XmlTree, node_id: int) -> list[int]:
    node = tree.node(node_id)
    if node.is_leaf:
        return [node_id] if node.text else []
    return [d for d in tree.descendants(node_id) if tree.node(d).is_leaf and tree.node(d).text]


def direct_answers(tree: XmlTree, view: GeneralizedView, pq: ParsedQuery) -> AnswerList:
    """Answers of the tree-walk pipeline, expanded to data items."""
    by_leaf = {item.leaf_node: (item, path) for item, path in zip(view.items, view.leaf_paths)}
    out: dict[int, Answer] = {}
    for element in direct_elements(tree, pq):
        for leaf in _expand(tree, element):
            item, path = by_leaf[leaf]
            out.setdefault(item.item_id, Answer(None, item, path))
    return AnswerList(tuple(out.values()))


def answer_to_elements(ans: AnswerSet, pq: ParsedQuery, tree: XmlTree,
                       view: GeneralizedView) -> AnswerList:
    """Keep the answered items that the query actually selects.

    Selection uses the index: an item qualifies when its leaf path is a
    return target, or lies below one, of a search node that satisfies the
    condition.  Order is (level, search node, return path, document order).
    """
    plan = plan_query(view, pq)
    rank = {path: i for i, path in enumerate(view.element_paths)}
    targets: dict[str, tuple[int, int]] = {}
    for search, ret, target in plan.targets:
        key = (rank[search], ret)
        if target not in targets or key < targets[target]:
            targets[target] = key

    leaf_path = dict(zip((item.label for item in view.items), view.leaf_paths))
    picked = []
    for item in ans.flattened:
        path = leaf_path[item.label]
        best = None
        prefix = path
        while True:
            key = targets.get(prefix)
            if key is not None and (best is None or key < best):
                best = key
            if "/" not in prefix:
                break
            prefix = prefix.rsplit("/", 1)[0]
        if best is not None:
            level = ans.levels[item.label]
            picked.append(((level, *best, item.item_id), Answer(level, item, path)))
    picked.sort(key=lambda pair: pair[0])
    result = AnswerList(tuple(a for _, a in picked))

    if not result.answers:
        direct = direct_answers(tree, view, pq)
        if direct.answers:
            log.warning("lattice search returned nothing but the direct pipeline found %d answers",
                        len(direct))
            return AnswerList(direct.answers, fallback_used=True)
    return result


def run_query(view: GeneralizedView, tree: XmlTree, pq: ParsedQuery):
    """Full lattice-mode evaluation; returns (augmented view, answer set, answers)."""
    q = build_query_concept(pq, view)
    av = insert_query(view, q)
    ans = search_answers(av)
    return av, ans, answer_to_elements(ans, pq, tree, view)
