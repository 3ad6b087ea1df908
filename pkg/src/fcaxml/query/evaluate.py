"""Query evaluation.

Two independent routes live here:

* the direct pipeline (``eval_search_path`` -> ``eval_conditional`` ->
  ``eval_return``) walks the element tree;
* :func:`plan_query` answers the same questions from the index alone (path
  dictionary keys and the view's content attributes).  It feeds the query
  concept and the lattice-side answer filter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ..builder import GeneralizedView, content_attribute
from ..errors import PathNotFound
from ..xmlmodel import XmlTree
from .parser import Conditional, ParsedQuery, Path, Step, path_str


@dataclass(frozen=True)
class QueryConcept:
    extent: frozenset[str]
    intent: frozenset[str]


def _split_key(key: str) -> tuple[str, int]:
    if key.endswith("]"):
        tag, _, pos = key[:-1].partition("[")
        return tag, int(pos)
    return key, 0


def step_matches_key(step: Step, key: str) -> bool:
    tag, pos = _split_key(key)
    return tag == step.tag and (step.position is None or step.position == pos)


def match_paths(pattern: Sequence[Step], paths: Iterable[str], base: str | None = None) -> list[str]:
    """Canonical path strings matching ``pattern`` (relative to ``base`` if given)."""
    out = []
    prefix = None if base is None else base + "/"
    for path in paths:
        if prefix is not None:
            if not path.startswith(prefix):
                continue
            rest = path[len(prefix):]
        else:
            rest = path
        keys = rest.split("/")
        if len(keys) == len(pattern) and all(step_matches_key(s, k) for s, k in zip(pattern, keys)):
            out.append(path)
    return out


# direct pipeline: tree walks

def _walk(tree: XmlTree, starts: Iterable[int], steps: Path) -> list[int]:
    current = list(starts)
    for step in steps:
        nxt = []
        for node_id in current:
            for child in tree.node(node_id).children:
                c = tree.node(child)
                if c.tag == step.tag and (step.position is None or c.position == step.position):
                    nxt.append(child)
        current = nxt
    return current


def eval_search_path(view: GeneralizedView | None, tree: XmlTree, p: Path) -> list[int]:
    """Element nodes selected by an absolute path, in document order."""
    first, rest = p[0], p[1:]
    root = tree.root
    if root.tag != first.tag or first.position not in (None, 0):
        raise PathNotFound(path_str(p))
    nodes = _walk(tree, [root.node_id], rest)
    if not nodes:
        raise PathNotFound(path_str(p))
    return sorted(nodes)


def eval_conditional(tree: XmlTree, nodes: Sequence[int], cond: Conditional | None) -> list[int]:
    if cond is None:
        return list(nodes)
    kept = []
    for node_id in nodes:
        for target in _walk(tree, [node_id], cond.path):
            if tree.node(target).text is not None and tree.node(target).text == cond.value:
                kept.append(node_id)
                break
    return kept


def eval_return(tree: XmlTree, nodes: Sequence[int], return_paths: Sequence[Path]) -> list[int]:
    """Per node (document order), per return path, matching descendants."""
    out = []
    for node_id in sorted(nodes):
        for rel in return_paths:
            out.extend(sorted(_walk(tree, [node_id], rel)))
    return out


def direct_elements(tree: XmlTree, q: ParsedQuery) -> list[int]:
    nodes = eval_search_path(None, tree, q.search_path)
    nodes = eval_conditional(tree, nodes, q.conditional)
    return eval_return(tree, nodes, q.return_paths)


# index side

@dataclass(frozen=True)
class QueryPlan:
    """Index-side resolution of a query.

    ``targets`` lists (search path, return-path index, target path) for the
    search paths that satisfy the condition, in document order.
    """

    search_paths: tuple[str, ...]
    satisfied: tuple[str, ...]
    condition_targets: tuple[str, ...]
    return_targets: tuple[str, ...]
    targets: tuple[tuple[str, int, str], ...]


def _check_prefixes(view: GeneralizedView, p: Path) -> list[str]:
    matched: list[str] = []
    for k in range(1, len(p) + 1):
        matched = match_paths(p[:k], view.element_paths)
        if not matched:
            raise PathNotFound(path_str(p[:k]))
    return matched


def plan_query(view: GeneralizedView, q: ParsedQuery) -> QueryPlan:
    search = _check_prefixes(view, q.search_path)

    condition_targets: list[str] = []
    satisfied = search
    if q.conditional is not None:
        attr = content_attribute(q.conditional.value)
        holders = set()
        if attr in view.context.attribute_index:
            holders = {view.leaf_paths[view.context.object_index[g]]
                       for g in view.context.derive_extent([attr])}
        satisfied = []
        for s in search:
            under = match_paths(q.conditional.path, view.element_paths, base=s)
            condition_targets.extend(under)
            if holders.intersection(under):
                satisfied.append(s)

    return_targets: list[str] = []
    for s in search:
        for rel in q.return_paths:
            if rel:
                return_targets.extend(match_paths(rel, view.element_paths, base=s))

    targets = []
    for s in satisfied:
        for i, rel in enumerate(q.return_paths):
            if not rel:
                targets.append((s, i, s))
            else:
                targets.extend((s, i, t) for t in match_paths(rel, view.element_paths, base=s))
    return QueryPlan(tuple(search), tuple(satisfied), tuple(condition_targets),
                     tuple(return_targets), tuple(targets))


def build_query_concept(q: ParsedQuery, view: GeneralizedView) -> QueryConcept:
    """Query concept with empty extent.

    The intent gathers the attributes of the search-path nodes, the content
    attribute of the comparison value (when the view knows it), and the
    attributes of the condition and return targets below the search nodes.
    """
    plan = plan_query(view, q)
    attrs = set()
    for path in plan.search_paths + plan.condition_targets + plan.return_targets:
        attrs.add(view.context.attributes[view.path_dictionary[path]])
    if q.conditional is not None:
        value_attr = content_attribute(q.conditional.value)
        if value_attr in view.context.attribute_index:
            attrs.add(value_attr)
    return QueryConcept(frozenset(), frozenset(attrs))
