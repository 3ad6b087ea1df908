"""Reference implementations used only by the tests.

Everything here works on plain Python sets or on ElementTree's own path
engine, so it shares no code with the bitset routines under test.
"""

import itertools
import xml.etree.ElementTree as ET


def brute_force_concepts(objects, attributes, incidence):
    """All closed pairs, found by closing every subset of objects.

    ``incidence`` is a set of (object, attribute) pairs.
    """
    rows = {g: {m for m in attributes if (g, m) in incidence} for g in objects}
    found = set()
    for r in range(len(objects) + 1):
        for subset in itertools.combinations(objects, r):
            intent = set(attributes)
            for g in subset:
                intent &= rows[g]
            extent = {g for g in objects if intent <= rows[g]}
            found.add((frozenset(extent), frozenset(intent)))
    return found


def brute_force_covers(concepts):
    """Transitive reduction of extent inclusion over a set of concepts."""
    concepts = list(concepts)
    edges = set()
    for lo in concepts:
        for hi in concepts:
            if not lo[0] < hi[0]:
                continue
            if any(lo[0] < mid[0] < hi[0] for mid in concepts):
                continue
            edges.add((lo, hi))
    return edges


def brute_force_closure(objects, attributes, incidence, attrs):
    extent = {g for g in objects if all((g, m) in incidence for m in attrs)}
    return {m for m in attributes if all((g, m) in incidence for g in extent)}


def _doc_order(root):
    return {id(e): i for i, e in enumerate(root.iter())}


def _text_leaves(elem):
    return [e for e in elem.iter() if len(e) == 0 and (e.text or "").strip()]


def _xpath(steps):
    return "/".join(s.tag if s.position is None else f"{s.tag}[{s.position + 1}]" for s in steps)


def etree_answers(xml_text, pq):
    """Leaf node ids selected by a parsed query, evaluated with ElementTree.

    Returns None when the search path selects nothing.
    """
    root = ET.fromstring(xml_text)
    order = _doc_order(root)
    first, rest = pq.search_path[0], pq.search_path[1:]
    if root.tag != first.tag or first.position not in (None, 0):
        return None
    nodes = [root] if not rest else root.findall("./" + _xpath(rest))
    if not nodes:
        return None
    if pq.conditional is not None:
        rel = "./" + _xpath(pq.conditional.path)
        nodes = [n for n in nodes
                 if any(len(t) == 0 and (t.text or "").strip() == pq.conditional.value
                        for t in n.findall(rel))]
    out = set()
    for n in nodes:
        for ret in pq.return_paths:
            targets = [n] if not ret else n.findall("./" + _xpath(ret))
            for t in targets:
                out.update(order[id(leaf)] for leaf in _text_leaves(t))
    return out


def answer_levels_oracle(objects, attributes, incidence, query_label, query_row):
    """Level of every object relative to the query, recomputed from scratch.

    Builds the extended context by brute force, takes the transitive reduction
    of its concept order, and walks upward from the query's object concept.
    """
    objects = list(objects) + [query_label]
    incidence = set(incidence) | {(query_label, m) for m in query_row}
    concepts = brute_force_concepts(objects, attributes, incidence)
    covers = brute_force_covers(concepts)
    start = min((c for c in concepts if query_label in c[0]), key=lambda c: len(c[0]))
    distance = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for c in frontier:
            for lo, hi in covers:
                if lo == c and hi not in distance:
                    distance[hi] = distance[c] + 1
                    nxt.append(hi)
        frontier = nxt
    levels = {}
    for c, d in distance.items():
        if not c[1]:
            continue
        for g in c[0]:
            if g != query_label and (g not in levels or d < levels[g]):
                levels[g] = d
    return levels
