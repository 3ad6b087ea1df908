"""Graphviz DOT rendering of Hasse diagrams."""

from __future__ import annotations

from typing import Callable, Sequence

from .lattice import ConceptLattice


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _ordered(labels, order: Sequence[str]) -> list[str]:
    rank = {label: i for i, label in enumerate(order)}
    return sorted(labels, key=lambda x: (rank.get(x, len(rank)), x))


def to_dot(lat: ConceptLattice, objects: Sequence[str] = (), attributes: Sequence[str] = (),
           name: str = "lattice", group: Callable[[int], str | None] | None = None) -> str:
    """One node per concept labelled ``extent | intent``; edges go lower -> upper.

    ``objects``/``attributes`` fix the label order inside node captions.  With
    ``group`` each concept may be placed in a named cluster.
    """
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;", "  node [shape=box];"]

    def node_line(i: int) -> str:
        c = lat.concepts[i]
        ext = ", ".join(_ordered(c.extent, objects))
        inn = ", ".join(_ordered(c.intent, attributes))
        return f"c{i} [label={_quote(f'{ext} | {inn}')}];"

    if group is None:
        lines.extend("  " + node_line(i) for i in range(len(lat.concepts)))
    else:
        clusters: dict[str, list[int]] = {}
        loose = []
        for i in range(len(lat.concepts)):
            key = group(i)
            if key is None:
                loose.append(i)
            else:
                clusters.setdefault(key, []).append(i)
        for n, key in enumerate(sorted(clusters)):
            lines.append(f"  subgraph cluster_{n} {{")
            lines.append(f"    label={_quote(key)};")
            lines.extend("    " + node_line(i) for i in clusters[key])
            lines.append("  }")
        lines.extend("  " + node_line(i) for i in loose)
    for lo, hi in lat.cover_edges:
        lines.append(f"  c{lo} -> c{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"
