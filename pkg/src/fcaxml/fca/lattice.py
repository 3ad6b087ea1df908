"""Concept lattices: batch construction, covering relation, neighbourhoods."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from ..errors import InvalidConcept
from .context import FormalContext, iter_bits


@dataclass(frozen=True)
class FormalConcept:
    extent: frozenset[str]
    intent: frozenset[str]


@dataclass(frozen=True)
class ConceptLattice:
    """Concepts sorted by (extent size, extent indices); edges are (lower, upper).

    ``insertion_log`` is filled by :func:`insert_object` with one tag per
    concept: ``modified``, ``generator``, ``new``, ``unchanged`` or
    ``extended`` (a bottom concept added because new attributes appeared).
    """

    concepts: tuple[FormalConcept, ...]
    cover_edges: tuple[tuple[int, int], ...]
    top: int
    bottom: int
    insertion_log: tuple[str, ...] | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.concepts)

    def __getitem__(self, i: int) -> FormalConcept:
        return self.concepts[i]

    @cached_property
    def _uppers(self) -> tuple[tuple[int, ...], ...]:
        ups: list[list[int]] = [[] for _ in self.concepts]
        for lo, hi in self.cover_edges:
            ups[lo].append(hi)
        return tuple(tuple(u) for u in ups)

    @cached_property
    def _lowers(self) -> tuple[tuple[int, ...], ...]:
        lows: list[list[int]] = [[] for _ in self.concepts]
        for lo, hi in self.cover_edges:
            lows[hi].append(lo)
        return tuple(tuple(x) for x in lows)

    @cached_property
    def _by_intent(self) -> dict[frozenset[str], int]:
        return {c.intent: i for i, c in enumerate(self.concepts)}

    def upper_covers(self, i: int) -> tuple[int, ...]:
        self._check(i)
        return self._uppers[i]

    def lower_covers(self, i: int) -> tuple[int, ...]:
        self._check(i)
        return self._lowers[i]

    def index_of_intent(self, intent: Iterable[str]) -> int | None:
        return self._by_intent.get(frozenset(intent))

    def concept_set(self) -> frozenset[FormalConcept]:
        return frozenset(self.concepts)

    def edge_set(self) -> frozenset[tuple[FormalConcept, FormalConcept]]:
        return frozenset((self.concepts[a], self.concepts[b]) for a, b in self.cover_edges)

    def _check(self, i: int) -> None:
        if not isinstance(i, int) or not 0 <= i < len(self.concepts):
            raise InvalidConcept(f"no concept with index {i!r}")


def _sort_key(extent: int) -> tuple[int, tuple[int, ...]]:
    return (extent.bit_count(), tuple(iter_bits(extent)))


def _upper_neighbour_extents(ctx: FormalContext, extent: int) -> set[int]:
    # Lindig's neighbour test: keep a candidate closure only when it adds no
    # object that is still considered minimal.
    outside = ctx.all_objects & ~extent
    minimal = outside
    found = set()
    for g in iter_bits(outside):
        bit = 1 << g
        bigger = ctx.close_extent(extent | bit)
        if minimal & (bigger & ~extent & ~bit):
            minimal &= ~bit
        else:
            found.add(bigger)
    return found


def assemble(ctx: FormalContext, extents: Iterable[int],
             log: dict[int, str] | None = None) -> ConceptLattice:
    """Build a lattice value from the extent masks of all concepts of ``ctx``."""
    ordered = sorted(set(extents), key=_sort_key)
    position = {e: i for i, e in enumerate(ordered)}
    concepts = tuple(FormalConcept(ctx.object_labels(e), ctx.attribute_labels(ctx.intent_of(e)))
                     for e in ordered)
    edges = []
    for i, e in enumerate(ordered):
        for up in _upper_neighbour_extents(ctx, e):
            edges.append((i, position[up]))
    edges.sort()
    full = ctx.all_attributes
    bottom = next(i for i, e in enumerate(ordered) if ctx.intent_of(e) == full)
    insertion_log = None
    if log is not None:
        insertion_log = tuple(log[e] for e in ordered)
    return ConceptLattice(concepts, tuple(edges), len(ordered) - 1, bottom, insertion_log)


def next_closure_intents(ctx: FormalContext):
    """Yield every closed intent (as a mask) in lectic order."""
    m = len(ctx.attributes)
    full = ctx.all_attributes
    current = ctx.close_intent(0)
    yield current
    while current != full:
        a = current
        for i in reversed(range(m)):
            bit = 1 << i
            if a & bit:
                a &= ~bit
                continue
            candidate = ctx.close_intent(a | bit)
            if not (candidate & ~a) & (bit - 1):
                current = candidate
                break
        else:  # pragma: no cover - full set is always closed
            return
        yield current


def build_lattice(ctx: FormalContext) -> ConceptLattice:
    return assemble(ctx, (ctx.extent_of(b) for b in next_closure_intents(ctx)))


def upper_neighborhood(lat: ConceptLattice, c: int, level: int) -> set[int]:
    """Concepts whose shortest upward cover-edge distance from ``c`` is ``level``."""
    lat._check(c)
    if not isinstance(level, int) or level < 0:
        raise ValueError("level must be a non-negative integer")
    distance = {c: 0}
    frontier = deque([c])
    while frontier:
        current = frontier.popleft()
        d = distance[current]
        if d == level:
            continue
        for up in lat._uppers[current]:
            if up not in distance:
                distance[up] = d + 1
                frontier.append(up)
    return {i for i, d in distance.items() if d == level}
