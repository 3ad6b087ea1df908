"""Godin-style incremental insertion of one object into a concept lattice."""

from __future__ import annotations

from typing import Iterable

from ..errors import DuplicateObject
from .context import FormalContext
from .lattice import ConceptLattice, assemble


def insert_object(lat: ConceptLattice, ctx: FormalContext, obj: str,
                  attrs: Iterable[str]) -> tuple[ConceptLattice, FormalContext]:
    """Return the lattice and context extended by ``obj`` with row ``attrs``.

    Concepts are visited by increasing intent size.  A concept whose intent
    fits inside the new row just gains ``obj`` (modified).  Otherwise the
    intersection of its intent with the row is looked up; if no concept has
    that intent yet, this concept is its generator and the pair
    (extent + obj, intersection) is created.  Everything else is unchanged.
    """
    if obj in ctx.object_index:
        raise DuplicateObject(obj)
    attrs = list(dict.fromkeys(attrs))
    wider = ctx.with_attributes(attrs)

    # Existing concepts as (extent, intent) masks over the widened universes.
    pairs = [(wider.object_mask(c.extent), wider.attribute_mask(c.intent))
             for c in lat.concepts]
    log_before: dict[int, str] = {}
    if wider is not ctx:
        full = wider.all_attributes
        bottom_extent = pairs[lat.bottom][0]
        if bottom_extent == 0:
            pairs[lat.bottom] = (0, full)
        else:
            pairs.append((0, full))
            log_before[0] = "extended"

    new_ctx = wider.with_object(obj, attrs)
    obj_bit = 1 << (len(new_ctx.objects) - 1)
    row = new_ctx.rows[-1]

    known_intents = {intent for _, intent in pairs}
    extents: list[int] = []
    log: dict[int, str] = {}
    for extent, intent in sorted(pairs, key=lambda p: p[1].bit_count()):
        if intent & ~row == 0:
            extent |= obj_bit
            extents.append(extent)
            log[extent] = "modified"
            continue
        shared = intent & row
        extents.append(extent)
        if shared in known_intents:
            log[extent] = log_before.get(extent, "unchanged")
        else:
            known_intents.add(shared)
            created = extent | obj_bit
            extents.append(created)
            log[created] = "new"
            log[extent] = "generator"
    return assemble(new_ctx, extents, log), new_ctx
