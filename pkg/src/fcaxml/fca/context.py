"""Formal contexts and the two derivation operators.

Rows are stored as Python ints used as bitsets over the attribute list, so
deriving an intent is an AND over rows and deriving an extent is a subset
test per row.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from ..errors import DuplicateObject, UnknownAttribute, UnknownObject


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class FormalContext:
    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.objects)) != len(self.objects):
            raise DuplicateObject("object labels must be unique")
        if len(set(self.attributes)) != len(self.attributes):
            raise ValueError("attribute labels must be unique")
        if len(self.rows) != len(self.objects):
            raise ValueError("one row per object is required")
        limit = 1 << len(self.attributes)
        if any(r < 0 or r >= limit for r in self.rows):
            raise ValueError("row has bits outside the attribute range")

    @classmethod
    def from_pairs(cls, objects: Sequence[str], attributes: Sequence[str],
                   pairs: Iterable[tuple[str, str]]) -> "FormalContext":
        obj_index = {g: i for i, g in enumerate(objects)}
        attr_index = {m: j for j, m in enumerate(attributes)}
        rows = [0] * len(objects)
        for g, m in pairs:
            if g not in obj_index:
                raise UnknownObject(g)
            if m not in attr_index:
                raise UnknownAttribute(m)
            rows[obj_index[g]] |= 1 << attr_index[m]
        return cls(tuple(objects), tuple(attributes), tuple(rows))

    @classmethod
    def from_matrix(cls, objects, attributes, matrix) -> "FormalContext":
        rows = []
        for line in matrix:
            mask = 0
            for j, cell in enumerate(line):
                if cell:
                    mask |= 1 << j
            rows.append(mask)
        return cls(tuple(objects), tuple(attributes), tuple(rows))

    @cached_property
    def object_index(self) -> dict[str, int]:
        return {g: i for i, g in enumerate(self.objects)}

    @cached_property
    def attribute_index(self) -> dict[str, int]:
        return {m: j for j, m in enumerate(self.attributes)}

    @cached_property
    def columns(self) -> tuple[int, ...]:
        cols = [0] * len(self.attributes)
        for i, row in enumerate(self.rows):
            for j in iter_bits(row):
                cols[j] |= 1 << i
        return tuple(cols)

    @property
    def all_objects(self) -> int:
        return (1 << len(self.objects)) - 1

    @property
    def all_attributes(self) -> int:
        return (1 << len(self.attributes)) - 1

    @property
    def incidence(self) -> tuple[tuple[bool, ...], ...]:
        n = len(self.attributes)
        return tuple(tuple(bool(row >> j & 1) for j in range(n)) for row in self.rows)

    def has(self, obj: str, attr: str) -> bool:
        try:
            row = self.rows[self.object_index[obj]]
        except KeyError:
            raise UnknownObject(obj) from None
        return bool(row & self.attribute_mask([attr]))

    def row_of(self, obj: str) -> frozenset[str]:
        try:
            return self.attribute_labels(self.rows[self.object_index[obj]])
        except KeyError:
            raise UnknownObject(obj) from None

    # label <-> mask conversion

    def object_mask(self, objs: Iterable[str]) -> int:
        mask = 0
        index = self.object_index
        for g in objs:
            try:
                mask |= 1 << index[g]
            except KeyError:
                raise UnknownObject(g) from None
        return mask

    def attribute_mask(self, attrs: Iterable[str]) -> int:
        mask = 0
        index = self.attribute_index
        for m in attrs:
            try:
                mask |= 1 << index[m]
            except KeyError:
                raise UnknownAttribute(m) from None
        return mask

    def object_labels(self, mask: int) -> frozenset[str]:
        return frozenset(self.objects[i] for i in iter_bits(mask))

    def attribute_labels(self, mask: int) -> frozenset[str]:
        return frozenset(self.attributes[j] for j in iter_bits(mask))

    # derivations on masks

    def intent_of(self, extent: int) -> int:
        intent = self.all_attributes
        for i in iter_bits(extent):
            intent &= self.rows[i]
            if not intent:
                break
        return intent

    def extent_of(self, intent: int) -> int:
        extent = self.all_objects
        for j in iter_bits(intent):
            extent &= self.columns[j]
            if not extent:
                break
        return extent

    def close_intent(self, intent: int) -> int:
        return self.intent_of(self.extent_of(intent))

    def close_extent(self, extent: int) -> int:
        return self.extent_of(self.intent_of(extent))

    # derivations on labels

    def derive_intent(self, objs: Iterable[str]) -> frozenset[str]:
        return self.attribute_labels(self.intent_of(self.object_mask(objs)))

    def derive_extent(self, attrs: Iterable[str]) -> frozenset[str]:
        return self.object_labels(self.extent_of(self.attribute_mask(attrs)))

    def closure(self, attrs: Iterable[str]) -> frozenset[str]:
        return self.attribute_labels(self.close_intent(self.attribute_mask(attrs)))

    # value-style updates

    def with_attributes(self, attrs: Iterable[str]) -> "FormalContext":
        """Append attributes that are not yet present, with empty columns."""
        extra = [m for m in dict.fromkeys(attrs) if m not in self.attribute_index]
        if not extra:
            return self
        return FormalContext(self.objects, self.attributes + tuple(extra), self.rows)

    def with_object(self, obj: str, attrs: Iterable[str]) -> "FormalContext":
        if obj in self.object_index:
            raise DuplicateObject(obj)
        attrs = list(attrs)
        ctx = self.with_attributes(attrs)
        return FormalContext(ctx.objects + (obj,), ctx.attributes,
                             ctx.rows + (ctx.attribute_mask(attrs),))


def derive_intent(ctx: FormalContext, objs: Iterable[str]) -> frozenset[str]:
    return ctx.derive_intent(objs)


def derive_extent(ctx: FormalContext, attrs: Iterable[str]) -> frozenset[str]:
    return ctx.derive_extent(attrs)


def closure(ctx: FormalContext, attrs: Iterable[str]) -> frozenset[str]:
    return ctx.closure(attrs)
