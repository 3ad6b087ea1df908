"""Multi-valued contexts and conceptual scaling into one-valued contexts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ..errors import FunctionalityViolation, MissingScale, UnknownAttribute, UnknownObject
from .context import FormalContext


@dataclass(frozen=True)
class MultiValuedContext:
    """Objects, many-valued attributes and a partial map (g, m) -> w."""

    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    values: Mapping[tuple[str, str], str]

    @classmethod
    def from_triples(cls, objects: Sequence[str], attributes: Sequence[str],
                     triples: Iterable[tuple[str, str, str]]) -> "MultiValuedContext":
        known_g, known_m = set(objects), set(attributes)
        values: dict[tuple[str, str], str] = {}
        for g, m, w in triples:
            if g not in known_g:
                raise UnknownObject(g)
            if m not in known_m:
                raise UnknownAttribute(m)
            if values.get((g, m), w) != w:
                raise FunctionalityViolation(f"{m}({g}) has two values: {values[(g, m)]!r}, {w!r}")
            values[(g, m)] = w
        return cls(tuple(objects), tuple(attributes), values)

    def value(self, g: str, m: str) -> str | None:
        return self.values.get((g, m))

    def value_domain(self, m: str) -> list[str]:
        """Values taken by ``m`` in order of first occurrence over objects."""
        seen = {}
        for g in self.objects:
            w = self.values.get((g, m))
            if w is not None:
                seen.setdefault(w, None)
        return list(seen)


@dataclass(frozen=True)
class ScaleDefinition:
    attribute: str
    mapping: Mapping[str, tuple[str, ...]]

    @classmethod
    def nominal(cls, attribute: str, values: Iterable[str]) -> "ScaleDefinition":
        return cls(attribute, {w: (f"{attribute}={w}",) for w in values})

    @classmethod
    def ordinal(cls, attribute: str, ordered_values: Sequence[str]) -> "ScaleDefinition":
        """Each value implies ``m>=v`` for itself and every smaller value."""
        labels = [f"{attribute}>={w}" for w in ordered_values]
        return cls(attribute, {w: tuple(labels[: i + 1]) for i, w in enumerate(ordered_values)})


def scale_context(mv: MultiValuedContext,
                  scales: Mapping[str, ScaleDefinition] | None = None) -> FormalContext:
    """Derive the one-valued context; nominal scales are used when none are given."""
    if scales is None:
        scales = {m: ScaleDefinition.nominal(m, mv.value_domain(m)) for m in mv.attributes}
    derived: dict[str, None] = {}
    pairs = []
    for m in mv.attributes:
        scale = scales.get(m)
        if scale is None:
            raise MissingScale(f"no scale for attribute {m!r}")
        for g in mv.objects:
            w = mv.values.get((g, m))
            if w is None:
                continue
            if w not in scale.mapping:
                raise MissingScale(f"scale for {m!r} has no entry for value {w!r}")
            for d in scale.mapping[w]:
                derived.setdefault(d, None)
                pairs.append((g, d))
        for targets in scale.mapping.values():
            for d in targets:
                derived.setdefault(d, None)
    return FormalContext.from_pairs(mv.objects, list(derived), pairs)
