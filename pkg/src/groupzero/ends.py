"""Empirical end counts and symbolic ends of virtually cyclic groups."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .cayley import ResourceCapExceeded, ball, count_touching, memory_cap
from .groups import Element, Group

DEFAULT_ENDS_BUDGET = 300_000


class EndsClass(enum.Enum):
    ZERO_ENDS = "ZeroEnds"
    ONE_END = "OneEnd"
    TWO_ENDS = "TwoEnds"
    MANY_ENDS_GROWING = "ManyEndsGrowing"
    UNKNOWN_AT_SCALE = "UnknownAtScale"


class Side(enum.Enum):
    POSITIVE = 1
    NEGATIVE = -1

    @classmethod
    def parse(cls, text: str) -> "Side":
        text = text.strip().lower()
        if text in ("+", "pos", "positive"):
            return cls.POSITIVE
        if text in ("-", "neg", "negative"):
            return cls.NEGATIVE
        raise ValueError(f"unknown side {text!r}")


@dataclass
class EndsReport:
    group: str
    counts_by_radius: dict[int, int]
    outer_radius: dict[int, int]
    stabilized_count: int | None
    classification: EndsClass
    saturated: bool
    window: int
    notes: list[str] = field(default_factory=list)


def ends_estimate(
    group: Group, r_max: int = 12, window: int = 4, max_elements: int | None = None
) -> EndsReport:
    """Count unbounded components outside growing balls.

    ``counts_by_radius[r]`` is the number of components of
    ``{g : r <= |g| <= R(r)}`` that reach the sphere of radius ``R(r)``, where
    ``R(r) = 3r + window`` unless the element budget caps the ball earlier.
    The element budget defaults to the smaller of ``DEFAULT_ENDS_BUDGET`` and
    the global memory cap.
    """
    if max_elements is None:
        max_elements = min(DEFAULT_ENDS_BUDGET, memory_cap())
    if not r_max >= window >= 2:
        raise ValueError("need r_max >= window >= 2")
    target = 3 * r_max + window
    b = ball(group, target, max_elements, truncate=True)
    notes = []
    if b.radius < target:
        notes.append(f"outer radius capped at {b.radius} by the {max_elements}-element budget")
    if b.radius < r_max + 1:
        raise ResourceCapExceeded(group, target, max_elements + 1, max_elements)

    counts, outer = {}, {}
    for r in range(1, r_max + 1):
        R = min(3 * r + window, b.radius)
        outer[r] = R
        counts[r] = count_touching(b, r - 1, R)

    tail = [counts[r] for r in range(r_max - window + 1, r_max + 1)]
    stabilized = tail[0] if len(set(tail)) == 1 else None
    if b.saturated:
        cls = EndsClass.ZERO_ENDS
    elif stabilized == 1:
        cls = EndsClass.ONE_END
    elif stabilized == 2:
        cls = EndsClass.TWO_ENDS
    elif all(a < b_ for a, b_ in zip(tail, tail[1:])):
        cls = EndsClass.MANY_ENDS_GROWING
    else:
        cls = EndsClass.UNKNOWN_AT_SCALE
    return EndsReport(group.name, counts, outer, stabilized, cls, b.saturated, window, notes)


@dataclass(frozen=True)
class EndDescriptor:
    """The end ``K = {z^k t : t in transversal, side * k >= n0}``.

    ``K`` is carried into itself by left multiplication by ``z`` (Positive) or
    ``z^-1`` (Negative) and is almost invariant under right translations.
    """

    group: Group
    axis: Element
    side: Side
    transversal: tuple[Element, ...]
    n0: int = 1

    def decompose(self, g: Element) -> tuple[int, Element]:
        return self.group.cyclic_structure().decompose(g)

    def __contains__(self, g: Element) -> bool:
        k, _ = self.decompose(g)
        return self.side.value * k >= self.n0

    def name(self) -> str:
        return f"end:{'+' if self.side is Side.POSITIVE else '-'}"


def end_descriptor(group: Group, side: Side) -> EndDescriptor:
    structure = group.cyclic_structure()
    return EndDescriptor(group, structure.axis, side, structure.transversal)
