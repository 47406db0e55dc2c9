"""Translational almost-stability of subsets, measured on finite windows."""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .cayley import radius_of, window
from .ends import EndDescriptor, Side, end_descriptor
from .groups import ChainError, Element, Group, ParseError, _split_top

TAIL = 3  # constant tail length for BoundedAtScale


class SubsetTag(enum.Enum):
    FINITE_LIST = "FiniteList"
    COFINITE = "CofiniteComplementOf"
    RAY = "Ray"
    ANNULUS_PARITY = "AnnulusParity"
    WORD_LENGTH = "WordLengthCondition"
    PARITY_CLASS = "ParityClass"
    HALFSPACE = "Halfspace"
    CUSTOM = "Custom"


@dataclass(frozen=True, eq=False)
class SubsetSpec:
    name: str
    tag: SubsetTag
    membership: Callable[[Element], bool]
    elements: frozenset | None = None  # listed points of FiniteList / Cofinite

    def __contains__(self, g: Element) -> bool:
        return self.membership(g)

    def complement(self, name: str | None = None) -> "SubsetSpec":
        tag = {
            SubsetTag.FINITE_LIST: SubsetTag.COFINITE,
            SubsetTag.COFINITE: SubsetTag.FINITE_LIST,
        }.get(self.tag, self.tag)
        member = self.membership
        return SubsetSpec(name or f"~{self.name}", tag, lambda g: not member(g), self.elements)


def finite_set(points: Iterable[Element], name: str | None = None) -> SubsetSpec:
    pts = frozenset(points)
    return SubsetSpec(name or f"finite[{len(pts)}]", SubsetTag.FINITE_LIST, pts.__contains__, pts)


def cofinite_set(points: Iterable[Element], name: str | None = None) -> SubsetSpec:
    pts = frozenset(points)
    return SubsetSpec(
        name or f"cofinite[{len(pts)}]", SubsetTag.COFINITE, lambda g: g not in pts, pts
    )


def ray(descriptor: EndDescriptor) -> SubsetSpec:
    return SubsetSpec(descriptor.name(), SubsetTag.RAY, descriptor.__contains__)


def naturals() -> SubsetSpec:
    """{k >= 0} in Z."""
    return SubsetSpec("nat", SubsetTag.RAY, lambda g: g[0] >= 0)


def length_parity(group: Group, parity: int = 0) -> SubsetSpec:
    """Elements whose word length has the given parity; even integers in Z."""
    return SubsetSpec(
        "even" if parity == 0 else "odd",
        SubsetTag.PARITY_CLASS,
        lambda g: group.word_length(g) % 2 == parity,
    )


def halfspace(normal: tuple[int, ...], offset: int, name: str | None = None) -> SubsetSpec:
    """{v : <v, normal> >= offset} in Z^n."""
    return SubsetSpec(
        name or f"halfspace:{normal}>={offset}",
        SubsetTag.HALFSPACE,
        lambda g: sum(a * b for a, b in zip(g, normal)) >= offset,
    )


def annulus_parity(group: Group, bits: dict[int, int], name: str) -> SubsetSpec:
    """Union of chain blocks G_n minus G_{n-1}; level n belongs when ``bits[n]`` is 0.

    Levels missing from ``bits`` follow the parity of n (odd levels in the set).
    The bottom block G_0 always belongs.
    """
    if not group.has_chain:
        raise ChainError(f"{group.name} has no chain")

    def member(g):
        n = group.chain_level(g)
        return n == 0 or bits.get(n, 0 if n % 2 else 1) == 0

    return SubsetSpec(name, SubsetTag.ANNULUS_PARITY, member)


def custom(name: str, predicate: Callable[[Element], bool]) -> SubsetSpec:
    return SubsetSpec(name, SubsetTag.CUSTOM, predicate)


_HALFPLANE = re.compile(r"^\s*([mn])\s*(>=|<=|>|<)\s*([+-]?\d+)\s*$")


def parse_subset(literal: str, group: Group) -> SubsetSpec:
    """Parse a CLI subset literal such as ``nat``, ``halfplane:m>=0`` or ``finite:[1,2]``."""
    text = literal.strip()
    head, _, body = text.partition(":")
    if text == "nat":
        return naturals()
    if text in ("even", "odd"):
        return length_parity(group, 0 if text == "even" else 1)
    if head == "halfplane":
        m = _HALFPLANE.match(body)
        if m is None:
            raise ParseError(f"malformed half-plane literal {literal!r}")
        coord, op, value = m[1], m[2], int(m[3])
        axis = 0 if coord == "m" else 1
        sign = 1 if op.startswith(">") else -1
        offset = value + (1 if op == ">" else -1 if op == "<" else 0)
        normal = tuple(sign if i == axis else 0 for i in range(2))
        spec = halfspace(normal, sign * offset, name=text)
        return spec
    if head in ("finite", "cofinite"):
        body = body.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ParseError(f"expected a bracketed element list in {literal!r}")
        inner = body[1:-1].strip()
        points = [group.parse(p) for p in _split_top(inner, ",")] if inner else []
        return (finite_set if head == "finite" else cofinite_set)(points, name=text)
    if text == "prop10":
        return stable_partition_locally_finite(group).A
    if head == "end":
        return ray(end_descriptor(group, Side.parse(body)))
    raise ParseError(f"unknown subset literal {literal!r}")


# ---------------------------------------------------------------------------
# profiles


@dataclass
class StabilityProfile:
    by_radius: dict[int, int]
    bounded: bool
    bound: int | None = None
    slope: float | None = None

    @property
    def verdict(self) -> str:
        return "BoundedAtScale" if self.bounded else "GrowingAtScale"


def _profile(counts: dict[int, int]) -> StabilityProfile:
    radii = sorted(counts)
    tail = [counts[r] for r in radii[-TAIL:]]
    if len(tail) == TAIL and len(set(tail)) == 1:
        return StabilityProfile(counts, True, bound=tail[0])
    slope = float(np.polyfit(radii, [counts[r] for r in radii], 1)[0]) if len(radii) > 1 else 0.0
    return StabilityProfile(counts, False, slope=slope)


def _cumulative(group: Group, r: int, hits: Callable[[Element], bool]) -> dict[int, int]:
    hist = np.zeros(r + 1, dtype=np.int64)
    for g in window(group, r):
        if hits(g):
            hist[radius_of(group, g)] += 1
    return {k: int(v) for k, v in enumerate(np.cumsum(hist))}


def symdiff_profile(
    group: Group, A: SubsetSpec, x: Element, r_max: int, side: str = "right"
) -> StabilityProfile:
    """|(A delta A.x) n window| per window radius (``x.A`` when ``side='left'``).

    Cayley windows are taken at radius ``r - |x|`` so translates stay inside
    Ball(r); chain windows G_r are already closed under translation by x once
    r reaches its level.  ``by_radius`` is keyed by the window radius.
    """
    rx = radius_of(group, x)
    if r_max < rx + 2:
        raise ValueError(f"r_max must be at least |x| + 2 = {rx + 2}")
    xi = group.inv(x)
    mul = group.mul
    if side == "right":
        hits = lambda g: (g in A) != (mul(g, xi) in A)
    elif side == "left":
        hits = lambda g: (g in A) != (mul(xi, g) in A)
    else:
        raise ValueError("side must be 'right' or 'left'")
    top = r_max if group.has_chain else r_max - rx
    return _profile(_cumulative(group, top, hits))


def translate_identity_holds(group: Group, A: SubsetSpec, x: Element, r: int) -> bool:
    """Pointwise check of g in A delta Ax  <=>  g x^-1 in (A x^-1) delta A."""
    xi = group.inv(x)
    for g in window(group, r):
        lhs = (g in A) != (group.mul(g, xi) in A)
        h = group.mul(g, xi)
        rhs = (group.mul(h, x) in A) != (h in A)
        if lhs != rhs:
            return False
    return True


class SizeClass(enum.Enum):
    FINITE = "FiniteAtScale"
    COFINITE = "CofiniteAtScale"
    PROPER = "Proper"
    UNDETERMINED = "UndeterminedAtScale"


def meets_outer(group: Group, S: Callable[[Element], bool], r: int, layers: int = 2) -> bool:
    """Whether S meets one of the outermost ``layers`` layers of window(r)."""
    return any(radius_of(group, g) > r - layers and S(g) for g in window(group, r))


def size_class(group: Group, A: SubsetSpec, r: int) -> SizeClass:
    inside = meets_outer(group, A.membership, r)
    outside = meets_outer(group, lambda g: g not in A, r)
    if inside and outside:
        return SizeClass.PROPER
    if outside:
        return SizeClass.FINITE
    if inside:
        return SizeClass.COFINITE
    return SizeClass.UNDETERMINED


@dataclass
class AlmostStableVerdict:
    almost_stable: bool
    size: SizeClass
    profiles: dict[tuple[str, Element], StabilityProfile] = field(default_factory=dict)

    @property
    def label(self) -> str:
        return "AlmostStableAtScale" if self.almost_stable else "NotAlmostStableAtScale"


def classify_almost_stable(
    group: Group, A: SubsetSpec, r_max: int, sides: tuple[str, ...] = ("right",)
) -> AlmostStableVerdict:
    """Almost stable at scale iff every generator profile is bounded.

    Bounded generator profiles bound every word profile at scale, with the
    bound summing along the word.  ``sides=('right', 'left')`` tests two-sided
    almost-stability.
    """
    profiles = {}
    for side in sides:
        for s in group.gens:
            profiles[(side, s)] = symdiff_profile(group, A, s, r_max, side)
    ok = all(p.bounded for p in profiles.values())
    return AlmostStableVerdict(ok, size_class(group, A, r_max), profiles)


# ---------------------------------------------------------------------------
# the stable partition of a locally finite chain


@dataclass
class ChainPartition:
    A: SubsetSpec
    B: SubsetSpec
    transversals: dict[int, tuple[Element, ...]]  # n -> A_n
    depth: int


def _transversal(group: Group, n: int) -> tuple[Element, ...]:
    """Minimum of each left coset x G_n inside G_{n+1} minus G_n."""
    lower = group.chain_members(n)
    upper = sorted(g for g in group.chain_members(n + 1) if group.chain_level(g) == n + 1)
    seen: set = set()
    reps = []
    for x in upper:
        if x in seen:
            continue
        reps.append(x)
        seen.update(group.mul(x, h) for h in lower)
    return tuple(reps)


def stable_partition_locally_finite(group: Group, depth: int | None = None) -> ChainPartition:
    """Build A = G_0 u U(A_2n G_2n) and B = U(A_2n+1 G_2n+1).

    Each A_n picks the minimum of every coset x G_n with x in G_{n+1} minus
    G_n.  The identity A_n G_n = G_{n+1} minus G_n is verified for every level
    up to ``depth``, so membership reduces to the parity of the chain level.
    """
    if not group.has_chain:
        raise ChainError(f"{group.name} has no declared chain")
    depth = group.depth if depth is None else depth
    if depth < 4:
        raise ValueError("chain too shallow: depth must be at least 4")
    transversals = {}
    for n in range(depth):
        reps = _transversal(group, n)
        lower = group.chain_members(n)
        covered = {group.mul(a, h) for a in reps for h in lower}
        layer = {g for g in group.chain_members(n + 1) if group.chain_level(g) == n + 1}
        if covered != layer or len(reps) * len(lower) != len(layer):
            raise AssertionError(f"transversal identity fails at level {n}")
        transversals[n] = reps

    def in_A(g):
        level = group.chain_level(g)
        return level == 0 or (level - 1) % 2 == 0

    A = SubsetSpec("prop10:A", SubsetTag.ANNULUS_PARITY, in_A)
    B = SubsetSpec("prop10:B", SubsetTag.ANNULUS_PARITY, lambda g: not in_A(g))
    for n in range(depth + 1):
        members = group.chain_members(n)
        if any((g in A) == (g in B) for g in members):
            raise AssertionError(f"A and B do not partition G_{n}")
    return ChainPartition(A, B, transversals, depth)


def translate_intersection_profile(
    group: Group, A: SubsetSpec, B: SubsetSpec, x: Element, R_max: int
) -> dict[int, int]:
    """R -> |(A x) n B n G_R| for chain windows (Ball(R) otherwise)."""
    xi = group.inv(x)
    return _cumulative(group, R_max, lambda b: b in B and group.mul(b, xi) in A)
