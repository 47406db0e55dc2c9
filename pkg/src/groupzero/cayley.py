"""Balls, spheres and annulus components of Cayley graphs.

Adjacency is right multiplication by the symmetric generating set.  For
locally finite entries the natural finite windows are the chain members
G_r rather than word-length balls; :func:`window` and :func:`radius_of`
hide that difference from the stability and electoral code.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .groups import Element, Group

DEFAULT_MAX_ELEMENTS = 5_000_000
MAX_ELEMENTS_ENV = "GROUPZERO_MAX_BALL"


def memory_cap() -> int:
    value = os.environ.get(MAX_ELEMENTS_ENV)
    return int(value) if value else DEFAULT_MAX_ELEMENTS


class ResourceCapExceeded(RuntimeError):
    def __init__(self, group: Group, radius: int, projected: int, cap: int):
        self.projected = projected
        super().__init__(
            f"{group.name}: ball of radius {radius} projected at ~{projected} elements "
            f"exceeds the cap of {cap}"
        )


@dataclass(frozen=True, eq=False)
class Ball:
    group: Group
    radius: int
    elements: tuple[Element, ...]  # BFS order, so layers are contiguous
    lengths: np.ndarray
    neighbors: np.ndarray  # (n, len(gens)); -1 marks a neighbour outside the ball
    index: dict

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.index

    @property
    def layers(self) -> list[tuple[Element, ...]]:
        bounds = np.searchsorted(self.lengths, np.arange(self.radius + 2))
        return [self.elements[bounds[k] : bounds[k + 1]] for k in range(self.radius + 1)]

    def sphere_sizes(self) -> list[int]:
        return np.bincount(self.lengths, minlength=self.radius + 1).tolist()

    @property
    def saturated(self) -> bool:
        """True when some sphere inside the ball is empty (the group is finite)."""
        return 0 in self.sphere_sizes()

    def sub(self, r: int) -> int:
        """Number of leading elements of word length <= r."""
        return int(np.searchsorted(self.lengths, r, side="right"))


def ball(group: Group, r: int, max_elements: int | None = None, truncate: bool = False) -> Ball:
    """Breadth-first ball of radius ``r`` around the identity.

    With ``truncate=True`` the ball stops at the largest radius that fits under
    the cap instead of raising.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    cap = memory_cap() if max_elements is None else max_elements
    return _ball(group, r, cap, truncate)


@lru_cache(maxsize=64)
def _ball(group: Group, r: int, cap: int, truncate: bool) -> Ball:
    gens = group.gens
    index = {group.identity: 0}
    elements = [group.identity]
    lengths = [0]
    nbrs: list[list[int]] = []
    sizes = [1]  # sphere sizes built so far
    radius = 0
    while True:
        growing = radius < r and sizes[-1] > 0
        if growing:
            ratio = sizes[-1] / sizes[-2] if len(sizes) > 1 else len(gens)
            projected = int(len(elements) + sizes[-1] * max(ratio, 1.0))
            if projected > cap:
                if truncate:
                    return _ball(group, radius, cap, False)
                raise ResourceCapExceeded(group, r, projected, cap)
        start = len(elements) - sizes[-1]
        end = len(elements)
        for i in range(start, end):
            g = elements[i]
            row = []
            for s in gens:
                h = group.mul(g, s)
                j = index.get(h)
                if j is None:
                    if growing:
                        j = len(elements)
                        index[h] = j
                        elements.append(h)
                        lengths.append(radius + 1)
                    else:
                        j = -1
                row.append(j)
            nbrs.append(row)
        if len(elements) > cap:
            if truncate:
                return _ball(group, radius, cap, False)
            raise ResourceCapExceeded(group, r, len(elements), cap)
        if not growing:
            break
        sizes.append(len(elements) - end)
        radius += 1
    # a saturated ball keeps its nominal radius; the trailing spheres are empty
    radius = max(radius, r) if sizes[-1] == 0 else radius
    arr = np.asarray(nbrs, dtype=np.int64).reshape(len(elements), len(gens))
    lens = np.asarray(lengths, dtype=np.int64)
    arr.setflags(write=False)
    lens.setflags(write=False)
    return Ball(group, radius, tuple(elements), lens, arr, index)


@dataclass(frozen=True)
class Component:
    elements: frozenset
    touches_outer: bool

    def __len__(self) -> int:
        return len(self.elements)


def _annulus_labels(b: Ball, r_inner: int, r_outer: int) -> tuple[int, int, int, np.ndarray]:
    lo, hi = b.sub(r_inner), b.sub(r_outer)
    n = hi - lo
    if n == 0:
        return lo, hi, 0, np.zeros(0, dtype=np.int64)
    nb = np.asarray(b.neighbors[lo:hi]) - lo
    rows = np.repeat(np.arange(n), nb.shape[1])
    cols = nb.ravel()
    keep = (cols >= 0) & (cols < n)
    graph = csr_matrix((np.ones(keep.sum(), dtype=np.int8), (rows[keep], cols[keep])), shape=(n, n))
    count, labels = connected_components(graph, directed=False)
    return lo, hi, count, labels


def annulus_components(b: Ball, r_inner: int, r_outer: int) -> list[Component]:
    """Components of the subgraph induced on r_inner < |g| <= r_outer."""
    if not 0 <= r_inner < r_outer <= b.radius:
        raise ValueError(f"need 0 <= r_inner < r_outer <= {b.radius}")
    lo, hi, count, labels = _annulus_labels(b, r_inner, r_outer)
    touches = np.zeros(count, dtype=bool)
    touches[labels[b.lengths[lo:hi] == r_outer]] = True
    members: list[list[Element]] = [[] for _ in range(count)]
    for i, lab in enumerate(labels):
        members[lab].append(b.elements[lo + i])
    comps = [Component(frozenset(m), bool(touches[k])) for k, m in enumerate(members)]
    comps.sort(key=lambda c: min(c.elements))
    return comps


def count_touching(b: Ball, r_inner: int, r_outer: int) -> int:
    """Number of annulus components meeting the sphere of radius r_outer."""
    lo, hi, _, labels = _annulus_labels(b, r_inner, r_outer)
    return len(np.unique(labels[b.lengths[lo:hi] == r_outer]))


def components_outside(
    group: Group, r_inner: int, r_outer: int, max_elements: int | None = None
) -> list[Component]:
    """Components of Ball(r_outer) minus Ball(r_inner), tagged by outer contact."""
    if not 0 <= r_inner < r_outer:
        raise ValueError("need 0 <= r_inner < r_outer")
    return annulus_components(ball(group, r_outer, max_elements), r_inner, r_outer)


# ---------------------------------------------------------------------------
# scale windows


def radius_of(group: Group, g: Element) -> int:
    """Scale radius: chain level for locally finite entries, word length otherwise."""
    return group.chain_level(g) if group.has_chain else group.word_length(g)


@lru_cache(maxsize=256)
def window(group: Group, r: int) -> tuple[Element, ...]:
    """Elements of scale radius <= r, ordered by radius then canonical form."""
    if group.has_chain:
        members = group.chain_members(r)
        cap = memory_cap()
        if len(members) > cap:
            raise ResourceCapExceeded(group, r, len(members), cap)
    else:
        members = ball(group, r).elements
    return tuple(sorted(members, key=lambda g: (radius_of(group, g), g)))


def window_radii(group: Group, r: int) -> np.ndarray:
    return np.fromiter((radius_of(group, g) for g in window(group, r)), dtype=np.int64)
