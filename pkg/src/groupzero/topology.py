"""Shift-continuous topologies on a group with an adjoined zero.

Every group point is isolated, so a topology is fixed by a neighbourhood
base at 0.  Four base families are supported: ``Discrete`` ({0}),
``Cofinite`` (G^0 minus a finite subset of G), ``EndBase`` (the sets
g1 K g2 u {0} for an end K of a virtually cyclic group) and ``Explicit`` (a
literal finite list of subsets).  The first three are reasoned about
symbolically; explicit families are searched on finite windows.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

from .cayley import radius_of, window
from .ends import EndDescriptor, Side, end_descriptor
from .groups import Element, Flexibility, Group, ParseError
from .stability import (
    AlmostStableVerdict,
    SubsetSpec,
    classify_almost_stable,
    custom,
    meets_outer,
    parse_subset,
)


class _Zero:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "0"


ZERO = _Zero()


def mul0(group: Group, a, b):
    """Multiplication in G^0."""
    if a is ZERO or b is ZERO:
        return ZERO
    return group.mul(a, b)


class Status(enum.Enum):
    PROVEN = "Proven"
    REFUTED = "RefutedAtScale"
    UNKNOWN = "UnknownAtScale"


@dataclass
class Verdict:
    status: Status
    scale: int | None = None
    witness: Any = None
    counterexample: Any = None
    note: str = ""

    @property
    def proven(self) -> bool:
        return self.status is Status.PROVEN

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED


def proven(scale=None, witness=None, note="") -> Verdict:
    return Verdict(Status.PROVEN, scale, witness=witness, note=note)


def refuted(scale=None, counterexample=None, note="") -> Verdict:
    return Verdict(Status.REFUTED, scale, counterexample=counterexample, note=note)


class PreconditionError(ValueError):
    def __init__(self, message: str, verdicts: dict[str, Verdict] | None = None):
        super().__init__(message)
        self.verdicts = verdicts or {}


class Family(enum.Enum):
    DISCRETE = "Discrete"
    COFINITE = "Cofinite"
    END_BASE = "EndBase"
    EXPLICIT = "Explicit"


# ---------------------------------------------------------------------------
# tails: exact arithmetic for the base elements g1 K g2


@dataclass(frozen=True)
class Tail:
    """``{z^k t_i : k >= bounds[i]}`` (side +1) or ``k <= bounds[i]`` (side -1)."""

    side: int
    bounds: tuple[int, ...]


class EndCalculus:
    def __init__(self, descriptor: EndDescriptor):
        self.descriptor = descriptor
        self.group = descriptor.group
        self.structure = self.group.cyclic_structure()
        self.transversal = self.structure.transversal
        self.slot = {t: i for i, t in enumerate(self.transversal)}
        side = descriptor.side.value
        self.K = Tail(side, (side * descriptor.n0,) * len(self.transversal))

    def contains(self, tail: Tail, g: Element) -> bool:
        k, t = self.structure.decompose(g)
        bound = tail.bounds[self.slot[t]]
        return k >= bound if tail.side > 0 else k <= bound

    def translate(self, tail: Tail, g1: Element, g2: Element) -> Tail:
        """The tail g1 . tail . g2, using g1 z^k = z^(s k) g1 with s = orientation(g1)."""
        s = self.structure.orientation(g1)
        bounds = [0] * len(tail.bounds)
        for i, t in enumerate(self.transversal):
            c, t2 = self.structure.decompose(self.group.mul(self.group.mul(g1, t), g2))
            bounds[self.slot[t2]] = s * tail.bounds[i] + c
        return Tail(tail.side * s, tuple(bounds))

    def base(self, g1: Element | None = None, g2: Element | None = None) -> Tail:
        e = self.group.identity
        return self.translate(self.K, g1 or e, g2 or e)

    def shifted(self, n: int) -> Tail:
        """z^n K."""
        return self.base(self.group.power(self.structure.axis, n))

    def difference(self, U: Tail, V: Tail) -> int | None:
        """|U minus V|, or None when it is infinite."""
        if U.side != V.side:
            return None
        return sum(max(0, U.side * (v - u)) for u, v in zip(U.bounds, V.bounds))

    def flipping_generator(self) -> Element | None:
        for g in self.group.gens:
            if self.structure.orientation(g) < 0:
                return g
        return None


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class BaseElement:
    """A basic neighbourhood of 0; ``contains`` tests its points in G."""

    label: str
    contains: Callable[[Element], bool]

    def subset(self) -> SubsetSpec:
        return custom(self.label, self.contains)


@dataclass(frozen=True, eq=False)
class ZeroTopologySpec:
    group: Group
    family: Family
    descriptor: EndDescriptor | None = None
    sets: tuple[SubsetSpec, ...] = ()

    @property
    def name(self) -> str:
        if self.family is Family.END_BASE:
            return f"EndBase({self.descriptor.name()})"
        if self.family is Family.EXPLICIT:
            return f"Explicit[{len(self.sets)}]"
        return self.family.value

    def calculus(self) -> EndCalculus:
        return EndCalculus(self.descriptor)

    def representative(self) -> BaseElement:
        """One concrete base element of the family."""
        if self.family is Family.DISCRETE:
            return BaseElement("{0}", lambda g: False)
        if self.family is Family.COFINITE:
            e = self.group.identity
            return BaseElement("G0-{e}", lambda g: g != e)
        if self.family is Family.END_BASE:
            calc = self.calculus()
            return BaseElement(f"{self.descriptor.name()}u{{0}}", lambda g: calc.contains(calc.K, g))
        S = self.sets[0]
        return BaseElement(f"{S.name}u{{0}}", S.membership)


def discrete(group: Group) -> ZeroTopologySpec:
    return ZeroTopologySpec(group, Family.DISCRETE)


def cofinite(group: Group) -> ZeroTopologySpec:
    return ZeroTopologySpec(group, Family.COFINITE)


def end_base(descriptor: EndDescriptor) -> ZeroTopologySpec:
    return ZeroTopologySpec(descriptor.group, Family.END_BASE, descriptor=descriptor)


MAX_EXPLICIT = 64


def explicit(group: Group, sets: list[SubsetSpec]) -> ZeroTopologySpec:
    if not 1 <= len(sets) <= MAX_EXPLICIT:
        raise ValueError(f"explicit families hold 1..{MAX_EXPLICIT} generating sets")
    return ZeroTopologySpec(group, Family.EXPLICIT, sets=tuple(sets))


def parse_topology(literal: str, group: Group) -> ZeroTopologySpec:
    text = literal.strip()
    if text == "discrete":
        return discrete(group)
    if text == "cofinite":
        return cofinite(group)
    head, _, body = text.partition(":")
    if head == "end":
        return end_base(end_descriptor(group, Side.parse(body)))
    if head == "explicit":
        lines = Path(body).read_text().splitlines()
        sets = [
            parse_subset(line, group)
            for line in (raw.strip() for raw in lines)
            if line and not line.startswith("#")
        ]
        return explicit(group, sets)
    raise ParseError(f"unknown topology literal {literal!r}")


def _outer_point(group: Group, R: int, predicate: Callable[[Element], bool]) -> Element | None:
    for g in reversed(window(group, R)):
        if predicate(g):
            return g
    return None


def _subset_on(group: Group, S: Callable, T: Callable, r: int) -> bool:
    """S n window(r) is inside T."""
    return all(T(g) for g in window(group, r) if S(g))


# ---------------------------------------------------------------------------
# checks


def check_filter_base(spec: ZeroTopologySpec, R: int) -> Verdict:
    """Any two base elements contain a third."""
    family = spec.family
    if family is Family.DISCRETE:
        return proven(witness="{0}")
    if family is Family.COFINITE:
        return proven(witness="G0-(F u F') lies in both")
    if family is Family.END_BASE:
        calc = spec.calculus()
        flip = calc.flipping_generator()
        if flip is None:
            return proven(witness="z^N K lies in g1Kg2 n h1Kh2 for large N", note="no generator swaps the ends")
        V = calc.base(flip)
        common = sum(
            1 for g in window(spec.group, R) if calc.contains(calc.K, g) and calc.contains(V, g)
        )
        return refuted(
            R,
            counterexample={"U": "K", "V": f"{spec.group.format(flip)}.K", "common_points": common},
            note="left translation swaps the two ends; U n V is finite and contains no base element",
        )
    sets = spec.sets
    for i, Si in enumerate(sets):
        for j in range(i + 1, len(sets)):
            Sj = sets[j]
            both = lambda g, a=Si, b=Sj: a.membership(g) and b.membership(g)
            if not any(_subset_on(spec.group, Sk.membership, both, R) for Sk in sets):
                return refuted(R, counterexample={"U": i, "V": j})
    return proven(R, witness="refinement found for every pair")


def is_hausdorff(spec: ZeroTopologySpec, R: int) -> Verdict:
    """Separate 0 from every g in window(R) by a base element avoiding g."""
    group = spec.group
    if spec.family is Family.DISCRETE:
        return proven(R, witness="{0}")
    if spec.family is Family.COFINITE:
        return proven(R, witness="G0-{g}")
    if spec.family is Family.END_BASE:
        calc = spec.calculus()
        for g in window(group, R):
            k, _ = calc.structure.decompose(g)
            if calc.contains(calc.shifted(k), g):
                return refuted(R, counterexample=g)
        return proven(R, witness="z^k K avoids z^k t")
    for g in window(group, R):
        if all(S.membership(g) for S in spec.sets):
            return refuted(R, counterexample=g)
    return proven(R, witness="every point avoided by some listed set")


def is_compact(spec: ZeroTopologySpec, R: int = 20) -> Verdict:
    """With G discrete, G^0 is compact iff every neighbourhood of 0 is cofinite."""
    group = spec.group
    if group.is_finite or spec.family is Family.COFINITE:
        return proven(witness="every base element is cofinite")
    if spec.family is Family.DISCRETE:
        return refuted(R, counterexample={"U": "{0}", "outside": _outer_point(group, R, lambda g: True)})
    if spec.family is Family.END_BASE:
        calc = spec.calculus()
        outside = _outer_point(group, R, lambda g: not calc.contains(calc.K, g))
        return refuted(R, counterexample={"U": "K", "outside": outside}, note="the complement holds the other end")
    for i, S in enumerate(spec.sets):
        if meets_outer(group, lambda g: not S.membership(g), R):
            outside = _outer_point(group, R, lambda g: not S.membership(g))
            return refuted(R, counterexample={"U": i, "outside": outside})
    return proven(R, witness="all listed complements bounded at scale")


def _growth(counts: list[int]) -> str:
    if len(set(counts[-3:])) == 1:
        return "bounded"
    if all(a < b for a, b in zip(counts[-3:], counts[-2:])):
        return "growing"
    return "unclear"


def is_locally_compact(spec: ZeroTopologySpec, R: int) -> Verdict:
    """Look for U0 with U0 minus V finite for every base element V."""
    group = spec.group
    if spec.family is Family.DISCRETE:
        return proven(R, witness={"U0": "{0}"})
    if spec.family is Family.COFINITE:
        return proven(R, witness={"U0": "G0"})
    if spec.family is Family.END_BASE:
        calc = spec.calculus()
        flip = calc.flipping_generator()
        if flip is not None:
            V = calc.base(flip)
            counts = [
                sum(1 for g in window(group, r) if calc.contains(calc.K, g) and not calc.contains(V, g))
                for r in range(R - 2, R + 1)
            ]
            return refuted(
                R,
                counterexample={"U0": "K", "V": f"{group.format(flip)}.K", "difference_by_radius": counts},
                note="every tail U0 has a translate on the opposite side",
            )
        return proven(R, witness={"U0": "K"}, note="K minus g1Kg2 is a finite union of coset segments")
    sets = spec.sets
    unclear = False
    for i, U in enumerate(sets):
        ok = True
        for V in sets:
            counts = [
                sum(1 for g in window(group, r) if U.membership(g) and not V.membership(g))
                for r in range(max(0, R - 2), R + 1)
            ]
            trend = _growth(counts)
            if trend != "bounded":
                ok = False
                unclear |= trend == "unclear"
                break
        if ok:
            return proven(R, witness={"U0": i})
    if unclear:
        return Verdict(Status.UNKNOWN, R, note="some differences neither bounded nor growing")
    return refuted(R, counterexample="every candidate U0 leaves an unbounded difference")


def check_shift_continuity(spec: ZeroTopologySpec, R: int) -> Verdict:
    """For each generator g and base U: base V, V' with g.V and V'.g inside U."""
    group = spec.group
    if spec.family is Family.DISCRETE:
        return proven(R, witness="V = {0}")
    if spec.family is Family.COFINITE:
        return proven(R, witness="V = G0-(g^-1 F u F g^-1)")
    if spec.family is Family.END_BASE:
        return proven(R, witness="V = g^-1 U (left), V' = U g^-1 (right)", note="g (g1 K g2) h = (g g1) K (g2 h)")
    for g in group.gens:
        inner = R if group.has_chain else max(0, R - radius_of(group, g))
        W = window(group, inner)
        for i, U in enumerate(spec.sets):
            for side in ("left", "right"):
                move = (lambda v: group.mul(g, v)) if side == "left" else (lambda v: group.mul(v, g))
                if not any(
                    all(U.membership(move(v)) for v in W if V.membership(v)) for V in spec.sets
                ):
                    return refuted(R, counterexample={"g": g, "U": i, "side": side})
    return proven(R, witness="translate refinements found for every generator")


def check_semigroup_continuity(spec: ZeroTopologySpec, R: int) -> Verdict:
    """Joint continuity at (0, 0): base V, W with (V-0)(W-0) inside U.

    Continuity at (g, 0) and (0, g) reduces to shift continuity because g is
    isolated.
    """
    shift = check_shift_continuity(spec, R)
    if not shift.proven:
        raise PreconditionError("shift continuity is not proven", {"shift": shift})
    group = spec.group
    if spec.family is Family.DISCRETE or (spec.family is Family.COFINITE and group.is_finite):
        return proven(R, witness={"V": "{0}", "W": "{0}"})
    if spec.family is Family.COFINITE:
        return _cofinite_product_counterexample(group, R)
    if spec.family is Family.END_BASE:
        return _end_product_witness(spec, R)
    return _explicit_products(spec, R)


def _cofinite_product_counterexample(group: Group, R: int) -> Verdict:
    # Every cofinite V contains G - Ball(n) for some n, so a product hitting u
    # from outside Ball(n) for each n refutes every pair.
    u = group.gens[0]
    pair = None
    for n in range(R + 1):
        w = group.power(u, n + 2)
        v = group.mul(u, group.inv(w))
        if not (radius_of(group, v) > n and radius_of(group, w) > n and group.mul(v, w) == u):
            return Verdict(Status.UNKNOWN, R, note=f"no product pair found outside Ball({n})")
        pair = (v, w)
    return refuted(
        R,
        counterexample={"U": f"G0-{{{group.format(u)}}}", "v": pair[0], "w": pair[1]},
        note=f"v*w = {group.format(u)} with v, w outside Ball(n) for every n <= {R}",
    )


def _end_product_witness(spec: ZeroTopologySpec, R: int) -> Verdict:
    calc = spec.calculus()
    group = spec.group
    if calc.flipping_generator() is not None:
        return Verdict(Status.UNKNOWN, R, note="the end family is not a filter base")
    side = calc.K.side
    offsets = [calc.structure.decompose(group.mul(t, s))[0] for t in calc.transversal for s in calc.transversal]
    if side > 0:
        n = max(1, math.ceil((max(calc.K.bounds) - min(offsets)) / 2))
    else:
        n = max(1, math.ceil((max(offsets) - min(calc.K.bounds)) / 2))
    V = Tail(side, (side * n,) * len(calc.transversal))
    pts = [g for g in window(group, R) if calc.contains(V, g)]
    for v in pts:
        for w in pts:
            if not calc.contains(calc.K, group.mul(v, w)):
                return refuted(R, counterexample={"v": v, "w": w})
    return proven(R, witness={"U": "K", "V": f"tail from {side * n}", "W": f"tail from {side * n}"})


def _explicit_products(spec: ZeroTopologySpec, R: int) -> Verdict:
    group = spec.group
    W = window(group, R // 2)
    members = [[g for g in W if S.membership(g)] for S in spec.sets]
    for i, U in enumerate(spec.sets):
        found = False
        for j in range(len(spec.sets)):
            for k in range(len(spec.sets)):
                if all(U.membership(group.mul(v, w)) for v in members[j] for w in members[k]):
                    found = True
                    break
            if found:
                break
        if not found:
            return refuted(R, counterexample={"U": i})
    return proven(R, witness="product refinements found")


# ---------------------------------------------------------------------------
# classification


class ZeroClass(enum.Enum):
    DISCRETE = "Discrete"
    COMPACT = "Compact"
    NEITHER = "Neither"


@dataclass
class Dichotomy:
    cls: ZeroClass
    consistent: bool
    verdicts: dict[str, Verdict]

    @property
    def flag(self) -> str:
        return "CONSISTENT" if self.consistent else "VIOLATION"


def zero_is_open(spec: ZeroTopologySpec, R: int) -> bool:
    if spec.family is Family.DISCRETE:
        return True
    if spec.family is Family.COFINITE:
        return spec.group.is_finite
    if spec.family is Family.END_BASE:
        return False
    # a bounded base element is finite; with Hausdorff, 0 is then isolated
    return any(not meets_outer(spec.group, S.membership, R) for S in spec.sets)


def preconditions(spec: ZeroTopologySpec, R: int) -> dict[str, Verdict]:
    return {
        "filter_base": check_filter_base(spec, R),
        "hausdorff": is_hausdorff(spec, R),
        "shift_continuous": check_shift_continuity(spec, R),
        "locally_compact": is_locally_compact(spec, R),
    }


def classify_dichotomy(spec: ZeroTopologySpec, R: int) -> Dichotomy:
    """Discrete, Compact or Neither; Neither on a flexible group is a VIOLATION."""
    verdicts = preconditions(spec, R)
    failed = [k for k, v in verdicts.items() if not v.proven]
    if failed:
        raise PreconditionError(f"not proven: {', '.join(failed)}", verdicts)
    if zero_is_open(spec, R):
        cls = ZeroClass.DISCRETE
    else:
        compact = is_compact(spec, R)
        verdicts["compact"] = compact
        cls = ZeroClass.COMPACT if compact.proven else ZeroClass.NEITHER
    consistent = not (cls is ZeroClass.NEITHER and spec.group.flexibility is Flexibility.FLEXIBLE)
    return Dichotomy(cls, consistent, verdicts)


def has_base_element_inside(spec: ZeroTopologySpec, U: Callable[[Element], bool], R: int) -> bool:
    """Whether some base element of ``spec`` lies inside U u {0}, judged on window(R)."""
    group = spec.group
    if spec.family is Family.DISCRETE:
        return True
    if spec.family is Family.COFINITE:
        return not meets_outer(group, lambda g: not U(g), R)
    if spec.family is Family.END_BASE:
        calc = spec.calculus()
        far = [g for g in window(group, R) if radius_of(group, g) > R // 2]
        return all(U(g) for g in far if calc.contains(calc.K, g))
    return any(_subset_on(group, S.membership, U, R) for S in spec.sets)


def distinct(S: ZeroTopologySpec, T: ZeroTopologySpec, R: int) -> bool:
    return not has_base_element_inside(T, S.representative().contains, R) or not has_base_element_inside(
        S, T.representative().contains, R
    )


@dataclass
class Census:
    specs: list[ZeroTopologySpec]
    rows: list[dict[str, Any]]
    semigroup_count: int
    pairwise_distinct: bool
    R: int
    caveat: str = (
        "scale-limited evidence: the four listed topologies are checked; "
        "that no fifth one exists is not checkable by enumeration"
    )

    @property
    def classes(self) -> list[str]:
        return [row["class"] for row in self.rows]


def enumerate_Z_topologies(R: int = 50) -> Census:
    from .groups import make_group

    Z = make_group("Z")
    specs = [
        discrete(Z),
        cofinite(Z),
        end_base(end_descriptor(Z, Side.POSITIVE)),
        end_base(end_descriptor(Z, Side.NEGATIVE)),
    ]
    rows = []
    for spec in specs:
        dich = classify_dichotomy(spec, R)
        semigroup = check_semigroup_continuity(spec, R)
        row = {name: v for name, v in dich.verdicts.items()}
        row.update(name=spec.name, semigroup=semigroup, **{"class": dich.cls.value}, flag=dich.flag)
        rows.append(row)
    pairwise = all(distinct(a, b, R) for i, a in enumerate(specs) for b in specs[i + 1 :])
    count = sum(row["semigroup"].proven for row in rows)
    return Census(specs, rows, count, pairwise, R)


def end_topology(group: Group, side: Side) -> ZeroTopologySpec:
    return end_base(end_descriptor(group, side))


def not_discrete(spec: ZeroTopologySpec, R: int) -> Verdict:
    """Every sampled base element meets each sphere up to R, so none is {0}."""
    if spec.family is not Family.END_BASE:
        raise ValueError("defined for end bases")
    calc = spec.calculus()
    samples = [calc.base(g1, g2) for g1 in (spec.group.identity, *spec.group.gens) for g2 in (spec.group.identity, *spec.group.gens)]
    radii = {radius_of(spec.group, g) for g in window(spec.group, R)}
    for tail in samples:
        hit = {radius_of(spec.group, g) for g in window(spec.group, R) if calc.contains(tail, g)}
        if not {r for r in radii if r > R // 2} <= hit:
            return refuted(R, counterexample=tail)
    return proven(R, witness="base elements are unbounded")


def end_topology_bundle(group: Group, side: Side, R: int = 30) -> dict[str, Verdict]:
    spec = end_topology(group, side)
    bundle = preconditions(spec, R)
    bundle["not_discrete"] = not_discrete(spec, R)
    bundle["compact"] = is_compact(spec, R)
    return bundle


def bundle_passes(bundle: dict[str, Verdict]) -> bool:
    return all(v.proven for k, v in bundle.items() if k != "compact") and bundle["compact"].refuted


def zero_ideal_check(group: Group, R: int) -> Verdict:
    """0 g = g 0 = 0 0 = 0 on window(R)."""
    if mul0(group, ZERO, ZERO) is not ZERO:
        return refuted(R, counterexample=(ZERO, ZERO))
    for g in window(group, R):
        if mul0(group, ZERO, g) is not ZERO or mul0(group, g, ZERO) is not ZERO:
            return refuted(R, counterexample=g)
    return proven(R, witness="0 is absorbing")


def compact_neighbourhood_stability(spec: ZeroTopologySpec, r_max: int) -> AlmostStableVerdict:
    """Two-sided almost-stability of U0 minus 0 for the locally compact witness U0."""
    lc = is_locally_compact(spec, r_max)
    if not lc.proven:
        raise PreconditionError("not locally compact", {"locally_compact": lc})
    U0 = lc.witness["U0"]
    if spec.family is Family.DISCRETE:
        S = custom("empty", lambda g: False)
    elif spec.family is Family.COFINITE:
        S = custom("G", lambda g: True)
    elif spec.family is Family.END_BASE:
        S = spec.representative().subset()
    else:
        S = spec.sets[U0]
    return classify_almost_stable(spec.group, S, r_max, sides=("right", "left"))
