"""Witnesses of electoral flexibility and consistency cross-checks."""
from __future__ import annotations

import enum
import hashlib
import random
from dataclasses import dataclass, field
from typing import Iterable

from .cayley import radius_of, window
from .groups import Element, Flexibility, Group
from .stability import (
    SubsetSpec,
    annulus_parity,
    classify_almost_stable,
    custom,
    halfspace,
    length_parity,
    meets_outer,
    SizeClass,
    _cumulative,
)

DEFAULT_M = 20
ORDER_BOUND = 64


class WitnessSide(enum.Enum):
    RIGHT = "Right"  # I x in B
    LEFT = "Left"  # x I in B


class PartitionError(ValueError):
    pass


class CertificateError(AssertionError):
    pass


class FiniteOrderError(ValueError):
    pass


def _translate(group: Group, a: Element, x: Element, side: WitnessSide) -> Element:
    return group.mul(a, x) if side is WitnessSide.RIGHT else group.mul(x, a)


@dataclass(frozen=True)
class WitnessCertificate:
    I: tuple[Element, ...]
    x: Element
    side: WitnessSide

    @property
    def size(self) -> int:
        return len(self.I)

    def failures(self, group: Group, A: SubsetSpec, B: SubsetSpec) -> list[Element]:
        return [
            a for a in self.I if a not in A or _translate(group, a, self.x, self.side) not in B
        ]


def certify(
    group: Group, I: Iterable[Element], x: Element, side: WitnessSide, A: SubsetSpec, B: SubsetSpec
) -> WitnessCertificate:
    cert = WitnessCertificate(tuple(I), x, side)
    bad = cert.failures(group, A, B)
    if bad:
        raise CertificateError(f"{len(bad)} elements fail verification, e.g. {bad[0]!r}")
    return cert


@dataclass(frozen=True)
class NotFoundAtScale:
    r: int
    m: int
    best_size: int
    best_x: Element | None


def check_disjoint(group: Group, A: SubsetSpec, B: SubsetSpec, r: int) -> None:
    for g in window(group, r):
        if g in A and g in B:
            raise PartitionError(f"{group.format(g)} lies in both parts")


def witness_search(
    group: Group,
    A: SubsetSpec,
    B: SubsetSpec,
    r: int,
    m: int = DEFAULT_M,
    side: WitnessSide = WitnessSide.RIGHT,
) -> WitnessCertificate | NotFoundAtScale:
    """First x in window(r) (by radius, then canonical order) with |I| >= m."""
    if m < 1:
        raise ValueError("m must be positive")
    check_disjoint(group, A, B, r)
    W = window(group, r)
    A_W = [a for a in W if a in A]
    best_size, best_x = 0, None
    for x in W:
        I = [a for a in A_W if _translate(group, a, x, side) in B]
        if len(I) >= m:
            return certify(group, I, x, side, A, B)
        if len(I) > best_size:
            best_size, best_x = len(I), x
    return NotFoundAtScale(r, m, best_size, best_x)


def witness_search_either(
    group: Group, A: SubsetSpec, B: SubsetSpec, r: int, m: int = DEFAULT_M
) -> WitnessCertificate | NotFoundAtScale:
    """Like :func:`witness_search`, trying the right side then the left side at each x."""
    check_disjoint(group, A, B, r)
    W = window(group, r)
    A_W = [a for a in W if a in A]
    best_size, best_x = 0, None
    for x in W:
        for side in (WitnessSide.RIGHT, WitnessSide.LEFT):
            I = [a for a in A_W if _translate(group, a, x, side) in B]
            if len(I) >= m:
                return certify(group, I, x, side, A, B)
            if len(I) > best_size:
                best_size, best_x = len(I), x
    return NotFoundAtScale(r, m, best_size, best_x)


def certificate_profile(
    group: Group, A: SubsetSpec, B: SubsetSpec, x: Element, r: int, side: WitnessSide
) -> dict[int, int]:
    """R -> |{a in A n window(R) : translate of a by x lies in B}|."""
    return _cumulative(group, r, lambda a: a in A and _translate(group, a, x, side) in B)


# ---------------------------------------------------------------------------
# the cyclic-subgroup construction


@dataclass
class CaseReport:
    branch: str  # "i", "ii", "iii-A", "iii-B" or "none"
    certificate: WitnessCertificate | None
    j_plus: int
    j_minus: int
    orbit_size: int
    detail: dict = field(default_factory=dict)


def _has_infinite_order(group: Group, z: Element, bound: int) -> bool:
    g = z
    for _ in range(bound):
        if g == group.identity:
            return False
        g = group.mul(g, z)
    return True


def witness_via_cyclic(
    group: Group,
    z: Element,
    A: SubsetSpec,
    B: SubsetSpec,
    r: int,
    m: int = DEFAULT_M,
    order_bound: int = ORDER_BOUND,
) -> CaseReport:
    """Case analysis over the orbits of <z>, run on window(r).

    Branch i returns a right certificate (J+, z) or (J-, z^-1).  Branches ii
    and iii return left certificates x.I inside b.<z>.  Orbits a.<z> are
    enumerated for |k| <= 2r + 2.
    """
    if not _has_infinite_order(group, z, order_bound):
        raise FiniteOrderError(f"{group.format(z)} has finite order")
    W = window(group, r)
    Wset = set(W)
    for g in W:
        if (g in A) == (g in B):
            raise PartitionError(f"{group.format(g)} is not in exactly one part")
    zi = group.inv(z)
    A_W = [a for a in W if a in A]
    j_plus = [a for a in A_W if group.mul(a, z) in B]
    j_minus = [a for a in A_W if group.mul(a, zi) in B]
    if len(j_plus) >= m:
        cert = certify(group, j_plus, z, WitnessSide.RIGHT, A, B)
        return CaseReport("i", cert, len(j_plus), len(j_minus), 0)
    if len(j_minus) >= m:
        cert = certify(group, j_minus, zi, WitnessSide.RIGHT, A, B)
        return CaseReport("i", cert, len(j_plus), len(j_minus), 0)

    K = 2 * r + 2
    powers = [group.power(z, k) for k in range(-K, K + 1)]

    def orbit(a):
        return [p for p in (group.mul(a, q) for q in powers) if p in Wset]

    J = set(j_plus) | set(j_minus)
    orbit_union = {g for j in J for g in orbit(j)}
    free_A = [a for a in A_W if a not in orbit_union]
    free_B = [b for b in W if b in B and b not in orbit_union]
    base = (len(j_plus), len(j_minus), len(orbit_union))

    if free_A and free_B:
        a, b = free_A[0], free_B[0]
        I = [g for g in orbit(a) if g in A]
        x = group.mul(b, group.inv(a))
        return _left_case("ii", group, I, x, A, B, m, base, {"a": a, "b": b})
    if not free_A and free_B:
        a = max(A_W, key=lambda g: sum(1 for h in orbit(g) if h in A))
        b = free_B[0]
        I = [g for g in orbit(a) if g in A]
        x = group.mul(b, group.inv(a))
        return _left_case("iii-A", group, I, x, A, B, m, base, {"a": a, "b": b})
    if free_A and not free_B:
        B_W = [g for g in W if g in B]
        b = max(B_W, key=lambda g: sum(1 for h in orbit(g) if h in B))
        a = free_A[0]
        shift = group.mul(a, group.inv(b))
        I = [group.mul(shift, g) for g in orbit(b) if g in B]
        x = group.mul(b, group.inv(a))
        return _left_case("iii-B", group, I, x, A, B, m, base, {"a": a, "b": b})
    return CaseReport("none", None, *base, {"reason": "both parts covered by the J-orbits"})


def _left_case(branch, group, I, x, A, B, m, base, detail) -> CaseReport:
    cert = WitnessCertificate(tuple(I), x, WitnessSide.LEFT)
    bad = cert.failures(group, A, B)
    detail = dict(detail, size=len(I), failures=len(bad))
    if bad or len(I) < m:
        return CaseReport(branch, None, *base, detail)
    return CaseReport(branch, cert, *base, detail)


# ---------------------------------------------------------------------------
# seeded partitions


@dataclass(frozen=True)
class Partition:
    name: str
    A: SubsetSpec
    B: SubsetSpec


def _hash_bit(seed: int, g: Element) -> int:
    digest = hashlib.blake2b(f"{seed}:{g!r}".encode(), digest_size=8).digest()
    return digest[0] & 1


def hash_partition(seed: int) -> Partition:
    member = lambda g: _hash_bit(seed, g) == 0
    A = custom(f"hash{seed}", member)
    return Partition(A.name, A, A.complement())


def random_partitions(group: Group, count: int, seed: int = 0) -> list[Partition]:
    """Seeded partitions whose parts are both unbounded at the tested radii.

    Z^n gets half-spaces, hash scatterings and length parity; free groups get
    hash scatterings, prefix and suffix classes and length parity; chain
    groups get annulus-parity block unions.
    """
    rng = random.Random(seed)
    out: list[Partition] = []
    if group.has_chain:
        depth = group.depth
        for i in range(count):
            bits = {n: rng.randrange(2) for n in range(1, depth + 3)}
            bits[depth] = 1 - bits[depth - 1]
            bits[depth + 2] = 1 - bits[depth + 1]
            A = annulus_parity(group, bits, f"annulus{seed}.{i}")
            out.append(Partition(A.name, A, A.complement()))
        return out
    letters = [g for g in group.gens]
    for i in range(count):
        kind = i % 4
        if kind == 0:
            out.append(hash_partition(rng.randrange(2**32)))
            continue
        if kind == 1:
            A = length_parity(group, rng.randrange(2))
        elif hasattr(group, "n") and group.name.startswith("Z"):
            while True:
                normal = tuple(rng.randint(-3, 3) for _ in range(group.n))
                if any(normal):
                    break
            A = halfspace(normal, rng.randint(-3, 3))
        else:
            chosen = rng.sample(letters, rng.randint(1, len(letters) - 1))
            letters_in = frozenset(c[0] for c in chosen)
            if kind == 2:
                A = custom(f"prefix{sorted(letters_in)}", lambda g, L=letters_in: bool(g) and g[0] in L)
            else:
                A = custom(f"suffix{sorted(letters_in)}", lambda g, L=letters_in: bool(g) and g[-1] in L)
        out.append(Partition(A.name, A, A.complement()))
    return out


# ---------------------------------------------------------------------------
# consistency


class Flag(enum.Enum):
    CONSISTENT = "CONSISTENT"
    INCONSISTENT = "INCONSISTENT"
    REJECTED = "REJECTED"


@dataclass
class PartitionCheck:
    name: str
    flag: Flag
    result: WitnessCertificate | NotFoundAtScale | None = None
    almost_stable: bool | None = None
    size: SizeClass | None = None
    scaling_x: list[Element] = field(default_factory=list)
    max_bounded_size: int = 0
    reasons: list[str] = field(default_factory=list)

    @property
    def best_size(self) -> int:
        return self.result.size if isinstance(self.result, WitnessCertificate) else 0


@dataclass
class ConsistencyReport:
    group: str
    flexibility: Flexibility
    r: int
    m: int
    checks: list[PartitionCheck]

    @property
    def inconsistent(self) -> int:
        return sum(c.flag is Flag.INCONSISTENT for c in self.checks)


def _scaling_translates(
    group: Group, A: SubsetSpec, B: SubsetSpec, r: int
) -> tuple[list[Element], int]:
    """Translates x whose certificate size still changes across the outer radii."""
    scaling, top = [], 0
    for x in window(group, r - 1):
        lo = radius_of(group, x) + 1
        for side in WitnessSide:
            prof = certificate_profile(group, A, B, x, r, side)
            tail = [prof[R] for R in range(lo, r + 1)]
            if len(set(tail[-2:])) > 1:
                scaling.append(x)
                break
            top = max(top, tail[-1])
    return scaling, top


def check_partition(group: Group, part: Partition, r: int, m: int = DEFAULT_M) -> PartitionCheck:
    A, B = part.A, part.B
    check = PartitionCheck(part.name, Flag.CONSISTENT)
    if not (meets_outer(group, A.membership, r) and meets_outer(group, B.membership, r)):
        check.flag = Flag.REJECTED
        check.reasons.append("a part is bounded at scale; not a flexibility instance")
        return check
    check.result = witness_search_either(group, A, B, r, m)
    # chain windows need two spare levels above the deepest generator
    r_cls = r + 2 if group.has_chain else r
    verdict = classify_almost_stable(group, A, r_cls, sides=("right", "left"))
    check.almost_stable = verdict.almost_stable
    check.size = verdict.size
    flexible = group.flexibility is Flexibility.FLEXIBLE
    if flexible and check.best_size < m:
        check.flag = Flag.INCONSISTENT
        check.reasons.append(f"flexible group but no certificate of size >= {m}")
    if verdict.almost_stable and verdict.size is SizeClass.PROPER:
        if flexible:
            check.flag = Flag.INCONSISTENT
            check.reasons.append("flexible group with a proper almost-stable part")
        check.scaling_x, check.max_bounded_size = _scaling_translates(group, A, B, r)
        if check.scaling_x:
            check.flag = Flag.INCONSISTENT
            check.reasons.append("almost-stable part with certificates that grow with scale")
    return check


def flexibility_consistency(
    group: Group, partitions: list[Partition], r: int, m: int = DEFAULT_M
) -> ConsistencyReport:
    """Cross-check witness searches against almost-stability on every partition.

    Certificates on either side count: the right-sided search alone misses
    prefix classes in free groups, which are right almost-stable.
    """
    checks = [check_partition(group, p, r, m) for p in partitions]
    return ConsistencyReport(group.name, group.flexibility, r, m, checks)
