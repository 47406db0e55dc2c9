"""Group oracles for the fixed catalog.

Elements are plain tuples in a canonical form, so equality and hashing are
tuple equality and hashing:

============  ==========================================================
group         canonical form
============  ==========================================================
Z^n           integer vector ``(k1, ..., kn)``; Z is ``(k,)``
F_k           freely reduced word; letter ``i+1`` is generator i, ``-(i+1)``
              its inverse
Dinf          ``(k, e)`` standing for ``r^k s^e`` with ``e in {0, 1}``
Z x C_m       ``(k, c)`` with ``0 <= c < m``
DirSumC2      sorted tuple of support indices (0-based)
FinSym        images ``(p(0), ..., p(n))`` with trailing fixed points trimmed
C_m           ``(k,)`` with ``0 <= k < m``
Sym(n)        images ``(p(0), ..., p(n-1))``
============  ==========================================================

The canonical total order used for tie-breaking is Python tuple order.
"""
from __future__ import annotations

import enum
import itertools
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterator, Sequence

Element = tuple


class Flexibility(enum.Enum):
    FLEXIBLE = "Flexible"
    STABLE = "Stable"
    UNKNOWN = "Unknown"


class ParseError(ValueError):
    pass


class ChainError(ValueError):
    """Raised when a chain operation is requested on a group without a chain."""


class NotVirtuallyCyclic(ValueError):
    pass


@dataclass(frozen=True)
class CyclicStructure:
    """Decomposition ``g = z^k * t`` over an infinite cyclic normal subgroup."""

    axis: Element
    transversal: tuple[Element, ...]
    decompose: Callable[[Element], tuple[int, Element]]
    # sign of the conjugation action: g z g^-1 = z^orientation(g)
    orientation: Callable[[Element], int]


_TOKEN = re.compile(
    r"""\s*(?:
        (?P<tuple>\([^()]*\)) |
        (?P<list>\[[^\[\]]*\]) |
        (?P<int>[+-]?\d+) |
        (?P<name>[A-Za-z_][A-Za-z0-9_]*)(?:\s*\^\s*(?P<exp>[+-]?\d+))?
    )\s*$""",
    re.VERBOSE,
)


def _int_items(body: str) -> tuple[int, ...]:
    body = body.strip()
    if not body:
        return ()
    try:
        return tuple(int(part) for part in body.split(","))
    except ValueError:
        raise ParseError(f"malformed integer literal {body!r}") from None


class Group:
    """Base class for catalog oracles.

    Subclasses set ``name``, ``identity``, ``generators`` (a name -> element
    map of positive generators) and implement ``mul``, ``inv`` and
    ``_format``.  ``gens`` is the symmetric closure in a fixed order.
    """

    name: str
    identity: Element
    generators: dict[str, Element]
    flexibility: Flexibility = Flexibility.UNKNOWN
    order: int | None = None  # None means infinite
    depth: int | None = None  # chain depth, locally finite entries only

    def mul(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def inv(self, g: Element) -> Element:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    @property
    def has_chain(self) -> bool:
        return self.depth is not None

    @cached_property
    def gens(self) -> tuple[Element, ...]:
        out: list[Element] = []
        for g in self.generators.values():
            for h in (g, self.inv(g)):
                if h not in out:
                    out.append(h)
        return tuple(out)

    def power(self, g: Element, k: int) -> Element:
        if k < 0:
            g, k = self.inv(g), -k
        result, base = self.identity, g
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def product(self, items: Sequence[Element]) -> Element:
        result = self.identity
        for g in items:
            result = self.mul(result, g)
        return result

    # word length ---------------------------------------------------------

    @cached_property
    def _length_table(self) -> dict[Element, int]:
        if not self.is_finite:
            raise NotImplementedError(f"{self.name}: no closed-form word length")
        dist = {self.identity: 0}
        queue = deque([self.identity])
        while queue:
            g = queue.popleft()
            for s in self.gens:
                h = self.mul(g, s)
                if h not in dist:
                    dist[h] = dist[g] + 1
                    queue.append(h)
        return dist

    def word_length(self, g: Element) -> int:
        return self._length_table[g]

    # chains --------------------------------------------------------------

    def chain_level(self, g: Element) -> int:
        raise ChainError(f"{self.name} has no declared chain of finite subgroups")

    def chain_members(self, n: int) -> list[Element]:
        raise ChainError(f"{self.name} has no declared chain of finite subgroups")

    # virtually cyclic structure -------------------------------------------

    def cyclic_structure(self) -> CyclicStructure:
        raise NotVirtuallyCyclic(f"{self.name} is not a virtually cyclic catalog entry")

    # formatting / parsing -------------------------------------------------

    def format(self, g: Element) -> str:
        return self._format(self.validate(g))

    def _format(self, g: Element) -> str:
        raise NotImplementedError

    def validate(self, g: Element) -> Element:
        """Return ``g`` if it is a canonical element of this group, else raise."""
        return g

    def _literal(self, kind: str, text: str) -> Element:
        raise ParseError(f"{self.name} does not accept {kind} literals: {text!r}")

    def parse(self, expr: str) -> Element:
        factors = _split_top(expr, "*")
        if not factors or any(not f.strip() for f in factors):
            raise ParseError(f"malformed expression {expr!r}")
        result = self.identity
        for factor in factors:
            result = self.mul(result, self._parse_factor(factor))
        return result

    def _parse_factor(self, text: str) -> Element:
        m = _TOKEN.match(text)
        if m is None:
            raise ParseError(f"malformed factor {text!r}")
        if m["tuple"] is not None:
            return self._literal("tuple", m["tuple"])
        if m["list"] is not None:
            return self._literal("list", m["list"])
        if m["int"] is not None:
            return self._literal("int", m["int"])
        name = m["name"]
        if name == "e" and m["exp"] is None:
            return self.identity
        if name not in self.generators:
            raise ParseError(f"unknown generator {name!r} for {self.name}")
        exp = int(m["exp"]) if m["exp"] is not None else 1
        return self.power(self.generators[name], exp)

    def __repr__(self) -> str:
        return f"<group {self.name}>"


def _split_top(expr: str, sep: str) -> list[str]:
    """Split on ``sep`` outside of brackets."""
    parts, depth, cur = [], 0, []
    for ch in expr:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced brackets in {expr!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError(f"unbalanced brackets in {expr!r}")
    parts.append("".join(cur))
    return parts


def _word_format(pieces: list[tuple[str, int]]) -> str:
    if not pieces:
        return "e"
    return "*".join(name if k == 1 else f"{name}^{k}" for name, k in pieces)


# ---------------------------------------------------------------------------
# infinite groups


class FreeAbelian(Group):
    def __init__(self, n: int):
        if n < 1:
            raise ValueError("rank must be positive")
        self.n = n
        self.name = "Z" if n == 1 else f"Z^{n}"
        self.identity = (0,) * n
        names = "xyz" if n <= 3 else [f"x{i + 1}" for i in range(n)]
        if n == 1:
            names = ["t"]
        self.generators = {
            names[i]: tuple(int(i == j) for j in range(n)) for i in range(n)
        }
        self.flexibility = Flexibility.STABLE if n == 1 else Flexibility.FLEXIBLE

    def mul(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        return tuple(-a for a in g)

    def word_length(self, g):
        return sum(abs(a) for a in g)

    def validate(self, g):
        if not (isinstance(g, tuple) and len(g) == self.n and all(isinstance(a, int) for a in g)):
            raise ValueError(f"{g!r} is not an element of {self.name}")
        return g

    def _format(self, g):
        if self.n == 1:
            return str(g[0])
        return "(" + ",".join(map(str, g)) + ")"

    def _literal(self, kind, text):
        if kind == "int" and self.n == 1:
            return (int(text),)
        if kind == "tuple":
            items = _int_items(text[1:-1])
            if len(items) != self.n:
                raise ParseError(f"{self.name} expects {self.n} coordinates, got {len(items)}")
            return items
        return super()._literal(kind, text)

    def cyclic_structure(self):
        if self.n != 1:
            return super().cyclic_structure()
        return CyclicStructure(
            axis=(1,),
            transversal=((0,),),
            decompose=lambda g: (g[0], (0,)),
            orientation=lambda g: 1,
        )


_FREE_NAMES = "abcdfghijklmnopqrsuvwxyz"


class FreeGroup(Group):
    def __init__(self, k: int):
        if not 1 <= k <= len(_FREE_NAMES):
            raise ValueError(f"free rank must be in 1..{len(_FREE_NAMES)}")
        self.k = k
        self.name = f"F{k}"
        self.identity = ()
        self.generators = {_FREE_NAMES[i]: (i + 1,) for i in range(k)}
        self.flexibility = Flexibility.FLEXIBLE if k >= 2 else Flexibility.STABLE

    def mul(self, g, h):
        i = 0
        n = min(len(g), len(h))
        while i < n and g[-1 - i] == -h[i]:
            i += 1
        return g[: len(g) - i] + h[i:]

    def inv(self, g):
        return tuple(-a for a in reversed(g))

    def word_length(self, g):
        return len(g)

    def validate(self, g):
        ok = isinstance(g, tuple) and all(
            isinstance(a, int) and a != 0 and abs(a) <= self.k for a in g
        )
        if not ok or any(a == -b for a, b in zip(g, g[1:])):
            raise ValueError(f"{g!r} is not a reduced word of {self.name}")
        return g

    def _format(self, g):
        pieces: list[tuple[str, int]] = []
        for a in g:
            name = _FREE_NAMES[abs(a) - 1]
            step = 1 if a > 0 else -1
            if pieces and pieces[-1][0] == name:
                pieces[-1] = (name, pieces[-1][1] + step)
            else:
                pieces.append((name, step))
        return _word_format(pieces)


class InfiniteDihedral(Group):
    """<r, s | s^2, srs = r^-1>; ``(k, e)`` is ``r^k s^e``."""

    name = "Dinf"
    identity = (0, 0)
    flexibility = Flexibility.STABLE

    def __init__(self):
        self.generators = {"r": (1, 0), "s": (0, 1)}

    def mul(self, g, h):
        k, e = g
        l, d = h
        return (k - l if e else k + l, e ^ d)

    def inv(self, g):
        k, e = g
        return g if e else (-k, 0)

    def word_length(self, g):
        return abs(g[0]) + g[1]

    def validate(self, g):
        if not (isinstance(g, tuple) and len(g) == 2 and g[1] in (0, 1)):
            raise ValueError(f"{g!r} is not an element of Dinf")
        return g

    def _format(self, g):
        k, e = g
        pieces = [("r", k)] if k else []
        if e:
            pieces.append(("s", 1))
        return _word_format(pieces)

    def cyclic_structure(self):
        return CyclicStructure(
            axis=(1, 0),
            transversal=((0, 0), (0, 1)),
            decompose=lambda g: (g[0], (0, g[1])),
            orientation=lambda g: -1 if g[1] else 1,
        )


class ZTimesCyclic(Group):
    """Z x C_m with generators t = (1, 0) and c = (0, 1)."""

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("m must be at least 2")
        self.m = m
        self.name = f"ZxC{m}"
        self.identity = (0, 0)
        self.generators = {"t": (1, 0), "c": (0, 1)}
        self.flexibility = Flexibility.STABLE

    def mul(self, g, h):
        return (g[0] + h[0], (g[1] + h[1]) % self.m)

    def inv(self, g):
        return (-g[0], -g[1] % self.m)

    def word_length(self, g):
        return abs(g[0]) + min(g[1], self.m - g[1])

    def validate(self, g):
        if not (isinstance(g, tuple) and len(g) == 2 and 0 <= g[1] < self.m):
            raise ValueError(f"{g!r} is not an element of {self.name}")
        return g

    def _format(self, g):
        return f"({g[0]},{g[1]})"

    def _literal(self, kind, text):
        if kind == "tuple":
            items = _int_items(text[1:-1])
            if len(items) != 2:
                raise ParseError(f"{self.name} expects 2 coordinates, got {len(items)}")
            return (items[0], items[1] % self.m)
        return super()._literal(kind, text)

    def cyclic_structure(self):
        return CyclicStructure(
            axis=(1, 0),
            transversal=tuple((0, c) for c in range(self.m)),
            decompose=lambda g: (g[0], (0, g[1])),
            orientation=lambda g: 1,
        )


class DirectSumC2(Group):
    """Countable direct sum of C2 with chain G_n = span(e_0, ..., e_{n-1})."""

    name = "DirSumC2"
    identity = ()
    flexibility = Flexibility.STABLE

    def __init__(self, depth: int = 8):
        if depth < 1:
            raise ValueError("depth must be positive")
        self.depth = depth
        self.generators = {f"e{i}": (i,) for i in range(depth)}

    def mul(self, g, h):
        return tuple(sorted(set(g).symmetric_difference(h)))

    def inv(self, g):
        return g

    def word_length(self, g):
        return len(g)

    def validate(self, g):
        if not (isinstance(g, tuple) and list(g) == sorted(set(g)) and all(i >= 0 for i in g)):
            raise ValueError(f"{g!r} is not a sorted support tuple")
        return g

    def _parse_factor(self, text):
        m = re.fullmatch(r"\s*e(\d+)(?:\s*\^\s*([+-]?\d+))?\s*", text)
        if m:
            return (int(m[1]),) if int(m[2] or 1) % 2 else ()
        return super()._parse_factor(text)

    def _format(self, g):
        return "*".join(f"e{i}" for i in g) if g else "e"

    def chain_level(self, g):
        return g[-1] + 1 if g else 0

    def chain_members(self, n):
        out = []
        for size in range(n + 1):
            out.extend(itertools.combinations(range(n), size))
        return out


def _perm_mul(p: Element, q: Element) -> Element:
    """Apply ``p`` first, then ``q``."""
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        j = p[i] if i < len(p) else i
        out.append(q[j] if j < len(q) else j)
    return tuple(out)


def _perm_inv(p: Element) -> Element:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def _trim(p: Element) -> Element:
    n = len(p)
    while n and p[n - 1] == n - 1:
        n -= 1
    return p[:n]


def _is_perm(p) -> bool:
    return isinstance(p, tuple) and sorted(p) == list(range(len(p)))


class FinitarySymmetric(Group):
    """Finitary permutations of {0, 1, 2, ...}; G_n = Sym({0, ..., n}).

    Products compose left to right: ``(p*q)(i) = q(p(i))``.
    """

    name = "FinSym"
    identity = ()
    flexibility = Flexibility.STABLE

    def __init__(self, depth: int = 8):
        if depth < 1:
            raise ValueError("depth must be positive")
        self.depth = depth
        self.generators = {}
        for i in range(depth):
            images = list(range(i + 2))
            images[i], images[i + 1] = i + 1, i
            self.generators[f"t{i}"] = tuple(images)

    def mul(self, g, h):
        return _trim(_perm_mul(g, h))

    def inv(self, g):
        return _perm_inv(g)

    def word_length(self, g):
        # Coxeter length for adjacent transpositions = number of inversions
        return sum(1 for i, j in itertools.combinations(range(len(g)), 2) if g[i] > g[j])

    def validate(self, g):
        if not _is_perm(g) or _trim(g) != g:
            raise ValueError(f"{g!r} is not a trimmed finitary permutation")
        return g

    def _literal(self, kind, text):
        if kind == "list":
            images = _int_items(text[1:-1])
            if not _is_perm(images):
                raise ParseError(f"{text!r} is not a permutation of 0..n-1")
            return _trim(images)
        return super()._literal(kind, text)

    def _format(self, g):
        return "[" + ",".join(map(str, g)) + "]" if g else "e"

    def chain_level(self, g):
        return len(g) - 1 if g else 0

    def chain_members(self, n):
        return sorted(_trim(p) for p in itertools.permutations(range(n + 1)))


# ---------------------------------------------------------------------------
# finite groups


class Cyclic(Group):
    def __init__(self, m: int):
        if m < 1:
            raise ValueError("order must be positive")
        self.m = m
        self.name = f"C{m}"
        self.order = m
        self.identity = (0,)
        self.generators = {"c": (1 % m,)}

    def mul(self, g, h):
        return ((g[0] + h[0]) % self.m,)

    def inv(self, g):
        return (-g[0] % self.m,)

    def word_length(self, g):
        return min(g[0], self.m - g[0])

    def validate(self, g):
        if not (isinstance(g, tuple) and len(g) == 1 and 0 <= g[0] < self.m):
            raise ValueError(f"{g!r} is not an element of {self.name}")
        return g

    def _literal(self, kind, text):
        if kind == "int":
            return (int(text) % self.m,)
        return super()._literal(kind, text)

    def _format(self, g):
        return str(g[0])


class Symmetric(Group):
    """Sym(n) on {0..n-1} generated by s = (0 1) and the n-cycle c."""

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("n must be at least 2")
        self.n = n
        self.name = f"Sym{n}"
        self.order = 1
        for i in range(2, n + 1):
            self.order *= i
        self.identity = tuple(range(n))
        swap = list(range(n))
        swap[0], swap[1] = 1, 0
        self.generators = {"s": tuple(swap), "c": tuple((i + 1) % n for i in range(n))}

    def mul(self, g, h):
        return tuple(h[i] for i in g)

    def inv(self, g):
        return _perm_inv(g)

    def validate(self, g):
        if not (_is_perm(g) and len(g) == self.n):
            raise ValueError(f"{g!r} is not an element of {self.name}")
        return g

    def _literal(self, kind, text):
        if kind == "list":
            images = _int_items(text[1:-1])
            if len(images) != self.n or not _is_perm(images):
                raise ParseError(f"{text!r} is not a permutation of 0..{self.n - 1}")
            return images
        return super()._literal(kind, text)

    def _format(self, g):
        return "[" + ",".join(map(str, g)) + "]"

    def elements(self) -> Iterator[Element]:
        return itertools.permutations(range(self.n))


# ---------------------------------------------------------------------------
# catalog

CATALOG = ("Z", "Z^2", "Z^3", "F2", "Dinf", "ZxC2", "ZxC6", "DirSumC2", "FinSym", "C12", "Sym5")

_SPEC = re.compile(
    r"^(?:(?P<zn>Z(?:\^(?P<n>\d+))?)|F(?P<k>\d+)|(?P<dinf>Dinf)|ZxC(?P<zm>\d+)"
    r"|(?P<dsum>DirSumC2)|(?P<fsym>FinSym)|C(?P<cm>\d+)|Sym(?P<sn>\d+))$"
)

_cache: dict[tuple[str, int], Group] = {}


def make_group(spec: str, depth: int = 8) -> Group:
    """Build (or fetch the cached) oracle for a catalog spec string."""
    key = (spec.strip(), depth)
    if key in _cache:
        return _cache[key]
    m = _SPEC.match(key[0])
    if m is None:
        raise ValueError(f"unknown group spec {spec!r}; expected one of {', '.join(CATALOG)}")
    if m["zn"]:
        group: Group = FreeAbelian(int(m["n"] or 1))
    elif m["k"]:
        group = FreeGroup(int(m["k"]))
    elif m["dinf"]:
        group = InfiniteDihedral()
    elif m["zm"]:
        group = ZTimesCyclic(int(m["zm"]))
    elif m["dsum"]:
        group = DirectSumC2(depth)
    elif m["fsym"]:
        group = FinitarySymmetric(depth)
    elif m["cm"]:
        group = Cyclic(int(m["cm"]))
    else:
        group = Symmetric(int(m["sn"]))
    _cache[key] = group
    return group


def parse_element(expr: str, group: Group) -> Element:
    return group.parse(expr)


def chain_level(g: Element, group: Group) -> int:
    return group.chain_level(g)


def sort_key(group: Group, g: Element) -> tuple[int, Hashable]:
    """Order by scale radius, then canonical form."""
    return (group.chain_level(g) if group.has_chain else group.word_length(g), g)
