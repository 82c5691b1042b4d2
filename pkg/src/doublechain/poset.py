"""Finite strict partial orders stored as transitively closed bitmask relations.

Element ``a`` of a poset with ``size`` elements is the integer ``a``; ``up[a]``
is a bitmask whose bit ``b`` is set iff ``a < b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence


class PosetError(ValueError):
    """Raised for malformed posets or failed composition preconditions."""


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Poset:
    size: int
    up: tuple[int, ...]
    level_hint: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.size < 1:
            raise PosetError("a poset needs at least one element")
        if len(self.up) != self.size:
            raise PosetError(f"relation rows: expected {self.size}, got {len(self.up)}")
        full = (1 << self.size) - 1
        for row in self.up:
            if row & ~full:
                raise PosetError("relation row refers to an element out of range")

    @classmethod
    def from_relations(cls, size: int, pairs: Iterable[tuple[int, int]],
                       level_hint: Sequence[int] | None = None) -> Poset:
        """Build the transitive closure of the generating pairs ``a < b``.

        Raises PosetError on out-of-range indices or a cycle.
        """
        up = [0] * size
        for a, b in pairs:
            if not (0 <= a < size and 0 <= b < size):
                raise PosetError(f"relation {a} < {b} out of range for {size} elements")
            up[a] |= 1 << b
        up = _close(up)
        for a in range(size):
            if up[a] >> a & 1:
                raise PosetError(f"relations contain a cycle through element {a}")
        hint = tuple(level_hint) if level_hint is not None else None
        return cls(size, tuple(up), hint)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[bool]]) -> Poset:
        n = len(matrix)
        pairs = [(a, b) for a in range(n) for b in range(n) if matrix[a][b]]
        return cls.from_relations(n, pairs)

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * self.size
        for a, row in enumerate(self.up):
            for b in iter_bits(row):
                down[b] |= 1 << a
        return tuple(down)

    def lt(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    def comparable(self, a: int, b: int) -> bool:
        return self.lt(a, b) or self.lt(b, a)

    def matrix(self) -> list[list[bool]]:
        return [[bool(row >> b & 1) for b in range(self.size)] for row in self.up]

    def relations(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.size) for b in iter_bits(self.up[a])]

    @property
    def n_relations(self) -> int:
        return sum(row.bit_count() for row in self.up)

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        # a < b implies down(a) is a proper subset of down(b)
        return tuple(sorted(range(self.size), key=lambda a: (self.down[a].bit_count(), a)))

    @cached_property
    def depths(self) -> tuple[int, ...]:
        """Number of elements in a longest chain ending at each element, minus one."""
        depth = [0] * self.size
        for a in self.linear_extension:
            for b in iter_bits(self.down[a]):
                depth[a] = max(depth[a], depth[b] + 1)
        return tuple(depth)

    @cached_property
    def heights(self) -> tuple[int, ...]:
        height = [0] * self.size
        for a in reversed(self.linear_extension):
            for b in iter_bits(self.up[a]):
                height[a] = max(height[a], height[b] + 1)
        return tuple(height)

    def validate(self) -> None:
        """Check irreflexivity, asymmetry and transitivity; raise PosetError otherwise."""
        for a in range(self.size):
            if self.lt(a, a):
                raise PosetError(f"element {a} is below itself")
            for b in iter_bits(self.up[a]):
                if self.lt(b, a):
                    raise PosetError(f"elements {a} and {b} are mutually below each other")
                if self.up[b] & ~self.up[a]:
                    c = next(iter_bits(self.up[b] & ~self.up[a]))
                    raise PosetError(f"not transitive: {a} < {b} < {c} but not {a} < {c}")

    def __str__(self) -> str:
        return f"Poset(size={self.size}, relations={self.n_relations})"


def _close(up: list[int]) -> list[int]:
    up = list(up)
    n = len(up)
    for k in range(n):
        bit = 1 << k
        row_k = up[k]
        for i in range(n):
            if up[i] & bit:
                up[i] |= row_k
    return up


# Level sizes, bottom to top; every element is below every element of a higher level.
BASE_LEVELS: dict[str, tuple[int, ...]] = {
    "E": (1,),
    "B": (2, 2),
    "D3": (1, 3, 1),
    "Q": (2, 3, 2),
    "R": (1, 4, 4, 1),
    "S": (1, 4, 2),
    "S'": (2, 4, 1),
}
BASE_NAMES = tuple(BASE_LEVELS)
ALIASES = {"Sp": "S'", "D_3": "D3"}


def canonical_base_name(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in BASE_LEVELS:
        raise PosetError(f"unknown base poset {name!r}; expected one of {', '.join(BASE_NAMES)}")
    return name


def levelled(sizes: Sequence[int]) -> Poset:
    """Poset whose elements are grouped in levels, each level below all higher levels."""
    if not sizes or any(s < 1 for s in sizes):
        raise PosetError("level sizes must be positive")
    hint: list[int] = []
    for level, s in enumerate(sizes):
        hint.extend([level] * s)
    total = len(hint)
    up = tuple(
        sum(1 << b for b in range(total) if hint[b] > hint[a])
        for a in range(total)
    )
    return Poset(total, up, tuple(hint))


def base_poset(name: str) -> Poset:
    return levelled(BASE_LEVELS[canonical_base_name(name)])


def chain(k: int) -> Poset:
    """The path poset with k elements, 0 < 1 < ... < k-1."""
    return levelled([1] * k)


def antichain(k: int) -> Poset:
    return Poset(k, (0,) * k, (0,) * k)


def oplus(p1: Poset, p2: Poset) -> Poset:
    """Linear sum: every element of p1 is put below every element of p2."""
    n1 = p1.size
    top = ((1 << p2.size) - 1) << n1
    up = tuple(row | top for row in p1.up) + tuple(row << n1 for row in p2.up)
    return Poset(n1 + p2.size, up, _join_hints(p1, p2, shift=1))


def otimes(p1: Poset, p2: Poset) -> Poset:
    """Glue the greatest element of p1 to the least element of p2.

    p1 keeps its indices; the other elements of p2 follow in their order.
    """
    g = greatest_element(p1)
    if g is None:
        raise PosetError("left operand of the gluing has no greatest element")
    low = least_element(p2)
    if low is None:
        raise PosetError("right operand of the gluing has no least element")
    n1 = p1.size
    index = {low: g}
    nxt = n1
    for b in range(p2.size):
        if b != low:
            index[b] = nxt
            nxt += 1
    pairs = p1.relations() + [(index[a], index[b]) for a, b in p2.relations()]
    return Poset.from_relations(n1 + p2.size - 1, pairs, _join_hints(p1, p2, shift=0, drop=low))


def _join_hints(p1: Poset, p2: Poset, shift: int, drop: int | None = None) -> tuple[int, ...] | None:
    if p1.level_hint is None or p2.level_hint is None:
        return None
    offset = max(p1.level_hint) + shift
    rest = [h + offset for b, h in enumerate(p2.level_hint) if b != drop]
    return p1.level_hint + tuple(rest)


def greatest_element(p: Poset) -> int | None:
    others = (1 << p.size) - 1
    for a in range(p.size):
        if p.down[a] == others & ~(1 << a):
            return a
    return None


def least_element(p: Poset) -> int | None:
    others = (1 << p.size) - 1
    for a in range(p.size):
        if p.up[a] == others & ~(1 << a):
            return a
    return None


def longest_chain(p: Poset) -> int:
    return max(p.depths) + 1


def b_value(p: Poset) -> Fraction:
    return Fraction(p.size + longest_chain(p), 2) - 1


def dual(p: Poset) -> Poset:
    hint = None
    if p.level_hint is not None:
        top = max(p.level_hint)
        hint = tuple(top - h for h in p.level_hint)
    return Poset(p.size, p.down, hint)


def is_path(p: Poset) -> bool:
    return longest_chain(p) == p.size


ISOMORPHISM_LIMIT = 32


def is_isomorphic(p1: Poset, p2: Poset, limit: int = ISOMORPHISM_LIMIT) -> bool:
    """Decide order-isomorphism by signature-filtered backtracking."""
    if max(p1.size, p2.size) > limit:
        raise PosetError(f"isomorphism check limited to {limit} elements")
    if p1.size != p2.size or p1.n_relations != p2.n_relations:
        return False
    sig1 = _signatures(p1)
    sig2 = _signatures(p2)
    if sorted(sig1) != sorted(sig2):
        return False
    order = p1.linear_extension
    image = [-1] * p1.size

    def extend(pos: int, used: int) -> bool:
        if pos == len(order):
            return True
        a = order[pos]
        for h in range(p2.size):
            if used >> h & 1 or sig2[h] != sig1[a]:
                continue
            if all(p1.lt(b, a) == p2.lt(image[b], h) and p1.lt(a, b) == p2.lt(h, image[b])
                   for b in order[:pos]):
                image[a] = h
                if extend(pos + 1, used | 1 << h):
                    return True
        image[a] = -1
        return False

    return extend(0, 0)


def _signatures(p: Poset) -> list[tuple[int, int, int, int]]:
    return [(p.depths[a], p.heights[a], p.down[a].bit_count(), p.up[a].bit_count())
            for a in range(p.size)]


def parse_poset_text(text: str) -> Poset:
    """Parse ``poset <n>`` followed by ``a < b`` lines (0-based, generating relations)."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise PosetError("empty poset description")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "poset" or not head[1].isdigit():
        raise PosetError(f"expected header 'poset <n>', got {lines[0]!r}")
    size = int(head[1])
    pairs = []
    for ln in lines[1:]:
        parts = ln.split("<")
        if len(parts) != 2:
            raise PosetError(f"expected 'a < b', got {ln!r}")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise PosetError(f"expected integer indices in {ln!r}") from None
    return Poset.from_relations(size, pairs)


def format_poset_text(p: Poset) -> str:
    lines = [f"poset {p.size}"]
    lines += [f"{a} < {b}" for a, b in p.relations()]
    return "\n".join(lines) + "\n"


def load_poset(path: str | Path) -> Poset:
    return parse_poset_text(Path(path).read_text())
