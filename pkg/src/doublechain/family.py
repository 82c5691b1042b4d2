"""Families of subsets of [n] as sorted tuples of bitmasks.

Element ``i`` of [n] (1-based) is bit ``i-1`` of a mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable

MAX_N = 64


class FamilyError(ValueError):
    pass


def _mask_key(mask: int) -> tuple[int, int]:
    return (mask.bit_count(), mask)


@dataclass(frozen=True)
class Family:
    n: int
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        check_ground_size(self.n)
        full = (1 << self.n) - 1
        for mask in self.members:
            if mask < 0 or mask & ~full:
                raise FamilyError(f"member {mask:#x} does not fit in [{self.n}]")
        if len(set(self.members)) != len(self.members):
            raise FamilyError("duplicate members")
        if list(self.members) != sorted(self.members, key=_mask_key):
            raise FamilyError("members must be sorted by (size, mask); use Family.of")

    @classmethod
    def of(cls, n: int, masks: Iterable[int]) -> Family:
        """Family from masks in any order; duplicates are merged."""
        return cls(n, tuple(sorted(set(masks), key=_mask_key)))

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> Family:
        return cls.of(n, (set_to_mask(s, n) for s in sets))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, mask: int) -> bool:
        return mask in set(self.members)

    def sets(self) -> list[frozenset[int]]:
        return [mask_to_set(m) for m in self.members]

    def complement(self) -> Family:
        full = (1 << self.n) - 1
        return Family.of(self.n, (full ^ m for m in self.members))

    def union(self, other: Family) -> Family:
        if other.n != self.n:
            raise FamilyError("families over different ground sets")
        return Family.of(self.n, self.members + other.members)

    def lift(self, n: int) -> Family:
        """The same subsets regarded as subsets of a larger ground set."""
        if n < self.n:
            raise FamilyError("cannot shrink the ground set")
        return Family(n, self.members)


def check_ground_size(n: int) -> None:
    if not 0 <= n <= MAX_N:
        raise FamilyError(f"ground-set size must be between 0 and {MAX_N}, got {n}")


def set_to_mask(elements: Iterable[int], n: int) -> int:
    mask = 0
    for i in elements:
        if not 1 <= i <= n:
            raise FamilyError(f"element {i} is not in [{n}]")
        mask |= 1 << (i - 1)
    return mask


def mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def format_set(mask: int) -> str:
    return "{" + ",".join(str(i) for i in sorted(mask_to_set(mask))) + "}"


def sigma(n: int, m: int) -> int:
    """Sum of the m largest binomial coefficients C(n, i).

    Zero for m = 0 and 2**n once m reaches n + 1.
    """
    if n < 0 or m < 0:
        raise FamilyError("sigma needs n >= 0 and m >= 0")
    if m == 0:
        return 0
    if m >= n + 1:
        return 1 << n
    lo, hi = (n - m + 1) // 2, (n + m - 1) // 2
    return sum(comb(n, i) for i in range(lo, hi + 1))


def level(n: int, size: int) -> list[int]:
    return sorted((sum(1 << i for i in c) for c in combinations(range(n), size)))


def levels_family(n: int, k: int, m: int) -> Family:
    """All subsets of [n] with size in k, k+1, ..., k+m-1."""
    check_ground_size(n)
    if m < 1 or k < 0 or k + m - 1 > n:
        raise FamilyError(f"levels {k}..{k + m - 1} are not all within 0..{n}")
    members: list[int] = []
    for size in range(k, k + m):
        members.extend(level(n, size))
    return Family(n, tuple(members))


def middle_levels_family(n: int, m: int) -> Family:
    if not 1 <= m <= n + 1:
        raise FamilyError(f"need 1 <= m <= n+1, got m={m}, n={n}")
    return levels_family(n, (n - m + 1) // 2, m)


def power_set(n: int) -> Family:
    return levels_family(n, 0, n + 1)


def parse_family_text(text: str) -> Family:
    """Parse ``family <n>`` followed by one ``{i,j,...}`` set per line (1-based)."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise FamilyError("empty family description")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "family" or not head[1].isdigit():
        raise FamilyError(f"expected header 'family <n>', got {lines[0]!r}")
    n = int(head[1])
    masks = []
    for ln in lines[1:]:
        if not (ln.startswith("{") and ln.endswith("}")):
            raise FamilyError(f"expected a set literal like {{1,2}}, got {ln!r}")
        body = ln[1:-1].strip()
        try:
            elements = [int(tok) for tok in body.split(",")] if body else []
        except ValueError:
            raise FamilyError(f"non-integer element in {ln!r}") from None
        mask = set_to_mask(elements, n)
        if mask in masks:
            raise FamilyError(f"duplicate member {ln!r}")
        masks.append(mask)
    return Family.of(n, masks)


def format_family_text(f: Family) -> str:
    return "\n".join([f"family {f.n}"] + [format_set(m) for m in f.members]) + "\n"


def load_family(path: str | Path) -> Family:
    return parse_family_text(Path(path).read_text())
