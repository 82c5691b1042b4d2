"""Brute-force reference computations, independent of the package internals."""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations, permutations
from math import comb

from doublechain.expr import Base, Oplus, Otimes
from doublechain.poset import Poset, greatest_element, least_element
from doublechain.expr import eval_expr


def brute_embeds(pattern_lt, k: int, host_lt, h: int) -> bool:
    """Try every injective map; *_lt are callables (a, b) -> bool."""
    if k > h:
        return False
    pairs = [(a, b) for a in range(k) for b in range(k) if pattern_lt(a, b)]
    for image in permutations(range(h), k):
        if all(host_lt(image[a], image[b]) for a, b in pairs):
            return True
    return False


def brute_embeds_poset(pattern: Poset, host: Poset) -> bool:
    return brute_embeds(pattern.lt, pattern.size, host.lt, host.size)


def brute_family_contains(masks, pattern: Poset) -> bool:
    masks = list(masks)

    def below(i, j):
        return masks[i] & masks[j] == masks[i] and masks[i] != masks[j]

    return brute_embeds(pattern.lt, pattern.size, below, len(masks))


def brute_la(n: int, pattern: Poset) -> int:
    """Maximum P-free family size by trying every family of subsets of [n]."""
    subsets = list(range(1 << n))
    for size in range(len(subsets), -1, -1):
        for fam in combinations(subsets, size):
            if not brute_family_contains(fam, pattern):
                return size
    return 0


def sigma_by_sort(n: int, m: int) -> int:
    row = sorted((comb(n, i) for i in range(n + 1)), reverse=True)
    return sum(row[:m])


def longest_chain_recursive(p: Poset) -> int:
    @lru_cache(maxsize=None)
    def longest_from(a: int) -> int:
        return 1 + max((longest_from(b) for b in range(p.size) if p.lt(a, b)), default=0)

    return max(longest_from(a) for a in range(p.size))


def random_poset(rng: random.Random, size: int, density: float) -> Poset:
    """Random order: random DAG on a shuffled labelling, then closure."""
    labels = list(range(size))
    rng.shuffle(labels)
    pairs = [(labels[i], labels[j]) for i in range(size) for j in range(i + 1, size)
             if rng.random() < density]
    return Poset.from_relations(size, pairs)


WITH_TOP = ("E", "D3", "R", "S'")
WITH_BOTTOM = ("E", "D3", "R", "S")
BASES = ("E", "B", "D3", "Q", "R", "S", "S'")


def random_expr(rng: random.Random, depth: int):
    """Well-formed random expression of depth at most ``depth``."""
    while True:
        e = _random_tree(rng, depth)
        try:
            eval_expr(e)
        except ValueError:
            continue
        return e


def _random_tree(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.25:
        return Base(rng.choice(BASES))
    left = _random_tree(rng, depth - 1)
    right = _random_tree(rng, depth - 1)
    if rng.random() < 0.5:
        return Oplus(left, right)
    lp, rp = eval_expr(left), eval_expr(right)
    if greatest_element(lp) is not None and least_element(rp) is not None:
        return Otimes(left, right)
    return Oplus(left, right)
