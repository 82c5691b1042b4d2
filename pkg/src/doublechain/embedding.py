"""Weak-subposet containment by backtracking over bitmask candidate sets.

A weak embedding of ``pattern`` into ``host`` is an injective map ``f`` with
``a < b`` in the pattern implying ``f(a) < f(b)`` in the host. The host may
have extra relations.
"""

from __future__ import annotations

from .family import Family
from .poset import Poset, iter_bits

Embedding = dict[int, int]


def _static_candidates(pattern: Poset, host: Poset) -> list[int]:
    # Sound filters: a chain of length d below a maps to a chain below f(a),
    # and d distinct elements below a map to d distinct elements below f(a).
    h_down = [host.down[h].bit_count() for h in range(host.size)]
    h_up = [host.up[h].bit_count() for h in range(host.size)]
    h_depth, h_height = host.depths, host.heights
    out = []
    for a in range(pattern.size):
        nd, nu = pattern.down[a].bit_count(), pattern.up[a].bit_count()
        dd, hh = pattern.depths[a], pattern.heights[a]
        mask = 0
        for h in range(host.size):
            if h_down[h] >= nd and h_up[h] >= nu and h_depth[h] >= dd and h_height[h] >= hh:
                mask |= 1 << h
        out.append(mask)
    return out


def embeds_weak(pattern: Poset, host: Poset, *, must_use: int | None = None,
                first_choices: int | None = None) -> Embedding | None:
    """Return a weak embedding of pattern into host, or None if there is none.

    ``must_use`` restricts the search to embeddings whose image contains that
    host element. ``first_choices`` is a host bitmask restricting the image of
    the first pattern element placed; it is only sound when every orbit of the
    host's automorphism group meets the mask (e.g. one member per level of a
    levels family).
    """
    if pattern.size > host.size:
        return None
    cand = _static_candidates(pattern, host)
    return search(pattern, host.up, host.down, cand, must_use=must_use,
                  first_choices=first_choices)


def count_candidates(pattern: Poset, h_up: list[int] | tuple[int, ...],
                     h_down: list[int] | tuple[int, ...]) -> list[int]:
    """Cheaper static filter using only comparability counts."""
    h_nu = [row.bit_count() for row in h_up]
    h_nd = [row.bit_count() for row in h_down]
    out = []
    for a in range(pattern.size):
        nu, nd = pattern.up[a].bit_count(), pattern.down[a].bit_count()
        mask = 0
        for h in range(len(h_up)):
            if h_nu[h] >= nu and h_nd[h] >= nd:
                mask |= 1 << h
        out.append(mask)
    return out


def search(pattern: Poset, h_up, h_down, cand: list[int], *, must_use: int | None = None,
           first_choices: int | None = None) -> Embedding | None:
    """Backtracking core over host relation bitmasks and per-element candidate masks.

    The next pattern element is always one with the fewest remaining candidates.
    """
    k = pattern.size
    if k > len(h_up) or any(c == 0 for c in cand):
        return None
    p_up, p_down = pattern.up, pattern.down
    # tie-break: more comparabilities first, then lower index
    degree = [p_up[a].bit_count() + p_down[a].bit_count() for a in range(k)]
    image = [-1] * k

    def place(cands: list[int], a: int, h: int) -> list[int] | None:
        new = list(cands)
        new[a] = 0
        clear = ~(1 << h)
        for b in range(k):
            if image[b] >= 0 or b == a:
                continue
            c = new[b] & clear
            if p_up[a] >> b & 1:
                c &= h_up[h]
            elif p_down[a] >> b & 1:
                c &= h_down[h]
            if not c:
                return None
            new[b] = c
        return new

    def extend(cands: list[int], placed: int, restrict: int | None) -> bool:
        if placed == k:
            return True
        best, best_key = -1, None
        union = 0
        for a in range(k):
            if image[a] >= 0:
                continue
            union |= cands[a]
            key = (cands[a].bit_count(), -degree[a], a)
            if best_key is None or key < best_key:
                best, best_key = a, key
        if union.bit_count() < k - placed:
            return False
        options = cands[best]
        if restrict is not None:
            options &= restrict
        for h in iter_bits(options):
            nxt = place(cands, best, h)
            if nxt is None:
                continue
            image[best] = h
            if extend(nxt, placed + 1, None):
                return True
            image[best] = -1
        return False

    if must_use is not None:
        for a in sorted(range(k), key=lambda a: (-degree[a], a)):
            if not cand[a] >> must_use & 1:
                continue
            start = place(cand, a, must_use)
            if start is None:
                continue
            image[a] = must_use
            if extend(start, 1, None):
                return dict(enumerate(image))
            image[a] = -1
        return None

    if extend(cand, 0, first_choices):
        return dict(enumerate(image))
    return None


def check_embedding(pattern: Poset, host: Poset, mapping: Embedding) -> bool:
    """Independent validator: total, injective and order-preserving."""
    if sorted(mapping) != list(range(pattern.size)):
        return False
    images = list(mapping.values())
    if len(set(images)) != len(images) or not all(0 <= h < host.size for h in images):
        return False
    return all(host.lt(mapping[a], mapping[b])
               for a in range(pattern.size) for b in range(pattern.size)
               if pattern.lt(a, b))


def family_poset(f: Family) -> Poset:
    """Members of the family ordered by strict inclusion, in member order."""
    members = f.members
    size = len(members)
    if size == 0:
        raise ValueError("the empty family has no poset")
    up = []
    for i, a in enumerate(members):
        row = 0
        for j in range(i + 1, size):
            b = members[j]
            if a & b == a and a != b:
                row |= 1 << j
        up.append(row)
    return Poset(size, tuple(up))


def _level_reps(f: Family) -> int:
    seen: set[int] = set()
    reps = 0
    for i, m in enumerate(f.members):
        size = m.bit_count()
        if size not in seen:
            seen.add(size)
            reps |= 1 << i
    return reps


def find_in_family(f: Family, pattern: Poset, *, must_use: int | None = None,
                   symmetric: bool = False) -> dict[int, int] | None:
    """Embedding of pattern into the family as a map pattern element -> member mask.

    ``symmetric=True`` asserts the family is closed under permutations of [n]
    (a union of full levels) and enables symmetry breaking.
    """
    if len(f) == 0:
        return None
    host = family_poset(f)
    first = _level_reps(f) if symmetric else None
    index = None if must_use is None else f.members.index(must_use)
    mapping = embeds_weak(pattern, host, must_use=index, first_choices=first)
    if mapping is None:
        return None
    return {a: f.members[h] for a, h in mapping.items()}


def is_p_free(f: Family, pattern: Poset, *, symmetric: bool = False) -> bool:
    return find_in_family(f, pattern, symmetric=symmetric) is None


def check_family_embedding(f: Family, pattern: Poset, mapping: dict[int, int]) -> bool:
    """Validate a pattern -> member-mask map directly against set inclusion."""
    if sorted(mapping) != list(range(pattern.size)):
        return False
    images = list(mapping.values())
    members = set(f.members)
    if len(set(images)) != len(images) or not all(m in members for m in images):
        return False
    for a, b in pattern.relations():
        x, y = mapping[a], mapping[b]
        if x & y != x or x == y:
            return False
    return True
