"""Double chains, their counting identities, and the infinite double chain.

For a permutation of [n] the primary line is L_i = first i entries and the
secondary line is M_i = L_{i-1} | (L_{i+1} - L_i) for 1 <= i <= n-1.

In the infinite double chain with columns i in Z, L_i < L_j, L_i < M_j and
M_i < L_j whenever i < j; the closure adds M_i < M_j exactly when j >= i + 2.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice, permutations, product
from math import comb, factorial
from typing import Iterator, Sequence

from .certificate import FAIL, INCONCLUSIVE, PASS, Certificate
from .embedding import embeds_weak
from .family import Family, check_ground_size
from .poset import Poset, b_value
from .workers import parallel_map


@dataclass(frozen=True)
class DoubleChain:
    perm: tuple[int, ...]
    primary: tuple[int, ...]
    secondary: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.perm)

    def members(self) -> frozenset[int]:
        return frozenset(self.primary + self.secondary)

    def family(self) -> Family:
        return Family.of(self.n, self.members())


def double_chain(perm: Sequence[int]) -> DoubleChain:
    """Double chain of a permutation of 1..n."""
    perm = tuple(perm)
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"{perm!r} is not a permutation of 1..{n}")
    primary = [0]
    for x in perm:
        primary.append(primary[-1] | 1 << (x - 1))
    secondary = tuple(primary[i - 1] | (primary[i + 1] & ~primary[i]) for i in range(1, n))
    return DoubleChain(perm, tuple(primary), secondary)


def all_double_chains(n: int) -> Iterator[DoubleChain]:
    for perm in permutations(range(1, n + 1)):
        yield double_chain(perm)


def _need_two(n: int) -> None:
    if n < 2:
        raise ValueError(f"double chains need n >= 2, got n={n}")


def count_containing(f: int, n: int) -> int:
    """Number of the n! double chains that contain the subset f (closed form)."""
    _need_two(n)
    full = (1 << n) - 1
    if f & ~full:
        raise ValueError(f"subset {f:#x} is not within [{n}]")
    if f in (0, full):
        return factorial(n)
    s = f.bit_count()
    return 2 * factorial(s) * factorial(n - s)


def containment_counts(n: int) -> list[int]:
    """Enumerated count of double chains containing each subset mask of [n]."""
    _need_two(n)
    counts = [0] * (1 << n)
    for dc in all_double_chains(n):
        for mask in dc.members():
            counts[mask] += 1
    return counts


def count_containing_enumerated(f: int, n: int) -> int:
    return containment_counts(n)[f]


def audit_counting(n: int) -> Certificate:
    """Compare enumerated containment counts with the closed form for every subset of [n]."""
    check_ground_size(n)
    start = time.perf_counter()
    counts = containment_counts(n)
    mismatches = [mask for mask in range(1 << n) if counts[mask] != count_containing(mask, n)]
    return Certificate(
        claim="double-chain-counting",
        verdict=PASS if not mismatches else FAIL,
        n=n,
        value=(1 << n) - len(mismatches),
        expected=1 << n,
        details={"chains": factorial(n), "mismatches": len(mismatches),
                 "elapsed": f"{time.perf_counter() - start:.3f}"},
        witness=[f"{mask:#x} enumerated={counts[mask]} closed={count_containing(mask, n)}"
                 for mask in mismatches] or None,
    )


def incidence_total(f: Family) -> int:
    """Sum over all double chains D of |f & D|, by enumeration."""
    counts = containment_counts(f.n)
    return sum(counts[m] for m in f.members)


def incidence_closed_form(f: Family) -> int:
    """t * n! + sum over the other members of 2 |F|! (n - |F|)!."""
    return sum(count_containing(m, f.n) for m in f.members)


def chain_lubell_sum(f: Family) -> Fraction:
    return sum((Fraction(1, comb(f.n, m.bit_count())) for m in f.members), Fraction(0))


def double_lubell_sum(f: Family) -> Fraction:
    """t/2 + sum of 1/C(n, |F|) over members other than the empty set and [n]."""
    _need_two(f.n)
    full = (1 << f.n) - 1
    total = Fraction(0)
    for m in f.members:
        if m in (0, full):
            total += Fraction(1, 2)
        else:
            total += Fraction(1, comb(f.n, m.bit_count()))
    return total


# Elements of the infinite double chain are (role, column) with role "L" or "M".
Element = tuple[str, int]


def dc_less(x: Element, y: Element) -> bool:
    (r1, i), (r2, j) = x, y
    if r1 == "M" and r2 == "M":
        return j >= i + 2
    return i < j


def label(x: Element) -> str:
    return f"{x[0]}{x[1]}"


def window_elements(lo: int, hi: int) -> list[Element]:
    return [(role, i) for i in range(lo, hi + 1) for role in ("L", "M")]


def window_poset(lo: int, hi: int) -> Poset:
    """Columns lo..hi of the infinite double chain, element 2*(i-lo) is L_i, the next M_i."""
    if lo > hi:
        raise ValueError("window needs lo <= hi")
    elements = window_elements(lo, hi)
    index = {x: t for t, x in enumerate(elements)}
    pairs = []
    for i in range(lo, hi + 1):
        for j in range(i + 1, hi + 1):
            pairs += [(index["L", i], index["L", j]),
                      (index["L", i], index["M", j]),
                      (index["M", i], index["L", j])]
    return Poset.from_relations(len(elements), pairs)


def subset_poset(elements: Sequence[Element]) -> Poset:
    """Induced order on chosen elements of the infinite double chain."""
    up = tuple(
        sum(1 << t for t, y in enumerate(elements) if dc_less(x, y))
        for x in elements
    )
    return Poset(len(elements), up)


def _role_sequences(total: int, roles: tuple[str, ...]) -> Iterator[tuple[str, ...]]:
    if total == 0:
        yield ()
        return
    for role in roles:
        if len(role) <= total:
            for rest in _role_sequences(total - len(role), roles):
                yield (role,) + rest


def configurations(total: int, reduced: bool = True) -> Iterator[list[Element]]:
    """Representative ``total``-element subsets of the infinite double chain.

    Relations among chosen elements depend only on column order, on whether
    two consecutive occupied columns are adjacent (this matters only when both
    hold an M), and on which roles each column holds, so the full enumeration
    uses gaps in {1, 2} and skips gap choices that cannot matter.

    ``reduced`` keeps only the configurations with the fewest relations: an
    L-only column has every relation an M-only column has, and gap 2 adds
    relations to gap 1. A pattern found in every reduced configuration is
    found in every configuration.
    """
    roles = ("M", "LM") if reduced else ("L", "M", "LM")
    for seq in _role_sequences(total, roles):
        if reduced:
            yield [(r, col) for col, cell in enumerate(seq) for r in cell]
            continue
        free = [t for t in range(len(seq) - 1) if "M" in seq[t] and "M" in seq[t + 1]]
        for choice in product((1, 2), repeat=len(free)):
            gaps = [1] * (len(seq) - 1)
            for t, g in zip(free, choice):
                gaps[t] = g
            col, out = 0, []
            for t, cell in enumerate(seq):
                out += [(r, col) for r in cell]
                if t < len(gaps):
                    col += gaps[t]
            yield out


def compress(elements: Sequence[Element]) -> list[Element]:
    """Shift columns so consecutive occupied columns are 1 or 2 apart."""
    cols = sorted({c for _, c in elements})
    new_col, pos = {}, 0
    for t, c in enumerate(cols):
        if t:
            pos += min(c - cols[t - 1], 2)
        new_col[c] = pos
    return sorted(((r, new_col[c]) for r, c in elements), key=lambda x: (x[1], x[0]))


def _check_config(args: tuple[Poset, list[Element]]) -> bool:
    pattern, elements = args
    return embeds_weak(pattern, subset_poset(elements)) is not None


def _regime(m: Fraction) -> str:
    if m.denominator == 1:
        return "integer"
    return "half-integer"


def window_condition(pattern: Poset, m: Fraction | int, *, max_configs: int = 2_000_000,
                     time_limit: float | None = None, reduced: bool = True,
                     jobs: int = 1) -> Certificate:
    """Decide whether every (2m+1)-subset of the infinite double chain contains pattern.

    Integer m supports the sharp Sigma(n, m) bound for n >= m + 1; half-integer
    m only the coarse m * C(n, n//2) bound. The regime is reported.
    """
    m = Fraction(m)
    if (2 * m).denominator != 1 or m < 0:
        raise ValueError(f"m must be a nonnegative multiple of 1/2, got {m}")
    total = int(2 * m + 1)
    details = {"subset_size": total, "regime": _regime(m),
               "mode": "reduced" if reduced else "full"}
    start = time.perf_counter()
    if total < pattern.size:
        witness = [("M", i) for i in range(total)]
        details["reason"] = "subset smaller than pattern"
        details["configurations"] = 0
        return Certificate("window-condition", FAIL, m=m, value=0, expected="all",
                           details=details, witness=[" ".join(map(label, witness))])
    def finish(verdict: str, checked: int, cfg: list[Element] | None = None) -> Certificate:
        details["configurations"] = checked
        details["elapsed"] = f"{time.perf_counter() - start:.3f}"
        if verdict == FAIL:
            return Certificate("window-condition", FAIL, m=m, value=checked - 1, expected="all",
                               details=details, witness=[" ".join(map(label, cfg))])
        if verdict == INCONCLUSIVE:
            details["reason"] = "budget exhausted"
            return Certificate("window-condition", INCONCLUSIVE, m=m, value=checked,
                               expected="all", details=details)
        return Certificate("window-condition", PASS, m=m, value=checked, expected=checked,
                           details=details)

    if jobs > 1:
        configs = list(islice(configurations(total, reduced), max_configs + 1))
        if len(configs) > max_configs:
            return finish(INCONCLUSIVE, 0)
        results = parallel_map(_check_config, [(pattern, cfg) for cfg in configs], jobs)
        for t, (cfg, ok) in enumerate(zip(configs, results)):
            if not ok:
                return finish(FAIL, t + 1, cfg)
        return finish(PASS, len(configs))

    checked = 0
    for cfg in configurations(total, reduced):
        if checked >= max_configs or (
                time_limit is not None and time.perf_counter() - start > time_limit):
            return finish(INCONCLUSIVE, checked)
        checked += 1
        if not _check_config((pattern, cfg)):
            return finish(FAIL, checked, cfg)
    return finish(PASS, checked)


def window_condition_at_b(pattern: Poset, **kwargs) -> Certificate:
    return window_condition(pattern, b_value(pattern), **kwargs)


def gap_compression_check(pattern: Poset, m: Fraction | int, trials: int,
                          rng: random.Random, width_factor: int = 3) -> list[list[Element]]:
    """Random (2m+1)-subsets of a wide window whose containment verdict differs
    from that of their gap-compressed configuration. An empty result means agreement."""
    total = int(2 * Fraction(m) + 1)
    width = width_factor * 2 * total
    pool = window_elements(0, width - 1)
    bad = []
    for _ in range(trials):
        chosen = sorted(rng.sample(pool, total), key=lambda x: (x[1], x[0]))
        wide = embeds_weak(pattern, subset_poset(chosen)) is not None
        narrow = embeds_weak(pattern, subset_poset(compress(chosen))) is not None
        if wide != narrow:
            bad.append(chosen)
    return bad
