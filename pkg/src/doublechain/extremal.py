"""Exact La(n, P) at small n, the general upper bounds, and e(P) evidence.

La(n, P) is the largest size of a family of subsets of [n] that contains no
weak copy of P. ``la_exact`` is a complete search, so its value is exact
whenever the result is marked complete.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .certificate import FAIL, INCONCLUSIVE, PASS, PROPERTY_PASS, Certificate
from .chains import window_condition
from .embedding import check_family_embedding, count_candidates, find_in_family, is_p_free, search
from .expr import Base, Custom, Oplus, PosetExpr, eval_expr, format_expr, leaves
from .family import Family, format_set, levels_family, middle_levels_family, sigma
from .poset import Poset, base_poset, b_value, longest_chain
from .workers import parallel_map

LA_N_LIMIT = 5
EXHAUSTIVE_N_LIMIT = 3


@dataclass
class Budget:
    max_nodes: int | None = 2_000_000
    time_limit: float | None = None


@dataclass
class LaResult:
    n: int
    value: int
    witness: Family
    complete: bool
    upper: int
    nodes: int = 0
    method: str = ""
    elapsed: float = field(default=0.0, compare=False)


class _OutOfBudget(Exception):
    pass


def la_exact(n: int, pattern: Poset, budget: Budget | None = None, *,
             n_limit: int = LA_N_LIMIT, method: str = "auto") -> LaResult:
    """Largest P-free family of subsets of [n] together with one maximizer.

    ``method`` is "exhaustive" (all families, n <= 3), "branch-and-bound" or
    "auto". When the budget runs out the result is incomplete: ``value`` is the
    best family found and ``upper`` the largest bound still open.
    """
    if not 0 <= n <= n_limit:
        raise ValueError(f"la_exact supports 0 <= n <= {n_limit}, got n={n}")
    budget = budget or Budget()
    start = time.perf_counter()
    if pattern.size == 1:
        # every nonempty family contains the one-element poset
        return LaResult(n, 0, Family(n, ()), True, 0, 0, "trivial")
    if method == "auto":
        method = "exhaustive" if n <= EXHAUSTIVE_N_LIMIT else "branch-and-bound"
    if method == "exhaustive":
        if n > EXHAUSTIVE_N_LIMIT:
            raise ValueError(f"exhaustive search is limited to n <= {EXHAUSTIVE_N_LIMIT}")
        result = _exhaustive(n, pattern)
    elif method == "branch-and-bound":
        result = _branch_and_bound(n, pattern, budget, start)
    else:
        raise ValueError(f"unknown method {method!r}")
    result.elapsed = time.perf_counter() - start
    return result


def _exhaustive(n: int, pattern: Poset) -> LaResult:
    universe = sorted(range(1 << n), key=lambda s: (s.bit_count(), s))
    best: tuple[int, ...] = ()
    for choice in range(1 << len(universe)):
        if choice.bit_count() <= len(best):
            continue
        members = tuple(s for t, s in enumerate(universe) if choice >> t & 1)
        if is_p_free(Family(n, members), pattern):
            best = members
    return LaResult(n, len(best), Family(n, best), True, len(best),
                    1 << len(universe), "exhaustive")


def _seed(n: int, pattern: Poset) -> Family:
    best = Family(n, ())
    for m in range(1, n + 2):
        fam = middle_levels_family(n, m)
        if is_p_free(fam, pattern, symmetric=True):
            best = fam
        else:
            break
    return best


def chain_key(mask: int, n: int) -> tuple[int, ...]:
    """Chain of the symmetric chain decomposition containing mask.

    Reading positions 0..n-1, a 0 opens and a 1 closes a bracket; subsets with
    the same matched positions lie on one chain.
    """
    stack: list[int] = []
    matched: list[int] = []
    for pos in range(n):
        if mask >> pos & 1:
            if stack:
                matched += [stack.pop(), pos]
        else:
            stack.append(pos)
    return tuple(sorted(matched))


def _branch_and_bound(n: int, pattern: Poset, budget: Budget, start: float) -> LaResult:
    order = sorted(range(1 << n), key=lambda s: (abs(2 * s.bit_count() - n), s.bit_count(), s))
    total = len(order)
    # A chain of |P| sets contains P, so a P-free family meets each chain of a
    # chain partition in at most |P| - 1 sets.
    cap = pattern.size - 1
    keys = {}
    for s in order:
        keys.setdefault(chain_key(s, n), len(keys))
    chain_of = [keys[chain_key(s, n)] for s in order]
    remaining = [0] * len(keys)
    for c in chain_of:
        remaining[c] += 1
    taken = [0] * len(keys)

    best = list(_seed(n, pattern).members)
    chosen: list[int] = []
    h_up: list[int] = []
    h_down: list[int] = []
    pending: list[int] = []
    nodes = 0

    def bound() -> int:
        return len(chosen) + sum(min(r, cap - t) for r, t in zip(remaining, taken))

    def out_of_budget() -> bool:
        if budget.max_nodes is not None and nodes > budget.max_nodes:
            return True
        return budget.time_limit is not None and time.perf_counter() - start > budget.time_limit

    def contains_with(s: int) -> bool:
        bit = 1 << len(chosen)
        up = down = 0
        for t, x in enumerate(chosen):
            if x & s == x:
                down |= 1 << t
                h_up[t] |= bit
            elif x & s == s:
                up |= 1 << t
                h_down[t] |= bit
        h_up.append(up)
        h_down.append(down)
        cand = count_candidates(pattern, h_up, h_down)
        found = search(pattern, h_up, h_down, cand, must_use=len(chosen)) is not None
        if found:
            undo_host()
        return found

    def undo_host() -> None:
        bit = 1 << (len(h_up) - 1)
        h_up.pop()
        h_down.pop()
        for t in range(len(h_up)):
            h_up[t] &= ~bit
            h_down[t] &= ~bit

    def dfs(i: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if out_of_budget():
            pending.append(bound())
            raise _OutOfBudget
        if bound() <= len(best):
            return
        if i == total:
            best = list(chosen)
            return
        s, c = order[i], chain_of[i]
        remaining[c] -= 1
        pending.append(bound())
        if taken[c] < cap and not contains_with(s):
            chosen.append(s)
            taken[c] += 1
            dfs(i + 1)
            taken[c] -= 1
            chosen.pop()
            undo_host()
        pending.pop()
        dfs(i + 1)
        remaining[c] += 1

    try:
        dfs(0)
    except _OutOfBudget:
        upper = max([len(best)] + pending)
        return LaResult(n, len(best), Family.of(n, best), False, upper, nodes, "branch-and-bound")
    return LaResult(n, len(best), Family.of(n, best), True, len(best), nodes, "branch-and-bound")


def upper_bound_theorem4(pattern: Poset, n: int) -> tuple[int | Fraction, str]:
    """Double-chain bound: Sigma(n, b) when b is an integer with b + 1 <= n,
    otherwise b * C(n, n // 2)."""
    b = b_value(pattern)
    if b.denominator == 1 and b + 1 <= n:
        return sigma(n, int(b)), "sharp-sigma"
    return b * comb(n, n // 2), "coarse"


def old_bound(pattern: Poset, n: int) -> int:
    """Bound from the chain argument applied to the path on |P| elements."""
    return sigma(n, pattern.size - 1)


def _scan_task(args: tuple[Poset, int, int, int]) -> tuple[int, int, dict[int, int] | None]:
    pattern, n, k, m = args
    return n, k, find_in_family(levels_family(n, k, m), pattern, symmetric=True)


def _level_grid(m: int, n_max: int) -> list[tuple[int, int]]:
    return [(n, k) for n in range(max(m - 1, 0), n_max + 1) for k in range(n - m + 2)]


def default_scan_limit(pattern: Poset) -> int:
    return int(2 * b_value(pattern)) + 2


def e_lower_scan(pattern: Poset, m: int, n_max: int | None = None, jobs: int = 1) -> Certificate:
    """Check that every run of m consecutive levels of every [n], n <= n_max, is P-free.

    m = 0 is accepted: zero levels form the empty family, which is P-free.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if n_max is None:
        n_max = default_scan_limit(pattern)
    if n_max < m:
        raise ValueError("n_max must be at least m")
    if m == 0:
        return Certificate("e-lower", PASS, n=n_max, m=0, value="free", expected="free",
                           details={"scope": "vacuous: zero levels form the empty family"})
    start = time.perf_counter()
    grid = _level_grid(m, n_max)
    results = parallel_map(_scan_task, [(pattern, n, k, m) for n, k in grid], jobs)
    details = {"n_range": f"{max(m - 1, 0)}..{n_max}",
               "scope": "finite-range evidence for e(P) >= m; not a proof for all n"}
    for n, k, mapping in results:
        if mapping is not None:
            details["elapsed"] = f"{time.perf_counter() - start:.3f}"
            return Certificate("e-lower", FAIL, n=n, m=m, k=k, value="contains",
                               expected="free", details=details,
                               witness=_embedding_lines(mapping))
    details["checked"] = len(grid)
    details["elapsed"] = f"{time.perf_counter() - start:.3f}"
    return Certificate("e-lower", PASS, n=n_max, m=m, value="free", expected="free",
                       details=details)


@dataclass
class LevelWitness:
    n: int
    k: int
    mapping: dict[int, int]


def e_upper_witness(pattern: Poset, m: int, n_max: int) -> LevelWitness | None:
    """First (n, k), in increasing order, where m consecutive levels contain P.

    A witness shows e(P) < m. Absence proves nothing beyond the scanned range.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    for n, k in _level_grid(m, n_max):
        mapping = find_in_family(levels_family(n, k, m), pattern, symmetric=True)
        if mapping is not None:
            return LevelWitness(n, k, mapping)
    return None


def _embedding_lines(mapping: dict[int, int]) -> list[str]:
    return [f"{a} -> {format_set(mask)}" for a, mask in sorted(mapping.items())]


def base_e_value(name: str) -> int:
    # e equals b on the seven base posets
    return int(b_value(base_poset(name)))


def e_composition_bound(e: PosetExpr) -> int:
    """Lower bound on e(P) from the composition rules, exact for base-built posets."""
    if isinstance(e, Custom):
        raise ValueError(f"e is unknown for the custom leaf @{e.source}")
    if isinstance(e, Base):
        return base_e_value(e.name)
    extra = 1 if isinstance(e, Oplus) else 0
    return e_composition_bound(e.left) + e_composition_bound(e.right) + extra


def verify_main_theorem(e: PosetExpr, n: int, budget: Budget | None = None, *,
                        la_n_limit: int = LA_N_LIMIT, jobs: int = 1) -> Certificate:
    """Check La(n, P) = Sigma(n, b(P)) = Sigma(n, e(P)) for a poset built from the bases.

    Runs the exact search when n <= la_n_limit and it completes within budget;
    otherwise falls back to the pair of properties that imply the equality:
    the middle b levels are P-free, and every (2b+1)-subset of the infinite
    double chain contains P.
    """
    for leaf in leaves(e):
        if not isinstance(leaf, Base):
            raise ValueError(f"verify needs an expression over the base posets; "
                             f"@{leaf.source} is not one")
    pattern = eval_expr(e)
    b = b_value(pattern)
    if b.denominator != 1:
        raise ValueError(f"b(P) = {b} is not an integer")
    b = int(b)
    if n < b + 1:
        raise ValueError(f"the equality needs n >= b(P) + 1 = {b + 1}, got n={n}")
    e_val = e_composition_bound(e)
    expected = sigma(n, b)
    details: dict = {"size": pattern.size, "L": longest_chain(pattern), "b": b, "e": e_val,
                     "sigma_e": sigma(n, e_val)}
    text = format_expr(e)
    if n <= la_n_limit:
        result = la_exact(n, pattern, budget)
        details.update(method=result.method, nodes=result.nodes,
                       elapsed=f"{result.elapsed:.3f}")
        if result.complete:
            witness_ok = is_p_free(result.witness, pattern) and len(result.witness) == result.value
            details["witness_valid"] = witness_ok
            ok = result.value == expected == sigma(n, e_val) and witness_ok
            return Certificate("main-theorem", PASS if ok else FAIL, expr=text, n=n, m=b,
                               value=result.value, expected=expected, details=details,
                               witness=result.witness)
        details["exact"] = f"inconclusive (best {result.value}, open bound {result.upper})"
    else:
        details["exact"] = f"skipped (n > {la_n_limit})"
    details["scope"] = ("property check: middle levels P-free and window condition at b; "
                        "equality follows from the double-chain bound")
    middle = middle_levels_family(n, b) if b >= 1 else Family(n, ())
    mapping = find_in_family(middle, pattern, symmetric=True) if len(middle) else None
    window = window_condition(pattern, b, jobs=jobs)
    details["middle_free"] = mapping is None
    details["window"] = window.verdict
    if mapping is not None or window.verdict == FAIL:
        verdict = FAIL
    elif window.verdict == INCONCLUSIVE:
        verdict = INCONCLUSIVE
    else:
        verdict = PROPERTY_PASS
    return Certificate("main-theorem", verdict, expr=text, n=n, m=b, value=len(middle),
                       expected=expected, details=details,
                       witness=_embedding_lines(mapping) if mapping is not None else middle)


def check_witness(f: Family, pattern: Poset, value: int) -> bool:
    """Re-validate a claimed extremal family independently of the search."""
    return len(f) == value and is_p_free(f, pattern)


def check_level_witness(w: LevelWitness, pattern: Poset, m: int) -> bool:
    fam = levels_family(w.n, w.k, m)
    return check_family_embedding(fam, pattern, w.mapping)
