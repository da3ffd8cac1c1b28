"""Brute-force reference implementations used to cross-check the fast deciders.

Nothing here is on a production path; these routines exist so that the
reproduction battery and the tests can compare closed-form answers against
exhaustive search.
"""
from __future__ import annotations

from itertools import combinations
from typing import FrozenSet, List


def _divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def antichains(n: int) -> List[FrozenSet[int]]:
    """Every non-empty divisibility antichain of divisors of ``n``."""
    ds = _divisors(n)
    out = []
    for r in range(1, len(ds) + 1):
        for combo in combinations(ds, r):
            if all(a % b and b % a for a, b in combinations(combo, 2)):
                out.append(frozenset(combo))
    return out


def leq(S, T) -> bool:
    return all(any(t % s == 0 for t in T) for s in S)


def strictly_below(S, T) -> bool:
    return leq(S, T) and not leq(T, S)


def covers(n: int, lower, upper) -> bool:
    """``upper`` sits strictly above ``lower`` with nothing in between."""
    if not strictly_below(lower, upper):
        return False
    return not any(strictly_below(lower, T) and strictly_below(T, upper) for T in antichains(n))


def brute_maximal_pair(n: int, m: int) -> bool:
    return covers(n, frozenset([m]), frozenset([n]))


def brute_axiomatic_ext_maximal(n: int, S, m: int) -> bool:
    return covers(n, frozenset([m]), frozenset(S))


def brute_is_critical(chains) -> bool:
    """Distinct parameters, and at most one of them is a multiple of another one."""
    cs = list(chains)
    if len(set(cs)) != len(cs):
        return False
    multiples = {j for j in range(len(cs)) for i in range(len(cs)) if i != j and cs[j] % cs[i] == 0}
    return len(multiples) <= 1
