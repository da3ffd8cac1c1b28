"""Number-theoretic deciders for maximality among finite Lukasiewicz logics.

Axiomatic extensions of L^i_n are represented by sets of divisors of ``n``:
the set ``{m_1, ..., m_k}`` stands for the intersection of the logics
L^{i/n}_{m_j}.  Larger divisors mean weaker logics, so ``S ⪯ T`` (every
member of ``S`` divides some member of ``T``) says the logic of ``T`` is
contained in the logic of ``S``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Tuple

from .algebra import AlgebraError, restrict_filter

TRIAL_DIVISION_LIMIT = 10 ** 6


def _guard(n: int) -> None:
    if n > TRIAL_DIVISION_LIMIT:
        raise ValueError(f"{n} exceeds the trial-division limit {TRIAL_DIVISION_LIMIT}")


def is_prime(n: int) -> bool:
    _guard(n)
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_factors(n: int) -> List[int]:
    _guard(n)
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def valuation(q: int, n: int) -> int:
    """Exponent of the prime ``q`` in ``n``."""
    r = 0
    while n % q == 0:
        n //= q
        r += 1
    return r


def prime_power(n: int) -> Optional[Tuple[int, int]]:
    """``(q, k)`` with ``n = q**k``, ``k >= 1``, or None."""
    ps = prime_factors(n) if n > 1 else []
    if len(ps) != 1:
        return None
    return ps[0], valuation(ps[0], n)


def divisors(n: int) -> List[int]:
    _guard(n)
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class LogicId:
    n: int
    i: int
    bar: bool = False

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.i <= self.n:
            raise ValueError(f"need 1 <= i <= n, got n={self.n}, i={self.i}")

    def __str__(self):
        return f"{'Lbar' if self.bar else 'L'}^{self.i}_{self.n}"


def restrict_logic(n: int, i: int, m: int) -> LogicId:
    """The logic L^{i/n}_m written as L^j_m."""
    return LogicId(m, restrict_filter(n, i, m), False)


def maximal_wrt_cpl(n: int, designated: Iterable[int]) -> bool:
    """Sufficient condition: 0 is not designated and ``n`` is prime."""
    des = set(designated)
    if not des or any(not 0 <= d <= n for d in des):
        raise AlgebraError("designated set must be a non-empty subset of 0..n")
    return 0 not in des and is_prime(n)


def maximal_pair(n: int, m: int) -> bool:
    """L^i_n is maximal w.r.t. L^{i/n}_m iff ``n = q^k`` and ``m = q^(k-1)`` for a prime ``q``."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    pp = prime_power(n)
    if pp is None:
        return False
    q, k = pp
    return m == q ** (k - 1)


def canonical_divisors(divs: Iterable[int]) -> FrozenSet[int]:
    """Drop every member that divides another one."""
    s = set(divs)
    return frozenset(a for a in s if not any(b != a and b % a == 0 for b in s))


@dataclass(frozen=True)
class DivisorSet:
    base_n: int
    divisors: FrozenSet[int]
    filter_i: int = 1

    def __init__(self, base_n: int, divisors: Iterable[int], filter_i: int = 1):
        ds = set(int(d) for d in divisors)
        if not ds:
            raise ValueError("a divisor set must be non-empty")
        bad = [d for d in ds if d < 1 or base_n % d]
        if bad:
            raise ValueError(f"{sorted(bad)} do not divide {base_n}")
        object.__setattr__(self, "base_n", base_n)
        object.__setattr__(self, "divisors", canonical_divisors(ds))
        object.__setattr__(self, "filter_i", filter_i)

    def members(self) -> List[int]:
        return sorted(self.divisors)

    def __str__(self):
        return "{" + ",".join(map(str, self.members())) + "}"


def divset_leq(S: DivisorSet, T: DivisorSet) -> bool:
    if S.base_n != T.base_n:
        raise ValueError(f"divisor sets over different bases {S.base_n} and {T.base_n}")
    return all(any(t % s == 0 for t in T.divisors) for s in S.divisors)


def divset_equiv(S: DivisorSet, T: DivisorSet) -> bool:
    return divset_leq(S, T) and divset_leq(T, S)


@dataclass
class MaximalityCertificate:
    maximal: bool
    q: Optional[int] = None
    k: Optional[int] = None

    def to_json(self) -> dict:
        return {"maximal": self.maximal, "q": self.q, "k": self.k}


def axiomatic_ext_maximal(L: DivisorSet, m: int) -> MaximalityCertificate:
    """Whether ``L`` is maximal w.r.t. L^{i/n}_m, i.e. ``L ≡ {m, q^(k+1)}``.

    ``q`` ranges over primes with ``q^(k+1) | n`` where ``k`` is the exact
    exponent of ``q`` in ``m`` (``k = 0`` allowed).
    """
    n = L.base_n
    if m < 1 or n % m:
        raise ValueError(f"{m} does not divide {n}")
    for q in prime_factors(n):
        k = valuation(q, m)
        if n % q ** (k + 1):
            continue
        cand = DivisorSet(n, [m, q ** (k + 1)], L.filter_i)
        if cand.divisors == L.divisors:
            return MaximalityCertificate(True, q, k)
    return MaximalityCertificate(False)


def maximal_extensions(n: int, m: int, filter_i: int = 1) -> List[DivisorSet]:
    """All axiomatic extensions (up to equivalence) maximal w.r.t. L^{i/n}_m."""
    out = []
    for q in prime_factors(n):
        k = valuation(q, m)
        if n % q ** (k + 1) == 0:
            out.append(DivisorSet(n, [m, q ** (k + 1)], filter_i))
    return out
