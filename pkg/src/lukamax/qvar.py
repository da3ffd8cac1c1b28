"""Critical MV-algebras, quasivariety inclusion and strong maximality reports.

A finite MV-algebra ``LV(n0+1) x ... x LV(n_{l-1}+1)`` is written as the list
of its chain parameters ``[n0, ..., n_{l-1}]``.  Inclusion between the
quasivarieties generated by finite families of critical algebras is decided
by a divisibility criterion; quasi-identities are checked by enumeration.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import FiniteAlgebra, chain_product, component_params, component_values, eval_vector, make_chain, restrict_filter
from .formula import Formula, Op, Var, nfold, power, render, variables_of
from .lattice import is_prime, prime_factors, valuation
from .matrix import (
    BOTTOM,
    DEFAULT_MAX_VARS,
    Sequent,
    assignment_block,
    cpl,
    decode,
    entails,
    explosion_rule,
    is_valid,
    luk,
    lukbar,
)


@dataclass(frozen=True)
class CriticalAlgebra:
    chains: Tuple[int, ...]

    def __init__(self, chains: Iterable[int]):
        cs = tuple(sorted((int(c) for c in chains), reverse=True))
        if not cs or any(c < 1 for c in cs):
            raise ValueError("chain parameters must be positive and non-empty")
        object.__setattr__(self, "chains", cs)

    def algebra(self) -> FiniteAlgebra:
        return chain_product(self.chains)

    def __str__(self):
        return "[" + ",".join(map(str, self.chains)) + "]"

    def to_json(self):
        return list(self.chains)


def as_critical(x) -> CriticalAlgebra:
    return x if isinstance(x, CriticalAlgebra) else CriticalAlgebra(x)


def is_critical(c: Union[CriticalAlgebra, Sequence[int]]) -> bool:
    """Distinct parameters, and at most one parameter is divisible by another one.

    Works on the raw list so repeated entries are detected before
    canonicalization.
    """
    cs = list(c.chains) if isinstance(c, CriticalAlgebra) else [int(x) for x in c]
    if len(set(cs)) != len(cs):
        return False
    above = set()
    for j, nj in enumerate(cs):
        for i, ni in enumerate(cs):
            if i != j and nj % ni == 0:
                above.add(j)
    return len(above) <= 1


Family = Tuple[CriticalAlgebra, ...]


def family(*members) -> Family:
    return tuple(sorted({as_critical(m) for m in members}, key=lambda c: c.chains, reverse=True))


def _covering_set(a: CriticalAlgebra, G: Family) -> List[CriticalAlgebra]:
    # the largest H meeting condition (2): every parameter of each member is a multiple of some parameter of a
    return [b for b in G if all(any(m % n == 0 for n in a.chains) for m in b.chains)]


def q_included(F: Iterable, G: Iterable) -> bool:
    """``Q(F) ⊆ Q(G)`` for finite families of critical algebras.

    For each ``a`` in F a non-empty ``H ⊆ G`` must exist such that every
    parameter of ``a`` divides a parameter of some member of H, and every
    parameter of a member of H is a multiple of a parameter of ``a``.  The
    second condition is closed under subsets and the first under supersets,
    so testing the largest admissible H is enough.
    """
    F = [as_critical(a) for a in F]
    G = [as_critical(b) for b in G]
    for a in F:
        H = _covering_set(a, G)
        if not H:
            return False
        if not all(any(m % n == 0 for b in H for m in b.chains) for n in a.chains):
            return False
    return True


def q_equal(F, G) -> bool:
    return q_included(F, G) and q_included(G, F)


def q_strict(F, G) -> bool:
    return q_included(F, G) and not q_included(G, F)


def minimal_over_boolean(k: int) -> List[Family]:
    """Minimal subquasivarieties of Q(LV(k+1)) strictly above the Boolean algebras."""
    if k <= 1:
        raise ValueError("k must exceed 1")
    return [family([q, 1]) for q in prime_factors(k)]


def minimal_over(n: int, k: int) -> List[Family]:
    """Minimal subquasivarieties of Q(LV(nk+1)) strictly above Q(LV(n+1))."""
    if n < 1 or k <= 1:
        raise ValueError("need n > 0 and k > 1")
    out: List[Family] = []
    for q in prime_factors(k):
        if n % q:
            cand = family([n], [q, 1])
        else:
            r = valuation(q, n)
            cand = family([n], [q ** (r + 1), 1])
        if not any(q_equal(cand, old) for old in out):
            out.append(cand)
    return out


def strong_max_family(n: int, q: int) -> Family:
    """Generators of the quasivariety that is strongly maximal below L^i_n for prime ``q``."""
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if n % q:
        return family([n], [q, 1])
    r = valuation(q, n)
    return family([n], [q ** (r + 1), 1])


# ---------------------------------------------------------------------------
# quasi-identities


ONE = Op("imp", (Var("x"), Var("x")))


@dataclass(frozen=True)
class Equation:
    lhs: Formula
    rhs: Optional[Formula] = None  # None means the constant 1

    def render(self) -> str:
        return f"{render(self.lhs)} = {render(self.rhs) if self.rhs is not None else '1'}"


@dataclass(frozen=True)
class InSubchain:
    """Surrogate conclusion: in every chain coordinate the value of ``var`` lies in LV(n+1)."""

    var: str
    n: int

    def render(self) -> str:
        return f"{self.var} in LV{self.n + 1}"


@dataclass
class QuasiIdentity:
    premises: List[Equation]
    conclusion: Union[Equation, InSubchain]

    def variables(self) -> List[str]:
        forms = []
        for e in self.premises + ([self.conclusion] if isinstance(self.conclusion, Equation) else []):
            forms.append(e.lhs)
            if e.rhs is not None:
                forms.append(e.rhs)
        names = variables_of(forms)
        if isinstance(self.conclusion, InSubchain) and self.conclusion.var not in names:
            names.append(self.conclusion.var)
        return names

    def render(self) -> str:
        prem = " & ".join(e.render() for e in self.premises) or "true"
        return f"{prem} => {self.conclusion.render()}"


def _top(A: FiniteAlgebra) -> int:
    return int(A.table("imp")[0, 0])


def _subchain_mask(A: FiniteAlgebra, n: int) -> np.ndarray:
    params = component_params(A)
    mask = np.ones(A.size, dtype=bool)
    for e, coords in enumerate(component_values(A)):
        for c, m in zip(coords, params):
            # c/m lies in LV(n+1) iff n*c is a multiple of m
            if (n * c) % m:
                mask[e] = False
                break
    return mask


@dataclass
class QIVerdict:
    holds: bool
    countermodel: Optional[Dict[str, str]] = None

    def __bool__(self):
        return self.holds

    def to_json(self):
        return {"holds": self.holds, "countermodel": self.countermodel}


def quasi_identity_holds(A: FiniteAlgebra, qi: QuasiIdentity, max_vars: int = DEFAULT_MAX_VARS) -> QIVerdict:
    names = qi.variables()
    k = len(names)
    if k > max_vars:
        raise ValueError(f"{k} variables exceed the bound of {max_vars}")
    N = A.size
    top = _top(A)
    total = N ** k
    chunk = 1 << 20
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        env = dict(zip(names, assignment_block(N, k, start, stop)))
        memo: dict = {}
        size = stop - start

        def holds(eq: Equation) -> np.ndarray:
            lv = eval_vector(A, eq.lhs, env, size, memo)
            rv = top if eq.rhs is None else eval_vector(A, eq.rhs, env, size, memo)
            return lv == rv

        ok = np.ones(size, dtype=bool)
        for e in qi.premises:
            ok &= holds(e)
        if isinstance(qi.conclusion, InSubchain):
            concl = _subchain_mask(A, qi.conclusion.n)[env[qi.conclusion.var]]
        else:
            concl = holds(qi.conclusion)
        bad = np.nonzero(ok & ~concl)[0]
        if len(bad):
            vals = decode(N, k, start + int(bad[0]))
            return QIVerdict(False, {v: A.labels[x] for v, x in zip(names, vals)})
    return QIVerdict(True)


def contradiction_qi(q: int) -> QuasiIdentity:
    """``q(x & !x) = 1  =>  y | !y = 1``."""
    x, y = Var("x"), Var("y")
    prem = nfold(Op("and", (x, Op("neg", (x,)))), q)
    return QuasiIdentity([Equation(prem)], Equation(Op("or", (y, Op("neg", (y,))))))


def general_contradiction_qi(n: int, q: int) -> QuasiIdentity:
    """``nq(x & !x) = 1  =>  y lies in the LV(n+1) subchain`` (surrogate conclusion)."""
    x = Var("x")
    prem = nfold(Op("and", (x, Op("neg", (x,)))), n * q)
    return QuasiIdentity([Equation(prem)], InSubchain("y", n))


def variety_qi(q: int) -> QuasiIdentity:
    """Membership in the variety of LV(q+1), checked coordinate-wise (surrogate)."""
    return QuasiIdentity([], InSubchain("x", q))


# ---------------------------------------------------------------------------
# reports


@dataclass
class Check:
    name: str
    ok: bool
    detail: object = None

    def to_json(self):
        return {"check": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class Report:
    title: str
    checks: List[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name, ok, detail=None):
        self.checks.append(Check(name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self):
        return {"title": self.title, "ok": self.ok, **self.data, "checks": [c.to_json() for c in self.checks]}


SURROGATE_NOTE = (
    "variety-membership identities are not written as terms; their conclusion is replaced by the "
    "equivalent coordinate-wise test that the value lies in the named subchain"
)


def strong_max_report(q: int, j: int) -> Report:
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if not 1 <= j <= q:
        raise ValueError("need 1 <= j <= q")
    rep = Report(f"strong maximality for q={q}, j={j}", data={"note": SURROGATE_NOTE})
    B, M, C = [CriticalAlgebra([1])], [CriticalAlgebra([q, 1])], [CriticalAlgebra([q])]
    rep.add("Q[1] strictly inside Q[q,1]", q_strict(B, M))
    rep.add("Q[q,1] strictly inside Q[q]", q_strict(M, C))
    only = [as_critical(c) for c in ([q], [1], [q, 1])]
    rep.add("critical algebras of V(LV(q+1)) are [q], [1], [q,1]", all(is_critical(c) for c in only) and not is_critical([q, q]))

    Lj, Lb = luk(q, j), lukbar(q, j)
    rule = explosion_rule(j)
    v = entails(Lj, rule)
    rep.add("exp_j fails in L^j_q", not v.holds, v.to_json())
    rep.add("exp_j holds in Lbar^j_q", entails(Lb, rule).holds)
    rep.add("exp_j holds in CPL", entails(cpl(), rule).holds)
    p = Var("p")
    lem_q = power(Op("or", (p, Op("neg", (p,)))), q)
    v = is_valid(Lb, lem_q)
    rep.add("(p | !p)^q fails in Lbar^j_q", not v.holds, v.to_json())
    rep.add("(p | !p)^q holds in CPL", is_valid(cpl(), lem_q).holds)

    qi = contradiction_qi(q)
    rep.data["quasi_identity"] = qi.render()
    rep.add("quasi-identity holds on [q,1]", quasi_identity_holds(chain_product((q, 1)), qi).holds)
    rep.add("quasi-identity holds on [1]", quasi_identity_holds(make_chain(1), qi).holds)
    v = quasi_identity_holds(make_chain(q), qi)
    rep.add("quasi-identity fails on [q]", not v.holds, v.to_json())
    rep.add("variety identity holds on [q,1]", quasi_identity_holds(chain_product((q, 1)), variety_qi(q)).holds)

    # the two explosion-style rules are inter-derivable
    prem = rule.premises[0]
    rep.add("bottom entails (p | !p)^q in Lbar^j_q", entails(Lb, Sequent([BOTTOM], lem_q)).holds)
    rep.add("j(p & !p) / (p | !p)^q holds in Lbar^j_q", entails(Lb, Sequent([prem], lem_q)).holds)
    rep.add("j(p & !p), (p | !p)^q entail bottom in L^j_q", entails(Lj, Sequent([prem, lem_q], BOTTOM)).holds)
    return rep


def general_strong_max_report(n: int, i: int, q: int) -> Report:
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if not 1 <= i <= n:
        raise ValueError("need 1 <= i <= n")
    gens = strong_max_family(n, q)
    js = [j for j in range((i - 1) * q + 1, i * q + 1)]
    rep = Report(
        f"strong maximality below L^{i}_{n} for q={q}",
        data={
            "generators": [c.to_json() for c in gens],
            "case": "q does not divide n" if n % q else f"q^{valuation(q, n)} exactly divides n",
            "j_values": js,
            "note": SURROGATE_NOTE,
        },
    )
    rep.add("each j gives back L^i_n on the n-subchain", all(restrict_filter(n * q, j, n) == i for j in js))
    base = [CriticalAlgebra([n])]
    rep.add("Q[n] strictly inside the generated quasivariety", q_strict(base, gens))
    rep.add("generated quasivariety inside Q[nq]", q_included(gens, [CriticalAlgebra([n * q])]))
    rep.add("generators are critical", all(is_critical(c) for c in gens))
    rep.add("listed among the minimal quasivarieties over Q[n]", any(q_equal(gens, m) for m in minimal_over(n, q)))
    qi = general_contradiction_qi(n, q)
    rep.data["quasi_identity"] = qi.render()
    for c in gens:
        rep.add(f"quasi-identity holds on {c}", quasi_identity_holds(c.algebra(), qi).holds)
    v = quasi_identity_holds(make_chain(n * q), qi)
    rep.add("quasi-identity fails on [nq]", not v.holds, v.to_json())
    return rep
