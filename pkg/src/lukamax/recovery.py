"""Recovery operators for maximality of one matrix logic over a sub-matrix.

Given ``L1 = <A1, F1>`` and a sub-matrix ``L2 = <A2, F2>`` (``A2`` embedded
in ``A1``, ``F2 = F1 ∩ A2``), the elements of ``A1`` are split as

    0, 1, a_1 .. a_k (the rest of A2), a_{k+1} .. a_n (outside A2).

When one-variable terms for the constants and for every move ``a_i -> a_j``
(``i > k``) exist, any L2-theorem ``phi`` refuted in L1 yields a finite set
``circle(p)`` of instances of ``phi`` whose joint designation forces ``p``
into ``A2``.  Adding those sets for the variables of a sequent turns L1
consequence into L2 consequence.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .algebra import (
    AlgebraError,
    FiniteAlgebra,
    CloneCapExceeded,
    is_homomorphism,
    subalgebra,
    synth_unary,
    term_function,
    unary_clone,
)
from .formula import Formula, Op, Var, random_formula, render, substitute, variables
from .matrix import (
    MatrixLogic,
    Sequent,
    Verdict,
    entails,
    filter_restricts,
    is_valid,
)


class HypothesesNotMet(ValueError):
    """The decomposition does not satisfy the hypotheses; ``missing`` lists failed syntheses."""

    def __init__(self, message: str, missing: Sequence = ()):
        super().__init__(message)
        self.missing = list(missing)


def _zero_one(A: FiniteAlgebra) -> Tuple[int, int]:
    try:
        return A.labels.index("0"), A.labels.index("1")
    except ValueError:
        raise AlgebraError(f"{A.name} has no elements labelled 0 and 1") from None


@dataclass
class MaximalitySetup:
    L1: MatrixLogic
    L2: MatrixLogic
    embedding: List[int]
    elements: List[int]  # a_1..a_n as indices of A1
    k: int  # a_1..a_k lie in A2
    zero: int
    one: int
    top: Formula
    bottom: Formula
    alpha: Dict[Tuple[int, int], Formula] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def classical_tail(self) -> List[int]:
        return self.elements[: self.k]

    @property
    def nonclassical(self) -> List[int]:
        return self.elements[self.k :]

    def alpha_term(self, i: int, j: int) -> Formula:
        return Var("p") if i == j else self.alpha[(i, j)]

    def label(self, a: int) -> str:
        return self.L1.label(a)

    def to_json(self) -> dict:
        return {
            "L1": self.L1.name,
            "L2": self.L2.name,
            "embedding": [self.label(a) for a in self.embedding],
            "classical_tail": [self.label(a) for a in self.classical_tail],
            "nonclassical": [self.label(a) for a in self.nonclassical],
            "top": render(self.top),
            "bottom": render(self.bottom),
            "alpha": {
                f"{i},{j}": {"from": self.label(self.elements[i - 1]), "to": self.label(self.elements[j - 1]), "term": render(t)}
                for (i, j), t in sorted(self.alpha.items())
            },
        }


def _check_unary(A: FiniteAlgebra, f: Formula, target: Mapping[int, int]) -> bool:
    t = term_function(A, f)
    return all(int(t[a]) == b for a, b in target.items())


def build_setup(
    L1: MatrixLogic,
    L2: MatrixLogic,
    embedding: Sequence[int],
    top: Optional[Formula] = None,
    bottom: Optional[Formula] = None,
    alpha: Optional[Mapping[Tuple[int, int], Formula]] = None,
    cap: int = 5_000_000,
) -> MaximalitySetup:
    """Check the structural hypotheses and synthesize the constant and move terms.

    Terms passed in ``top``, ``bottom`` or ``alpha`` are verified instead of
    synthesized.  Raises :class:`HypothesesNotMet` listing every move that
    no unary term realizes.
    """
    A1, A2 = L1.algebra, L2.algebra
    emb = [int(e) for e in embedding]
    if len(emb) != A2.size or len(set(emb)) != len(emb):
        raise HypothesesNotMet("embedding is not injective on the smaller algebra")
    if not is_homomorphism(A2, A1, emb):
        raise HypothesesNotMet("embedding is not a homomorphism")
    if not filter_restricts(L1, L2, emb):
        raise HypothesesNotMet("designated sets do not satisfy F2 = F1 ∩ A2")
    z2, o2 = _zero_one(A2)
    zero, one = emb[z2], emb[o2]
    sub01 = {z2, o2}
    for sym, arity in A2.sig.connectives.items():
        t = A2.table(sym)
        vals = [int(t)] if arity == 0 else np.ravel(t[np.ix_(*([sorted(sub01)] * arity))]).tolist()
        if not set(vals) <= sub01:
            raise HypothesesNotMet("{0, 1} is not closed in the smaller algebra")
    if L1.is_designated(zero):
        raise HypothesesNotMet("0 is designated in the larger logic")
    if not L2.is_designated(o2):
        raise HypothesesNotMet("1 is not designated in the smaller logic")
    image = set(emb)
    tail = [emb[b] for b in range(A2.size) if b not in sub01]
    outside = [a for a in range(A1.size) if a not in image]
    if not outside:
        raise HypothesesNotMet("the two algebras coincide, so the logics are not distinct")
    elements = tail + outside
    k = len(tail)
    missing = []

    def obtain(given, target, what):
        if given is not None:
            if not _check_unary(A1, given, target) or len(variables(given)) > 1:
                raise HypothesesNotMet(f"supplied {what} term {render(given)} does not have the required values")
            return given
        try:
            f = synth_unary(A1, target, cap)
        except CloneCapExceeded as exc:
            raise HypothesesNotMet(str(exc)) from exc
        if f is None:
            missing.append(what)
        return f

    everything = range(A1.size)
    top_f = obtain(top, {a: one for a in everything}, "top")
    bot_f = obtain(bottom, {a: zero for a in everything}, "bottom")
    alpha_out: Dict[Tuple[int, int], Formula] = {}
    alpha = dict(alpha or {})
    n = len(elements)
    for i in range(k + 1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            ai, aj = elements[i - 1], elements[j - 1]
            f = obtain(alpha.get((i, j)), {ai: aj}, f"{A1.labels[ai]}->{A1.labels[aj]}")
            if f is not None:
                alpha_out[(i, j)] = f
    if missing:
        raise HypothesesNotMet("no unary term realizes: " + ", ".join(missing), missing)
    return MaximalitySetup(L1, L2, emb, elements, k, zero, one, top_f, bot_f, alpha_out)


def classical_setup(L1: MatrixLogic, **kwargs) -> MaximalitySetup:
    """Setup against the Boolean subalgebra on the elements labelled 0 and 1."""
    zero, one = _zero_one(L1.algebra)
    B, emb = subalgebra(L1.algebra, [zero, one], name=f"B2[{L1.algebra.name}]")
    L2 = MatrixLogic(B, [b for b in range(B.size) if L1.is_designated(emb[b])], ("custom",), "CPL")
    return build_setup(L1, L2, emb, **kwargs)


# ---------------------------------------------------------------------------


@dataclass
class GammaReport:
    gamma: Formula
    fact1: bool
    fact2: bool


def gamma_variables(setup: MaximalitySetup) -> List[str]:
    return [f"p{j}" for j in range(1, setup.n + 1)]


def build_gamma(setup: MaximalitySetup, phi: Formula, e0: Mapping[str, int]) -> Formula:
    """``gamma = sigma_0(phi)``; both of its defining properties are re-checked by enumeration."""
    A1 = setup.L1.algebra
    e0 = {v: A1.element(x) for v, x in e0.items()}
    if A1.eval(phi, e0) in setup.L1.designated:
        raise ValueError("e0 does not refute phi in the larger logic")
    if not is_valid(setup.L2, phi).holds:
        raise ValueError("phi is not a theorem of the smaller logic")
    p1 = Var("p1")
    top = substitute(setup.top, {variables(setup.top)[0]: p1}) if variables(setup.top) else setup.top
    bot = substitute(setup.bottom, {variables(setup.bottom)[0]: p1}) if variables(setup.bottom) else setup.bottom
    pos = {a: j for j, a in enumerate(setup.elements, start=1)}
    sigma0 = {}
    for v in variables(phi):
        a = e0[v]
        if a == setup.one:
            sigma0[v] = top
        elif a == setup.zero:
            sigma0[v] = bot
        else:
            sigma0[v] = Var(f"p{pos[a]}")
    gamma = substitute(phi, sigma0)
    # gamma stays an L2 theorem: on A2 its values are the embedded L2 values
    if not is_valid(setup.L2, gamma).holds:
        raise AssertionError("gamma is not valid on the subalgebra")
    # and p_j = a_j gives back e0(phi)
    asg = {f"p{j}": setup.elements[j - 1] for j in range(1, setup.n + 1)}
    asg = {v: asg[v] for v in variables(gamma)}
    if A1.eval(gamma, asg) != A1.eval(phi, e0):
        raise AssertionError("gamma at a_j differs from e0(phi)")
    return gamma


def recovery_set(setup: MaximalitySetup, gamma: Formula) -> List[Formula]:
    """``{gamma(alpha^i_1(p), ..., alpha^i_n(p)) : k < i <= n}``."""
    out = []
    for i in range(setup.k + 1, setup.n + 1):
        sub = {f"p{j}": setup.alpha_term(i, j) for j in range(1, setup.n + 1)}
        member = substitute(gamma, sub)
        if member not in out:
            out.append(member)
    return out


def conjunction_respects_filter(L: MatrixLogic) -> bool:
    """``a & b`` designated iff both are."""
    if not L.sig.knows("and") or L.sig.arity("and") != 2:
        return False
    t = L.algebra.table("and")
    m = L.mask
    return bool(np.array_equal(m[t], m[:, None] & m[None, :]))


def circle_formula(setup: MaximalitySetup, circle: Sequence[Formula]) -> Optional[Formula]:
    """The single operator ``circ(p)``: the left-nested conjunction of the set, when sound."""
    if len(circle) == 1:
        return circle[0]
    if not conjunction_respects_filter(setup.L1):
        return None
    out = circle[0]
    for f in circle[1:]:
        out = Op("and", (out, f))
    return out


def circle_table(setup: MaximalitySetup, circ: Formula) -> Dict[str, str]:
    t = term_function(setup.L1.algebra, circ)
    return {setup.label(a): setup.label(int(t[a])) for a in range(setup.L1.algebra.size)}


def check_star(setup: MaximalitySetup, circle: Sequence[Formula]) -> Verdict:
    """``circle(p)`` all designated exactly when ``p`` lies in the subalgebra."""
    L1 = setup.L1
    image = set(setup.embedding)
    ok_all = np.ones(L1.algebra.size, dtype=bool)
    for f in circle:
        ok_all &= L1.mask[term_function(L1.algebra, f, "p")]
    for a in range(L1.algebra.size):
        if bool(ok_all[a]) != (a in image):
            return Verdict(False, {"p": a}, L1)
    return Verdict(True, None, L1)


@dataclass
class DatVerdict:
    holds: bool
    smaller: Verdict
    larger: Verdict

    def to_json(self) -> dict:
        return {"holds": self.holds, "smaller": self.smaller.to_json(), "larger_with_recovery": self.larger.to_json()}


def dat_check(setup: MaximalitySetup, circle: Sequence[Formula], premises: Sequence[Formula], psi: Formula, max_vars: int = 10) -> DatVerdict:
    """Both sides of ``Gamma |-_L2 psi  iff  Gamma, circle(p_1..p_t) |-_L1 psi``."""
    s = Sequent(premises, psi)
    names = s.variables()
    extra = [substitute(f, {"p": Var(v)}) for v in names for f in circle]
    small = entails(setup.L2, s, max_vars)
    large = entails(setup.L1, Sequent(list(premises) + extra, psi), max_vars)
    return DatVerdict(small.holds == large.holds, small, large)


# ---------------------------------------------------------------------------
# finding a separating theorem


def find_separating_theorem(setup: MaximalitySetup, rng: Optional[random.Random] = None, tries: int = 2000, depth: int = 6, cap: int = 5_000_000):
    """An L2-theorem refuted in L1, with the refuting assignment.

    One-variable candidates are taken from the clone in breadth order first;
    if none exists (or the clone is too large), random formulas over up to
    three variables are tried.
    """
    L1, L2 = setup.L1, setup.L2
    A1 = L1.algebra
    image = np.array(setup.embedding)
    try:
        clone = unary_clone(A1, cap)
        T = clone.tables
        valid_small = L1.mask[T[:, image]].all(axis=1)
        refuted = ~L1.mask[T].all(axis=1)
        hits = np.nonzero(valid_small & refuted)[0]
        if len(hits):
            k = int(hits[0])
            f = clone.witness(k)
            x = int(np.nonzero(~L1.mask[T[k]])[0][0])
            return f, {"p": x}
    except CloneCapExceeded:
        pass
    rng = rng or random.Random(0)
    ops = [(s, a) for s, a in A1.sig.all_symbols() if a <= 2]
    for _ in range(tries):
        f = random_formula(rng, ops, ["p", "q", "r"], depth)
        if is_valid(L2, f).holds:
            v = is_valid(L1, f)
            if not v.holds:
                return f, v.countermodel
    return None


@dataclass
class RecoveryArtifacts:
    setup: MaximalitySetup
    phi: Formula
    e0: Dict[str, int]
    gamma: Formula
    circle: List[Formula]
    circ: Optional[Formula]

    def to_json(self) -> dict:
        lab = self.setup.label
        out = {
            "setup": self.setup.to_json(),
            "phi": render(self.phi),
            "e0": {v: lab(a) for v, a in self.e0.items()},
            "gamma": render(self.gamma),
            "circle": [render(f) for f in self.circle],
            "circ": render(self.circ) if self.circ is not None else None,
        }
        if self.circ is not None:
            out["circ_table"] = circle_table(self.setup, self.circ)
        return out


def recover(setup: MaximalitySetup, phi: Optional[Formula] = None, e0: Optional[Mapping[str, int]] = None) -> RecoveryArtifacts:
    """Run the whole construction: separating theorem, gamma, circle(p) and circ(p)."""
    if phi is None:
        found = find_separating_theorem(setup)
        if found is None:
            raise HypothesesNotMet("no separating theorem found; the logics may share their theorems")
        phi, e0 = found
    elif e0 is None:
        v = is_valid(setup.L1, phi)
        if v.holds:
            raise ValueError("phi is valid in the larger logic, so it separates nothing")
        e0 = v.countermodel
    e0 = {v: setup.L1.algebra.element(x) for v, x in e0.items()}
    gamma = build_gamma(setup, phi, e0)
    circle = recovery_set(setup, gamma)
    return RecoveryArtifacts(setup, phi, dict(e0), gamma, circle, circle_formula(setup, circle))
