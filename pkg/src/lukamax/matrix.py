"""Matrix logics and exhaustive semantic consequence.

A :class:`MatrixLogic` pairs a finite algebra with a designated set.  All
checks enumerate assignments in lexicographic order (first variable most
significant), so the countermodel reported is always the lexicographically
least one.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import (
    TABLE_DTYPE,
    AlgebraError,
    FiniteAlgebra,
    chain_embedding,
    eval_vector,
    is_homomorphism,
    make_chain,
    make_product,
    order_filter,
    synth_unary,
    term_function,
)
from .formula import (
    SIG_LUK,
    Formula,
    FormulaError,
    Op,
    Var,
    parse,
    random_formula,
    render,
    substitute,
    variables,
    variables_of,
)

DEFAULT_MAX_VARS = 10
CHUNK = 1 << 20


class TooManyVariables(ValueError):
    pass


class MatrixLogic:
    def __init__(self, algebra: FiniteAlgebra, designated: Iterable[int], ident: tuple = ("custom",), name: Optional[str] = None):
        des = frozenset(int(d) for d in designated)
        if not des:
            raise AlgebraError("designated set must be non-empty")
        if any(not 0 <= d < algebra.size for d in des):
            raise AlgebraError("designated element out of range")
        self.algebra = algebra
        self.designated = des
        self.ident = ident
        self.name = name or f"<{algebra.name}, {{{', '.join(algebra.labels[d] for d in sorted(des))}}}>"
        mask = np.zeros(algebra.size, dtype=bool)
        mask[list(des)] = True
        mask.setflags(write=False)
        self.mask = mask

    @property
    def sig(self):
        return self.algebra.sig

    def is_designated(self, k: int) -> bool:
        return bool(self.mask[k])

    def label(self, k: int) -> str:
        return self.algebra.labels[k]

    def __repr__(self):
        return f"MatrixLogic({self.name})"


def luk(n: int, i: int) -> MatrixLogic:
    """The logic L^i_n: the chain LV(n+1) with designated filter ``{k/n : k >= i}``."""
    return MatrixLogic(make_chain(n), order_filter(n, i), ("luk", n, i), f"L^{i}_{n}")


def lukbar(n: int, i: int) -> MatrixLogic:
    """The product LV(n+1) x LV2 with designated set ``F_{i/n} x {1}``."""
    A = make_product(make_chain(n), make_chain(1))
    des = [a * 2 + 1 for a in order_filter(n, i)]
    return MatrixLogic(A, des, ("lukbar", n, i), f"Lbar^{i}_{n}")


def cpl() -> MatrixLogic:
    return MatrixLogic(make_chain(1), [1], ("luk", 1, 1), "CPL")


@dataclass(frozen=True)
class Sequent:
    premises: Tuple[Formula, ...]
    conclusion: Formula

    def __init__(self, premises: Sequence[Formula], conclusion: Formula):
        object.__setattr__(self, "premises", tuple(premises))
        object.__setattr__(self, "conclusion", conclusion)

    def variables(self) -> List[str]:
        return variables_of(list(self.premises) + [self.conclusion])

    def render(self) -> str:
        left = " ; ".join(render(p) for p in self.premises)
        return f"{left} |- {render(self.conclusion)}".strip()

    def __str__(self):
        return self.render()


def parse_sequent(text: str, sig=SIG_LUK) -> Sequent:
    """Parse ``phi1 ; phi2 |- psi`` (premises may be empty)."""
    if text.count("|-") != 1:
        raise FormulaError("a sequent needs exactly one '|-'")
    left, right = text.split("|-")
    prem = [parse(part, sig) for part in left.split(";") if part.strip()]
    return Sequent(prem, parse(right, sig))


@dataclass
class Verdict:
    holds: bool
    countermodel: Optional[Dict[str, int]] = None
    logic: Optional[MatrixLogic] = None
    values: Dict[str, int] = field(default_factory=dict)
    note: str = ""

    def __bool__(self):
        return self.holds

    def labelled(self) -> Optional[Dict[str, str]]:
        if self.countermodel is None:
            return None
        if self.logic is None:
            return {v: str(k) for v, k in self.countermodel.items()}
        return {v: self.logic.label(k) for v, k in self.countermodel.items()}

    def to_json(self) -> dict:
        out = {"holds": self.holds, "countermodel": self.labelled()}
        if self.values and self.logic is not None:
            out["values"] = {k: self.logic.label(v) for k, v in self.values.items()}
        if self.note:
            out["note"] = self.note
        return out


def assignment_block(N: int, k: int, start: int, stop: int) -> List[np.ndarray]:
    """Digit arrays (first variable most significant) for assignments ``start..stop-1``."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = []
    for j in range(k):
        out.append(((idx // (N ** (k - 1 - j))) % N).astype(TABLE_DTYPE))
    return out


def scan(
    L: MatrixLogic,
    premises: Sequence[Formula],
    conclusion: Optional[Formula],
    max_vars: int = DEFAULT_MAX_VARS,
    names: Optional[Sequence[str]] = None,
):
    """Index of the first assignment with all premises designated and the conclusion not.

    Returns ``(names, index)`` with ``index`` None when there is no such
    assignment.  A ``None`` conclusion asks for satisfiability of the premises.
    """
    forms = list(premises) + ([conclusion] if conclusion is not None else [])
    names = list(names) if names is not None else variables_of(forms)
    k = len(names)
    if k > max_vars:
        raise TooManyVariables(f"{k} variables exceed the bound of {max_vars} (raise --max-vars to override)")
    N = L.algebra.size
    total = N ** k
    mask = L.mask
    for start in range(0, total, CHUNK):
        stop = min(total, start + CHUNK)
        cols = assignment_block(N, k, start, stop)
        env = dict(zip(names, cols))
        memo: dict = {}
        ok = np.ones(stop - start, dtype=bool)
        for f in premises:
            ok &= mask[eval_vector(L.algebra, f, env, stop - start, memo)]
            if not ok.any():
                break
        if conclusion is not None and ok.any():
            ok &= ~mask[eval_vector(L.algebra, conclusion, env, stop - start, memo)]
        hits = np.nonzero(ok)[0]
        if len(hits):
            return names, start + int(hits[0])
    return names, None


def decode(N: int, k: int, index: int) -> List[int]:
    return [(index // (N ** (k - 1 - j))) % N for j in range(k)]


def entails(L: MatrixLogic, s: Sequent, max_vars: int = DEFAULT_MAX_VARS) -> Verdict:
    names, hit = scan(L, s.premises, s.conclusion, max_vars)
    if hit is None:
        return Verdict(True, None, L)
    cm = dict(zip(names, decode(L.algebra.size, len(names), hit)))
    vals = {render(s.conclusion): L.algebra.eval(s.conclusion, cm)}
    for p in s.premises:
        vals[render(p)] = L.algebra.eval(p, cm)
    return Verdict(False, cm, L, vals)


def is_valid(L: MatrixLogic, f: Formula, max_vars: int = DEFAULT_MAX_VARS) -> Verdict:
    return entails(L, Sequent([], f), max_vars)


def rule_valid(L: MatrixLogic, s: Sequent, max_vars: int = DEFAULT_MAX_VARS) -> Verdict:
    """Validity of the structural rule ``s``; for a matrix this is just consequence."""
    return entails(L, s, max_vars)


def satisfiable(L: MatrixLogic, formulas: Sequence[Formula], max_vars: int = DEFAULT_MAX_VARS) -> Optional[Dict[str, int]]:
    """A lexicographically least assignment designating every formula, or None."""
    names, hit = scan(L, formulas, None, max_vars)
    if hit is None:
        return None
    return dict(zip(names, decode(L.algebra.size, len(names), hit)))


def equivalent(L: MatrixLogic, f: Formula, g: Formula, max_vars: int = DEFAULT_MAX_VARS) -> bool:
    """Mutual consequence ``f -||- g``."""
    return entails(L, Sequent([f], g), max_vars).holds and entails(L, Sequent([g], f), max_vars).holds


# ---------------------------------------------------------------------------
# connective-level properties


def unary_table(L: MatrixLogic, template: Formula) -> np.ndarray:
    return term_function(L.algebra, template)


def binary_table(L: MatrixLogic, template: Formula) -> np.ndarray:
    vs = variables(template)
    if len(vs) > 2:
        raise FormulaError(f"expected at most two variables, got {vs}")
    vs = vs + [v for v in ("p", "q", "x", "y") if v not in vs][: 2 - len(vs)]
    N = L.algebra.size
    a, b = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    env = {vs[0]: a.ravel().astype(TABLE_DTYPE), vs[1]: b.ravel().astype(TABLE_DTYPE)}
    return eval_vector(L.algebra, template, env, N * N).reshape(N, N)


NEG = Op("neg", (Var("p"),))
IMP = Op("imp", (Var("p"), Var("q")))


def is_paraconsistent(L: MatrixLogic, neg: Formula = NEG):
    """Search ``a`` with ``a`` and ``neg(a)`` designated and some ``b`` undesignated.

    Returns ``(True, {"a": a, "b": b})`` (so ``p, neg p`` does not entail
    ``q`` under ``p=a, q=b``) or ``(False, None)``.
    """
    t = unary_table(L, neg)
    undesignated = [b for b in range(L.algebra.size) if not L.mask[b]]
    if not undesignated:
        return False, None
    for a in range(L.algebra.size):
        if L.mask[a] and L.mask[t[a]]:
            return True, {"a": a, "b": undesignated[0]}
    return False, None


def is_deductive_implication(L: MatrixLogic, imp: Formula = IMP) -> bool:
    """Pointwise: ``imp(a, b)`` designated iff (``a`` designated implies ``b`` designated)."""
    t = binary_table(L, imp)
    m = L.mask
    expected = ~m[:, None] | m[None, :]
    return bool(np.array_equal(m[t], expected))


def lfi_check(L: MatrixLogic, neg: Formula, circ: Formula) -> bool:
    """Paraconsistent w.r.t. ``neg`` while ``a, neg a, circ a`` is never jointly designated."""
    para, _ = is_paraconsistent(L, neg)
    if not para:
        return False
    tn, tc = unary_table(L, neg), unary_table(L, circ)
    m = L.mask
    return not bool((m & m[tn] & m[tc]).any())


# ---------------------------------------------------------------------------
# characteristic terms and translations


def lam(n: int, m: int, cap: int = 5_000_000) -> Formula:
    """A one-variable term on LV(n+1) with value 1 on ``F_{m/n}`` and 0 below it."""
    A = make_chain(n)
    target = {k: (n if k >= m else 0) for k in range(n + 1)}
    f = synth_unary(A, target, cap)
    if f is None:
        raise AlgebraError(f"no term realizes the characteristic function of F_{m}/{n}")
    return f


def gnot(n: int, i: int) -> Formula:
    """The classical-style negation ``~^i_n p = neg lam_{i,n}(p)``."""
    return Op("neg", (lam(n, i),))


def gimp(n: int, i: int) -> Formula:
    """``p =>^i_n q``, i.e. ``~^i_n p | q``."""
    return Op("or", (gnot(n, i), Var("q")))


def apply_unary(template: Formula, f: Formula, var: str = "p") -> Formula:
    return substitute(template, {var: f})


def random_sequent(rng: random.Random, ops, names, max_depth: int, max_premises: int = 2) -> Sequent:
    prem = [random_formula(rng, ops, names, max_depth) for _ in range(rng.randint(0, max_premises))]
    return Sequent(prem, random_formula(rng, ops, names, max_depth))


LUK_OPS = [("neg", 1), ("imp", 2), ("or", 2), ("and", 2), ("oplus", 2), ("otimes", 2)]


@dataclass
class TranslationReport:
    n: int
    i: int
    tau: Formula
    sigma: Formula
    checked: int = 0
    failures: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "i": self.i,
            "tau": render(self.tau),
            "sigma": render(self.sigma),
            "checked": self.checked,
            "ok": self.ok,
            "failures": self.failures,
        }


def check_translation_equivalence(n: int, i: int, samples: Sequence[Sequent]) -> TranslationReport:
    """Check that ``tau = lam_{i,n}`` and ``sigma = lam_{n,n}`` translate between L^i_n and L^n_n."""
    Li, Ln = luk(n, i), luk(n, n)
    tau_t, sig_t = lam(n, i), lam(n, n)
    tau = lambda f: apply_unary(tau_t, f)
    sig = lambda f: apply_unary(sig_t, f)
    rep = TranslationReport(n, i, tau_t, sig_t)
    for s in samples:
        lhs = entails(Li, s).holds
        rhs = entails(Ln, Sequent([tau(g) for g in s.premises], tau(s.conclusion))).holds
        if lhs != rhs:
            rep.failures.append({"check": "tau", "sequent": s.render(), "source": lhs, "target": rhs})
        lhs = entails(Ln, s).holds
        rhs = entails(Li, Sequent([sig(g) for g in s.premises], sig(s.conclusion))).holds
        if lhs != rhs:
            rep.failures.append({"check": "sigma", "sequent": s.render(), "source": lhs, "target": rhs})
        for f in list(s.premises) + [s.conclusion]:
            if not equivalent(Li, f, sig(tau(f))):
                rep.failures.append({"check": "sigma-tau roundtrip", "formula": render(f)})
            if not equivalent(Ln, f, tau(sig(f))):
                rep.failures.append({"check": "tau-sigma roundtrip", "formula": render(f)})
        rep.checked += 1
    return rep


# ---------------------------------------------------------------------------
# sublogics


@dataclass
class SublogicReport:
    homomorphism: bool
    filter_matches: bool
    checked: int = 0
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.homomorphism and self.filter_matches and not self.violations

    def to_json(self) -> dict:
        return {
            "homomorphism": self.homomorphism,
            "filter_matches": self.filter_matches,
            "checked": self.checked,
            "violations": self.violations,
            "ok": self.ok,
        }


def filter_restricts(L1: MatrixLogic, L2: MatrixLogic, embedding: Sequence[int]) -> bool:
    """``F2 = F1 ∩ A2`` read through the embedding."""
    return all(L2.is_designated(b) == L1.is_designated(embedding[b]) for b in range(L2.algebra.size))


def sublogic_check(L1: MatrixLogic, L2: MatrixLogic, embedding: Sequence[int], samples: Sequence[Sequent] = ()) -> SublogicReport:
    """Verify the structural hypotheses and that L1-consequence implies L2-consequence on samples."""
    hom = is_homomorphism(L2.algebra, L1.algebra, embedding) and len(set(embedding)) == len(embedding)
    filt = filter_restricts(L1, L2, embedding)
    rep = SublogicReport(hom, filt)
    for s in samples:
        if entails(L1, s).holds and not entails(L2, s).holds:
            rep.violations.append(s.render())
        rep.checked += 1
    return rep


def chain_sublogic_embedding(n: int, m: int) -> List[int]:
    return chain_embedding(m, n)


# ---------------------------------------------------------------------------
# the product logics


def classically_unsatisfiable(premises: Sequence[Formula]) -> bool:
    """No Boolean assignment designates every premise (empty set is satisfiable)."""
    return satisfiable(cpl(), premises) is None


def bar_characterization(n: int, i: int, s: Sequent) -> Tuple[bool, bool]:
    """``(Lbar verdict, L verdict or classical-unsat)``; the two agree for every sequent."""
    left = entails(lukbar(n, i), s).holds
    right = entails(luk(n, i), s).holds or classically_unsatisfiable(s.premises)
    return left, right


def explosion_rule(j: int) -> Sequent:
    """``j(p & !p) / bottom`` with bottom = ``!(p -> p)``."""
    p = Var("p")
    contra = Op("and", (p, Op("neg", (p,))))
    prem = contra
    for _ in range(j - 1):
        prem = Op("oplus", (prem, contra))
    return Sequent([prem], BOTTOM)


TOP = Op("imp", (Var("p"), Var("p")))
BOTTOM = Op("neg", (TOP,))


# ---------------------------------------------------------------------------
# ideal paraconsistency


@dataclass
class IdealReport:
    n: int
    i: int
    paraconsistent: bool
    deductive: bool
    classical_reduct: bool
    sublogic_of_cpl: bool
    maximal: Optional[bool]
    extensions_explosive: bool
    witness: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return all([self.paraconsistent, self.deductive, self.classical_reduct, self.sublogic_of_cpl, self.maximal is not False, self.extensions_explosive])

    def to_json(self) -> dict:
        return {
            "logic": f"L^{self.i}_{self.n}",
            "i_paraconsistent": self.paraconsistent,
            "ii_deductive_implication": self.deductive,
            "iii_classical_presentation": self.classical_reduct,
            "iv_sublogic_of_cpl": self.sublogic_of_cpl,
            "maximal_wrt_cpl": self.maximal,
            "proper_extension_explosive": self.extensions_explosive,
            "witness": self.witness,
            "ok": self.ok,
        }


def ideal_conditions(n: int, i: int, samples: Sequence[Sequent] = ()) -> IdealReport:
    """Conditions (i)-(iv) of ideal paraconsistency for L^i_n with ``neg`` and ``=>^i_n``.

    Maximality is decided by building a recovery setup against CPL; the
    explosiveness of proper extensions is checked on the product logic, the
    only candidate between L^i_n and CPL when n is prime.
    """
    from .recovery import HypothesesNotMet, build_setup

    L = luk(n, i)
    para, wit = is_paraconsistent(L)
    imp = gimp(n, i)
    deductive = is_deductive_implication(L, imp)
    emb = chain_embedding(1, n)
    B = cpl()
    # on {0,1} neg and =>^i_n must be the classical connectives
    tn = unary_table(L, NEG)
    ti = binary_table(L, imp)
    classical = all(tn[emb[a]] == emb[1 - a] for a in (0, 1)) and all(
        ti[emb[a], emb[b]] == emb[int((not a) or b)] for a in (0, 1) for b in (0, 1)
    )
    sub = sublogic_check(L, B, emb, samples).ok
    try:
        build_setup(L, B, emb)
        maximal = True
    except HypothesesNotMet:
        maximal = None
    Lb = lukbar(n, i)
    explosive = entails(Lb, Sequent([Var("p"), Op("neg", (Var("p"),))], Var("q"))).holds
    return IdealReport(n, i, para, deductive, classical, sub, maximal, explosive, wit)
