"""Acceptance criteria 1-10, each checked at its stated tolerance.

Where an independent check is affordable the package's answer is compared
with the fraction-arithmetic oracle in ``brute``.  Every criterion records a
PASS/FAIL line; the lines are printed at the end of a pytest run and when the
file is executed directly (``python3 tests/test_acceptance.py``).
"""
import json
import random
import sys
import time
from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest

import brute
from lukamax import jfour, lattice, oracles, qvar, reproduce
from lukamax.algebra import UnaryClone, chain_embedding, chain_product, make_chain
from lukamax.cli import main as cli_main
from lukamax.formula import SIG_J4, Op, Var, parse, random_formula, render, substitute
from lukamax.matrix import (
    BOTTOM,
    LUK_OPS,
    Sequent,
    apply_unary,
    check_translation_equivalence,
    cpl,
    entails,
    explosion_rule,
    gnot,
    ideal_conditions,
    is_paraconsistent,
    is_valid,
    lam,
    lfi_check,
    luk,
    lukbar,
    random_sequent,
)
from lukamax.recovery import HypothesesNotMet, build_setup, check_star, classical_setup, dat_check, recover

TITLES = {
    1: "two filters on LV4: four verdicts with countermodels",
    2: "recovery fixtures, alpha maps, (*) and DAT batteries",
    3: "LV7 obstruction by exhaustive clone search",
    4: "characteristic terms and filter translations",
    5: "explosion rules and the product characterization",
    6: "number-theoretic deciders against the lattice oracle",
    7: "critical algebras, Q-inclusion, minimal quasivarieties",
    8: "J4 tables, calculi, corpus and semantic checks",
    9: "paraconsistency, LFI and ideal paraconsistency",
    10: "reproduce aggregates 1-9 and exits 0",
}
RESULTS = {}

P, Q = Var("p"), Var("q")
HALF, THIRD = Fraction(1, 2), Fraction(1, 3)


class Checks:
    """Named sub-checks of one criterion; the criterion passes when all do."""

    def __init__(self):
        self.items = []

    def __call__(self, name, ok, detail=None):
        self.items.append((name, bool(ok), detail))

    @property
    def failed(self):
        return [(n, d) for n, ok, d in self.items if not ok]


def lukv(n, f, x, var="p"):
    return brute.evaluate(f, {var: x}, brute.luk_ops(n))


def table(n, f):
    return [lukv(n, f, x) for x in brute.chain_values(n)]


# ---------------------------------------------------------------------------


def criterion_1(c):
    lem2 = parse("(p | !p) o* (p | !p)")
    c("L^1_3 validates the squared excluded middle", is_valid(luk(3, 1), lem2).holds and brute.luk_entails(3, 1, [], lem2) is None)
    v = is_valid(luk(3, 2), lem2)
    env = brute.luk_entails(3, 2, [], lem2)
    c("L^2_3 refutes it at p=1/3 with value 1/3",
      not v.holds and v.labelled() == {"p": "1/3"} and v.logic.label(v.values[render(lem2)]) == "1/3"
      and env == {"p": THIRD} and brute.evaluate(lem2, env, brute.luk_ops(3)) == THIRD)
    s = Sequent([P], parse("(p o* p) o+ (p o* p)"))
    c("p |- (p o* p) o+ (p o* p) holds in L^2_3", entails(luk(3, 2), s).holds and brute.luk_entails(3, 2, s.premises, s.conclusion) is None)
    v = entails(luk(3, 1), s)
    env = brute.luk_entails(3, 1, s.premises, s.conclusion)
    c("it fails in L^1_3 at p=1/3 with value 0",
      not v.holds and v.labelled() == {"p": "1/3"} and v.logic.label(v.values[render(s.conclusion)]) == "0"
      and env == {"p": THIRD} and brute.evaluate(s.conclusion, env, brute.luk_ops(3)) == 0)


def _brute_dat(n, i, m, j, circle, seed, count=100):
    """DAT on seeded sequents, both sides decided by the fraction oracle."""
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        s = random_sequent(rng, LUK_OPS, ["p", "q", "r"], 5)
        extra = [substitute(f, {"p": Var(v)}) for v in s.variables() for f in circle]
        small = brute.luk_entails(m, j, s.premises, s.conclusion) is None
        large = brute.luk_entails(n, i, list(s.premises) + extra, s.conclusion) is None
        bad += small != large
    return bad


def _brute_star(n, i, image, circle):
    vals = brute.chain_values(n)
    thr = Fraction(i, n)
    return all(all(lukv(n, f, x) >= thr for f in circle) == (k in image) for k, x in enumerate(vals))


def criterion_2(c):
    one, half = Fraction(1), HALF
    s = classical_setup(luk(2, 2))
    art = recover(s, parse("(p1 -> !p1) -> !p1"), {"p1": "1/2"})
    c("ExL3(1): circ is p | !p", brute.luk_entails(2, 2, [art.circ], parse("p | !p")) is None
      and brute.luk_entails(2, 2, [parse("p | !p")], art.circ) is None, render(art.circ))
    c("ExL3(1): table 1, 1/2, 0 -> 1, 1/2, 1", table(2, art.circ) == [one, half, one])
    s = classical_setup(luk(2, 1))
    art = recover(s, parse("!((!p1 -> p1) & (p1 -> !p1))"), {"p1": "1/2"})
    c("ExL3(2): table 1, 1/2, 0 -> 1, 0, 1", table(2, art.circ) == [one, 0, one])

    s4 = build_setup(luk(3, 1), cpl(), chain_embedding(1, 3))
    c("LV4: alpha maps are !p", {k: render(v) for k, v in s4.alpha.items()} == {(1, 2): "!p", (2, 1): "!p"})
    art4 = recover(s4)
    c("LV4: (*) holds", check_star(s4, art4.circle).holds and _brute_star(3, 1, {0, 3}, art4.circle))

    s5 = build_setup(luk(4, 1), luk(2, 1), chain_embedding(2, 4))
    got = {k: render(v) for k, v in s5.alpha.items()}
    c("LV5: alpha maps p o+ p, p o* p, !p, !p", got == {(2, 1): "p o+ p", (3, 1): "p o* p", (2, 3): "!p", (3, 2): "!p"}, got)
    elems = [Fraction(a, 4) for a in s5.elements]
    moves = all(lukv(4, f, elems[a - 1]) == elems[b - 1] for (a, b), f in s5.alpha.items())
    c("LV5: alpha maps move the right elements (fraction oracle)", elems == [half, Fraction(1, 4), Fraction(3, 4)] and moves)
    art5 = recover(s5)
    c("LV5: (*) holds", check_star(s5, art5.circle).holds and _brute_star(4, 1, {0, 2, 4}, art5.circle))

    for name, setup, art, args, seed in (
        ("L^1_3 over CPL", s4, art4, (3, 1, 1, 1), 31),
        ("L^1_4 over L^1/4_2", s5, art5, (4, 1, 2, 1), 41),
    ):
        rng = random.Random(seed)
        lib_bad = sum(
            not dat_check(setup, art.circle, q.premises, q.conclusion).holds
            for q in (random_sequent(rng, LUK_OPS, ["p", "q", "r"], 5) for _ in range(100))
        )
        c(f"DAT battery {name}: 100/100", lib_bad == 0 and _brute_dat(*args, art.circle, seed) == 0, lib_bad)


def _clone_closed(T, n):
    """The rows of ``T`` contain the identity and are closed under neg and imp."""
    base = n + 1
    weights = base ** np.arange(T.shape[1], dtype=np.int64)
    codes = np.sort(T.astype(np.int64) @ weights)

    def inside(rows):
        k = rows.astype(np.int64) @ weights
        pos = np.searchsorted(codes, k).clip(max=len(codes) - 1)
        return bool((codes[pos] == k).all())

    if not inside(np.arange(n + 1)[None, :]) or not inside(n - T):
        return False
    for start in range(0, len(T), 256):
        block = T[start:start + 256, None, :].astype(np.int64)
        imp = np.minimum(n, n - block + T[None, :, :])
        if not inside(imp.reshape(-1, T.shape[1])):
            return False
    return True


def criterion_3(c):
    t0 = time.perf_counter()
    clone = UnaryClone(make_chain(6), ops=[("neg", 1), ("imp", 2)], cap=7 ** 7).run()
    secs = time.perf_counter() - t0
    T = clone.tables
    c("clone search terminates within 7^7 functions in under 5 minutes", clone.complete and len(clone) <= 7 ** 7 and secs < 300,
      {"size": len(clone), "seconds": round(secs, 1)})
    c("the computed set really is closed (so it holds every term function)", _clone_closed(T, 6))
    c("no term maps 1/2 into {1/3, 2/3}", not np.isin(T[:, 3], [2, 4]).any())
    c("no term maps 1/3 or 2/3 to 1/2", not (T[:, [2, 4]] == 3).any())
    # independent reason: both sets are subuniverses, and term functions preserve them
    ops = brute.luk_ops(6)
    for sub in ({0, 3, 6}, {0, 2, 4, 6}):
        S = {Fraction(k, 6) for k in sub}
        c(f"{sorted(sub)}/6 is closed under neg and imp", all(ops["neg"](x) in S and ops["imp"](x, y) in S for x in S for y in S))
    try:
        build_setup(luk(6, 1), cpl(), chain_embedding(1, 6))
        c("setup against CPL rejected", False)
    except HypothesesNotMet as exc:
        c("setup against CPL rejected", "1/2->1/3" in exc.missing and "1/3->1/2" in exc.missing, exc.missing)


def criterion_4(c):
    bad = []
    for n in range(1, 7):
        for i in range(1, n + 1):
            want = [Fraction(1) if k >= i else Fraction(0) for k in range(n + 1)]
            if table(n, lam(n, i)) != want:
                bad.append((n, i))
    c("lambda_{i,n} characteristic tables exact for n <= 6", not bad, bad)
    bad, cross = [], []
    for n in range(1, 7):
        for i in range(1, n + 1):
            rng = random.Random(1000 * n + i)
            seqs = [random_sequent(rng, LUK_OPS, ["p", "q"], 5) for _ in range(50)]
            rep = check_translation_equivalence(n, i, seqs)
            if not rep.ok or rep.checked != 50:
                bad.append((n, i))
            tau = lam(n, i)
            for s in seqs[:3]:
                left = brute.luk_entails(n, i, s.premises, s.conclusion) is None
                right = brute.luk_entails(n, n, [apply_unary(tau, f) for f in s.premises], apply_unary(tau, s.conclusion)) is None
                if left != right:
                    cross.append((n, i, s.render()))
    c("translations round-trip on 50 sequents per (n, i)", not bad, bad)
    c("tau direction agrees with the fraction oracle on a subsample", not cross, cross)


def criterion_5(c):
    for q in (2, 3, 5):
        for j in range(1, q + 1):
            rule = explosion_rule(j)
            v = entails(luk(q, j), rule)
            env = brute.luk_entails(q, j, rule.premises, rule.conclusion)
            c(f"exp_{j} fails in L^{j}_{q}", not v.holds and v.countermodel is not None and env is not None)
            c(f"exp_{j} vacuous in CPL", brute.luk_entails(1, 1, rule.premises, P) is None)
            c(f"exp_{j} vacuous in Lbar^{j}_{q}", brute.lukbar_entails(q, j, rule.premises, P) is None
              and entails(lukbar(q, j), Sequent(rule.premises, P)).holds)
            rng = random.Random(7919 * q + j)
            bad = []
            L = lukbar(q, j)
            for _ in range(200):
                s = random_sequent(rng, LUK_OPS, ["p", "q", "r"], 3, max_premises=3)
                left = entails(L, s).holds
                right = brute.luk_entails(q, j, s.premises, s.conclusion) is None or brute.luk_entails(1, 1, s.premises, BOTTOM) is None
                if left != right:
                    bad.append(s.render())
            c(f"Lbar^{j}_{q} characterization on 200 sequents", not bad, bad[:3])


def criterion_6(c):
    bad = [(n, m) for n in range(1, 7) for m in lattice.divisors(n) if lattice.maximal_pair(n, m) != oracles.brute_maximal_pair(n, m)]
    c("maximal_pair equals the lattice oracle for n <= 6", not bad, bad)
    bad = [
        (n, sorted(S), m)
        for n in (4, 6)
        for S in oracles.antichains(n)
        for m in lattice.divisors(n)
        if lattice.axiomatic_ext_maximal(lattice.DivisorSet(n, S), m).maximal != oracles.brute_axiomatic_ext_maximal(n, S, m)
    ]
    c("axiomatic_ext_maximal equals the oracle for n in {4, 6}", not bad, bad)


def harness_is_critical(cs):
    # distinct parameters, and at most one parameter is a multiple of another one
    if len(set(cs)) < len(cs):
        return False
    tops = {b for a, b in product(range(len(cs)), repeat=2) if a != b and cs[b] % cs[a] == 0}
    return len(tops) <= 1


def _mv_nfold_contradiction(chains, q):
    """Truth of q(x & !x) = 1 => y | !y = 1 on a chain product, by fractions."""
    carrier, neg, imp = brute.mv_product(chains)
    one = tuple(Fraction(1) for _ in chains)
    oplus = lambda a, b: imp(neg(a), b)
    orr = lambda a, b: imp(imp(a, b), b)
    andd = lambda a, b: neg(orr(neg(a), neg(b)))
    for x in carrier:
        c = andd(x, neg(x))
        acc = c
        for _ in range(q - 1):
            acc = oplus(acc, c)
        if acc == one and any(orr(y, neg(y)) != one for y in carrier):
            return False
    return True


def criterion_7(c):
    lists = [cs for n in (1, 2, 3) for cs in product(range(1, 5), repeat=n)]
    bad = [cs for cs in lists if qvar.is_critical(cs) != harness_is_critical(cs)]
    c(f"is_critical on {len(lists)} chain lists", not bad, bad)
    bad, cross = [], []
    for q in (2, 3, 5, 7):
        for k in range(1, 13):
            got = qvar.q_included([[q, 1]], [[k]])
            if got != (k % q == 0):
                bad.append((q, k))
            if got != brute.q_included([(q, 1)], [(k,)]):
                cross.append((q, k))
    c("Q[q,1] inside Q[k] iff q | k", not bad, bad)
    c("same verdicts from the homomorphism oracle", not cross, cross)

    def minimal_ok(fams, base):
        strict = all(qvar.q_strict(base, f) for f in fams)
        incomparable = all(not qvar.q_included(a, b) and not qvar.q_included(b, a) for a, b in combinations(fams, 2))
        return bool(fams) and strict and incomparable

    bad = [k for k in range(2, 13) if not minimal_ok(qvar.minimal_over_boolean(k), [[1]])]
    c("minimal_over_boolean(k), k <= 12", not bad, bad)
    bad = [(n, k) for n in range(1, 4) for k in range(2, 5) if not minimal_ok(qvar.minimal_over(n, k), [[n]])]
    c("minimal_over(n, k), n <= 3, k <= 4", not bad, bad)
    for q in (2, 3, 5):
        qi = qvar.contradiction_qi(q)
        on_prod = qvar.quasi_identity_holds(chain_product((q, 1)), qi).holds
        on_chain = qvar.quasi_identity_holds(make_chain(q), qi).holds
        c(f"q={q}: quasi-identity holds on LV{q + 1} x LV2, fails on LV{q + 1}",
          on_prod and not on_chain and _mv_nfold_contradiction((q, 1), q) and not _mv_nfold_contradiction((q,), q))


# rows and columns in the order 1, 2/3, 1/3, 0
A4_OR = [["1", "1", "1", "1"], ["1", "2/3", "2/3", "2/3"], ["1", "2/3", "1/3", "1/3"], ["1", "2/3", "1/3", "0"]]
A4_NEG = ["0", "1/3", "2/3", "1"]
A4_SQ = ["1", "1/3", "0", "0"]


def _j4_shadows():
    ops = brute.j4_ops()
    o, n, s, t, i = ops["or"], ops["neg"], ops["sq"], ops["tilde"], ops["imp"]
    d = lambda x: x >= THIRD
    props = {
        1: lambda a, b: d(o(a, b)) == (d(a) or d(b)),
        2: lambda a, b: (not d(a)) == d(t(a)),
        3: lambda a, b: d(i(a, b)) == ((not d(a)) or d(b)),
        4: lambda a, b: d(a) or d(n(a)),
        5: lambda a, b: d(a) == d(n(n(a))),
        6: lambda a, b: (not d(n(t(a)))) or d(a),
        7: lambda a, b: d(n(o(a, b))) == (d(n(a)) and d(n(b))),
        8: lambda a, b: (not d(s(a))) or d(a),
        9: lambda a, b: d(s(o(a, b))) == (d(s(a)) or d(s(b))),
        10: lambda a, b: d(s(s(a))) == (not d(n(a))),
        11: lambda a, b: d(n(s(a))) == d(n(a)),
        12: lambda a, b: (not d(s(a))) == d(s(n(a))),
    }
    vals = brute.chain_values(3)
    return {k: all(f(a, b) for a in vals for b in vals) for k, f in props.items()}


def criterion_8(c):
    A = jfour.a4()
    order = [3, 2, 1, 0]
    lab = A.labels
    c("A4 tables match the printed ones",
      [[lab[A.table("or")[a, b]] for b in order] for a in order] == A4_OR
      and [lab[A.table("neg")[a]] for a in order] == A4_NEG
      and [lab[A.table("sq")[a]] for a in order] == A4_SQ)
    ops = brute.j4_ops()
    vals = brute.chain_values(3)
    dt = jfour.derived_tables()
    bad = []
    for sym, t in dt.items():
        if sym in ("imp", "and", "iff"):
            bad += [sym for a in range(4) for b in range(4) if Fraction(t[a][b], 3) != ops[sym](vals[a], vals[b])]
        elif sym in ops:
            bad += [sym for a in range(4) if Fraction(t[a], 3) != ops[sym](vals[a])]
    c("derived connectives match their semantics", jfour.check_derived().ok and not bad, sorted(set(bad)))
    sigma_imp = parse("((nabla !p | r) & (!p | nabla r) & !beta13 r) | ((~p & alpha13 r) | (alpha13 p & alpha13 r))", SIG_J4)
    luk_imp = brute.luk_ops(3)["imp"]
    c("Lukasiewicz implication in the J4 signature matches LV4 on 16 pairs",
      jfour.luk_imp_definability_check().holds
      and all(brute.evaluate(sigma_imp, {"p": a, "r": b}, ops) == luk_imp(a, b) for a in vals for b in vals))
    sound = {nm: brute.j4_entails([], f) is None for nm, f in jfour.H4.schemas}
    c("every H4 schema (C1-C6, Ax1-Ax12) is J4-valid", len(sound) == 18 and all(sound.values()) and all(jfour.soundness_scan(jfour.H4).values()),
      [k for k, ok in sound.items() if not ok])

    mp = jfour.check_proof(jfour.H4, [P, parse("p -> q", SIG_J4)], [
        jfour.ProofStep(P, "premise"),
        jfour.ProofStep(parse("p -> q", SIG_J4), "premise"),
        jfour.ProofStep(Q, "mp", (1, 2)),
    ])
    c("MP accepted", mp.accepted)
    contra = parse("p & !p", SIG_J4)
    steps = [jfour.ProofStep(contra, "premise"), jfour.ProofStep(jfour.BOTTOM, "exp1", (1,))]
    c("exp1 accepted in H4bar, rejected in H4",
      jfour.check_proof(jfour.H4BAR, [contra], steps).accepted and not jfour.check_proof(jfour.H4, [contra], steps).accepted)
    c("bottom is constantly 0", all(brute.evaluate(jfour.BOTTOM, {"p0": x}, ops) == 0 for x in vals))

    verdicts = {f.name: jfour.check_proof_file(f) for f in jfour.corpus_files()}
    h4 = [k for k, v in verdicts.items() if v.calculus == "H4"]
    c(f"proof corpus checks green ({len(h4)} H4 proofs)", len(h4) >= 10 and all(v.accepted for v in verdicts.values()),
      [k for k, v in verdicts.items() if not v.accepted])
    nt = json.loads((jfour.CORPUS_DIR / "nontheorems.json").read_text())["sequents"]
    bad = []
    for item in nt:
        prem = [parse(x, SIG_J4) for x in item["premises"]]
        concl = parse(item["conclusion"], SIG_J4)
        env = brute.j4_entails(prem, concl)
        v = jfour.countermodel_j4(prem, concl)
        if env is None or v.holds or v.labelled() != item["countermodel"]:
            bad.append(item["conclusion"])
    c(f"{len(nt)} non-theorems yield countermodels", len(nt) >= 10 and not bad, bad)

    rng = random.Random(2024)
    gen = [("or", 2), ("neg", 1), ("sq", 1), ("imp", 2), ("tilde", 1)]
    bad = 0
    for _ in range(200):
        gamma = [random_formula(rng, gen, ["p", "q", "r"], 2) for _ in range(rng.randint(0, 2))]
        a = random_formula(rng, gen, ["p", "q", "r"], 2)
        b = random_formula(rng, gen, ["p", "q", "r"], 2)
        left = brute.j4_entails(gamma + [a], b) is None
        right = brute.j4_entails(gamma, Op("imp", (a, b))) is None
        bad += left != right
    c("semantic deduction theorem on 200 seeded sequents", bad == 0 and jfour.deduction_theorem_check(200, seed=0).ok, bad)
    shadows = _j4_shadows()
    lib = jfour.maxset_shadows()
    c("maximal-set designation shadows (1)-(12)", all(shadows.values()) and all(lib.values()) and len(lib) == 12,
      [k for k, ok in shadows.items() if not ok])


def criterion_9(c):
    bad = []
    for n in range(1, 9):
        for i in range(1, n + 1):
            lib = is_paraconsistent(luk(n, i))[0]
            orc = brute.luk_entails(n, i, [P, parse("!p")], Q) is not None
            if not lib == orc == (2 * i <= n):
                bad.append((n, i))
    c("paraconsistent iff 2i <= n, for n <= 8", not bad, bad)
    bad = []
    contra = Op("and", (P, Op("neg", (P,))))
    for n in range(1, 7):
        for i in range(1, n // 2 + 1):
            circ = apply_unary(gnot(n, i), contra)
            gentle = brute.luk_entails(n, i, [P, parse("!p"), circ], Q) is None
            if not (lfi_check(luk(n, i), parse("!p"), circ) and gentle):
                bad.append((n, i))
    c("circ = ~(p & !p) gives an LFI for every paraconsistent L^i_n, n <= 6", not bad, bad)
    rng = random.Random(97)
    for n, i in ((3, 1), (2, 1), (5, 2)):
        samples = [random_sequent(rng, LUK_OPS, ["p", "q"], 3) for _ in range(40)]
        rep = ideal_conditions(n, i, samples)
        c(f"L^{i}_{n} satisfies (i)-(iv)", rep.ok, rep.to_json())
    c("J4 satisfies (i)-(iv)", jfour.j4_ideal_conditions().ok)


def criterion_10(c, capsys=None):
    code = cli_main(["reproduce"])
    out = capsys.readouterr().out if capsys else None
    c("reproduce exits 0", code == 0)
    if out is not None:
        doc = json.loads(out)
        names = [s["suite"] for s in doc["suites"]]
        c("all nine suites ran and passed", doc["ok"] and names == reproduce.DEFAULT_ORDER and all(s["ok"] for s in doc["suites"]), names)


CRITERIA = {k: globals()[f"criterion_{k}"] for k in TITLES}


def evaluate_criterion(k, **kw):
    c = Checks()
    t0 = time.perf_counter()
    try:
        CRITERIA[k](c, **kw)
    except Exception as exc:  # a crash is a failure of the criterion, not of the harness
        c(f"raised {type(exc).__name__}", False, str(exc))
    ok = bool(c.items) and not c.failed
    line = f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {TITLES[k]} ({time.perf_counter() - t0:.1f}s)"
    RESULTS[k] = line
    return ok, line, c


@pytest.mark.parametrize("k", [k for k in TITLES if k != 10])
def test_criterion(k):
    ok, line, c = evaluate_criterion(k)
    print(line)
    assert ok, c.failed


def test_criterion_10(capsys):
    ok, line, c = evaluate_criterion(10, capsys=capsys)
    print(line)
    assert ok, c.failed


if __name__ == "__main__":
    results = [evaluate_criterion(k) for k in TITLES]
    for ok, line, c in results:
        print(line)
        for name, detail in c.failed:
            print(f"    failed: {name} {detail if detail is not None else ''}")
    sys.exit(0 if all(ok for ok, _, _ in results) else 1)
