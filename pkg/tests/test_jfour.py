import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from lukamax import jfour
from lukamax.algebra import make_chain
from lukamax.formula import SIG_J4, Op, Var, parse, random_formula
from lukamax.jfour import (
    BOTTOM,
    H4,
    H4BAR,
    ProofStep,
    a4,
    check_derived,
    check_proof,
    check_proof_file,
    corpus_files,
    countermodel_j4,
    deduction_theorem_check,
    derived_tables,
    designation_classical,
    j4,
    j4_ideal_conditions,
    j4bar,
    load_proof,
    luk_imp_definability_check,
    match_axiom,
    maxset_shadows,
    proof_to_json,
    search_proof,
    soundness_scan,
    truth_lemma_classification,
)
from lukamax.matrix import Sequent, entails, is_valid, lukbar


def J(text):
    return parse(text, SIG_J4)


def fr(k):
    return Fraction(k, 3)


# ---------------------------------------------------------------------------
# the algebra


def test_printed_tables():
    A = a4()
    lab = A.labels
    assert lab[A.table("sq")[2]] == "1/3"
    assert lab[A.table("neg")[2]] == "1/3"
    assert lab[A.table("or")[2, 1]] == "2/3"
    assert A.table("sq").tolist() == [0, 0, 1, 3]


def test_tables_agree_with_chain_operations():
    A, C = a4(), make_chain(3)
    assert A.table("sq").tolist() == C.table("otimes").diagonal().tolist()
    assert A.table("or").tolist() == C.table("or").tolist()
    assert A.table("neg").tolist() == C.table("neg").tolist()


def test_derived_connectives():
    rep = check_derived()
    assert rep.ok, rep.mismatches
    t = derived_tables()
    assert t["delta"][2] == 0
    assert t["tilde"][0] == 3 and t["tilde"][1] == 0
    assert t["beta13"][1] == 1


@pytest.mark.parametrize("sym", ["delta", "tilde", "nabla", "alpha13", "beta13", "imp", "and"])
def test_derived_tables_match_fraction_semantics(sym):
    ops = brute.j4_ops()
    t = derived_tables()[sym]
    if sym in ("imp", "and"):
        for a in range(4):
            for b in range(4):
                assert fr(t[a][b]) == ops[sym](fr(a), fr(b))
    else:
        assert [fr(x) for x in t] == [ops[sym](fr(a)) for a in range(4)]


def test_lukasiewicz_implication_definable():
    v = luk_imp_definability_check()
    assert v.holds, v.note
    C = make_chain(3)
    A = a4()
    f = jfour._bin_template(jfour.LUK_IMP_SIGMA)
    for a in range(4):
        for b in range(4):
            assert A.eval(f, {"p": a, "q": b}) == C.table("imp")[a, b]
    assert A.eval(f, {"p": 2, "q": 1}) == 2
    assert A.eval(f, {"p": 3, "q": 0}) == 0
    assert all(A.eval(f, {"p": 0, "q": b}) == 3 for b in range(4))


def test_designation_classical():
    assert designation_classical()


def test_bottom_is_constant_zero():
    A = a4()
    assert all(A.eval(BOTTOM, {"p0": a}) == 0 for a in range(4))


# ---------------------------------------------------------------------------
# calculi


def test_every_schema_is_sound():
    assert all(soundness_scan(H4).values())
    assert all(soundness_scan(H4BAR, j4bar()).values())
    assert len(H4.schemas) == 18


def test_match_axiom_examples():
    assert match_axiom(H4, J("sq (q | !q)")) == "Ax8"
    assert match_axiom(H4, J("sq p -> p")) == "Ax7"
    assert match_axiom(H4, J("p -> q")) is None
    assert match_axiom(H4, J("(p & q) -> ((r | s) -> (p & q))")) == "C1"


def test_mp_proof():
    v = check_proof(H4, [J("p"), J("p -> q")], [
        ProofStep(J("p"), "premise"),
        ProofStep(J("p -> q"), "premise"),
        ProofStep(J("q"), "mp", (1, 2)),
    ])
    assert v.accepted and v.semantic.holds
    assert v.to_json()["conclusion"] == "q"


def test_explosion_only_in_the_barred_calculus():
    proof = [ProofStep(J("p & !p"), "premise"), ProofStep(BOTTOM, "exp1", (1,))]
    assert check_proof(H4BAR, [J("p & !p")], proof).accepted
    v = check_proof(H4, [J("p & !p")], proof)
    assert not v.accepted
    assert "exp1" in v.steps[1].message


def test_one_step_theorem():
    assert check_proof(H4, [], [ProofStep(J("sq (p | !p)"), "axiom", axiom="Ax8")]).accepted


@pytest.mark.parametrize(
    "steps, fragment",
    [
        ([ProofStep(J("q"), "mp", (1, 2))], "earlier"),
        ([ProofStep(J("p"), "premise"), ProofStep(J("q"), "mp", (1, 1))], "is not step"),
        ([ProofStep(J("p -> q"), "axiom")], "not an instance"),
        ([ProofStep(J("r"), "premise")], "not among"),
        ([ProofStep(J("sq p -> p"), "axiom", axiom="Ax8")], "not an instance of Ax8"),
    ],
)
def test_bad_proofs_are_diagnosed(steps, fragment):
    v = check_proof(H4, [J("p")], steps)
    assert not v.accepted
    assert any(fragment in s.message for s in v.steps if not s.ok)


def test_empty_proof_rejected():
    assert not check_proof(H4, [], []).accepted


def test_exp1_needs_contradiction_shape():
    proof = [ProofStep(J("p & q"), "premise"), ProofStep(BOTTOM, "exp1", (1,))]
    assert not check_proof(H4BAR, [J("p & q")], proof).accepted


def test_corpus_checks_green():
    files = corpus_files()
    assert len(files) >= 10
    h4 = 0
    for f in files:
        v = check_proof_file(f)
        assert v.accepted, (f.name, v.to_json())
        cal, premises, steps, _ = load_proof(f)
        h4 += cal.name == "H4"
        # every accepted derivation is valid in the barred matrix too
        assert entails(j4bar(), Sequent(premises, steps[-1].formula)).holds
    assert h4 >= 10


def test_corpus_nontheorems_have_countermodels():
    doc = json.loads((jfour.CORPUS_DIR / "nontheorems.json").read_text())
    assert len(doc["sequents"]) >= 10
    for item in doc["sequents"]:
        prem = [J(p) for p in item["premises"]]
        concl = J(item["conclusion"])
        v = countermodel_j4(prem, concl)
        assert not v.holds
        assert v.labelled() == item["countermodel"]
        env = brute.j4_entails(prem, concl)
        assert {k: brute.frac_label(x) for k, x in env.items()} == item["countermodel"]


def test_proof_json_roundtrip():
    steps = search_proof(J("q"), [J("p"), J("p -> q")])
    doc = proof_to_json(H4, [J("p"), J("p -> q")], steps)
    cal, premises, parsed, _ = load_proof(doc)
    assert check_proof(cal, premises, parsed).accepted


def test_search_finds_short_derivations():
    steps = search_proof(J("sq (p | !p) | q"), [])
    assert steps is not None and check_proof(H4, [], steps).accepted
    assert search_proof(J("p"), [J("q")], depth=2) is None


# ---------------------------------------------------------------------------
# semantics


def test_countermodel_examples():
    v = countermodel_j4([J("p"), J("!p")], J("q"))
    assert not v.holds and v.labelled() == {"p": "1/3", "q": "0"}
    assert countermodel_j4([], J("!~p -> p")).holds
    assert countermodel_j4([J("p")], J("p")).holds


J4_GEN_OPS = [("or", 2), ("neg", 1), ("sq", 1), ("tilde", 1), ("imp", 2), ("and", 2), ("nabla", 1), ("delta", 1)]


@given(st.integers(0, 2 ** 32 - 1))
def test_j4_entails_agrees_with_fraction_oracle(seed):
    rng = random.Random(seed)
    prem = [random_formula(rng, J4_GEN_OPS, ["p", "q"], 3) for _ in range(rng.randint(0, 2))]
    concl = random_formula(rng, J4_GEN_OPS, ["p", "q"], 3)
    v = countermodel_j4(prem, concl)
    env = brute.j4_entails(prem, concl)
    assert v.holds == (env is None)
    if env is not None:
        assert v.labelled() == {k: brute.frac_label(x) for k, x in env.items()}


@settings(max_examples=30)
@given(st.integers(0, 2 ** 32 - 1))
def test_barred_matrix_matches_product_chain(seed):
    # J4bar and Lbar^1_3 are the same matrix in two signatures, so expanded
    # formulas get the same verdicts after translating sq to o*
    rng = random.Random(seed)
    f = random_formula(rng, [("or", 2), ("neg", 1), ("sq", 1)], ["p", "q"], 3)

    def to_luk(g):
        if isinstance(g, Var):
            return g
        args = tuple(to_luk(a) for a in g.args)
        if g.symbol == "sq":
            return Op("otimes", (args[0], args[0]))
        return Op(g.symbol, args)

    assert is_valid(j4bar(), f).holds == is_valid(lukbar(3, 1), to_luk(f)).holds


def test_deduction_theorem():
    rep = deduction_theorem_check(200, seed=0)
    assert rep.ok and rep.checked == 200
    L = j4()
    assert entails(L, Sequent([], J("p -> p"))).holds
    assert entails(L, Sequent([J("q"), J("p & !p")], J("q"))).holds
    assert entails(L, Sequent([J("q")], J("(p & !p) -> q"))).holds


def test_maxset_shadows():
    shadows = maxset_shadows()
    assert sorted(shadows, key=int) == [str(k) for k in range(1, 13)]
    assert all(shadows.values())
    assert truth_lemma_classification()


def test_ideal_conditions():
    rep = j4_ideal_conditions()
    assert rep.ok
    assert rep.witness == {"a": 1, "b": 0}
