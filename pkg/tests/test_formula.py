import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lukamax.formula import (
    SIG_J4,
    SIG_LUK,
    FormulaError,
    Op,
    Var,
    depth,
    expand,
    match,
    nfold,
    parse,
    power,
    random_formula,
    render,
    signature_for,
    substitute,
    subformulas,
    variables,
)

p, q, r = Var("p"), Var("q"), Var("r")


def neg(a):
    return Op("neg", (a,))


def imp(a, b):
    return Op("imp", (a, b))


# ---------------------------------------------------------------------------
# parsing


def test_parse_lem_in_implication_form():
    assert parse("(p -> !p) -> !p") == imp(imp(p, neg(p)), neg(p))


def test_parse_atom():
    assert parse("p") == p


def test_parse_square_of_excluded_middle():
    assert parse("sq (p | !p)", SIG_J4) == Op("sq", (Op("or", (p, neg(p))),))


def test_precedence_ladder():
    f = parse("p o* q o+ r & p | q -> r <-> p")
    assert f.symbol == "iff"
    left = f.args[0]
    assert left.symbol == "imp"
    assert left.args[0].symbol == "or"
    assert left.args[0].args[0].symbol == "and"
    assert left.args[0].args[0].args[0].symbol == "oplus"
    assert left.args[0].args[0].args[0].args[0].symbol == "otimes"


def test_implication_is_right_associative():
    assert parse("p -> q -> r") == imp(p, imp(q, r))


def test_left_associative_binaries():
    assert parse("p o+ q o+ r") == Op("oplus", (Op("oplus", (p, q)), r))


def test_prefix_binds_tighter_than_binary():
    assert parse("!p o* q") == Op("otimes", (neg(p), q))


def test_nfold_and_power_sugar_nest_left():
    assert parse("3#p") == Op("oplus", (Op("oplus", (p, p)), p))
    assert parse("p^3") == Op("otimes", (Op("otimes", (p, p)), p))
    assert parse("2#p") == nfold(p, 2)
    assert parse("(p | q)^2") == power(Op("or", (p, q)), 2)


def test_functional_form_for_named_binary():
    assert parse("imp(p, q)") == imp(p, q)


def test_tilde_only_in_j4():
    assert parse("~p", SIG_J4) == Op("tilde", (p,))
    with pytest.raises(FormulaError):
        parse("~p")


def test_square_word_in_luk_is_a_variable():
    # 'sq' names no connective of SigLuk, so it is an ordinary variable there
    assert parse("sq") == Var("sq")
    with pytest.raises(FormulaError):
        parse("sq p")


@pytest.mark.parametrize(
    "text, pos",
    [("p ->", 4), ("(p", 2), ("p $ q", 2), ("p q", 2), ("p^0", 2), ("0#p", 0)],
)
def test_syntax_errors_carry_positions(text, pos):
    with pytest.raises(FormulaError) as exc:
        parse(text)
    assert exc.value.pos == pos


def test_arity_mismatch_in_functional_form():
    with pytest.raises(FormulaError):
        parse("imp(p)")


def test_unknown_connective_for_signature():
    sig = signature_for({"neg": 1, "and": 2}, "NA")
    with pytest.raises(FormulaError):
        parse("p -> q", sig)


# ---------------------------------------------------------------------------
# rendering


def test_render_examples():
    assert render(p) == "p"
    assert render(neg(imp(p, p))) == "!(p -> p)"
    assert render(Op("sq", (p,))) == "sq p"
    assert render(neg(neg(p))) == "!!p"
    assert render(Op("sq", (Op("sq", (p,)),))) == "sq sq p"
    assert render(Op("sq", (Op("or", (p, neg(p))),))) == "sq (p | !p)"


LUK_OPS = [("neg", 1), ("imp", 2), ("or", 2), ("and", 2), ("oplus", 2), ("otimes", 2), ("iff", 2)]
J4_OPS = [("or", 2), ("neg", 1), ("sq", 1), ("tilde", 1), ("imp", 2), ("and", 2), ("delta", 1), ("nabla", 1)]


@st.composite
def formulas(draw, ops=LUK_OPS, max_depth=8):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_formula(random.Random(seed), ops, ["p", "q", "r", "x1"], max_depth)


@given(formulas())
def test_parse_render_roundtrip_luk(f):
    assert parse(render(f)) == f


@given(formulas(ops=J4_OPS))
def test_parse_render_roundtrip_j4(f):
    assert parse(render(f), SIG_J4) == f


# ---------------------------------------------------------------------------
# substitution, variables, expansion


def test_substitute_examples():
    lem = Op("or", (p, neg(p)))
    assert substitute(lem, {"p": q}) == Op("or", (q, neg(q)))
    phi = parse("(p1 -> !p1) -> !p1")
    assert substitute(phi, {"p1": Var("p1")}) == phi
    top = parse("p -> p")
    assert substitute(phi, {"p1": top}) == parse("((p -> p) -> !(p -> p)) -> !(p -> p)")


def test_substitution_is_simultaneous():
    assert substitute(imp(p, q), {"p": q, "q": p}) == imp(q, p)


@given(formulas(max_depth=5), formulas(max_depth=3))
def test_substitute_distributes(f, g):
    s = {"p": g}
    if isinstance(f, Op):
        assert substitute(f, s) == Op(f.symbol, tuple(substitute(a, s) for a in f.args))
    else:
        assert substitute(f, s) == (g if f.name == "p" else f)


def test_variables_first_occurrence():
    assert variables(Op("or", (p, neg(p)))) == ["p"]
    assert variables(parse("p1 & (p2 | p3)")) == ["p1", "p2", "p3"]
    assert variables(imp(p, neg(imp(q, q)))) == ["p", "q"]


def test_expand_examples():
    x, y = Var("x"), Var("y")
    assert expand(Op("or", (x, y)), SIG_LUK) == imp(imp(x, y), y)
    assert expand(Op("tilde", (p,)), SIG_J4) == Op("sq", (Op("sq", (neg(p),)),))
    assert expand(parse("2#p"), SIG_LUK) == imp(neg(p), p)


@given(formulas(max_depth=5))
def test_expand_is_idempotent_and_core_only(f):
    g = expand(f, SIG_LUK)
    assert expand(g, SIG_LUK) == g
    assert all(isinstance(h, Var) or h.symbol in ("neg", "imp") for h in subformulas(g))


@given(formulas(ops=J4_OPS, max_depth=4))
def test_expand_j4_core_only(f):
    g = expand(f, SIG_J4)
    assert all(isinstance(h, Var) or h.symbol in ("or", "neg", "sq") for h in subformulas(g))


def test_subformulas_children_first():
    f = imp(p, neg(q))
    subs = subformulas(f)
    assert subs[-1] == f
    assert subs.index(q) < subs.index(neg(q))


def test_match_binds_metavariables_consistently():
    pat = parse("A -> (B -> A)")
    assert match(pat, parse("p -> (q -> p)")) == {"A": p, "B": q}
    assert match(pat, parse("p -> (q -> r)")) is None


def test_depth_and_size():
    f = parse("(p -> !p) -> !p")
    assert depth(f) == 3
    assert f.size == 7


def test_structural_equality_and_hash():
    a, b = parse("p -> q"), parse("p -> q")
    assert a == b and hash(a) == hash(b)
    assert a != parse("q -> p")
