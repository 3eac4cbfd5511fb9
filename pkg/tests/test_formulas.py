import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import truth_set
from polymodal.corpus import R2, S2, T3, formula_corpus
from polymodal.errors import ArityError, ParseError, VocabularyError
from polymodal.formulas import (
    BOT,
    And,
    Box,
    Diamond,
    Exists,
    Forall,
    Not,
    Or,
    Prop,
    Window,
    dag_size,
    desugar,
    eliminate_window,
    modal_depth,
    propositions,
    relation_symbols,
    size,
    subformula_order,
)
from polymodal.kripke import random_model
from polymodal.syntax import parse_formula, parse_term, parse_vocab, render_formula, render_term
from polymodal.terms import Inter, Neg, RelationSymbol, Swp

p, q, r = Prop("p"), Prop("q"), Prop("r")
T = RelationSymbol("R", 3)


def proper_subterms(f):
    out = set()
    stack = list(f.subformulas)
    while stack:
        g = stack.pop()
        out.add(g)
        stack.extend(g.subformulas)
    return out


# -- AST ----------------------------------------------------------------------


def test_diamond_arity_checked():
    with pytest.raises(ArityError):
        Diamond(R2, (p, q))
    with pytest.raises(ArityError):
        Window(T3, (p,))


def test_subformula_order_single():
    assert subformula_order(p) == (p,)


def test_subformula_order_conjunction():
    phi = And(Not(p), q)
    order = subformula_order(phi)
    assert set(order) == {p, q, Not(p), phi}
    assert order[-1] == phi


def test_subformula_order_deduplicates():
    phi = Diamond(T, (p, p))
    assert subformula_order(phi) == (p, phi)


corpus = formula_corpus(5, 200, [R2, S2, T3], ["p", "q", "r"], 14)


@pytest.mark.parametrize("phi", corpus[:80])
def test_subformula_order_is_dependency_order(phi):
    order = subformula_order(phi)
    assert len(set(order)) == len(order) <= size(phi)
    index = {f: i for i, f in enumerate(order)}
    for f in order:
        for g in proper_subterms(f):
            assert index[g] < index[f]


def test_sizes():
    phi = And(Diamond(R2, (p,)), Diamond(R2, (p,)))
    # the tree has the conjunction and two copies of <R>(p); the dag shares them
    assert size(phi) == 7
    assert dag_size(phi) == 3
    assert modal_depth(Diamond(R2, (Box(R2, (p,)),))) == 2
    assert propositions(And(q, p)) == ["p", "q"]
    assert relation_symbols(And(Diamond(S2, (p,)), Diamond(R2, (p,)))) == [R2, S2]


def test_window_elimination_examples():
    assert eliminate_window(Window(R2, (p,))) == Box(Neg(R2), (Not(p),))
    assert eliminate_window(Window(T3, (p, q))) == Box(Neg(T3), (Not(p), Not(q)))
    phi = And(Diamond(R2, (p,)), q)
    assert eliminate_window(phi) is phi


def test_desugar_removes_derived_connectives():
    phi = Or(Box(R2, (p,)), Forall(q))
    for f in subformula_order(desugar(phi)):
        assert not isinstance(f, (Or, Box, Forall, Window))


@given(st.integers(0, 10**6), st.integers(1, 3))
@settings(max_examples=60)
def test_window_elimination_preserves_truth(seed, n):
    rng = random.Random(seed)
    phi = formula_corpus(rng.randrange(10**6), 1, [R2, T3], ["p", "q"], 10)[0]
    phi = Window(T3, (phi, Not(p))) if rng.random() < 0.5 else Window(R2, (phi,))
    m = random_model(seed, n, [R2, T3], props=["p", "q"])
    assert truth_set(m, eliminate_window(phi)) == truth_set(m, phi)


# -- syntax --------------------------------------------------------------------


def test_parse_basic():
    vocab = [R2]
    assert parse_formula("<R>(q)", vocab) == Diamond(R2, (q,))
    assert parse_formula("<!R>(q)", vocab) == Diamond(Neg(R2), (q,))


def test_parse_ternary_term():
    phi = parse_formula("<(R & swp(R))>(q, r)", [T])
    assert phi == Diamond(Inter(T, Swp(T)), (q, r))


def test_parse_constructs():
    phi = parse_formula("[R][!R]false & [!R][!R]false")
    assert phi == And(Box(R2, (Box(Neg(R2), (BOT,)),)), Box(Neg(R2), (Box(Neg(R2), (BOT,)),)))
    assert parse_formula("<E> ~p") == Exists(Not(p))
    assert parse_formula("[A] p") == Forall(p)
    assert parse_formula("win_R(p, q)") == Window(T, (p, q))


def test_parse_infers_arity_from_arguments():
    phi = parse_formula("<R>(p) & <S>(p, q)")
    assert relation_symbols(phi) == [R2, RelationSymbol("S", 3)]


def test_parse_errors_report_position():
    with pytest.raises(ParseError) as exc:
        parse_formula("<R>(p) & & q")
    assert exc.value.position == 9


def test_mixed_connectives_need_parentheses():
    with pytest.raises(ParseError):
        parse_formula("p & q | r")


def test_undeclared_symbol():
    with pytest.raises(VocabularyError):
        parse_formula("<S>(p)", [R2])


def test_arity_mismatch():
    with pytest.raises(ArityError):
        parse_formula("<R>(p, q)", [R2])
    with pytest.raises(ArityError):
        parse_formula("<R>(p) & <R>(p, q)")


def test_parse_vocab():
    assert parse_vocab("R/2, S/3") == [R2, RelationSymbol("S", 3)]
    with pytest.raises(ParseError):
        parse_vocab("R")


def test_term_round_trip():
    t = parse_term("!(rot(R) \\ (S | swp(R)))", [R2, S2])
    assert parse_term(render_term(t), [R2, S2]) == t


@pytest.mark.parametrize("phi", corpus)
def test_render_parse_round_trip(phi):
    text = render_formula(phi)
    assert parse_formula(text) == phi
    assert render_formula(parse_formula(text)) == text


def test_render_ignores_whitespace():
    text = "  < R > ( p )&[ !R ]( q ) "
    phi = parse_formula(text)
    assert render_formula(parse_formula(render_formula(phi))) == render_formula(phi)
