"""Seeded random terms and formulas for property tests and experiments."""

from __future__ import annotations

import random

from .formulas import (
    BOT,
    TOP,
    And,
    Box,
    Diamond,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Prop,
    Window,
    size,
)
from .terms import Diff, Inter, Neg, RelationSymbol, Rot, Swp, Term, Union

R2 = RelationSymbol("R", 2)
S2 = RelationSymbol("S", 2)
T3 = RelationSymbol("T", 3)

TERM_OPS = ("rot", "swp", "neg", "inter", "diff", "union")


def random_term(rng: random.Random, symbols, depth: int, ops=TERM_OPS) -> Term:
    """A term over ``symbols`` (all of one arity) with at most ``depth`` operator levels."""
    if depth <= 0 or rng.random() < 0.3:
        return rng.choice(symbols)
    op = rng.choice(ops)
    if op == "rot":
        return Rot(random_term(rng, symbols, depth - 1, ops))
    if op == "swp":
        return Swp(random_term(rng, symbols, depth - 1, ops))
    if op == "neg":
        return Neg(random_term(rng, symbols, depth - 1, ops))
    cls = {"inter": Inter, "diff": Diff, "union": Union}[op]
    return cls(random_term(rng, symbols, depth - 1, ops), random_term(rng, symbols, depth - 1, ops))


def _by_arity(vocab):
    out: dict[int, list] = {}
    for s in vocab:
        out.setdefault(s.arity, []).append(s)
    return out


def random_formula(
    rng: random.Random,
    vocab,
    props,
    budget: int,
    term_ops=TERM_OPS,
    term_depth: int = 2,
    modal: str = "full",
    globals_: bool = True,
    windows: bool = True,
) -> Formula:
    """Random formula of tree size at most roughly ``budget``.

    ``modal`` selects the diamond terms: ``"full"`` draws random terms,
    ``"neg"`` only a symbol or its negation.
    """
    arities = _by_arity(vocab)

    def term_for(k):
        syms = arities[k]
        if modal == "neg":
            s = rng.choice(syms)
            return Neg(s) if rng.random() < 0.5 else s
        return random_term(rng, syms, term_depth, term_ops)

    def go(b: int) -> Formula:
        if b <= 1:
            r = rng.random()
            if r < 0.08:
                return TOP
            if r < 0.14:
                return BOT
            return Prop(rng.choice(props))
        kinds = ["not", "and", "or", "dia", "box", "dia"]
        if globals_:
            kinds += ["ex", "all"]
        if windows:
            kinds.append("win")
        kind = rng.choice(kinds)
        if kind == "not":
            return Not(go(b - 1))
        if kind in ("and", "or"):
            left = rng.randint(1, max(1, b - 2))
            cls = And if kind == "and" else Or
            return cls(go(left), go(max(1, b - 1 - left)))
        if kind == "ex":
            return Exists(go(b - 1))
        if kind == "all":
            return Forall(go(b - 1))
        k = rng.choice(sorted(arities))
        if kind == "win":
            sym = rng.choice(arities[k])
            share = max(1, (b - 2) // (k - 1))
            return Window(sym, tuple(go(share) for _ in range(k - 1)))
        t = term_for(k)
        share = max(1, (b - 2) // (k - 1))
        cls = Diamond if kind == "dia" else Box
        return cls(t, tuple(go(share) for _ in range(k - 1)))

    return go(budget)


def formula_corpus(seed: int, count: int, vocab, props, max_size: int, **kw) -> list[Formula]:
    """``count`` formulas with ``size <= max_size``, reproducible from ``seed``."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        phi = random_formula(rng, vocab, props, rng.randint(2, max_size), **kw)
        if size(phi) <= max_size:
            out.append(phi)
    return out


def neg_corpus(seed: int, count: int, max_size: int = 10, vocab=(R2,), props=("p", "q")) -> list[Formula]:
    """Formulas whose diamond terms are ``R`` or ``!R``."""
    return formula_corpus(seed, count, list(vocab), list(props), max_size, modal="neg", globals_=False, windows=False)


def table_corpus(seed: int, count: int, max_diamonds: int = 2, max_size: int = 9) -> list[Formula]:
    """Small formulas over a single binary ``R`` with terms built from p, s, !, &."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        phi = random_formula(
            rng, [R2], ["p", "q"], rng.randint(2, max_size),
            term_ops=("rot", "swp", "neg", "inter"), term_depth=2, globals_=False, windows=False,
        )
        n = sum(1 for node in _nodes(phi) if isinstance(node, (Diamond, Box)))
        if 1 <= n <= max_diamonds and size(phi) <= max_size:
            out.append(phi)
    return out


def _nodes(phi: Formula):
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(node.subformulas)
