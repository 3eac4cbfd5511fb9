"""Independent reference semantics used as test oracles.

Membership of a single tuple and truth at a single world are decided by
direct recursion on the clauses, without building any relation or truth set.
"""

from itertools import product

from polymodal.formulas import And, Bot, Box, Diamond, Exists, Forall, Not, Or, Prop, Top, Window
from polymodal.kripke import KripkeModel
from polymodal.terms import Diff, Inter, Neg, RelationSymbol, Rot, Swp, Union


def member(term, t, model):
    if isinstance(term, RelationSymbol):
        return t in model.relations.get(term, ())
    if isinstance(term, Rot):
        # (a_k, a_1, ..., a_{k-1}) is in pT iff (a_1, ..., a_k) is in T
        return member(term.arg, t[1:] + t[:1], model)
    if isinstance(term, Swp):
        return member(term.arg, t[:-2] + (t[-1], t[-2]), model)
    if isinstance(term, Neg):
        return not member(term.arg, t, model)
    a = member(term.left, t, model)
    b = member(term.right, t, model)
    if isinstance(term, Inter):
        return a and b
    if isinstance(term, Union):
        return a or b
    if isinstance(term, Diff):
        return a and not b
    raise TypeError(term)


def denotation(term, model):
    return {t for t in product(range(model.worlds), repeat=term.arity) if member(term, t, model)}


def holds_at(model, phi, w):
    W = range(model.worlds)
    if isinstance(phi, Prop):
        return w in model.valuation.get(phi.name, ())
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Not):
        return not holds_at(model, phi.arg, w)
    if isinstance(phi, And):
        return holds_at(model, phi.left, w) and holds_at(model, phi.right, w)
    if isinstance(phi, Or):
        return holds_at(model, phi.left, w) or holds_at(model, phi.right, w)
    if isinstance(phi, Exists):
        return any(holds_at(model, phi.arg, v) for v in W)
    if isinstance(phi, Forall):
        return all(holds_at(model, phi.arg, v) for v in W)
    if isinstance(phi, Diamond):
        return any(
            member(phi.term, (w,) + ws, model) and all(holds_at(model, a, v) for a, v in zip(phi.args, ws))
            for ws in product(W, repeat=len(phi.args))
        )
    if isinstance(phi, Box):
        return all(
            not member(phi.term, (w,) + ws, model) or any(holds_at(model, a, v) for a, v in zip(phi.args, ws))
            for ws in product(W, repeat=len(phi.args))
        )
    if isinstance(phi, Window):
        return all(
            (w,) + ws in model.relations.get(phi.symbol, ())
            for ws in product(W, repeat=len(phi.args))
            if all(holds_at(model, a, v) for a, v in zip(phi.args, ws))
        )
    raise TypeError(phi)


def truth_set(model, phi):
    return {w for w in range(model.worlds) if holds_at(model, phi, w)}


def all_models(worlds, vocab, props=()):
    """Every model with exactly ``worlds`` worlds over ``vocab`` and ``props``."""
    slots = [(s, t) for s in vocab for t in product(range(worlds), repeat=s.arity)]
    for bits in product((False, True), repeat=len(slots)):
        rels = {s: set() for s in vocab}
        for (s, t), b in zip(slots, bits):
            if b:
                rels[s].add(t)
        for vbits in product((False, True), repeat=worlds * len(props)):
            vals = {p: {w for w in range(worlds) if vbits[i * worlds + w]} for i, p in enumerate(props)}
            yield KripkeModel(worlds, rels, vals)
