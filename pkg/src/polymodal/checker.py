"""Model checking: a naive reference evaluator and the labeling algorithm.

The labeling checker brings every diamond term into the form ``T`` or ``!T``
with ``T`` negation-free.  ``[[T]]`` is then small (no complements are ever
built), positive diamonds scan it directly, and negated diamonds walk the
product of the argument labels with an early exit at the first tuple outside
``[[T]]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .formulas import (
    And,
    Bot,
    Box,
    Diamond,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Prop,
    Top,
    Window,
    desugar,
    eliminate_window,
    subformula_order,
)
from .kripke import KripkeModel
from .perms import Permutation
from .terms import Diff, Inter, Neg, RelationSymbol, Rot, Swp, Term, Union, eval_term, split_negation

WorldSet = frozenset


def check_naive(model: KripkeModel, phi: Formula) -> WorldSet:
    """Truth set of ``phi`` straight from the semantic clauses.

    Diamond terms go through :func:`eval_term`, which materializes
    complements; derived connectives and window operators are evaluated by
    their own definitions rather than rewritten.
    """
    worlds = frozenset(model.domain)
    val: dict[Formula, WorldSet] = {}
    terms: dict[Term, frozenset] = {}

    def rel(t):
        if t not in terms:
            terms[t] = eval_term(t, model)
        return terms[t]

    for node in subformula_order(phi):
        match node:
            case Prop(name):
                v = model.prop(name)
            case Top():
                v = worlds
            case Bot():
                v = frozenset()
            case Not(a):
                v = worlds - val[a]
            case And(a, b):
                v = val[a] & val[b]
            case Or(a, b):
                v = val[a] | val[b]
            case Exists(a):
                v = worlds if val[a] else frozenset()
            case Forall(a):
                v = worlds if val[a] == worlds else frozenset()
            case Diamond(t, args):
                sets = [val[a] for a in args]
                v = frozenset(tup[0] for tup in rel(t) if all(x in s for x, s in zip(tup[1:], sets)))
            case Box(t, args):
                sets = [val[a] for a in args]
                # w fails the box iff some t-successor tuple avoids every argument
                bad = frozenset(tup[0] for tup in rel(t) if all(x not in s for x, s in zip(tup[1:], sets)))
                v = worlds - bad
            case Window(sym, args):
                r = rel(sym)
                combos = list(product(*[sorted(val[a]) for a in args]))
                v = frozenset(w for w in worlds if all((w,) + c in r for c in combos))
            case _:
                raise TypeError(f"not a formula: {node!r}")
        val[node] = v
    return val[phi]


# -- labeling algorithm -----------------------------------------------------


@dataclass
class ProbeRecord:
    formula: Formula
    world: int
    probes: int
    relation_size: int


@dataclass
class LabelStats:
    """Instrumentation for negated-term diamonds."""

    probes: list[ProbeRecord] = field(default_factory=list)

    @property
    def total_probes(self) -> int:
        return sum(r.probes for r in self.probes)


def materialize(term: Term, model: KripkeModel, cache: dict | None = None) -> frozenset:
    """``[[term]]`` for a negation-free term, built from the stored relations only."""
    if cache is None:
        cache = {}
    if term in cache:
        return cache[term]
    match term:
        case RelationSymbol():
            out = model.relation(term)
        case Rot() | Swp():
            perm = Permutation.identity(term.arity)
            inner = term
            while isinstance(inner, (Rot, Swp)):
                g = Permutation.cyclic(inner.arity) if isinstance(inner, Rot) else Permutation.swap(inner.arity)
                perm = perm * g
                inner = inner.arg
            out = frozenset(perm.apply(t) for t in materialize(inner, model, cache))
        case Inter(a, b):
            out = materialize(a, model, cache) & materialize(b, model, cache)
        case Diff(a, b):
            out = materialize(a, model, cache) - materialize(b, model, cache)
        case Union(a, b):
            out = materialize(a, model, cache) | materialize(b, model, cache)
        case Neg():
            raise ValueError("materialize needs a negation-free term")
        case _:
            raise TypeError(term)
    cache[term] = out
    return out


def label(model: KripkeModel, phi: Formula, stats: LabelStats | None = None) -> dict[Formula, WorldSet]:
    """Labeling of every subformula of the core form of ``phi``.

    ``phi`` is first rewritten to ``p, true, false, ~, &, <T>, <E>``; the
    returned map is keyed by the subformulas of that rewritten formula.
    """
    core = desugar(eliminate_window(phi))
    worlds = frozenset(model.domain)
    ordered = sorted(worlds)
    nu: dict[Formula, WorldSet] = {}
    cache: dict = {}
    for node in subformula_order(core):
        match node:
            case Prop(name):
                v = model.prop(name)
            case Top():
                v = worlds
            case Bot():
                v = frozenset()
            case Not(a):
                v = worlds - nu[a]
            case And(a, b):
                v = nu[a] & nu[b]
            case Exists(a):
                v = worlds if nu[a] else frozenset()
            case Diamond(t, args):
                body, negated = split_negation(t)
                rel = materialize(body, model, cache)
                sets = [nu[a] for a in args]
                if not negated:
                    v = frozenset(tup[0] for tup in rel if all(x in s for x, s in zip(tup[1:], sets)))
                else:
                    v = _negated_diamond(node, rel, [sorted(s) for s in sets], ordered, stats)
            case _:
                raise TypeError(f"unexpected node after desugaring: {node!r}")
        nu[node] = v
    return nu


def _negated_diamond(node, rel, sets, ordered, stats) -> WorldSet:
    # w satisfies <!T>(f1..fk) iff some argument tuple lies outside [[T]].
    # Only tuples inside [[T]] can be probed without success, so the loop
    # stops after at most |[[T]] restricted to w| + 1 probes.
    out = []
    if any(not s for s in sets):
        return frozenset()
    for w in ordered:
        probes = 0
        for combo in product(*sets):
            probes += 1
            if (w,) + combo not in rel:
                out.append(w)
                break
        if stats is not None:
            stats.probes.append(ProbeRecord(node, w, probes, len(rel)))
    return frozenset(out)


def check_labeling(model: KripkeModel, phi: Formula, stats: LabelStats | None = None) -> WorldSet:
    """Truth set of ``phi`` via the labeling algorithm."""
    core = desugar(eliminate_window(phi))
    return label(model, phi, stats)[core]


def holds(model: KripkeModel, phi: Formula, world: int) -> bool:
    return world in check_labeling(model, phi)
