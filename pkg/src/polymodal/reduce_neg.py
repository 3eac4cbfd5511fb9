"""From modal logic with relation complement to modal logic with the global diamond.

Each symbol ``R`` gets two fresh copies: ``R_1`` stands for ``R`` and ``R_2``
for ``!R``.  The axiom ``eta`` forces every tuple to be coverable by one of
the two copies, which is what lets a model of the translation be turned back
into a model of the source by doubling its domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .checker import check_labeling, check_naive, label
from .errors import ConsistencyError, FragmentError, PreconditionError
from .formulas import (
    And,
    Box,
    Diamond,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    conj,
    desugar,
    disj,
    eliminate_window,
    implies,
    rebuild,
    subformula_order,
    transform,
)
from .kripke import KripkeModel, full_tuples
from .terms import Neg, RelationSymbol


@dataclass(frozen=True)
class NegReduction:
    source: Formula
    translated: Formula
    eta: Formula
    theta: Formula
    symbol_map: dict  # R -> (R_1, R_2)

    @property
    def pairs(self) -> int:
        """Number of conjuncts in ``eta``."""
        return len(eta_pairs(self))

    @property
    def target_symbols(self) -> list[RelationSymbol]:
        return [s for pair in self.symbol_map.values() for s in pair]

    def translate(self, psi: Formula) -> Formula:
        return _translate(eliminate_window(psi), self.symbol_map)


def _base_symbol(term):
    if isinstance(term, RelationSymbol):
        return term, False
    if isinstance(term, Neg) and isinstance(term.arg, RelationSymbol):
        return term.arg, True
    return None


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "_"
    taken.add(name)
    return name


def _translate(phi: Formula, symbol_map) -> Formula:
    def step(node, kids):
        if isinstance(node, (Diamond, Box)):
            found = _base_symbol(node.term)
            if found is None:
                raise FragmentError(f"term {node.term} is neither a symbol nor a negated symbol")
            sym, negated = found
            return type(node)(symbol_map[sym][1 if negated else 0], tuple(kids))
        return rebuild(node, kids)

    return transform(phi, step)


def _diamonds_by_symbol(translated: Formula, symbol_map):
    """``{R: ([<R_1> nodes], [<R_2> nodes])}`` over the subformulas of the core form."""
    firsts = {v[0]: k for k, v in symbol_map.items()}
    seconds = {v[1]: k for k, v in symbol_map.items()}
    out = {sym: ([], []) for sym in symbol_map}
    for node in subformula_order(desugar(translated)):
        if isinstance(node, Diamond):
            if node.term in firsts:
                out[firsts[node.term]][0].append(node)
            elif node.term in seconds:
                out[seconds[node.term]][1].append(node)
    return out


def eta_pairs(red: NegReduction):
    pairs = []
    for ones, twos in _diamonds_by_symbol(red.translated, red.symbol_map).values():
        pairs.extend(product(ones, twos))
    return pairs


def reduce_neg(phi: Formula) -> NegReduction:
    phi0 = eliminate_window(phi)
    symbols: dict[RelationSymbol, None] = {}
    for node in subformula_order(phi0):
        if isinstance(node, (Diamond, Box)):
            found = _base_symbol(node.term)
            if found is None:
                raise FragmentError(f"term {node.term} is neither a symbol nor a negated symbol")
            symbols.setdefault(found[0])
    taken = {s.name for s in symbols}
    symbol_map = {}
    for sym in sorted(symbols, key=lambda s: s.name):
        one = RelationSymbol(_fresh(f"{sym.name}_1", taken), sym.arity)
        two = RelationSymbol(_fresh(f"{sym.name}_2", taken), sym.arity)
        symbol_map[sym] = (one, two)
    translated = _translate(phi0, symbol_map)
    conjuncts = []
    for ones, twos in _diamonds_by_symbol(translated, symbol_map).values():
        for d1, d2 in product(ones, twos):
            premise = Exists(And(Not(d1), Not(d2)))
            cover = disj(Forall(Or(Not(a), Not(b))) for a, b in zip(d1.args, d2.args))
            conjuncts.append(implies(premise, cover))
    eta = conj(conjuncts)
    return NegReduction(phi, translated, eta, And(translated, eta), symbol_map)


# -- model constructions ----------------------------------------------------


def forward_model_neg(red: NegReduction, model: KripkeModel, world: int) -> tuple[KripkeModel, int]:
    """``R_1 := R`` and ``R_2 := W^k \\ R``; the result satisfies ``theta`` at ``world``."""
    if world not in check_naive(model, red.source):
        raise PreconditionError(f"the source formula does not hold at world {world}")
    rels = {}
    for sym, (one, two) in red.symbol_map.items():
        r = model.relation(sym)
        rels[one] = r
        rels[two] = frozenset(full_tuples(model.worlds, sym.arity)) - r
    out = KripkeModel(model.worlds, rels, model.valuation)
    if world not in check_labeling(out, red.theta):
        raise ConsistencyError("constructed model does not satisfy theta")
    return out, world


def complete_model(red: NegReduction, model: KripkeModel) -> KripkeModel:
    """Add every tuple outside ``R_1 u R_2`` to a copy that keeps all labels intact.

    ``R_1`` is preferred; ``R_2`` is used only when ``R_1`` would create a new
    witness for some ``<R_1>`` subformula.
    """
    core = desugar(red.translated)
    nu = label(model, core)
    groups = _diamonds_by_symbol(red.translated, red.symbol_map)
    rels = dict(model.relations)
    for sym, (one, two) in red.symbol_map.items():
        r1, r2 = set(model.relations.get(one, ())), set(model.relations.get(two, ()))
        ones, twos = groups[sym]
        for t in full_tuples(model.worlds, sym.arity):
            if t in r1 or t in r2:
                continue
            if _safe(t, ones, nu):
                r1.add(t)
            elif _safe(t, twos, nu):
                r2.add(t)
            else:
                raise ConsistencyError(f"tuple {t} cannot join {one.name} or {two.name}; eta is violated")
        rels[one], rels[two] = frozenset(r1), frozenset(r2)
    out = KripkeModel(model.worlds, rels, model.valuation)
    after = label(out, core)
    if any(after[n] != nu[n] for n in subformula_order(core)):
        raise ConsistencyError("completion changed the truth set of a subformula")
    return out


def _safe(t, diamonds, nu) -> bool:
    # adding t creates no witness for a diamond that is false at t[0]
    for d in diamonds:
        if t[0] not in nu[d] and all(x in nu[a] for x, a in zip(t[1:], d.args)):
            return False
    return True


def double_model(red: NegReduction, completed: KripkeModel) -> KripkeModel:
    """Domain ``W x {0, 1}``, world ``(w, i)`` numbered ``2w + i``."""
    n = completed.worlds
    rels = {}
    for sym, (one, two) in red.symbol_map.items():
        r1, r2 = completed.relation(one), completed.relation(two)
        inside = set()
        for t in full_tuples(2 * n, sym.arity):
            base = tuple(x // 2 for x in t)
            bits = [x % 2 for x in t]
            rule1 = base in r1 and all(b == 1 - bits[0] for b in bits[1:])
            rule2 = base in r2 and all(b == bits[0] for b in bits[1:])
            if rule1 and rule2:
                raise ConsistencyError(f"doubling rules conflict on {t}")
            if rule1:
                inside.add(t)
            elif rule2:
                continue
            elif base not in r2:
                inside.add(t)
        rels[sym] = inside
    vals = {p: {2 * w + i for w in ws for i in (0, 1)} for p, ws in completed.valuation.items()}
    return KripkeModel(2 * n, rels, vals)


def backward_model_neg(red: NegReduction, model: KripkeModel, world: int) -> tuple[KripkeModel, int]:
    """Model of the source at ``(world, 0)`` from a model of ``theta`` at ``world``."""
    if world not in check_labeling(model, red.theta):
        raise PreconditionError(f"theta does not hold at world {world}")
    completed = complete_model(red, model)
    doubled = double_model(red, completed)
    if 2 * world not in check_labeling(doubled, red.source):
        raise ConsistencyError("the doubled model does not satisfy the source formula")
    return doubled, 2 * world


def transfer_mismatches(red: NegReduction, completed: KripkeModel, doubled: KripkeModel) -> list[tuple[Formula, int]]:
    """Pairs ``(psi, x)`` where ``doubled, x |= psi`` disagrees with ``completed, x // 2 |= t(psi)``."""
    bad = []
    for psi in subformula_order(eliminate_window(red.source)):
        left = check_labeling(doubled, psi)
        right = check_labeling(completed, red.translate(psi))
        for x in range(doubled.worlds):
            if (x in left) != (x // 2 in right):
                bad.append((psi, x))
    return bad
