"""From Boolean modal logic over a bounded vocabulary to modal logic with the global diamond.

Three stages:

* table normal form: every diamond term becomes a single table, arguments are
  replaced by fresh propositions guarded by global biconditionals;
* the translation: each table becomes a relation symbol of its own, and the
  axioms ``xi1``, ``xi2``, ``xi3`` say enough about tables that a model of the
  translation can be completed so every tuple realizes some table;
* model constructions in both directions.  The backward one unfolds the
  completed model into layers ``W x {2..m} x {0..D}``; the layer index is
  unbounded in principle and truncated at ``D`` here.

The axioms quantify over "candidate" formulas: the argument formulas of the
diamonds in the core form of the translation.  Every proof step only ever
instantiates the quantifiers with such arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .checker import check_labeling, label
from .errors import (
    ConsistencyError,
    FragmentError,
    PreconditionError,
    ShapeError,
    TruncationError,
    VocabularyError,
)
from .formulas import (
    And,
    Box,
    Diamond,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Prop,
    conj,
    desugar,
    disj,
    eliminate_window,
    iff,
    implies,
    modal_depth,
    propositions,
    rebuild,
    relation_symbols,
    subformula_order,
    transform,
)
from .kripke import KripkeModel, full_tuples
from .perms import Permutation, all_permutations
from .tables import Table, enumerate_tables, table_action, table_entails, table_of_tuple
from .terms import RelationSymbol, normalize_term, symbols_of

DEFAULT_CAP = 2


@dataclass(frozen=True)
class TableReduction:
    source: Formula
    vocab: tuple[RelationSymbol, ...]
    star: Formula
    fresh: dict  # argument formula -> fresh proposition, in creation order
    table_vocab: dict  # Table -> relation symbol
    translated: Formula
    candidates: tuple[Formula, ...]
    xi1: Formula
    xi2: Formula
    xi3: Formula
    theta: Formula
    max_arity: int
    counts: dict = field(default_factory=dict)  # conjunct counts per axiom

    @property
    def arities(self) -> list[int]:
        return sorted({s.arity for s in self.vocab})

    def tables(self, k: int) -> list[Table]:
        return enumerate_tables(self.vocab, k)

    def symbol(self, rho: Table) -> RelationSymbol:
        return self.table_vocab[rho]

    @property
    def max_table_count(self) -> int:
        return max(len(self.tables(k)) for k in self.arities)

    def default_depth(self) -> int:
        return modal_depth(self.star) * self.max_table_count


def table_symbol(rho: Table) -> RelationSymbol:
    return RelationSymbol(f"TAB{rho.arity}_{rho.index}", rho.arity)


# -- table normal form ------------------------------------------------------


def _check_fragment(phi0: Formula, vocab, cap: int):
    if not any(s.arity == 2 for s in vocab):
        raise PreconditionError("the vocabulary needs at least one binary relation symbol")
    if len(vocab) > cap:
        raise FragmentError(f"{len(vocab)} relation symbols exceed the cap of {cap}")
    names = {}
    for s in vocab:
        if names.setdefault(s.name, s) != s:
            raise VocabularyError(f"symbol {s.name} declared with two arities")
    for node in subformula_order(phi0):
        if isinstance(node, (Exists, Forall)):
            raise FragmentError("global modalities are not allowed in the source formula")
        if isinstance(node, (Diamond, Box)):
            extra = symbols_of(node.term) - set(vocab)
            if extra:
                raise VocabularyError(f"symbol {sorted(s.name for s in extra)[0]} is outside the vocabulary")


def table_normal_form(phi: Formula, vocab=None, cap: int = DEFAULT_CAP) -> tuple[Formula, dict]:
    """``(phi*, fresh)``: every diamond term of ``phi*`` is a single table.

    Each diamond ``<T>(f1..fk)`` becomes the disjunction of ``<rho>(p_f1..p_fk)``
    over the tables ``rho`` entailing ``T`` (boxes become conjunctions), and
    every fresh ``p_f`` comes with ``[rho](p_f <-> f)`` for all 2-tables
    ``rho``, which makes the biconditional global.
    """
    phi0 = eliminate_window(phi)
    vocab = tuple(sorted(set(vocab if vocab is not None else relation_symbols(phi0)), key=lambda s: s.name))
    _check_fragment(phi0, vocab, cap)
    two_tables = enumerate_tables(vocab, 2)
    used = [int(p[2:]) for p in propositions(phi0) if p.startswith("_f") and p[2:].isdigit()]
    counter = [max(used, default=-1) + 1]
    fresh: dict[Formula, Prop] = {}
    guards: list[Formula] = []
    entailing: dict = {}

    def prop_for(f: Formula) -> Prop:
        if f not in fresh:
            p = Prop(f"_f{counter[0]}")
            counter[0] += 1
            fresh[f] = p
            guards.append(conj(Box(rho.term, (iff(p, f),)) for rho in two_tables))
        return fresh[f]

    def step(node, kids):
        if isinstance(node, (Diamond, Box)):
            if node.term not in entailing:
                norm = normalize_term(node.term)
                entailing[node.term] = [rho for rho in enumerate_tables(vocab, node.term.arity) if table_entails(rho, norm)]
            props = tuple(prop_for(k) for k in kids)
            parts = [type(node)(rho.term, props) for rho in entailing[node.term]]
            return disj(parts) if isinstance(node, Diamond) else conj(parts)
        return rebuild(node, kids)

    body = transform(phi0, step)
    star = And(body, conj(guards)) if guards else body
    return star, fresh


def _table_terms(vocab) -> dict:
    out = {}
    for k in sorted({s.arity for s in vocab}):
        for rho in enumerate_tables(vocab, k):
            out[rho.term] = rho
    return out


def translate_tables(star: Formula, vocab) -> Formula:
    """Replace every table term by its table symbol."""
    terms = _table_terms(vocab)

    def step(node, kids):
        if isinstance(node, (Diamond, Box)):
            rho = terms.get(node.term)
            if rho is None:
                raise ShapeError(f"diamond term {node.term} is not a table")
            return type(node)(table_symbol(rho), tuple(kids))
        return rebuild(node, kids)

    return transform(star, step)


def is_table_normal(star: Formula, vocab) -> bool:
    terms = _table_terms(vocab)
    return all(n.term in terms for n in subformula_order(star) if isinstance(n, (Diamond, Box)))


# -- the axioms -------------------------------------------------------------


def _candidates(translated: Formula) -> tuple[Formula, ...]:
    seen: dict[Formula, None] = {}
    for node in subformula_order(desugar(translated)):
        if isinstance(node, Diamond):
            for a in node.args:
                seen.setdefault(a)
    return tuple(seen)


def build_xi1(sym, tables: list[Table], cands, k: int) -> tuple[list[Formula], int]:
    perms = all_permutations(k + 1)
    inverses = {s: s.inverse() for s in perms}
    conjuncts = []
    for g in product(perms, repeat=len(tables)):
        moved = [sym(table_action(s, rho)) for s, rho in zip(g, tables)]
        for h in product(product(cands, repeat=k), repeat=len(tables)):
            blocked = [Not(Diamond(m, args)) for m, args in zip(moved, h)]
            premise = [blocked[i] for i, s in enumerate(g) if s(0) == 0]
            for ell in range(1, k + 1):
                inner = []
                for i, s in enumerate(g):
                    if s(0) == ell:
                        inner.append(blocked[i])
                    else:
                        inner.append(h[i][inverses[s](ell) - 1])
                premise.append(Exists(conj(inner)))
            conclusion = disj(Not(h[i][inverses[s](0) - 1]) for i, s in enumerate(g) if s(0) != 0)
            conjuncts.append(implies(conj(premise), conclusion))
    return conjuncts, len(conjuncts)


def build_xi2(sym, tables, cands, k: int) -> list[Formula]:
    conjuncts = []
    for rho in tables:
        for s in all_permutations(k + 1):
            if s(0) == 0:
                continue
            inv = s.inverse()
            target = sym(table_action(s, rho))
            for psi in product(cands, repeat=k):
                args = []
                for ell in range(1, k + 1):
                    if ell == s(0):
                        args.append(Not(Diamond(target, psi)))
                    else:
                        args.append(psi[inv(ell) - 1])
                conjuncts.append(Or(Not(psi[inv(0) - 1]), Not(Diamond(sym(rho), tuple(args)))))
    return conjuncts


def build_xi3(sym, tables, cands, k: int) -> list[Formula]:
    conjuncts = []
    for rho in tables:
        for s in all_permutations(k + 1):
            if s(0) != 0:
                continue
            inv = s.inverse()
            target = sym(table_action(s, rho))
            for psi in product(cands, repeat=k):
                permuted = tuple(psi[inv(ell) - 1] for ell in range(1, k + 1))
                conjuncts.append(implies(Diamond(sym(rho), permuted), Diamond(target, psi)))
    return conjuncts


def build_theta(source: Formula, star: Formula, fresh: dict, vocab) -> TableReduction:
    vocab = tuple(sorted(set(vocab), key=lambda s: s.name))
    translated = translate_tables(star, vocab)
    cands = _candidates(translated)
    arities = sorted({s.arity for s in vocab})
    table_vocab = {rho: table_symbol(rho) for k in arities for rho in enumerate_tables(vocab, k)}
    sym = table_vocab.__getitem__
    xi1, xi2, xi3 = [], [], []
    counts = {"xi1": 0, "xi2": 0, "xi3": 0}
    for arity in arities:
        k = arity - 1
        tables = enumerate_tables(vocab, arity)
        part, n = build_xi1(sym, tables, cands, k)
        xi1.extend(part)
        counts["xi1"] += n
        part = build_xi2(sym, tables, cands, k)
        xi2.extend(part)
        counts["xi2"] += len(part)
        part = build_xi3(sym, tables, cands, k)
        xi3.extend(part)
        counts["xi3"] += len(part)
    x1, x2, x3 = Forall(conj(xi1)), Forall(conj(xi2)), Forall(conj(xi3))
    theta = And(And(And(translated, x1), x2), x3)
    return TableReduction(source, vocab, star, dict(fresh), table_vocab, translated, cands, x1, x2, x3, theta, max(arities), counts)


def reduce_tables(phi: Formula, vocab=None, cap: int = DEFAULT_CAP) -> TableReduction:
    if vocab is None:
        vocab = relation_symbols(eliminate_window(phi))
    star, fresh = table_normal_form(phi, vocab, cap)
    return build_theta(phi, star, fresh, vocab)


# -- forward construction ---------------------------------------------------


def star_model(red: TableReduction, model: KripkeModel) -> KripkeModel:
    """Extend a model of the source with the intended valuation of the fresh propositions."""
    vals = dict(model.valuation)
    current = model
    for f, p in red.fresh.items():
        vals[p.name] = check_labeling(current, f)
        current = KripkeModel(model.worlds, model.relations, vals)
    return current


def table_relations(red: TableReduction, model: KripkeModel) -> dict:
    """Each table symbol interpreted as the set of tuples realizing that table."""
    rels = {red.symbol(rho): set() for rho in red.table_vocab}
    for k in red.arities:
        for t in full_tuples(model.worlds, k):
            rels[red.symbol(table_of_tuple(t, model, red.vocab))].add(t)
    return rels


def forward_model_tbl(red: TableReduction, model: KripkeModel, world: int) -> tuple[KripkeModel, int]:
    if world not in check_labeling(model, red.star):
        raise PreconditionError(f"the table normal form does not hold at world {world}")
    out = KripkeModel(model.worlds, table_relations(red, model), model.valuation)
    if world not in check_labeling(out, red.translated):
        raise ConsistencyError("constructed model does not satisfy the translation")
    worlds = set(out.domain)
    for name in ("xi1", "xi2", "xi3"):
        if check_labeling(out, getattr(red, name)) != worlds:
            raise ConsistencyError(f"constructed model violates {name}")
    return out, world


# -- backward construction --------------------------------------------------


def _diamond_truth(rel, sets) -> frozenset:
    return frozenset(t[0] for t in rel if all(x in s for x, s in zip(t[1:], sets)))


@dataclass
class CompletionReport:
    closure_added: int = 0
    chosen: dict = field(default_factory=dict)  # uncovered tuple -> table


def complete_tables(red: TableReduction, model: KripkeModel, report: CompletionReport | None = None) -> KripkeModel:
    """Close table relations under permutations, then give every uncovered tuple a table."""
    core = desugar(red.translated)
    nu = label(model, core)
    cand_sets = {c: check_labeling(model, c) for c in red.candidates}
    rels = {red.symbol(rho): set(model.relations.get(red.symbol(rho), ())) for rho in red.table_vocab}
    report = report if report is not None else CompletionReport()
    for k in red.arities:
        tables = red.tables(k)
        perms = all_permutations(k)
        # permutation closure: one pass suffices because S_k is a group
        for rho in tables:
            for t in model.relations.get(red.symbol(rho), ()):
                for s in perms:
                    target = rels[red.symbol(table_action(s, rho))]
                    u = s.apply(t)
                    if u not in target:
                        target.add(u)
                        report.closure_added += 1
        truth = {}
        for rho in tables:
            rel = model.relations.get(red.symbol(rho), frozenset())
            for psi in product(red.candidates, repeat=k - 1):
                truth[rho, psi] = _diamond_truth(rel, [cand_sets[c] for c in psi])
        covered = set().union(*(rels[red.symbol(rho)] for rho in tables))
        for t in full_tuples(model.worlds, k):
            if t in covered:
                continue
            rho = next((r for r in tables if _promised(r, t, perms, red.candidates, cand_sets, truth)), None)
            if rho is None:
                raise ConsistencyError(f"no table is promised for tuple {t}; xi1 is violated")
            report.chosen[t] = rho
            for s in perms:
                u = s.apply(t)
                rels[red.symbol(table_action(s, rho))].add(u)
                covered.add(u)
    out = KripkeModel(model.worlds, rels, model.valuation)
    after = label(out, core)
    if any(after[n] != nu[n] for n in subformula_order(core)):
        raise ConsistencyError("completion changed the truth set of a subformula")
    return out


def _promised(rho, t, perms, cands, cand_sets, truth) -> bool:
    # for every s and psi: t[s(l)] |= psi_l for all l >= 1 implies t[s(0)] |= <s[rho]>(psi)
    for s in perms:
        u = s.apply(t)
        moved = table_action(s, rho)
        options = [[c for c in cands if u[ell] in cand_sets[c]] for ell in range(1, len(u))]
        for psi in product(*options):
            if u[0] not in truth[moved, psi]:
                return False
    return True


@dataclass
class LayeredModel:
    model: KripkeModel
    world: int
    depth: int
    levels: int  # m - 1
    assigned: dict  # tuple -> Table
    layered: int  # tuples assigned by the layer rule (with their permutations)

    def world_id(self, w: int, level: int, r: int) -> int:
        return ((w * self.levels) + (level - 2)) * (self.depth + 1) + r

    def coords(self, x: int) -> tuple[int, int, int]:
        r = x % (self.depth + 1)
        rest = x // (self.depth + 1)
        return rest // self.levels, rest % self.levels + 2, r


def layered_model(red: TableReduction, completed: KripkeModel, world: int, depth: int) -> LayeredModel:
    m = red.max_arity
    levels = m - 1
    n = completed.worlds * levels * (depth + 1)
    shell = LayeredModel(None, 0, depth, levels, {}, 0)
    wid = shell.world_id
    assigned: dict[tuple, Table] = {}
    base_of = [shell.coords(x)[0] for x in range(n)]
    for k in red.arities:
        perms = all_permutations(k)
        for rho in red.tables(k):
            step = rho.index
            for t in sorted(completed.relation(red.symbol(rho))):
                for level in range(2, m + 1):
                    for r in range(0, depth + 1 - step):
                        u = (wid(t[0], level, r),) + tuple(wid(x, j + 2, r + step) for j, x in enumerate(t[1:]))
                        for s in perms:
                            v = s.apply(u)
                            if v in assigned:
                                raise ConsistencyError(f"tuple {v} is assigned a table twice")
                            assigned[v] = table_action(s, rho)
    layered = len(assigned)
    for k in red.arities:
        perms = all_permutations(k)
        tables = red.tables(k)
        for v in full_tuples(n, k):
            if v in assigned:
                continue
            base = tuple(base_of[x] for x in v)
            stab = [s for s in perms if s.apply(v) == v]
            rho = next(
                (
                    r
                    for r in tables
                    if base in completed.relation(red.symbol(r)) and all(table_action(s, r) == r for s in stab)
                ),
                None,
            )
            if rho is None:
                raise ConsistencyError(f"no table for tuple {v} is compatible with its repeated entries")
            for s in perms:
                assigned[s.apply(v)] = table_action(s, rho)
    rels = {}
    for sym in red.vocab:
        ident = Permutation.identity(sym.arity)
        rels[sym] = {v for v, rho in assigned.items() if rho.arity == sym.arity and rho.sign(ident, sym)}
    vals = {p: {x for x in range(n) if base_of[x] in ws} for p, ws in completed.valuation.items()}
    out = KripkeModel(n, rels, vals)
    for v, rho in assigned.items():
        if table_of_tuple(v, out, red.vocab) != rho:
            raise ConsistencyError(f"tuple {v} realizes a table other than the one assigned")
    return LayeredModel(out, wid(world, 2, 0), depth, levels, assigned, layered)


def backward_model_tbl(red: TableReduction, model: KripkeModel, world: int, depth: int | None = None) -> tuple[KripkeModel, int]:
    """Model of the table normal form at ``(world, 2, 0)`` from a model of ``theta`` at ``world``."""
    needed = red.default_depth()
    if depth is None:
        depth = needed
    if depth < needed:
        raise TruncationError(f"depth bound {depth} is below the required {needed}")
    if world not in check_labeling(model, red.theta):
        raise PreconditionError(f"theta does not hold at world {world}")
    completed = complete_tables(red, model)
    lay = layered_model(red, completed, world, depth)
    if lay.world not in check_labeling(lay.model, red.star):
        raise ConsistencyError("the layered model does not satisfy the table normal form")
    return lay.model, lay.world
