"""Bounded-domain satisfiability by brute force.

Models with 1..N worlds are enumerated as bit vectors, smallest domain
first; within a domain size only the numerically least encoding of each
isomorphism class is examined.  A verdict of ``exhausted`` means no model up
to the bound exists; it never claims unsatisfiability.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from itertools import permutations
from typing import Iterator

from .checker import check_labeling, check_naive
from .errors import BudgetError, ConsistencyError
from .formulas import Formula, eliminate_window, propositions, relation_symbols
from .kripke import KripkeModel, full_tuples
from .terms import RelationSymbol

DEFAULT_MAX_CANDIDATES = 1 << 22


@dataclass(frozen=True)
class SatVerdict:
    outcome: str  # "satisfiable" or "exhausted"
    bound: int
    model: KripkeModel | None = None
    world: int | None = None
    candidates: int = 0

    @property
    def satisfiable(self) -> bool:
        return self.outcome == "satisfiable"

    def __str__(self) -> str:
        if self.satisfiable:
            return f"satisfiable {self.model.worlds} world {self.world}"
        return f"exhausted {self.bound}"


class _Layout:
    """Bit positions of one domain size: relation tuples first, then (prop, world) pairs."""

    def __init__(self, n: int, symbols, props):
        self.n = n
        self.symbols = symbols
        self.props = props
        self.slots: list = []
        for sym in symbols:
            for t in full_tuples(n, sym.arity):
                self.slots.append((sym, t))
        for p in props:
            for w in range(n):
                self.slots.append((p, (w,)))
        self.bits = len(self.slots)
        index = {slot: i for i, slot in enumerate(self.slots)}
        # bit i of a config moves to bit maps[j][i] under the j-th renaming
        self.maps = []
        for perm in permutations(range(n)):
            if list(perm) == list(range(n)):
                continue
            self.maps.append([index[(name, tuple(perm[x] for x in t))] for name, t in self.slots])
        self.chunks = [self._chunk_tables(m) for m in self.maps]

    def _chunk_tables(self, mapping):
        tables = []
        for start in range(0, self.bits, 8):
            width = min(8, self.bits - start)
            table = [0] * (1 << width)
            for byte in range(1 << width):
                out = 0
                for b in range(width):
                    if byte >> b & 1:
                        out |= 1 << mapping[start + b]
                table[byte] = out
            tables.append(table)
        return tables

    def canonical(self, config: int) -> bool:
        for tables in self.chunks:
            image = 0
            x = config
            for table in tables:
                image |= table[x & 0xFF]
                x >>= 8
            if image < config:
                return False
        return True

    def model(self, config: int) -> KripkeModel:
        rels = {sym: set() for sym in self.symbols}
        vals = {p: set() for p in self.props}
        for i, (name, t) in enumerate(self.slots):
            if config >> i & 1:
                if isinstance(name, RelationSymbol):
                    rels[name].add(t)
                else:
                    vals[name].add(t[0])
        return KripkeModel.trusted(
            self.n,
            {s: frozenset(v) for s, v in rels.items()},
            {p: frozenset(v) for p, v in vals.items()},
        )


def _budget(budget_ms):
    if budget_ms is None:
        env = os.environ.get("PML_BUDGET_MS")
        budget_ms = int(env) if env else None
    return None if budget_ms is None else time.monotonic() + budget_ms / 1000.0


def iter_models(
    phi: Formula,
    max_worlds: int,
    vocab=None,
    prune: bool = True,
    max_candidates: int | None = DEFAULT_MAX_CANDIDATES,
    budget_ms: int | None = None,
    min_worlds: int = 1,
) -> Iterator[tuple[KripkeModel, frozenset]]:
    """All candidate models up to the bound with the truth set of ``phi`` in each."""
    if max_worlds < 1:
        raise ValueError("max_worlds must be >= 1")
    symbols = sorted(set(vocab or ()) | set(relation_symbols(eliminate_window(phi))), key=lambda s: s.name)
    props = propositions(phi)
    deadline = _budget(budget_ms)
    seen = 0
    for n in range(min_worlds, max_worlds + 1):
        layout = _Layout(n, symbols, props)
        for config in range(1 << layout.bits):
            seen += 1
            if max_candidates is not None and seen > max_candidates:
                raise BudgetError(f"more than {max_candidates} candidate models")
            if deadline is not None and seen % 256 == 0 and time.monotonic() > deadline:
                raise BudgetError("time budget exhausted")
            if prune and not layout.canonical(config):
                continue
            model = layout.model(config)
            yield model, check_labeling(model, phi)


def sat_bounded(phi: Formula, max_worlds: int, vocab=None, max_candidates=DEFAULT_MAX_CANDIDATES, budget_ms=None) -> SatVerdict:
    """First witness in enumeration order, or ``exhausted``."""
    count = 0
    for model, truth in iter_models(phi, max_worlds, vocab, True, max_candidates, budget_ms):
        count += 1
        if truth:
            world = min(truth)
            if world not in check_naive(model, phi):
                raise ConsistencyError("the labeling checker and the reference evaluator disagree")
            return SatVerdict("satisfiable", max_worlds, model, world, count)
    return SatVerdict("exhausted", max_worlds, candidates=count)


def all_witnesses(phi: Formula, max_worlds: int, vocab=None, prune: bool = True, **kw) -> Iterator[tuple[KripkeModel, frozenset]]:
    """Every enumerated model in which ``phi`` holds somewhere, with its truth set."""
    for model, truth in iter_models(phi, max_worlds, vocab, prune, **kw):
        if truth:
            yield model, truth


@dataclass(frozen=True)
class EquisatReport:
    first: SatVerdict
    second: SatVerdict

    @property
    def outcome(self) -> str:
        a, b = self.first.satisfiable, self.second.satisfiable
        if a and b:
            return "both-satisfiable"
        if not a and not b:
            return "both-exhausted"
        return "only-first" if a else "only-second"


def equisat_check(phi: Formula, psi: Formula, bound_phi: int, bound_psi: int, **kw) -> EquisatReport:
    return EquisatReport(sat_bounded(phi, bound_phi, **kw), sat_bounded(psi, bound_psi, **kw))
