"""k-literals, k-tables and the action of S_k on tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import TYPE_CHECKING, Iterable, Sequence

from .errors import ArityError, ShapeError
from .perms import Permutation, all_permutations
from .terms import (
    Diff,
    Inter,
    Neg,
    RelationSymbol,
    Term,
    Union,
    balanced,
    chain_permutation,
    literal_term,
)

if TYPE_CHECKING:
    from .kripke import KripkeModel

LiteralKey = tuple[RelationSymbol, Permutation]


@dataclass(frozen=True)
class Literal:
    positive: bool
    perm: Permutation
    symbol: RelationSymbol

    def __post_init__(self):
        if self.perm.k != self.symbol.arity:
            raise ArityError(f"literal permutation on {self.perm.k} positions over {self.symbol.name}")

    def term(self) -> Term:
        t = literal_term(self.perm, self.symbol)
        return t if self.positive else Neg(t)

    def __str__(self) -> str:
        return str(self.term())


def arity_symbols(vocab: Iterable[RelationSymbol], k: int) -> tuple[RelationSymbol, ...]:
    return tuple(sorted({s for s in vocab if s.arity == k}, key=lambda s: s.name))


@lru_cache(maxsize=None)
def literal_keys(symbols: tuple[RelationSymbol, ...], k: int) -> tuple[LiteralKey, ...]:
    """Canonical literal order: by symbol name, then permutation in one-line notation."""
    return tuple((sym, perm) for sym in symbols for perm in all_permutations(k))


@lru_cache(maxsize=None)
def _key_positions(keys: tuple[LiteralKey, ...]) -> dict[LiteralKey, int]:
    return {key: i for i, key in enumerate(keys)}


@dataclass(frozen=True)
class Table:
    """A maximally consistent set of k-literals, stored as one sign per literal key."""

    arity: int
    keys: tuple[LiteralKey, ...] = field(repr=False)
    signs: tuple[bool, ...]

    def __post_init__(self):
        if len(self.keys) != len(self.signs):
            raise ValueError("one sign per literal key required")

    @property
    def symbols(self) -> tuple[RelationSymbol, ...]:
        return tuple(dict.fromkeys(sym for sym, _ in self.keys))

    @cached_property
    def index(self) -> int:
        """1-based position in :func:`enumerate_tables` order."""
        bits = "".join("0" if s else "1" for s in self.signs)
        return 1 + (int(bits, 2) if bits else 0)

    def sign(self, perm: Permutation, symbol: RelationSymbol) -> bool:
        return self.signs[_key_positions(self.keys)[(symbol, perm)]]

    def literals(self) -> list[Literal]:
        return [Literal(s, perm, sym) for (sym, perm), s in zip(self.keys, self.signs)]

    @cached_property
    def term(self) -> Term:
        lits = [lit.term() for lit in self.literals()]
        if not lits:
            raise ShapeError("the empty table has no term")
        return balanced(Inter, lits)

    def __str__(self) -> str:
        return "{" + ", ".join(str(lit) for lit in self.literals()) + "}"


def enumerate_tables(vocab: Iterable[RelationSymbol], k: int) -> list[Table]:
    """All k-tables over the k-ary symbols of ``vocab``, in index order."""
    if k < 2:
        raise ArityError("tables need arity >= 2")
    return list(_tables(arity_symbols(vocab, k), k))


@lru_cache(maxsize=None)
def _tables(symbols: tuple[RelationSymbol, ...], k: int) -> tuple[Table, ...]:
    keys = literal_keys(symbols, k)
    return tuple(Table(k, keys, signs) for signs in product((True, False), repeat=len(keys)))


def table_action(sigma: Permutation, rho: Table) -> Table:
    """``sigma[rho]``: the literal ``sigma'R`` of ``rho`` becomes ``(sigma * sigma')R``."""
    if sigma.k != rho.arity:
        raise ArityError(f"permutation on {sigma.k} positions acting on a {rho.arity}-table")
    pos = _key_positions(rho.keys)
    signs = [False] * len(rho.keys)
    for (sym, perm), s in zip(rho.keys, rho.signs):
        signs[pos[(sym, sigma * perm)]] = s
    return Table(rho.arity, rho.keys, tuple(signs))


def table_of_tuple(t: Sequence[int], model: "KripkeModel", vocab: Iterable[RelationSymbol] | None = None) -> Table:
    """The unique table realized by ``t``; ``vocab`` defaults to the model's symbols."""
    k = len(t)
    if k < 2:
        raise ArityError("tables need arity >= 2")
    symbols = arity_symbols(model.symbols if vocab is None else vocab, k)
    keys = literal_keys(symbols, k)
    t = tuple(t)
    signs = []
    for sym, perm in keys:
        # t is in [[sigma R]] iff sigma^-1 applied to t is in R
        signs.append(perm.inverse().apply(t) in model.relation(sym))
    return Table(k, keys, tuple(signs))


def table_entails(rho: Table, term: Term) -> bool:
    """Whether every tuple realizing ``rho`` lies in ``term`` (a Boolean combination of literals)."""
    if term.arity != rho.arity:
        raise ArityError(f"{term.arity}-ary term against a {rho.arity}-table")
    chain = chain_permutation(term)
    if chain is not None:
        perm, sym = chain
        if (sym, perm) not in _key_positions(rho.keys):
            raise ShapeError(f"symbol {sym.name} is outside the table's vocabulary")
        return rho.sign(perm, sym)
    match term:
        case Neg(a):
            return not table_entails(rho, a)
        case Inter(a, b):
            return table_entails(rho, a) and table_entails(rho, b)
        case Union(a, b):
            return table_entails(rho, a) or table_entails(rho, b)
        case Diff(a, b):
            return table_entails(rho, a) and not table_entails(rho, b)
    raise ShapeError(f"not a Boolean combination of literals: {term}")


def stabilizes(sigma: Permutation, rho: Table) -> bool:
    return table_action(sigma, rho) == rho
