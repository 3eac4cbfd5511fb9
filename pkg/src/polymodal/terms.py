"""Relation-valued terms over p, s, negation, intersection, difference and union."""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import TYPE_CHECKING, Iterable

from .errors import ArityError, ShapeError, VocabularyError
from .nodes import Node
from .perms import Permutation, generator_word

if TYPE_CHECKING:
    from .kripke import KripkeModel

RESERVED_SYMBOLS = frozenset({"E", "A"})


class Term(Node):
    __slots__ = ()

    @property
    def arity(self) -> int:
        raise NotImplementedError

    def __str__(self) -> str:
        from .syntax import render_term

        return render_term(self)


class RelationSymbol(Term):
    __slots__ = ()
    _fields = ("name", "arity")

    @classmethod
    def _validate(cls, name, arity):
        if not isinstance(arity, int) or arity < 2:
            raise ArityError(f"relation symbol {name} needs arity >= 2, got {arity}")
        if not name or not name[0].isupper() or name in RESERVED_SYMBOLS:
            raise VocabularyError(f"invalid relation symbol name {name!r}")
        return name, arity


class _Unary(Term):
    __slots__ = ()
    _fields = ("arg",)

    @classmethod
    def _validate(cls, arg):
        if not isinstance(arg, Term):
            raise TypeError(f"{cls.__name__} expects a term")
        return (arg,)

    @property
    def arity(self) -> int:
        return self.arg.arity


class Rot(_Unary):
    """Cyclic permutation ``p``."""

    __slots__ = ()


class Swp(_Unary):
    """Swap of the last two positions ``s``."""

    __slots__ = ()


class Neg(_Unary):
    __slots__ = ()


class _Binary(Term):
    __slots__ = ()
    _fields = ("left", "right")

    @classmethod
    def _validate(cls, left, right):
        if not isinstance(left, Term) or not isinstance(right, Term):
            raise TypeError(f"{cls.__name__} expects terms")
        if left.arity != right.arity:
            raise ArityError(f"operands of arity {left.arity} and {right.arity} in {cls.__name__}")
        return left, right

    @property
    def arity(self) -> int:
        return self.left.arity


class Inter(_Binary):
    __slots__ = ()


class Diff(_Binary):
    __slots__ = ()


class Union(_Binary):
    __slots__ = ()


def term_size(term: Term) -> int:
    match term:
        case RelationSymbol():
            return 1
        case Rot(a) | Swp(a) | Neg(a):
            return 1 + term_size(a)
        case Inter(a, b) | Diff(a, b) | Union(a, b):
            return 1 + term_size(a) + term_size(b)
    raise TypeError(term)


def symbols_of(term: Term) -> set[RelationSymbol]:
    match term:
        case RelationSymbol():
            return {term}
        case Rot(a) | Swp(a) | Neg(a):
            return symbols_of(a)
        case Inter(a, b) | Diff(a, b) | Union(a, b):
            return symbols_of(a) | symbols_of(b)
    raise TypeError(term)


def balanced(op, items: list[Term]) -> Term:
    if not items:
        raise ValueError("empty combination")
    while len(items) > 1:
        items = [op(items[i], items[i + 1]) if i + 1 < len(items) else items[i] for i in range(0, len(items), 2)]
    return items[0]


def eval_term(term: Term, model: "KripkeModel") -> frozenset[tuple[int, ...]]:
    """Interpretation of ``term`` in ``model``, clause by clause.

    Complements are materialized against the full ``W^k``, so this is the
    reference semantics, not the efficient path used by the labeling checker.
    """
    match term:
        case RelationSymbol():
            return model.relation(term)
        case Rot(a):
            return frozenset(t[-1:] + t[:-1] for t in eval_term(a, model))
        case Swp(a):
            return frozenset(t[:-2] + (t[-1], t[-2]) for t in eval_term(a, model))
        case Neg(a):
            full = product(range(model.worlds), repeat=term.arity)
            return frozenset(full) - eval_term(a, model)
        case Inter(a, b):
            return eval_term(a, model) & eval_term(b, model)
        case Diff(a, b):
            return eval_term(a, model) - eval_term(b, model)
        case Union(a, b):
            return eval_term(a, model) | eval_term(b, model)
    raise TypeError(f"not a term: {term!r}")


# -- literals ---------------------------------------------------------------


def literal_term(perm: Permutation, symbol: RelationSymbol) -> Term:
    """The term ``sigma R`` spelled with the shortest generator word for ``sigma``."""
    if perm.k != symbol.arity:
        raise ArityError(f"permutation on {perm.k} positions for {symbol.name}/{symbol.arity}")
    term: Term = symbol
    for letter in reversed(generator_word(perm)):
        term = Rot(term) if letter == "p" else Swp(term)
    return term


def chain_permutation(term: Term) -> tuple[Permutation, RelationSymbol] | None:
    """Decompose a chain of ``rot``/``swp`` over a symbol; ``None`` for anything else."""
    word = []
    while isinstance(term, (Rot, Swp)):
        word.append(Permutation.cyclic(term.arity) if isinstance(term, Rot) else Permutation.swap(term.arity))
        term = term.arg
    if not isinstance(term, RelationSymbol):
        return None
    perm = Permutation.identity(term.arity)
    for g in word:
        perm = perm * g
    return perm, term


# -- negation normalization -------------------------------------------------


def _combine(op: type, a: Term, na: bool, b: Term, nb: bool) -> tuple[Term, bool]:
    if op is Diff:
        # a \ b == a & !b
        op, nb = Inter, not nb
    if op is Inter:
        if not na and not nb:
            return Inter(a, b), False
        if not na and nb:
            return Diff(a, b), False
        if na and not nb:
            return Diff(b, a), False
        return Union(a, b), True
    # union
    if not na and not nb:
        return Union(a, b), False
    if not na and nb:
        return Diff(b, a), True
    if na and not nb:
        return Diff(a, b), True
    return Inter(a, b), True


def _hoist(term: Term, perm: Permutation) -> tuple[Term, bool]:
    match term:
        case RelationSymbol():
            return literal_term(perm, term), False
        case Rot(a):
            return _hoist(a, perm * Permutation.cyclic(term.arity))
        case Swp(a):
            return _hoist(a, perm * Permutation.swap(term.arity))
        case Neg(a):
            inner, negated = _hoist(a, perm)
            return inner, not negated
        case Inter(a, b) | Diff(a, b) | Union(a, b):
            ta, na = _hoist(a, perm)
            tb, nb = _hoist(b, perm)
            return _combine(type(term), ta, na, tb, nb)
    raise TypeError(f"not a term: {term!r}")


@lru_cache(maxsize=4096)
def split_negation(term: Term) -> tuple[Term, bool]:
    """``(body, negated)`` with ``term == !body`` iff ``negated``; ``body`` is negation-free
    and its permutations sit directly on symbols as shortest generator words."""
    return _hoist(term, Permutation.identity(term.arity))


def normalize_term(term: Term) -> Term:
    """Negation-free term or a single negation of one, semantically equal to ``term``."""
    body, negated = split_negation(term)
    return Neg(body) if negated else body


def is_negation_free(term: Term) -> bool:
    match term:
        case RelationSymbol():
            return True
        case Neg(_):
            return False
        case Rot(a) | Swp(a):
            return is_negation_free(a)
        case Inter(a, b) | Diff(a, b) | Union(a, b):
            return is_negation_free(a) and is_negation_free(b)
    raise TypeError(term)


def literal_leaves(term: Term) -> Iterable[tuple[Permutation, RelationSymbol]]:
    """Literal leaves of a Boolean combination of literals; raises on other shapes."""
    chain = chain_permutation(term)
    if chain is not None:
        yield chain
        return
    match term:
        case Neg(a):
            yield from literal_leaves(a)
        case Inter(a, b) | Diff(a, b) | Union(a, b):
            yield from literal_leaves(a)
            yield from literal_leaves(b)
        case _:
            raise ShapeError(f"not a Boolean combination of literals: {term}")
