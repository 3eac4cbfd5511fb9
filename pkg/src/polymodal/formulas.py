"""Modal formulas: AST, derived connectives, subformulas and window elimination."""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable

from .errors import ArityError
from .nodes import Node
from .terms import Neg, RelationSymbol, Term, symbols_of, term_size


class Formula(Node):
    __slots__ = ()

    def __str__(self) -> str:
        from .syntax import render_formula

        return render_formula(self)

    @property
    def subformulas(self) -> tuple["Formula", ...]:
        """Immediate formula children."""
        return ()


class Prop(Formula):
    __slots__ = ()
    _fields = ("name",)

    @classmethod
    def _validate(cls, name):
        if not isinstance(name, str) or not name or not (name[0].islower() or name[0] == "_"):
            raise ValueError(f"invalid proposition name {name!r}")
        return (name,)


class Top(Formula):
    __slots__ = ()


class Bot(Formula):
    __slots__ = ()


class _Unary(Formula):
    __slots__ = ()
    _fields = ("arg",)

    @classmethod
    def _validate(cls, arg):
        if not isinstance(arg, Formula):
            raise TypeError(f"{cls.__name__} expects a formula")
        return (arg,)

    @property
    def subformulas(self):
        return (self.arg,)


class Not(_Unary):
    __slots__ = ()


class Exists(_Unary):
    """The global diamond ``<E>``."""

    __slots__ = ()


class Forall(_Unary):
    """The global box ``[A]``, shorthand for ``~<E>~``."""

    __slots__ = ()


class _Binary(Formula):
    __slots__ = ()
    _fields = ("left", "right")

    @classmethod
    def _validate(cls, left, right):
        if not isinstance(left, Formula) or not isinstance(right, Formula):
            raise TypeError(f"{cls.__name__} expects formulas")
        return left, right

    @property
    def subformulas(self):
        return (self.left, self.right)


class And(_Binary):
    __slots__ = ()


class Or(_Binary):
    __slots__ = ()


class _Modal(Formula):
    __slots__ = ()
    _fields = ("term", "args")

    @classmethod
    def _validate(cls, term, args):
        args = tuple(args)
        if not isinstance(term, Term):
            raise TypeError(f"{cls.__name__} expects a term")
        if not args or not all(isinstance(a, Formula) for a in args):
            raise TypeError(f"{cls.__name__} expects a non-empty tuple of formulas")
        if term.arity != len(args) + 1:
            raise ArityError(f"a {term.arity}-ary term cannot bind {len(args)} formulas")
        return term, args

    @property
    def subformulas(self):
        return self.args


class Diamond(_Modal):
    __slots__ = ()


class Box(_Modal):
    """``[T](f, ...)``, shorthand for ``~<T>(~f, ...)``."""

    __slots__ = ()


class Window(Formula):
    """``win_R(f1, ..., fk)``: every tuple of argument witnesses is R-related to here."""

    __slots__ = ()
    _fields = ("symbol", "args")

    @classmethod
    def _validate(cls, symbol, args):
        args = tuple(args)
        if not isinstance(symbol, RelationSymbol):
            raise TypeError("window operators take a relation symbol")
        if not args or symbol.arity != len(args) + 1:
            raise ArityError(f"{symbol.name}/{symbol.arity} cannot bind {len(args)} formulas")
        return symbol, args

    @property
    def subformulas(self):
        return self.args


TOP = Top()
BOT = Bot()


# -- builders ---------------------------------------------------------------


def _balanced(op, items: list[Formula], empty: Formula) -> Formula:
    if not items:
        return empty
    while len(items) > 1:
        items = [op(items[i], items[i + 1]) if i + 1 < len(items) else items[i] for i in range(0, len(items), 2)]
    return items[0]


def conj(items: Iterable[Formula]) -> Formula:
    """Balanced conjunction; the empty conjunction is ``true``."""
    return _balanced(And, list(items), TOP)


def disj(items: Iterable[Formula]) -> Formula:
    """Balanced disjunction; the empty disjunction is ``false``."""
    return _balanced(Or, list(items), BOT)


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return And(Or(Not(a), b), Or(a, Not(b)))


# -- traversal --------------------------------------------------------------


def rebuild(f: Formula, children: list[Formula]) -> Formula:
    match f:
        case Not() | Exists() | Forall():
            return type(f)(children[0])
        case And() | Or():
            return type(f)(children[0], children[1])
        case Diamond() | Box():
            return type(f)(f.term, tuple(children))
        case Window():
            return Window(f.symbol, tuple(children))
    return f


def transform(f: Formula, fn: Callable[[Formula, list[Formula]], Formula]) -> Formula:
    """Bottom-up rewrite; ``fn(node, new_children)`` returns the replacement node.

    Shared subformulas are rewritten once.
    """
    memo: dict[Formula, Formula] = {}
    for node in subformula_order(f):
        memo[node] = fn(node, [memo[c] for c in node.subformulas])
    return memo[f]


@lru_cache(maxsize=1024)
def subformula_order(phi: Formula) -> tuple[Formula, ...]:
    """Distinct subformulas with every proper subformula listed before its parents."""
    order: list[Formula] = []
    seen: set[Formula] = set()
    stack: list[tuple[Formula, bool]] = [(phi, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            if node not in seen:
                seen.add(node)
                order.append(node)
            continue
        if node in seen:
            continue
        stack.append((node, True))
        for child in reversed(node.subformulas):
            if child not in seen:
                stack.append((child, False))
    return tuple(order)


def size(phi: Formula) -> int:
    """Tree size: formula nodes plus the nodes of every modal term."""
    memo: dict[Formula, int] = {}
    for node in subformula_order(phi):
        own = 1
        if isinstance(node, (Diamond, Box)):
            own += term_size(node.term)
        elif isinstance(node, Window):
            own += 1
        memo[node] = own + sum(memo[c] for c in node.subformulas)
    return memo[phi]


def dag_size(phi: Formula) -> int:
    """Number of distinct subformulas (the size of the shared representation)."""
    return len(subformula_order(phi))


def modal_depth(phi: Formula) -> int:
    memo: dict[Formula, int] = {}
    for node in subformula_order(phi):
        inner = max((memo[c] for c in node.subformulas), default=0)
        memo[node] = inner + (1 if isinstance(node, (Diamond, Box, Window)) else 0)
    return memo[phi]


def propositions(phi: Formula) -> list[str]:
    return sorted({n.name for n in subformula_order(phi) if isinstance(n, Prop)})


def relation_symbols(phi: Formula) -> list[RelationSymbol]:
    found: set[RelationSymbol] = set()
    for node in subformula_order(phi):
        if isinstance(node, (Diamond, Box)):
            found |= symbols_of(node.term)
        elif isinstance(node, Window):
            found.add(node.symbol)
    return sorted(found, key=lambda s: (s.name, s.arity))


def modal_terms(phi: Formula) -> list[Term]:
    return list(dict.fromkeys(n.term for n in subformula_order(phi) if isinstance(n, (Diamond, Box))))


# -- rewrites ---------------------------------------------------------------


def _desugar_node(node: Formula, kids: list[Formula]) -> Formula:
    match node:
        case Or():
            return Not(And(Not(kids[0]), Not(kids[1])))
        case Box():
            return Not(Diamond(node.term, tuple(Not(k) for k in kids)))
        case Forall():
            return Not(Exists(Not(kids[0])))
        case Window():
            return Not(Diamond(Neg(node.symbol), tuple(Not(Not(k)) for k in kids)))
    return rebuild(node, kids)


@lru_cache(maxsize=1024)
def desugar(phi: Formula) -> Formula:
    """Rewrite into ``p, true, false, ~, &, <T>, <E>`` only."""
    return transform(phi, _desugar_node)


def _window_node(node: Formula, kids: list[Formula]) -> Formula:
    if isinstance(node, Window):
        return Box(Neg(node.symbol), tuple(Not(k) for k in kids))
    return rebuild(node, kids)


@lru_cache(maxsize=1024)
def eliminate_window(phi: Formula) -> Formula:
    """Replace ``win_R(f1..fk)`` by ``[!R](~f1..~fk)``."""
    return transform(phi, _window_node)
