"""Concrete syntax for terms and formulas.

Terms::

    R | rot(T) | swp(T) | !T | (T & T) | (T | T) | (T \\ T)

Formulas::

    p | true | false | ~f | (f & f) | (f | f) | <T>(f, ..., f) | [T](f, ..., f)
      | <E> f | [A] f | win_R(f, ..., f)

Relation symbols start with an uppercase letter (``E`` and ``A`` are
reserved), propositions with a lowercase letter or ``_``.  Parentheses around
a single term or formula are allowed, a single modal argument may drop its
parentheses, and chains such as ``a & b & c`` nest to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import ArityError, ParseError, VocabularyError
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
)
from .terms import Diff, Inter, Neg, RelationSymbol, Rot, Swp, Term, Union

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[<>\[\](),~!&|\\]))")
_KEYWORDS = {"true", "false", "rot", "swp"}
_TERM_OPS = {"&": Inter, "|": Union, "\\": Diff}
_FORMULA_OPS = {"&": And, "|": Or}


@dataclass
class _Tok:
    text: str
    pos: int
    ident: bool


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        kind = "ident" if m.group("ident") else "punct"
        start = m.start(kind)
        toks.append(_Tok(m.group(kind), start, kind == "ident"))
        i = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, vocab: Iterable[RelationSymbol] | None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.strict = vocab is not None
        self.arities: dict[str, int] = {}
        for sym in vocab or ():
            self.arities[sym.name] = sym.arity

    # -- token helpers
    def peek(self, offset: int = 0) -> _Tok | None:
        j = self.i + offset
        return self.toks[j] if j < len(self.toks) else None

    def at(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.text == text

    def pos(self) -> int:
        tok = self.peek()
        return tok.pos if tok else len(self.text)

    def expect(self, text: str) -> _Tok:
        tok = self.peek()
        if tok is None or tok.text != text:
            got = "end of input" if tok is None else repr(tok.text)
            raise ParseError(f"expected {text!r}, got {got}", self.pos())
        self.i += 1
        return tok

    def done(self):
        if self.peek() is not None:
            raise ParseError(f"unexpected trailing input {self.peek().text!r}", self.pos())

    # -- symbols
    def symbol(self, name: str, arity: int, pos: int) -> RelationSymbol:
        known = self.arities.get(name)
        if known is None:
            if self.strict:
                raise VocabularyError(f"undeclared relation symbol {name} at col {pos}")
            self.arities[name] = arity
        elif known != arity:
            raise ArityError(f"{name} is {known}-ary but used with arity {arity} at col {pos}")
        return RelationSymbol(name, arity)

    # -- terms: parsed to a raw tree first, typed once the arity is known
    def raw_term(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("expected a term", self.pos())
        if tok.text == "!":
            self.i += 1
            return ("!", self.raw_term())
        if tok.text in ("rot", "swp"):
            self.i += 1
            self.expect("(")
            inner = self.raw_term()
            self.expect(")")
            return (tok.text, inner)
        if tok.text == "(":
            self.i += 1
            items = [self.raw_term()]
            op = None
            while self.peek() is not None and self.peek().text in _TERM_OPS:
                this = self.peek().text
                if op is not None and this != op:
                    raise ParseError("mixed operators need explicit parentheses", self.pos())
                op = this
                self.i += 1
                items.append(self.raw_term())
            self.expect(")")
            if op is None:
                return items[0]
            node = items[0]
            for item in items[1:]:
                node = (op, node, item)
            return node
        if tok.ident and tok.text[0].isupper():
            if tok.text in ("E", "A"):
                raise ParseError(f"{tok.text} is reserved for the global modalities", tok.pos)
            self.i += 1
            return ("sym", tok.text, tok.pos)
        raise ParseError(f"unexpected {tok.text!r} in term", tok.pos)

    def build_term(self, raw, arity: int) -> Term:
        tag = raw[0]
        if tag == "sym":
            return self.symbol(raw[1], arity, raw[2])
        if tag == "!":
            return Neg(self.build_term(raw[1], arity))
        if tag == "rot":
            return Rot(self.build_term(raw[1], arity))
        if tag == "swp":
            return Swp(self.build_term(raw[1], arity))
        return _TERM_OPS[tag](self.build_term(raw[1], arity), self.build_term(raw[2], arity))

    def raw_arity(self, raw) -> int | None:
        if raw[0] == "sym":
            return self.arities.get(raw[1])
        for part in raw[1:]:
            if isinstance(part, tuple):
                found = self.raw_arity(part)
                if found is not None:
                    return found
        return None

    # -- formulas
    def args(self) -> tuple[Formula, ...]:
        # a single argument may be written without parentheses: [R][S](p)
        if not self.at("("):
            return (self.formula(),)
        self.expect("(")
        items = [self.chain()]
        while self.at(","):
            self.i += 1
            items.append(self.chain())
        self.expect(")")
        return tuple(items)

    def chain(self) -> Formula:
        """``f``, or ``f & f & ...`` / ``f | f | ...`` nested to the left."""
        node = self.formula()
        op = None
        while self.peek() is not None and self.peek().text in _FORMULA_OPS:
            this = self.peek().text
            if op is not None and this != op:
                raise ParseError("mixed connectives need explicit parentheses", self.pos())
            op = this
            self.i += 1
            node = _FORMULA_OPS[op](node, self.formula())
        return node

    def formula(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError("expected a formula", self.pos())
        text = tok.text
        if text == "~":
            self.i += 1
            return Not(self.formula())
        if text == "(":
            self.i += 1
            node = self.chain()
            self.expect(")")
            return node
        if text == "<":
            self.i += 1
            if self.at("E") and self.at(">", 1):
                self.i += 2
                return Exists(self.formula())
            return self.modal(Diamond, ">")
        if text == "[":
            self.i += 1
            if self.at("A") and self.at("]", 1):
                self.i += 2
                return Forall(self.formula())
            return self.modal(Box, "]")
        if tok.ident:
            if text == "true":
                self.i += 1
                return Top()
            if text == "false":
                self.i += 1
                return Bot()
            if text.startswith("win_"):
                self.i += 1
                name = text[4:]
                args = self.args()
                return Window(self.symbol(name, len(args) + 1, tok.pos), args)
            if text[0].isupper():
                raise ParseError(f"relation symbol {text} used as a formula", tok.pos)
            if text in _KEYWORDS:
                raise ParseError(f"{text} is a keyword", tok.pos)
            self.i += 1
            return Prop(text)
        raise ParseError(f"unexpected {text!r}", tok.pos)

    def modal(self, cls, close: str) -> Formula:
        start = self.pos()
        raw = self.raw_term()
        self.expect(close)
        args = self.args()
        arity = len(args) + 1
        declared = self.raw_arity(raw)
        if self.strict and declared is not None and declared != arity:
            raise ArityError(f"diamond at col {start} binds {len(args)} formulas but its term is {declared}-ary")
        return cls(self.build_term(raw, arity), args)


def parse_formula(text: str, vocab: Iterable[RelationSymbol] | None = None) -> Formula:
    """Parse a formula; without ``vocab`` symbol arities are inferred from use."""
    p = _Parser(text, vocab)
    f = p.chain()
    p.done()
    return f


def parse_term(text: str, vocab: Iterable[RelationSymbol] | None = None, arity: int | None = None) -> Term:
    p = _Parser(text, vocab)
    raw = p.raw_term()
    p.done()
    if arity is None:
        arity = p.raw_arity(raw)
    if arity is None:
        raise VocabularyError("cannot infer the term's arity; declare its symbols or pass an arity")
    return p.build_term(raw, arity)


def parse_vocab(text: str) -> list[RelationSymbol]:
    """``"R/2, S/3"`` -> symbols."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"([A-Z][A-Za-z0-9_]*)\s*/\s*(\d+)", part)
        if m is None:
            raise ParseError(f"bad vocabulary entry {part!r}")
        out.append(RelationSymbol(m.group(1), int(m.group(2))))
    return out


# -- rendering --------------------------------------------------------------

_TERM_SIGNS = {Inter: "&", Union: "|", Diff: "\\"}


def render_term(term: Term) -> str:
    match term:
        case RelationSymbol():
            return term.name
        case Rot(a):
            return f"rot({render_term(a)})"
        case Swp(a):
            return f"swp({render_term(a)})"
        case Neg(a):
            return "!" + render_term(a)
        case Inter(a, b) | Union(a, b) | Diff(a, b):
            return f"({render_term(a)} {_TERM_SIGNS[type(term)]} {render_term(b)})"
    raise TypeError(term)


def render_formula(phi: Formula) -> str:
    out: dict[Formula, str] = {}
    from .formulas import subformula_order

    for node in subformula_order(phi):
        match node:
            case Prop(name):
                s = name
            case Top():
                s = "true"
            case Bot():
                s = "false"
            case Not(a):
                s = "~" + out[a]
            case And(a, b):
                s = f"({out[a]} & {out[b]})"
            case Or(a, b):
                s = f"({out[a]} | {out[b]})"
            case Exists(a):
                s = "<E> " + out[a]
            case Forall(a):
                s = "[A] " + out[a]
            case Diamond(t, args):
                s = f"<{render_term(t)}>(" + ", ".join(out[a] for a in args) + ")"
            case Box(t, args):
                s = f"[{render_term(t)}](" + ", ".join(out[a] for a in args) + ")"
            case Window(sym, args):
                s = f"win_{sym.name}(" + ", ".join(out[a] for a in args) + ")"
            case _:
                raise TypeError(node)
        out[node] = s
    return out[phi]
