"""Kripke models over polyadic vocabularies, their text format and list encoding."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

from .errors import ArityError, ParseError, VocabularyError
from .terms import RelationSymbol

Tuple = tuple[int, ...]


@dataclass(frozen=True)
class KripkeModel:
    """Worlds are ``0 .. worlds-1``; relations keep their declaration order."""

    worlds: int
    relations: Mapping[RelationSymbol, frozenset] = field(default_factory=dict)
    valuation: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.worlds, int) or self.worlds < 1:
            raise ValueError("a model needs at least one world")
        rels = {}
        names = set()
        for sym, tuples in self.relations.items():
            if sym.name in names:
                raise VocabularyError(f"relation {sym.name} declared twice")
            names.add(sym.name)
            tuples = frozenset(tuple(t) for t in tuples)
            for t in tuples:
                if len(t) != sym.arity:
                    raise ArityError(f"tuple {t} in {sym.name}/{sym.arity}")
                if any(not 0 <= x < self.worlds for x in t):
                    raise ValueError(f"tuple {t} in {sym.name} leaves the domain")
            rels[sym] = tuples
        vals = {}
        for name, ws in self.valuation.items():
            ws = frozenset(ws)
            if any(not 0 <= x < self.worlds for x in ws):
                raise ValueError(f"valuation of {name} leaves the domain")
            vals[name] = ws
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "valuation", vals)

    @classmethod
    def trusted(cls, worlds: int, relations: dict, valuation: dict) -> "KripkeModel":
        """Skip validation; the caller guarantees frozensets of in-range tuples."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "worlds", worlds)
        object.__setattr__(obj, "relations", relations)
        object.__setattr__(obj, "valuation", valuation)
        return obj

    @property
    def symbols(self) -> tuple[RelationSymbol, ...]:
        return tuple(self.relations)

    def relation(self, sym: RelationSymbol) -> frozenset:
        try:
            return self.relations[sym]
        except KeyError:
            raise VocabularyError(f"relation {sym.name}/{sym.arity} is not interpreted in the model") from None

    def prop(self, name: str) -> frozenset:
        return self.valuation.get(name, frozenset())

    @property
    def domain(self) -> range:
        return range(self.worlds)

    def __eq__(self, other):
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return (
            self.worlds == other.worlds
            and self.relations == other.relations
            and {k: v for k, v in self.valuation.items() if v} == {k: v for k, v in other.valuation.items() if v}
        )

    def __hash__(self):
        return hash((self.worlds, frozenset(self.relations.items())))


def full_tuples(n: int, k: int):
    return product(range(n), repeat=k)


# -- text format ------------------------------------------------------------

_TUPLE = re.compile(r"\(([^()]*)\)")


def parse_model(text: str) -> KripkeModel:
    """Parse the line format::

        worlds 2
        rel R/2 : (0,1) (1,1)
        prop q : 1

    Lines starting with ``#`` are comments.
    """
    worlds = None
    rels: dict[RelationSymbol, set] = {}
    vals: dict[str, set] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        col = raw.index(line[0]) + 1
        head, _, rest = line.partition(" ")
        if head == "worlds":
            if worlds is not None:
                raise ParseError("worlds declared twice", col, lineno)
            try:
                worlds = int(rest)
            except ValueError:
                raise ParseError(f"bad world count {rest!r}", col, lineno) from None
            if worlds < 1:
                raise ParseError("a model needs at least one world", col, lineno)
            continue
        if worlds is None:
            raise ParseError("'worlds N' must come first", col, lineno)
        decl, sep, body = rest.partition(":")
        if head == "rel":
            m = re.fullmatch(r"\s*([A-Za-z][A-Za-z0-9_]*)\s*/\s*(\d+)\s*", decl)
            if not sep or m is None:
                raise ParseError("expected 'rel NAME/ARITY : (i,...) ...'", col, lineno)
            try:
                sym = RelationSymbol(m.group(1), int(m.group(2)))
            except (VocabularyError, ArityError) as e:
                raise ParseError(str(e), col, lineno) from None
            if any(s.name == sym.name for s in rels):
                raise ParseError(f"relation {sym.name} declared twice", col, lineno)
            tuples = set()
            body_col = raw.index(":") + 2
            leftover = _TUPLE.sub("", body).strip()
            if leftover:
                raise ParseError(f"unexpected {leftover!r} in tuple list", body_col, lineno)
            for tm in _TUPLE.finditer(body):
                tcol = body_col + tm.start()
                try:
                    t = tuple(int(x) for x in tm.group(1).split(","))
                except ValueError:
                    raise ParseError(f"bad tuple ({tm.group(1)})", tcol, lineno) from None
                if len(t) != sym.arity:
                    raise ParseError(f"tuple ({tm.group(1)}) has arity {len(t)}, expected {sym.arity}", tcol, lineno)
                if any(not 0 <= x < worlds for x in t):
                    raise ParseError(f"tuple ({tm.group(1)}) leaves the domain 0..{worlds - 1}", tcol, lineno)
                tuples.add(t)
            rels[sym] = tuples
        elif head == "prop":
            name = decl.strip()
            if not sep or not re.fullmatch(r"[a-z_][A-Za-z0-9_]*", name):
                raise ParseError("expected 'prop name : i i ...'", col, lineno)
            if name in vals:
                raise ParseError(f"proposition {name} declared twice", col, lineno)
            ws = set()
            for tok in body.split():
                if not tok.isdigit() or int(tok) >= worlds:
                    raise ParseError(f"bad world {tok!r} for {name}", col, lineno)
                ws.add(int(tok))
            vals[name] = ws
        else:
            raise ParseError(f"unknown declaration {head!r}", col, lineno)
    if worlds is None:
        raise ParseError("missing 'worlds N'", 1, 1)
    return KripkeModel(worlds, rels, vals)


def render_model(model: KripkeModel) -> str:
    lines = [f"worlds {model.worlds}"]
    for sym, tuples in model.relations.items():
        body = " ".join("(" + ",".join(map(str, t)) + ")" for t in sorted(tuples))
        lines.append(f"rel {sym.name}/{sym.arity} : {body}".rstrip())
    for name in sorted(model.valuation):
        body = " ".join(map(str, sorted(model.valuation[name])))
        lines.append(f"prop {name} : {body}".rstrip())
    return "\n".join(lines) + "\n"


# -- list encoding ----------------------------------------------------------


@dataclass(frozen=True)
class EncodedModel:
    data: bytes
    size: int


def encoding_width(worlds: int) -> int:
    """Bits per world index: ceil(log2 |W|), at least 1."""
    return max(1, (worlds - 1).bit_length())


def encode_list(model: KripkeModel) -> EncodedModel:
    width = encoding_width(model.worlds)
    parts = ["1" * model.worlds]
    size = model.worlds
    for sym, tuples in model.relations.items():
        enc = ["".join(format(x, f"0{width}b") for x in t) for t in sorted(tuples)]
        parts.append(">" + "#".join(enc))
        size += len(tuples) * sym.arity * width
    return EncodedModel("".join(parts).encode("ascii"), size)


# -- generation -------------------------------------------------------------


def random_model(
    seed: int,
    worlds: int,
    vocab: Iterable[RelationSymbol],
    density: float = 0.5,
    props: int | Iterable[str] = 0,
) -> KripkeModel:
    """Each tuple is kept with probability ``density``; each proposition holds with probability 1/2.

    ``props`` is a count (names ``p0, p1, ...``) or an explicit list of names.
    """
    if worlds < 1:
        raise ValueError("worlds must be >= 1")
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    rng = random.Random(seed)
    names = [f"p{i}" for i in range(props)] if isinstance(props, int) else list(props)
    rels = {}
    for sym in vocab:
        rels[sym] = {t for t in full_tuples(worlds, sym.arity) if rng.random() < density}
    vals = {name: {w for w in range(worlds) if rng.random() < 0.5} for name in names}
    return KripkeModel(worlds, rels, vals)


def sparse_model(seed: int, worlds: int, vocab: Iterable[RelationSymbol], edges_per_world: int, props: Iterable[str] = ()) -> KripkeModel:
    """About ``edges_per_world`` random tuples per world and relation, without touching all of W^k."""
    rng = random.Random(seed)
    rels = {}
    for sym in vocab:
        tuples = set()
        for _ in range(worlds * edges_per_world):
            tuples.add(tuple(rng.randrange(worlds) for _ in range(sym.arity)))
        rels[sym] = tuples
    vals = {name: {w for w in range(worlds) if rng.random() < 0.5} for name in props}
    return KripkeModel(worlds, rels, vals)
