"""Hash-consed immutable AST nodes.

Every node is interned on construction, so structural equality coincides
with identity and hashing is O(1).  The reductions build formulas with tens
of thousands of shared subtrees; plain frozen dataclasses would rehash and
recompare whole subtrees on every dictionary lookup.
"""

from __future__ import annotations

import weakref

_POOL: "weakref.WeakValueDictionary[tuple, Node]" = weakref.WeakValueDictionary()


class Node:
    __slots__ = ("_args", "_hash", "__weakref__")
    _fields: tuple[str, ...] = ()

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if "_fields" in cls.__dict__:
            cls.__match_args__ = cls._fields
            for i, name in enumerate(cls._fields):
                setattr(cls, name, property(lambda self, i=i: self._args[i]))

    def __new__(cls, *args):
        if len(args) != len(cls._fields):
            raise TypeError(f"{cls.__name__} takes {len(cls._fields)} arguments")
        args = cls._validate(*args)
        key = (cls, args)
        node = _POOL.get(key)
        if node is None:
            node = object.__new__(cls)
            node._args = args
            node._hash = hash(key)
            _POOL[key] = node
        return node

    @classmethod
    def _validate(cls, *args) -> tuple:
        return args

    def __hash__(self) -> int:
        return self._hash

    def __reduce__(self):
        return (type(self), self._args)

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __repr__(self) -> str:
        inner = ", ".join(repr(a) for a in self._args)
        return f"{type(self).__name__}({inner})"

    @property
    def children(self) -> tuple:
        return tuple(a for a in self._args if isinstance(a, Node))
