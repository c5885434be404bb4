"""Syntax of the hybrid language H(E): AST, parser, printer and closures.

Concrete syntax::

    p, q, foo        propositions
    'i, 'home        nominals
    ~f               negation
    f & g            conjunction
    f | g            disjunction
    f -> g           implication (right associative, lowest precedence)
    [] f, <> f       box, diamond
    @'i f            satisfaction operator
    E f, A f         existential / universal modality

Unary operators bind tightest, then ``&``, then ``|``, then ``->``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Prop:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Nom:
    name: str

    def __str__(self) -> str:
        return "'" + self.name


@dataclass(frozen=True)
class Neg:
    sub: "Formula"

    def __str__(self) -> str:
        return "~" + _wrap_unary(self.sub)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return _binary(self, "&")


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return _binary(self, "|")


@dataclass(frozen=True)
class Impl:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return _binary(self, "->")


@dataclass(frozen=True)
class Dia:
    sub: "Formula"

    def __str__(self) -> str:
        return "<>" + _wrap_unary(self.sub)


@dataclass(frozen=True)
class Box:
    sub: "Formula"

    def __str__(self) -> str:
        return "[]" + _wrap_unary(self.sub)


@dataclass(frozen=True)
class At:
    nom: str
    sub: "Formula"

    def __str__(self) -> str:
        return "@'" + self.nom + " " + _wrap_unary(self.sub)


@dataclass(frozen=True)
class E:
    sub: "Formula"

    def __str__(self) -> str:
        return "E " + _wrap_unary(self.sub)


@dataclass(frozen=True)
class A:
    sub: "Formula"

    def __str__(self) -> str:
        return "A " + _wrap_unary(self.sub)


Formula = Union[Prop, Nom, Neg, And, Or, Impl, Dia, Box, At, E, A]

UNARY = (Neg, Dia, Box, At, E, A)
BINARY = (And, Or, Impl)
_PRECEDENCE = {Impl: 1, Or: 2, And: 3}


def _wrap_unary(f: Formula) -> str:
    return f"({f})" if isinstance(f, BINARY) else str(f)


def _binary(f, symbol: str) -> str:
    prec = _PRECEDENCE[type(f)]
    left, right = str(f.left), str(f.right)
    if isinstance(f.left, BINARY):
        # & and | are left associative, -> is right associative
        lp = _PRECEDENCE[type(f.left)]
        if lp < prec or (lp == prec and isinstance(f, Impl)):
            left = f"({left})"
    if isinstance(f.right, BINARY):
        rp = _PRECEDENCE[type(f.right)]
        if rp < prec or (rp == prec and not isinstance(f, Impl)):
            right = f"({right})"
    return f"{left} {symbol} {right}"


def children(f: Formula) -> tuple:
    if isinstance(f, (Prop, Nom)):
        return ()
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return (f.sub,)


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<box>\[\])|(?P<dia><>)|(?P<nom>'[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[~&|()@]))"
)
_KEYWORDS = {"E", "A"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            stripped = len(text) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unknown token {text[stripped]!r}", stripped)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "ident" and value in _KEYWORDS:
            kind = "sym"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value or kind == "end":
            if kind == "end" and value == ")":
                raise FormulaSyntaxError("unbalanced parentheses", pos)
            raise FormulaSyntaxError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "arrow":
            self.take()
            return Impl(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek()[1] == "|" and self.peek()[0] == "sym":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek()[1] == "&" and self.peek()[0] == "sym":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, val, pos = self.take()
        if kind == "sym" and val == "~":
            return Neg(self.unary())
        if kind == "box":
            return Box(self.unary())
        if kind == "dia":
            return Dia(self.unary())
        if kind == "sym" and val == "E":
            return E(self.unary())
        if kind == "sym" and val == "A":
            return A(self.unary())
        if kind == "sym" and val == "@":
            nkind, nval, npos = self.take()
            if nkind != "nom":
                raise FormulaSyntaxError("@ must be followed by a nominal", npos)
            return At(nval[1:], self.unary())
        if kind == "ident":
            return Prop(val)
        if kind == "nom":
            return Nom(val[1:])
        if kind == "sym" and val == "(":
            f = self.implication()
            self.expect(")")
            return f
        if kind == "sym" and val == ")":
            raise FormulaSyntaxError("unbalanced parentheses", pos)
        raise FormulaSyntaxError(f"unexpected {val or 'end of input'!r}", pos)


def parse(text: str) -> Formula:
    """Parse a formula written in the ASCII grammar of this module."""
    if not text or not text.strip():
        raise FormulaSyntaxError("empty formula", 0)
    p = _Parser(text)
    f = p.implication()
    kind, val, pos = p.peek()
    if kind != "end":
        if val == ")":
            raise FormulaSyntaxError("unbalanced parentheses", pos)
        raise FormulaSyntaxError(f"unexpected {val!r}", pos)
    return f


# --------------------------------------------------------------------------
# traversal and closures

def subformulas(f: Formula) -> Iterator[Formula]:
    """All subformulas of ``f``; ``@'i g`` counts ``'i`` as a subformula."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(children(g))
        if isinstance(g, At):
            stack.append(Nom(g.nom))


def subformula_closure(f: Formula) -> frozenset:
    return frozenset(subformulas(f))


def negation_closure(s: Iterable[Formula]) -> frozenset:
    s = frozenset(s)
    extra = set()
    for g in s:
        if isinstance(g, Neg):
            extra.add(g.sub)
        else:
            extra.add(Neg(g))
    return s | extra


def closure(f: Formula) -> frozenset:
    """Subformulas of ``f`` closed under single negation (ClNeg)."""
    return negation_closure(subformula_closure(f))


def props(f: Formula) -> frozenset:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Prop))


def nominals(f: Formula) -> frozenset:
    names = set()
    for g in subformulas(f):
        if isinstance(g, Nom):
            names.add(g.name)
        elif isinstance(g, At):
            names.add(g.nom)
    return frozenset(names)


def size(f: Formula) -> int:
    """Number of connectives (atoms count zero)."""
    return sum(1 for g in subformulas(f) if not isinstance(g, (Prop, Nom)))


def depth(f: Formula) -> int:
    kids = children(f)
    return 0 if not kids else 1 + max(depth(k) for k in kids)


# --------------------------------------------------------------------------
# rewriting

def eliminate_at(f: Formula) -> Formula:
    """Replace every ``@'i g`` by ``E('i & g)``, bottom up."""
    if isinstance(f, (Prop, Nom)):
        return f
    if isinstance(f, At):
        return E(And(Nom(f.nom), eliminate_at(f.sub)))
    if isinstance(f, BINARY):
        return type(f)(eliminate_at(f.left), eliminate_at(f.right))
    return type(f)(eliminate_at(f.sub))


def normalize_to_diamond(f: Formula) -> Formula:
    """Rewrite into the core {~, &, <>, E, @} keeping truth at every point.

    ``[]g`` becomes ``~<>~g``, ``A g`` becomes ``~E~g``, ``f | g`` becomes
    ``~(~f & ~g)`` and ``f -> g`` becomes ``~(f & ~g)``.
    """
    if isinstance(f, (Prop, Nom)):
        return f
    if isinstance(f, Neg):
        return Neg(normalize_to_diamond(f.sub))
    if isinstance(f, And):
        return And(normalize_to_diamond(f.left), normalize_to_diamond(f.right))
    if isinstance(f, Or):
        return Neg(And(Neg(normalize_to_diamond(f.left)), Neg(normalize_to_diamond(f.right))))
    if isinstance(f, Impl):
        return Neg(And(normalize_to_diamond(f.left), Neg(normalize_to_diamond(f.right))))
    if isinstance(f, Dia):
        return Dia(normalize_to_diamond(f.sub))
    if isinstance(f, Box):
        return Neg(Dia(Neg(normalize_to_diamond(f.sub))))
    if isinstance(f, E):
        return E(normalize_to_diamond(f.sub))
    if isinstance(f, A):
        return Neg(E(Neg(normalize_to_diamond(f.sub))))
    if isinstance(f, At):
        return At(f.nom, normalize_to_diamond(f.sub))
    raise TypeError(f"not a formula: {f!r}")


def core(f: Formula) -> Formula:
    """The @-free, diamond-primitive form used by the satisfiability game."""
    return eliminate_at(normalize_to_diamond(f))
