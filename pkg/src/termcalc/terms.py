"""Terms over an arbitrary arity signature.

A term is a finite tree whose nodes carry functional symbols.  The fully
parenthesized word form and the tree determine each other uniquely, so the
parser never backtracks.  Words follow the grammar

    term := const | var | unop "(" term ")" | "(" term binop term ")"
          | naryop "(" term {"," term} ")"

Variables are written ``x`` followed by a decimal index (``x1``, ``x12``);
whitespace between tokens is insignificant.  Symbols may be several
characters long and are matched greedily.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Pattern


class TermError(ValueError):
    pass


class NotATerm(TermError):
    """The word is not the serialization of any term."""

    def __init__(self, message: str, pos: int | None = None):
        super().__init__(message if pos is None else f"{message} (at {pos})")
        self.pos = pos


class UnknownSymbol(NotATerm):
    """A letter outside the signature's alphabet."""


class InvalidPosition(TermError):
    pass


class MissingArgument(TermError):
    pass


@dataclass(frozen=True, slots=True)
class Term:
    pass


@dataclass(frozen=True, slots=True)
class Const(Term):
    symbol: str


@dataclass(frozen=True, slots=True)
class Var(Term):
    index: int


@dataclass(frozen=True, slots=True)
class Unary(Term):
    symbol: str
    child: Term


@dataclass(frozen=True, slots=True)
class Binary(Term):
    symbol: str
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Nary(Term):
    symbol: str
    children: tuple[Term, ...]


Position = tuple[int, ...]

_VAR_RE = re.compile(r"x([0-9]+)")
_PUNCT = {"(", ")", ","}


@dataclass(frozen=True)
class Signature:
    """Arity map plus lexical extras: alias spellings and, optionally, a
    pattern for a family of parameterized nullary constants (``c{...}``)."""

    arity: Mapping[str, int]
    aliases: Mapping[str, str] = field(default_factory=dict)
    constant_pattern: Pattern[str] | None = None
    canonical_constant: Callable[[str], str] | None = None
    _lexicon: tuple[tuple[str, str], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        words = [(s, s) for s in self.arity] + list(self.aliases.items())
        words.sort(key=lambda kv: -len(kv[0]))
        object.__setattr__(self, "_lexicon", tuple(words))

    def arity_of(self, symbol: str) -> int:
        if symbol in self.arity:
            return self.arity[symbol]
        if self.constant_pattern is not None and self.constant_pattern.fullmatch(symbol):
            return 0
        raise UnknownSymbol(f"unknown symbol {symbol!r}")


def tokenize(word: str, sig: Signature) -> list[tuple[str, str, int]]:
    """Split a word into (kind, text, offset) tokens over V, F and punctuation."""
    out = []
    i, n = 0, len(word)
    while i < n:
        ch = word[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            out.append((ch, ch, i))
            i += 1
            continue
        m = _VAR_RE.match(word, i)
        if m:
            out.append(("var", m.group(0), i))
            i = m.end()
            continue
        if sig.constant_pattern is not None:
            m = sig.constant_pattern.match(word, i)
            if m:
                text = m.group(0)
                if sig.canonical_constant is not None:
                    text = sig.canonical_constant(text)
                out.append(("sym", text, i))
                i = m.end()
                continue
        for spelled, canonical in sig._lexicon:
            if word.startswith(spelled, i):
                out.append(("sym", canonical, i))
                i += len(spelled)
                break
        else:
            raise UnknownSymbol(f"unknown symbol {ch!r}", i)
    return out


def parse(word: str, sig: Signature) -> Term:
    """Parse a fully parenthesized word into the unique term it denotes."""
    toks = tokenize(word, sig)
    term, i = _parse_at(toks, 0, sig)
    if i != len(toks):
        raise NotATerm("trailing input after a complete term", toks[i][2])
    return term


def _expect(toks, i, kind):
    if i >= len(toks):
        raise NotATerm(f"unexpected end of input, expected {kind!r}")
    if toks[i][0] != kind:
        raise NotATerm(f"expected {kind!r}, found {toks[i][1]!r}", toks[i][2])
    return i + 1


def _parse_at(toks, i, sig) -> tuple[Term, int]:
    if i >= len(toks):
        raise NotATerm("unexpected end of input")
    kind, text, pos = toks[i]
    if kind == "var":
        return Var(int(text[1:])), i + 1
    if kind == "(":
        left, i = _parse_at(toks, i + 1, sig)
        if i >= len(toks) or toks[i][0] != "sym" or sig.arity_of(toks[i][1]) != 2:
            raise NotATerm("expected a binary symbol", toks[i][2] if i < len(toks) else None)
        symbol = toks[i][1]
        right, i = _parse_at(toks, i + 1, sig)
        i = _expect(toks, i, ")")
        return Binary(symbol, left, right), i
    if kind == "sym":
        k = sig.arity_of(text)
        if k == 0:
            return Const(text), i + 1
        if k == 1:
            i = _expect(toks, i + 1, "(")
            child, i = _parse_at(toks, i, sig)
            i = _expect(toks, i, ")")
            return Unary(text, child), i
        if k == 2:
            raise NotATerm(f"binary symbol {text!r} outside a parenthesized pair", pos)
        i = _expect(toks, i + 1, "(")
        args = []
        for j in range(k):
            # a separating comma is accepted but not required before the
            # last argument, matching both spellings of the k-ary form
            if j > 0 and i < len(toks) and toks[i][0] == ",":
                i += 1
            arg, i = _parse_at(toks, i, sig)
            args.append(arg)
        i = _expect(toks, i, ")")
        return Nary(text, tuple(args)), i
    raise NotATerm(f"unexpected {text!r}", pos)


def serialize(t: Term) -> str:
    if isinstance(t, Const):
        return t.symbol
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, Unary):
        return f"{t.symbol}({serialize(t.child)})"
    if isinstance(t, Binary):
        return f"({serialize(t.left)}{t.symbol}{serialize(t.right)})"
    if isinstance(t, Nary):
        return t.symbol + "(" + ",".join(serialize(c) for c in t.children) + ")"
    raise TypeError(f"not a term: {t!r}")


def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, Unary):
        return (t.child,)
    if isinstance(t, Binary):
        return (t.left, t.right)
    if isinstance(t, Nary):
        return t.children
    return ()


def with_children(t: Term, kids: tuple[Term, ...]) -> Term:
    if isinstance(t, Unary):
        return Unary(t.symbol, kids[0])
    if isinstance(t, Binary):
        return Binary(t.symbol, kids[0], kids[1])
    if isinstance(t, Nary):
        return Nary(t.symbol, kids)
    return t


def subterms(t: Term, prefix: Position = ()) -> Iterator[tuple[Position, Term]]:
    """All (position, subterm) pairs in preorder; preorder equals the
    lexicographic order of positions."""
    stack = [(prefix, t)]
    while stack:
        pos, node = stack.pop()
        yield pos, node
        kids = children(node)
        for i in range(len(kids), 0, -1):
            stack.append((pos + (i,), kids[i - 1]))


def subterm_at(t: Term, pos: Position) -> Term:
    node = t
    for i in pos:
        kids = children(node)
        if not 1 <= i <= len(kids):
            raise InvalidPosition(f"no child {i} at {pos}")
        node = kids[i - 1]
    return node


def replace_at(t: Term, pos: Position, u: Term) -> Term:
    spine = []
    node = t
    for i in pos:
        kids = children(node)
        if not 1 <= i <= len(kids):
            raise InvalidPosition(f"no child {i}")
        spine.append((node, kids, i))
        node = kids[i - 1]
    out = u
    for node, kids, i in reversed(spine):
        new_kids = list(kids)
        new_kids[i - 1] = out
        out = with_children(node, tuple(new_kids))
    return out


def substitute_var(t: Term, index: int, u: Term) -> Term:
    """Replace every occurrence of x_index in t with u, simultaneously."""
    if isinstance(t, Var):
        return u if t.index == index else t
    kids = children(t)
    if not kids:
        return t
    return with_children(t, tuple(substitute_var(c, index, u) for c in kids))


def depth(t: Term) -> int:
    kids = children(t)
    if not kids:
        return 0
    return 1 + max(depth(c) for c in kids)


def variables_of(t: Term) -> frozenset[int]:
    out = set()
    for _, node in subterms(t):
        if isinstance(node, Var):
            out.add(node.index)
    return frozenset(out)


def validate(t: Term, sig: Signature) -> None:
    """Check node shapes against the signature; raises NotATerm on mismatch."""
    for _, node in subterms(t):
        if isinstance(node, Var):
            if node.index < 1:
                raise NotATerm(f"variable index {node.index} < 1")
        elif isinstance(node, Const):
            if sig.arity_of(node.symbol) != 0:
                raise NotATerm(f"{node.symbol!r} is not nullary")
        elif isinstance(node, Unary):
            if sig.arity_of(node.symbol) != 1:
                raise NotATerm(f"{node.symbol!r} is not unary")
        elif isinstance(node, Binary):
            if sig.arity_of(node.symbol) != 2:
                raise NotATerm(f"{node.symbol!r} is not binary")
        elif isinstance(node, Nary):
            if sig.arity_of(node.symbol) != len(node.children) or len(node.children) < 3:
                raise NotATerm(f"{node.symbol!r} arity mismatch")
        else:
            raise NotATerm(f"not a term node: {node!r}")
