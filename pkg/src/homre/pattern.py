"""Homogeneous pattern ASTs: parsing, rendering, classification, type rewriting.

Patterns are immutable trees built from five node kinds.  Type strings use
the operator glyphs ``∘ | + ⋆`` internally; the ASCII letters ``c o p s``
are accepted anywhere a type string is read and produced by
:func:`type_to_ascii` for files and command-line flags.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Iterator, Union

CONCAT = "∘"
ALT = "|"
PLUS = "+"
STAR = "⋆"

_ASCII_TO_OP = {"c": CONCAT, "o": ALT, "p": PLUS, "s": STAR, "*": STAR}
_OP_TO_ASCII = {CONCAT: "c", ALT: "o", PLUS: "p", STAR: "s"}

_SPECIAL = set("()|+*\\")


class Problem(enum.Enum):
    MATCHING = "matching"
    MEMBERSHIP = "membership"

    @classmethod
    def parse(cls, name: Union[str, "Problem"]) -> "Problem":
        if isinstance(name, Problem):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown problem {name!r}") from None


@dataclass(frozen=True)
class Symbol:
    char: str

    def __post_init__(self):
        if len(self.char) != 1:
            raise ValueError(f"a symbol is a single character, got {self.char!r}")


@dataclass(frozen=True)
class Concat:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("Concat needs at least two children")


@dataclass(frozen=True)
class Alt:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 1:
            raise ValueError("Alt needs at least one child")


@dataclass(frozen=True)
class Plus:
    child: "Pattern"


@dataclass(frozen=True)
class Star:
    child: "Pattern"


Pattern = Union[Symbol, Concat, Alt, Plus, Star]


class PatternSyntaxError(ValueError):
    """Raised by :func:`parse_pattern`; ``offset`` is a byte offset into the UTF-8 source."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


def op_of(node: Pattern) -> str | None:
    if isinstance(node, Concat):
        return CONCAT
    if isinstance(node, Alt):
        return ALT
    if isinstance(node, Plus):
        return PLUS
    if isinstance(node, Star):
        return STAR
    return None


def children(node: Pattern) -> tuple:
    if isinstance(node, (Concat, Alt)):
        return node.children
    if isinstance(node, (Plus, Star)):
        return (node.child,)
    return ()


# -- convenience constructors -------------------------------------------------


def sym(c: str) -> Symbol:
    return Symbol(c)


def word(s: str) -> Pattern:
    """The concatenation of the symbols of ``s`` (a bare symbol if ``len(s) == 1``)."""
    if not s:
        raise ValueError("empty word")
    if len(s) == 1:
        return Symbol(s)
    return Concat(tuple(Symbol(c) for c in s))


def concat(items) -> Pattern:
    items = tuple(items)
    if len(items) == 1:
        return items[0]
    return Concat(items)


def alt(items) -> Alt:
    return Alt(tuple(items))


# -- parsing ------------------------------------------------------------------


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def error(self, msg: str, pos: int | None = None) -> PatternSyntaxError:
        pos = self.pos if pos is None else pos
        return PatternSyntaxError(msg, len(self.src[:pos].encode("utf-8")))

    def skip_ws(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str | None:
        self.skip_ws()
        if self.pos < len(self.src):
            return self.src[self.pos]
        return None

    def parse(self) -> Pattern:
        if self.peek() is None:
            raise self.error("empty pattern")
        node = self.parse_alt()
        if self.peek() is not None:
            raise self.error(f"unexpected {self.src[self.pos]!r}")
        return node

    def parse_alt(self, explicit: bool = False) -> Pattern:
        branches = [self.parse_branch()]
        while self.peek() == "|":
            self.pos += 1
            branches.append(self.parse_branch())
        if len(branches) == 1 and not explicit:
            return branches[0]
        return Alt(tuple(branches))

    def parse_branch(self) -> Pattern:
        items = []
        while True:
            c = self.peek()
            if c is None or c in "|)":
                break
            items.append(self.parse_postfix())
        if not items:
            raise self.error("empty alternative")
        return concat(items)

    def parse_postfix(self) -> Pattern:
        node = self.parse_atom()
        while True:
            c = self.peek()
            if c == "+":
                node = Plus(node)
            elif c == "*":
                node = Star(node)
            else:
                return node
            self.pos += 1

    def parse_atom(self) -> Pattern:
        c = self.peek()
        start = self.pos
        if c == "(":
            self.pos += 1
            explicit = False
            if self.peek() == "|":
                # "(|x)" is an explicit (possibly unary) alternative node
                self.pos += 1
                explicit = True
            node = self.parse_alt(explicit=explicit)
            if self.peek() != ")":
                raise self.error("unbalanced parenthesis", start)
            self.pos += 1
            return node
        if c == "\\":
            self.pos += 1
            if self.pos >= len(self.src):
                raise self.error("dangling escape", start)
            ch = self.src[self.pos]
            self.pos += 1
            return Symbol(ch)
        if c in ("+", "*"):
            raise self.error(f"nothing to repeat before {c!r}")
        if c == ")":
            raise self.error("unbalanced parenthesis")
        self.pos += 1
        return Symbol(c)


def parse_pattern(src: str) -> Pattern:
    """Parse pattern text.

    Juxtaposition concatenates, ``|`` separates alternatives, postfix ``+``
    and ``*`` bind to the preceding symbol or group, ``\\`` escapes, and
    whitespace is ignored.  ``(|x)`` denotes an explicit alternative node,
    which is how a unary alternative is written.
    """
    return _Parser(src).parse()


# -- rendering ----------------------------------------------------------------


def _render_symbol(c: str) -> str:
    if c in _SPECIAL or c.isspace():
        return "\\" + c
    return c


def render_pattern(p: Pattern) -> str:
    """Inverse of :func:`parse_pattern` on ASTs."""
    out: list[str] = []
    _render(p, out, top=True)
    return "".join(out)


def _render(p: Pattern, out: list, top: bool = False, in_concat: bool = False):
    if isinstance(p, Symbol):
        out.append(_render_symbol(p.char))
    elif isinstance(p, Alt):
        if len(p.children) == 1:
            out.append("(|")
            _render(p.children[0], out)
            out.append(")")
            return
        if not top:
            out.append("(")
        for k, c in enumerate(p.children):
            if k:
                out.append("|")
            _render_branch(c, out)
        if not top:
            out.append(")")
    elif isinstance(p, Concat):
        if in_concat:
            out.append("(")
        for c in p.children:
            _render_item(c, out)
        if in_concat:
            out.append(")")
    else:
        child = p.child
        if isinstance(child, (Symbol, Plus, Star)):
            _render(child, out)
        elif isinstance(child, Alt) and len(child.children) == 1:
            _render(child, out)
        else:
            out.append("(")
            _render(child, out, top=True)
            out.append(")")
        out.append("+" if isinstance(p, Plus) else "*")


def _render_branch(p: Pattern, out: list):
    # an alternative branch: a Concat is written bare, an Alt needs parentheses
    if isinstance(p, Alt):
        _render(p, out)
    else:
        _render(p, out, top=True)


def _render_item(p: Pattern, out: list):
    _render(p, out, in_concat=True)


# -- structure ----------------------------------------------------------------


def size(p: Pattern) -> int:
    """Inner nodes plus leaves."""
    total = 0
    stack = [p]
    while stack:
        node = stack.pop()
        total += 1
        stack.extend(children(node))
    return total


def depth(p: Pattern) -> int:
    best = 0
    stack = [(p, 0)]
    while stack:
        node, d = stack.pop()
        kids = children(node)
        if not kids:
            best = max(best, d)
        for c in kids:
            stack.append((c, d + 1))
    return best


def symbols(p: Pattern) -> set:
    out = set()
    stack = [p]
    while stack:
        node = stack.pop()
        if isinstance(node, Symbol):
            out.add(node.char)
        else:
            stack.extend(children(node))
    return out


def iter_nodes(p: Pattern) -> Iterator[Pattern]:
    stack = [p]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


@dataclass(frozen=True)
class Classification:
    homogeneous: bool
    type: str | None
    depth: int
    size: int

    @property
    def ascii_type(self) -> str | None:
        return None if self.type is None else type_to_ascii(self.type)


def level_ops(p: Pattern) -> list[set]:
    """Operation kinds of the inner nodes at each tree level."""
    levels: list[set] = []
    frontier = [p]
    while frontier:
        ops = {op_of(n) for n in frontier if op_of(n) is not None}
        if not ops:
            break
        levels.append(ops)
        frontier = [c for n in frontier for c in children(n)]
    return levels


def classify(p: Pattern) -> Classification:
    levels = level_ops(p)
    homogeneous = all(len(ops) == 1 for ops in levels)
    t = "".join(next(iter(ops)) for ops in levels) if homogeneous else None
    return Classification(homogeneous, t, depth(p), size(p))


def fits_type(p: Pattern, t: str) -> bool:
    """True if ``p`` is homogeneous of type ``t`` once implicit unary levels are inserted.

    Leaves may sit at any level.  A ``∘`` or ``|`` level may be skipped by a
    subtree, since a unary concatenation or alternative is the identity; this
    is what lets ``a+`` stand as an alternative of a ``|∘+`` pattern.
    """
    t = parse_type(t)
    return _fits(p, t)


def _fits(p: Pattern, t: str) -> bool:
    if isinstance(p, Symbol):
        return True
    if not t:
        return False
    op = op_of(p)
    if op == t[0] and all(_fits(c, t[1:]) for c in children(p)):
        return True
    if t[0] in (CONCAT, ALT):
        return _fits(p, t[1:])
    return False


# -- type strings -------------------------------------------------------------


def parse_type(t: str) -> str:
    """Normalise a type string given in glyphs or ASCII letters."""
    out = []
    for ch in t:
        if ch in (CONCAT, ALT, PLUS, STAR):
            out.append(ch)
        elif ch in _ASCII_TO_OP:
            out.append(_ASCII_TO_OP[ch])
        else:
            raise ValueError(f"bad type character {ch!r} in {t!r}")
    return "".join(out)


def type_to_ascii(t: str) -> str:
    return "".join(_OP_TO_ASCII[c] for c in parse_type(t))


def _rewrites(t: str, prob: Problem) -> list[str]:
    """Every type reachable from ``t`` by one simplification rule."""
    out = []
    for i in range(len(t) - 1):
        if t[i] == t[i + 1]:
            out.append(t[:i] + t[i + 1:])
    if prob is Problem.MATCHING:
        if t.startswith(PLUS):
            out.append(t[1:])
        if t.startswith(ALT + PLUS):
            out.append(ALT + t[2:])
    else:
        for i in range(len(t) - 2):
            if t[i:i + 3] == PLUS + ALT + PLUS:
                out.append(t[:i + 2] + t[i + 3:])
        k = 0
        while k < len(t) and t[k] in (PLUS, ALT):
            k += 1
        if k < len(t) and t[k] == STAR:
            out.append(t[:k] + PLUS + t[k + 1:])
    return out


def simplify_type(t: str, prob: Problem | str, rng: random.Random | None = None) -> str:
    """Apply the simplification rules until none applies.

    With ``rng`` the applicable rewrite is chosen at random at every step;
    the fixpoint does not depend on the choice.
    """
    prob = Problem.parse(prob)
    t = parse_type(t)
    while True:
        options = _rewrites(t, prob)
        if not options:
            return t
        t = rng.choice(options) if rng is not None else options[0]


def is_simplified(t: str, prob: Problem | str) -> bool:
    return not _rewrites(parse_type(t), Problem.parse(prob))
