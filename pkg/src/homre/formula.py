"""Monotone formulas over two halves of variables, and Formula-Pair instances.

A formula is a binary tree of ``and``/``or`` gates whose leaves read one bit
of the left half-assignment (side ``"a"``) or the right one (side ``"b"``).
Each variable appears exactly once, so side ``"a"`` leaves carry indices
``1..k_a`` and side ``"b"`` leaves ``1..k_b``.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from typing import Iterator, Union


@dataclass(frozen=True)
class Leaf:
    side: str  # "a" or "b"
    index: int  # 1-based

    def __post_init__(self):
        if self.side not in ("a", "b"):
            raise ValueError(f"leaf side must be 'a' or 'b', got {self.side!r}")
        if self.index < 1:
            raise ValueError("leaf indices are 1-based")


@dataclass(frozen=True)
class Gate:
    op: str  # "and" or "or"
    left: "Formula"
    right: "Formula"

    def __post_init__(self):
        if self.op not in ("and", "or"):
            raise ValueError(f"gate op must be 'and' or 'or', got {self.op!r}")


Formula = Union[Leaf, Gate]


def And(left, right) -> Gate:
    return Gate("and", left, right)


def Or(left, right) -> Gate:
    return Gate("or", left, right)


# -- structure ----------------------------------------------------------------


def iter_gates(F: Formula, path: tuple = ()) -> Iterator[tuple[tuple, Formula]]:
    """``(path, node)`` for every node in preorder; a path is a tuple of 0/1 child choices."""
    stack = [(path, F)]
    while stack:
        p, node = stack.pop()
        yield p, node
        if isinstance(node, Gate):
            stack.append((p + (1,), node.right))
            stack.append((p + (0,), node.left))


def node_at(F: Formula, path: tuple) -> Formula:
    for step in path:
        F = F.right if step else F.left
    return F


def leaves(F: Formula) -> list[Leaf]:
    return [n for _, n in iter_gates(F) if isinstance(n, Leaf)]


def leaf_count(F: Formula) -> int:
    return len(leaves(F))


def formula_depth(F: Formula) -> int:
    return max(len(p) for p, _ in iter_gates(F))


def arity(F: Formula) -> tuple[int, int]:
    ka = sum(1 for leaf in leaves(F) if leaf.side == "a")
    return ka, leaf_count(F) - ka


def check_formula(F: Formula) -> None:
    """Every side's indices must be exactly ``1..k`` with no repeats."""
    for side in "ab":
        idx = sorted(leaf.index for leaf in leaves(F) if leaf.side == side)
        if idx != list(range(1, len(idx) + 1)):
            raise ValueError(f"side {side!r} leaves must use indices 1..k once each, got {idx}")


def gate_ids(F: Formula) -> dict[tuple, int]:
    """Preorder numbering of all nodes, onto ``1..2s-1``, keyed by path."""
    return {p: k + 1 for k, (p, _) in enumerate(iter_gates(F))}


def bin_width(s: int) -> int:
    return int(math.floor(math.log2(s))) + 2


def gate_bin(g: int, s: int) -> str:
    """Fixed-width binary of gate id ``g`` over ``{0,1}``."""
    w = bin_width(s)
    if g >= 1 << w:
        raise ValueError(f"gate id {g} does not fit in {w} bits")
    return format(g, f"0{w}b")


def swap_sides(F: Formula) -> Formula:
    if isinstance(F, Leaf):
        return Leaf("b" if F.side == "a" else "a", F.index)
    return Gate(F.op, swap_sides(F.left), swap_sides(F.right))


# -- evaluation ---------------------------------------------------------------


def _bit(v, k: int) -> bool:
    x = v[k - 1]
    return x in (1, True, "1")


def evaluate(F: Formula, a, b) -> bool:
    """Value of ``F`` on half-assignments ``a`` and ``b`` (bit strings or 0/1 sequences)."""
    ka, kb = arity(F)
    if len(a) != ka or len(b) != kb:
        raise ValueError(f"arity mismatch: formula needs ({ka}, {kb}) bits, got ({len(a)}, {len(b)})")
    return _eval(F, a, b)


def _eval(F, a, b) -> bool:
    if isinstance(F, Leaf):
        return _bit(a if F.side == "a" else b, F.index)
    if F.op == "and":
        return _eval(F.left, a, b) and _eval(F.right, a, b)
    return _eval(F.left, a, b) or _eval(F.right, a, b)


@dataclass(frozen=True)
class FormulaPairInstance:
    F: Formula
    A: tuple  # bit strings, each of length arity(F)[0]
    B: tuple

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(self.A))
        object.__setattr__(self, "B", tuple(self.B))

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def m(self) -> int:
        return len(self.B)

    @property
    def s(self) -> int:
        return leaf_count(self.F)

    @property
    def d(self) -> int:
        return formula_depth(self.F)

    def validate(self, nonempty: bool = True) -> None:
        check_formula(self.F)
        ka, kb = arity(self.F)
        for name, side, k in (("A", self.A, ka), ("B", self.B, kb)):
            if nonempty and not side:
                raise ValueError(f"set {name} is empty")
            for v in side:
                if len(v) != k or set(v) - {"0", "1"}:
                    raise ValueError(f"bad half-assignment {v!r} in {name}: need {k} bits")

    def swapped(self) -> "FormulaPairInstance":
        return FormulaPairInstance(swap_sides(self.F), self.B, self.A)


def brute_force_pair(inst: FormulaPairInstance) -> tuple[int, int] | None:
    """Lexicographically first 1-based ``(k, l)`` with ``F(A_k, B_l)`` true."""
    for k, a in enumerate(inst.A, 1):
        for l, b in enumerate(inst.B, 1):
            if evaluate(inst.F, a, b):
                return k, l
    return None


# -- random instances ---------------------------------------------------------


def random_formula(s: int, depth_cap: int, rng: random.Random) -> Formula:
    if s < 1:
        raise ValueError("a formula needs at least one leaf")
    if s > 1 << depth_cap:
        raise ValueError(f"{s} leaves do not fit in depth {depth_cap}")
    counters = {"a": 0, "b": 0}
    order = iter(range(s))

    def build(k: int, cap: int) -> Formula:
        if k == 1:
            side = "a" if next(order) % 2 == 0 else "b"
            counters[side] += 1
            return Leaf(side, counters[side])
        half = 1 << (cap - 1)
        left_k = rng.randint(max(1, k - half), min(k - 1, half))
        op = rng.choice(("and", "or"))
        left = build(left_k, cap - 1)
        right = build(k - left_k, cap - 1)
        return Gate(op, left, right)

    return build(s, depth_cap)


def random_instance(s: int, depth_cap: int, n: int, m: int, seed: int) -> FormulaPairInstance:
    """A reproducible random instance: random shape within ``depth_cap``, random bits."""
    rng = random.Random(seed)
    F = random_formula(s, depth_cap, rng)
    ka, kb = arity(F)

    def bits(k):
        return "".join(rng.choice("01") for _ in range(k))

    return FormulaPairInstance(F, [bits(ka) for _ in range(n)], [bits(kb) for _ in range(m)])


# -- text formats -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(\(|\)|and\b|or\b|[ab][0-9]+|\S)")


class FormulaSyntaxError(ValueError):
    pass


def parse_formula(text: str) -> Formula:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:
            break
        tokens.append(mt.group(1))
        pos = mt.end()
    k = 0

    def take():
        nonlocal k
        if k >= len(tokens):
            raise FormulaSyntaxError("unexpected end of formula")
        k += 1
        return tokens[k - 1]

    def node():
        tok = take()
        if tok == "(":
            op = take()
            if op not in ("and", "or"):
                raise FormulaSyntaxError(f"expected 'and' or 'or', got {op!r}")
            left, right = node(), node()
            if take() != ")":
                raise FormulaSyntaxError("expected ')'")
            return Gate(op, left, right)
        if re.fullmatch(r"[ab][0-9]+", tok) and int(tok[1:]) >= 1:
            return Leaf(tok[0], int(tok[1:]))
        raise FormulaSyntaxError(f"unexpected token {tok!r}")

    F = node()
    if k != len(tokens):
        raise FormulaSyntaxError(f"trailing input after formula: {tokens[k]!r}")
    return F


def render_formula(F: Formula) -> str:
    if isinstance(F, Leaf):
        return f"{F.side}{F.index}"
    return f"({F.op} {render_formula(F.left)} {render_formula(F.right)})"


def dump_instance(inst: FormulaPairInstance) -> str:
    lines = [f"F {render_formula(inst.F)}"]
    lines += [f"A {a}".rstrip() for a in inst.A]
    lines += [f"B {b}".rstrip() for b in inst.B]
    return "\n".join(lines) + "\n"


def load_instance(text: str) -> FormulaPairInstance:
    F = None
    A, B = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tag, _, rest = line.partition(" ")
        rest = rest.strip()
        if tag == "F":
            F = parse_formula(rest)
        elif tag == "A":
            A.append(rest)
        elif tag == "B":
            B.append(rest)
        else:
            raise ValueError(f"line {lineno}: unknown record {tag!r}")
    if F is None:
        raise ValueError("instance has no F line")
    return FormulaPairInstance(F, A, B)


def read_instance(path) -> FormulaPairInstance:
    with open(path, encoding="utf-8") as fh:
        return load_instance(fh.read())


def write_instance(path, inst: FormulaPairInstance) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_instance(inst))
