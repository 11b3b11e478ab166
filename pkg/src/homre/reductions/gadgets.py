"""Per-gate gadgets for the five concatenation-rooted matching types.

Texts are :class:`TextT` templates (strings with ``HoleA`` slots for bits of
the left half-assignment); patterns are lists of top-level concatenation
items, where an item is a pattern node or a ``HoleB`` slot for a bit of the
right half-assignment.  ``u`` and ``q`` never contain holes.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..formula import Leaf, Formula, gate_bin, gate_ids, iter_gates, leaf_count
from ..pattern import Alt, Concat, Pattern, Plus, Star, Symbol

CPC = "∘+∘"
COC = "∘|∘"
CS = "∘⋆"
CPO = "∘+|"
COP = "∘|+"
OPOC = "|+|∘"

MATCHING_TYPES = (CPC, COC, CS, CPO, COP)
ALL_TYPES = MATCHING_TYPES + (OPOC,)

TYPE_CODES = {"cpc": CPC, "coc": COC, "cs": CS, "cpo": CPO, "cop": COP, "opoc": OPOC}
CODE_OF = {v: k for k, v in TYPE_CODES.items()}


def parse_type_code(code: str) -> str:
    if code in TYPE_CODES:
        return TYPE_CODES[code]
    if code in CODE_OF:
        return code
    raise ValueError(f"unknown reduction type {code!r}; expected one of {', '.join(TYPE_CODES)}")


@dataclass(frozen=True)
class HoleA:
    index: int


@dataclass(frozen=True)
class HoleB:
    index: int


_SYMS: dict[str, Symbol] = {}


def S(c: str) -> Symbol:
    s = _SYMS.get(c)
    if s is None:
        s = _SYMS[c] = Symbol(c)
    return s


def syms(w: str) -> list:
    return [S(c) for c in w]


# -- text templates -----------------------------------------------------------


class TextT:
    """A text with ``HoleA`` slots; adjacent literal pieces are merged."""

    __slots__ = ("parts",)

    def __init__(self, *pieces):
        parts: list = []
        for p in pieces:
            if isinstance(p, TextT):
                items = p.parts
            else:
                items = (p,)
            for x in items:
                if isinstance(x, str):
                    if not x:
                        continue
                    if parts and isinstance(parts[-1], str):
                        parts[-1] = parts[-1] + x
                        continue
                parts.append(x)
        self.parts = tuple(parts)

    def __add__(self, other) -> "TextT":
        return TextT(self, other)

    def __radd__(self, other) -> "TextT":
        return TextT(other, self)

    def __len__(self):
        return sum(len(x) if isinstance(x, str) else 1 for x in self.parts)

    def holes(self) -> list:
        return [x for x in self.parts if not isinstance(x, str)]

    def fill(self, a) -> str:
        out = []
        for x in self.parts:
            if isinstance(x, str):
                out.append(x)
            else:
                out.append(str(a[x.index - 1]))
        return "".join(out)

    def __repr__(self):
        return f"TextT({self.parts!r})"


def fill_pattern(items, b) -> list:
    return [S(str(b[x.index - 1])) if isinstance(x, HoleB) else x for x in items]


def to_pattern(items) -> Pattern:
    items = tuple(items)
    if any(isinstance(x, (HoleA, HoleB)) for x in items):
        raise ValueError("pattern template still has holes")
    if len(items) == 1:
        return items[0]
    return Concat(items)


# -- per-type building blocks -------------------------------------------------


def plus_of(kind: str, c: str) -> list:
    """The items standing for ``c+`` in a pattern of type ``kind``."""
    if kind in (CPC, CPO, COC):
        return [Plus(S(c))]
    if kind == CS:
        return [S(c), Star(S(c))]
    if kind == COP:
        return [Alt((S(c), Plus(S(c))))]
    raise ValueError(kind)


def starred(v: str) -> list:
    return [Star(S(c)) for c in v]


def barred(v: str, tau: str) -> list:
    return [Alt((S(c),)) if c == tau else Alt((S(c), S(tau))) for c in v]


def _repeat_items(x: Pattern, k: int) -> Pattern:
    if isinstance(x, Concat):
        return Concat(x.children * k)
    return x if k == 1 else Concat((x,) * k)


def plus_to_alt(items) -> list:
    """Rewrite every ``α+`` into ``(α | αα | ααα)``."""
    out = []
    for x in items:
        if isinstance(x, Plus):
            a = x.child
            out.append(Alt((a, _repeat_items(a, 2), _repeat_items(a, 3))))
        else:
            out.append(x)
    return out


@dataclass
class GateGadget:
    t: TextT
    u: str
    q: list
    p: list

    def t_of(self, a) -> str:
        return self.t.fill(a)

    def p_of(self, b) -> Pattern:
        return to_pattern(fill_pattern(self.p, b))

    def q_pattern(self) -> Pattern:
        return to_pattern(self.q)


def separator(g: int, s: int) -> str:
    return "2" + gate_bin(g, s) + "2"


def _input(kind: str, leaf: Leaf) -> GateGadget:
    base = CPC if kind == COC else kind
    zp, op = plus_of(base, "0"), plus_of(base, "1")
    if leaf.side == "a":
        t = TextT("0", HoleA(leaf.index), "1")
        p = zp + [S("1")] + op
    else:
        t = TextT("011")
        p = zp + [HoleB(leaf.index)] + op
    return GateGadget(t, "0011", zp + op, p)


def _and(G: str, g1: GateGadget, g2: GateGadget) -> GateGadget:
    sG = syms(G)
    return GateGadget(TextT(g1.t, G, g2.t), g1.u + G + g2.u, g1.q + sG + g2.q, g1.p + sG + g2.p)


def _or(kind: str, G: str, g1: GateGadget, g2: GateGadget) -> GateGadget:
    u1, u2 = g1.u, g2.u
    sG = syms(G)
    U = u1 + G + G + u2
    if kind in (CPC, COC):
        t = TextT(U, G, U, G, g1.t, G + G, g2.t, G, U, G, U)
        u = G.join([U] * 5)
        q = syms(U + G + U + G) + g1.q + syms(G + G) + g2.q + syms(G + U + G + U)
        p = ([Plus(Concat(tuple(syms(U + G))))] + g1.q + syms(G + G) + g2.p + sG
             + g1.p + syms(G + G) + g2.q + [Plus(Concat(tuple(syms(G + U))))])
    elif kind == CS:
        t = TextT(U, G, U, G, g1.t, G + G, g2.t, G, U, G, U)
        u = G.join([U] * 5)
        q = syms(U + G + U + G) + g1.q + syms(G + G) + g2.q + syms(G + U + G + U)
        block = starred(u1) + starred(G) + starred(G) + starred(u2)
        p = (block + starred(G) + syms(U + G) + g1.q + syms(G + G) + g2.p + sG
             + g1.p + syms(G + G) + g2.q + syms(G + U) + starred(G) + block)
    elif kind == CPO:
        t = TextT("0", G, g1.t, G + G + u2 + G + u1 + G + G, g2.t, G, "1")
        u = "0" + G + U + G + U + G + "1"
        q = [S("0")] + sG + g1.q + syms(G + G + u2 + G + u1 + G + G) + g2.q + sG + [S("1")]
        any3 = Plus(Alt((S("0"), S("1"), S("2"))))
        p = [any3] + sG + g1.p + syms(G + G) + g2.p + sG + [any3]
    elif kind == COP:
        left = U + G
        right = G + U
        pre = "0" * (len(left) + 1)
        post = "1" * (len(right) + 1)
        t = TextT(pre + U + G, g1.t, G + G, g2.t, G + U + post)
        u = pre + U + G + U + G + U + post
        q = syms(pre + U + G) + g1.q + syms(G + G) + g2.q + syms(G + U + post)
        p = (plus_of(COP, "0") + barred(left, "0") + g1.q + syms(G + G) + g2.p + sG
             + g1.p + syms(G + G) + g2.q + barred(right, "1") + plus_of(COP, "1"))
    else:
        raise ValueError(f"unsupported gadget type {kind!r}")
    return GateGadget(t, u, q, p)


def encode_gates(F: Formula, kind: str) -> dict[tuple, GateGadget]:
    """Gadgets for every gate of ``F`` keyed by path (root is ``()``), built bottom-up."""
    kind = parse_type_code(kind)
    if kind not in MATCHING_TYPES:
        raise ValueError(f"gate gadgets exist for matching types only, not {kind!r}")
    ids = gate_ids(F)
    s = leaf_count(F)
    nodes = list(iter_gates(F))
    out: dict[tuple, GateGadget] = {}
    base = CPC if kind == COC else kind
    for path, node in reversed(nodes):  # children before parents
        if isinstance(node, Leaf):
            out[path] = _input(kind, node)
            continue
        G = separator(ids[path], s)
        g1, g2 = out[path + (0,)], out[path + (1,)]
        out[path] = _and(G, g1, g2) if node.op == "and" else _or(base, G, g1, g2)
    if kind == COC:
        for gd in out.values():
            gd.q = plus_to_alt(gd.q)
            gd.p = plus_to_alt(gd.p)
    return out


def instantiate(gadgets: dict, root: tuple, a, b) -> tuple[str, str, Pattern, Pattern]:
    """``(t_r(a), u_r, q_r, p_r(b))`` for the gadget at ``root``."""
    g = gadgets[root]
    for h in g.t.holes():
        if h.index > len(a):
            raise ValueError(f"no value for a_{h.index}")
    for h in g.p:
        if isinstance(h, HoleB) and h.index > len(b):
            raise ValueError(f"no value for b_{h.index}")
    return g.t_of(a), g.u, g.q_pattern(), g.p_of(b)
