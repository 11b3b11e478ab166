"""Whole-instance constructions from Formula-Pair instances.

* the outer OR over pairs ``(a, b)`` for ``∘+∘`` and ``∘|∘``,
* the helper-gadget outer OR for ``∘⋆``, ``∘+|`` and ``∘|+``,
* matching-to-membership transforms for the five matching types,
* the dictionary construction for ``|+|∘`` membership.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .. import nfa
from ..formula import FormulaPairInstance, Leaf, gate_bin, gate_ids, iter_gates, leaf_count
from ..pattern import Alt, Concat, Pattern, Plus, Problem, Star, Symbol, parse_pattern, size, symbols
from ..randgen import sample_member
from .gadgets import (
    COC, COP, CPC, CPO, CS, MATCHING_TYPES, OPOC, CODE_OF, HoleA, HoleB, S, TextT,
    barred, encode_gates, fill_pattern, parse_type_code, plus_of, plus_to_alt, starred, syms, to_pattern,
)


@dataclass
class ReductionInstance:
    text: str
    pattern: Pattern
    meta: dict = field(default_factory=dict)

    @property
    def problem(self) -> Problem:
        return Problem.parse(self.meta["problem"])

    @property
    def type(self) -> str:
        return parse_type_code(self.meta["type"])


def _prepare(inst: FormulaPairInstance) -> tuple[FormulaPairInstance, bool]:
    inst.validate(nonempty=True)
    if inst.m > inst.n:
        return inst.swapped(), True
    return inst, False


def _meta(inst, kind, problem, swapped, text, pattern, seed, **extra) -> dict:
    meta = {
        "type": CODE_OF[kind], "problem": problem.value, "n": inst.n, "m": inst.m,
        "s": inst.s, "d": inst.d, "seed": seed, "swapped": int(swapped),
        "text_len": len(text), "pattern_size": size(pattern),
    }
    meta.update(extra)
    return meta


def _a(inst, i: int):
    """``a^(i)`` with the cyclic extension past ``n``."""
    return inst.A[(i - 1) % inst.n]


def _word_item(w: str) -> Pattern:
    return S(w) if len(w) == 1 else Concat(tuple(syms(w)))


# -- outer OR for ∘+∘ and ∘|∘ -------------------------------------------------


def build_matching_cpc(inst: FormulaPairInstance, kind: str = CPC, seed=None,
                       literal: bool = False) -> ReductionInstance:
    """Outer OR for ``∘+∘``/``∘|∘``.

    The pattern gets one extra group using ``b^(1)`` again: a match has to
    change its alignment inside the pair formed by the satisfying group and
    the group after it, so without a trailing group a pair whose only
    satisfying ``b`` is the last one would be missed.  ``literal=True``
    builds exactly ``m`` groups.
    """
    kind = parse_type_code(kind)
    if kind not in (CPC, COC):
        raise ValueError("this outer OR is for ∘+∘ and ∘|∘")
    inst, swapped = _prepare(inst)
    gadgets = encode_gates(inst.F, kind)
    root = gadgets[()]
    u, q = root.u, root.q
    parts = []
    for i in range(1, 3 * inst.n + 1):
        parts += ["33", u, "3", u, "3", u, "3", root.t_of(_a(inst, i)), "3", u, "3", u, "3", u, "3", u]
    text = "".join(parts)
    fix = syms(("3" + u) * 4)
    u3 = Plus(_word_item(u + "3"))
    items = list(fix)
    groups = list(inst.B) if literal else list(inst.B) + [inst.B[0]]
    for b in groups:
        items += [Plus(S("3")), u3] + syms(u) + [Plus(S("3"))] + q + [S("3")]
        items += fill_pattern(root.p, b) + [S("3"), u3] + q
    items += fix
    if kind == COC:
        items = plus_to_alt(items)
    pattern = to_pattern(items)
    return ReductionInstance(text, pattern, _meta(inst, kind, Problem.MATCHING, swapped, text, pattern, seed,
                                                  u_len=len(u), pattern_groups=len(groups)))


# -- helper-gadget outer OR ---------------------------------------------------


def helper_gadget(kind: str, u: str) -> list:
    kind = parse_type_code(kind)
    if kind == CS:
        return [S("4"), Star(S("4")), Star(S("3"))] + starred(u) + [Star(S("3")), S("4"), Star(S("4"))]
    if kind == CPO:
        a34 = Plus(Alt((S("3"), S("4"))))
        return [Plus(S("4")), a34, Plus(Alt(tuple(syms("0124")))), a34, Plus(S("4"))]
    if kind == COP:
        a34 = Alt((S("3"), S("4")))
        four = Alt((S("4"), Plus(S("4"))))
        return [four, a34] + barred(u, "4") + [a34, four]
    raise ValueError(f"no helper gadget for {kind!r}")


ENVELOPE = parse_pattern("4+(3|4)*(0|1|2|4)*(3|4)*4+")


@dataclass
class HelperCheck:
    ell: int
    short_ok: bool  # 4^ℓ ∈ L(H)
    long_ok: bool  # 4^ℓ 3 u 3 4^ℓ ∈ L(H)
    envelope_ok: bool  # sampled members of L(H) lie in the envelope

    @property
    def ok(self) -> bool:
        return self.short_ok and self.long_ok and self.envelope_ok


def check_helper(kind: str, u: str, samples: int = 20, seed: int = 0) -> HelperCheck:
    H = to_pattern(helper_gadget(kind, u))
    ell = len(u) + 4
    Hn = nfa.compile_nfa(H)
    short_ok = nfa.nfa_member("4" * ell, Hn)
    long_ok = nfa.nfa_member("4" * ell + "3" + u + "3" + "4" * ell, Hn)
    rng = random.Random(seed)
    env = nfa.compile_nfa(ENVELOPE)
    envelope_ok = all(nfa.nfa_member(sample_member(H, rng), env) for _ in range(samples))
    return HelperCheck(ell, short_ok, long_ok, envelope_ok)


class HelperValidationError(RuntimeError):
    pass


def build_matching_generic(inst: FormulaPairInstance, kind: str, seed=None, validate: bool = True) -> ReductionInstance:
    kind = parse_type_code(kind)
    if kind not in (CS, CPO, COP):
        raise ValueError("the helper-gadget outer OR is for ∘⋆, ∘+| and ∘|+")
    inst, swapped = _prepare(inst)
    gadgets = encode_gates(inst.F, kind)
    root = gadgets[()]
    u, q = root.u, root.q
    ell = len(u) + 4
    if validate:
        hc = check_helper(kind, u)
        if not hc.ok:
            raise HelperValidationError(f"helper gadget for {kind} fails its checks: {hc}")
    fours = "4" * ell
    tail = "3" + fours + "3" + u + "3" + fours
    parts = []
    for i in range(1, 3 * inst.n + 1):
        parts += ["333", u, tail, "33", root.t_of(_a(inst, i)), tail]
    text = "".join(parts)
    H = helper_gadget(kind, u)
    p3 = plus_of(kind, "3")
    items = [S("3")]
    for b in inst.B:
        items += [S("3")] + p3 + q + [S("3")] + H + p3 + fill_pattern(root.p, b) + [S("3")] + H
        items += [S("3")] + p3 + q + syms(tail)
    items += syms("33") + q + syms(tail + "333")
    pattern = to_pattern(items)
    return ReductionInstance(text, pattern, _meta(inst, kind, Problem.MATCHING, swapped, text, pattern, seed,
                                                  u_len=len(u), ell=ell))


def build_matching(inst: FormulaPairInstance, kind: str, seed=None) -> ReductionInstance:
    kind = parse_type_code(kind)
    if kind in (CPC, COC):
        return build_matching_cpc(inst, kind, seed=seed)
    if kind in (CS, CPO, COP):
        return build_matching_generic(inst, kind, seed=seed)
    raise ValueError(f"{kind!r} is not a matching reduction type")


# -- matching to membership ---------------------------------------------------


def _items_of(p: Pattern) -> list:
    return list(p.children) if isinstance(p, Concat) else [p]


def _fresh(used, prefer: str = "0123456789abcdefghijklmnopqrstuvwxyz") -> str:
    for c in prefer:
        if c not in used:
            return c
    k = 0x100
    while chr(k) in used:
        k += 1
    return chr(k)


def _map_symbols(node: Pattern, f) -> list:
    """Items obtained by replacing every symbol with the word ``f(σ)``, flattening concatenations."""
    if isinstance(node, Symbol):
        return syms(f(node.char))
    if isinstance(node, Concat):
        out = []
        for c in node.children:
            out += _map_symbols(c, f)
        return out
    if isinstance(node, Alt):
        return [Alt(tuple(to_pattern(_map_symbols(c, f)) for c in node.children))]
    inner = to_pattern(_map_symbols(node.child, f))
    return [Plus(inner) if isinstance(node, Plus) else Star(inner)]


def to_membership(t: str, p: Pattern, kind: str) -> tuple[str, Pattern]:
    """``(t′, p′)`` with ``t ∈ Σ*L(p)Σ*`` iff ``t′ ∈ L(p′)``, keeping the pattern type."""
    kind = parse_type_code(kind)
    items = _items_of(p)
    sigma = sorted(set(t) | symbols(p))
    n = len(t)
    if kind == CS:
        return t, to_pattern(starred(t) + items + starred(t))
    if kind == CPC:
        if len(sigma) == 1:
            sigma = sorted(sigma + [_fresh(sigma)])
        R = "".join(sigma)
        code = {c: R[:k] + c + R[k:] for k, c in enumerate(sigma)}

        def f(c):
            return code[c]

        ft = "".join(f(c) for c in t)
        t2 = R * (n + 1) + ft + R * (n + 1)
        U = [Plus(S(c)) for c in sigma]
        fp = []
        for x in items:
            fp += _map_symbols(x, f)
        Rp = Plus(_word_item(R))
        return t2, to_pattern([Rp] + U * n + fp + U * n + [Rp])
    if kind == COC:
        if n < 1:
            raise ValueError("the ∘|∘ transform needs a non-empty text")
        a = _fresh(sigma)
        logL = math.ceil(math.log2(n)) if n > 1 else 0
        L = 1 << logL
        t2 = a * (3 * L - 1) + t + a * (3 * L - 1)
        block = [Alt((_word_item(a * (1 << i)), _word_item(a * (1 << (i + 1))))) for i in range(logL + 1)]
        any_sym = Alt(tuple(syms("".join(sigma) + a)))
        return t2, to_pattern(block + [any_sym] * L + items + [any_sym] * L + block)
    if kind == CPO:
        x = sigma[0]
        sp = Plus(Alt(tuple(syms("".join(sigma)))))
        return x + t + x, to_pattern([sp] + items + [sp])
    if kind == COP:
        x = sigma[0]
        pad = x * (n + 1)
        edge = Alt((S(x), Plus(S(x))))
        any_sym = Alt(tuple(syms("".join(sigma))))
        return pad + t + pad, to_pattern([edge] + [any_sym] * n + items + [any_sym] * n + [edge])
    raise ValueError(f"no membership transform for {kind!r}")


def build_membership_from_matching(inst: FormulaPairInstance, kind: str, seed=None) -> ReductionInstance:
    ri = build_matching(inst, kind, seed=seed)
    t2, p2 = to_membership(ri.text, ri.pattern, kind)
    meta = dict(ri.meta)
    meta.update(problem=Problem.MEMBERSHIP.value, text_len=len(t2), pattern_size=size(p2),
                matching_text_len=ri.meta["text_len"])
    return ReductionInstance(t2, p2, meta)


# -- |+|∘ dictionaries --------------------------------------------------------


@dataclass
class DictGadget:
    t: TextT
    DM: list  # TextT words (may hold HoleB)
    DS: list  # str words


class _Paths:
    def __init__(self, F):
        self.ids = gate_ids(F)
        self.s = leaf_count(F)

    def h(self, g: tuple, k: int) -> str:
        """``h^g_k``: the k-th gate on the root path of ``g`` tagged with ``g``."""
        return "2" + gate_bin(self.ids[g[:k]], self.s) + gate_bin(self.ids[g], self.s) + "2"

    def fwd(self, g: tuple, lo: int, hi: int) -> str:
        return "".join(self.h(g, k) for k in range(lo, hi + 1))

    def rev(self, g: tuple, lo: int, hi: int) -> str:
        return "".join(self.h(g, k) for k in range(hi, lo - 1, -1))


def encode_opoc(F) -> dict[tuple, DictGadget]:
    P = _Paths(F)
    out: dict[tuple, DictGadget] = {}
    for g, node in reversed(list(iter_gates(F))):
        d = len(g)
        head, tail = P.fwd(g, 0, d), P.rev(g, 0, d)
        if isinstance(node, Leaf):
            if node.side == "a":
                t = TextT(head, HoleA(node.index), tail)
                DM = [TextT(head + "1" + tail)]
            else:
                t = TextT(head + "1" + tail)
                DM = [TextT(head, HoleB(node.index), tail)]
            DS = [P.fwd(g, i, d) + x + P.rev(g, i, d) for i in range(1, d + 1) for x in "01"]
            out[g] = DictGadget(t, DM, DS)
            continue
        g1, g2 = g + (0,), g + (1,)
        t1, t2 = out[g1].t, out[g2].t
        if node.op == "and":
            t = TextT(head, t1, t2, tail)
            DM = [TextT(head), TextT(tail)]
            DS = []
            for i in range(1, d + 1):
                DS += [P.fwd(g, i, d) + P.fwd(g1, 0, i - 1),
                       P.rev(g1, 0, i - 1) + P.fwd(g2, 0, i - 1),
                       P.rev(g2, 0, i - 1) + P.rev(g, i, d)]
        else:
            hd = P.h(g, d)
            t = TextT(head, t1, hd, t2, tail)
            DM = [TextT(w) for w in (
                head, hd + P.fwd(g2, 0, d), P.rev(g2, 0, d) + tail,
                head + P.fwd(g1, 0, d), P.rev(g1, 0, d) + hd, tail)]
            DS = []
            for i in range(1, d + 1):
                DS += [P.fwd(g, i, d) + P.fwd(g1, 0, i - 1),
                       P.rev(g1, 0, i - 1) + hd + P.fwd(g2, 0, i - 1),
                       P.rev(g2, 0, i - 1) + P.rev(g, i, d)]
        out[g] = DictGadget(t, DM, DS)
    return out


def subtree_dictionary(gadgets: dict, g: tuple, b) -> list[str]:
    """``D_g(b)``: the words of every gate in the subtree of ``g``, deduplicated, in first-seen order."""
    seen: dict[str, None] = {}
    for path in sorted(gadgets, key=lambda p: (len(p), p)):
        if path[:len(g)] != g:
            continue
        gd = gadgets[path]
        for w in gd.DM:
            seen.setdefault(w.fill(b), None)
        for w in gd.DS:
            seen.setdefault(w, None)
    return [w for w in seen if w]


def blow_up(w: str, u: str = "456") -> str:
    return "".join(u + c for c in w)


STATE_WORDS_HEAD = ("5604", "5614", "5624", "5634", "563")
STATE_WORDS_TAIL = ("456345", "6045", "6145", "6245", "6345")


def build_membership_opoc(inst: FormulaPairInstance, seed=None) -> ReductionInstance:
    inst, swapped = _prepare(inst)
    gadgets = encode_opoc(inst.F)
    root = gadgets[()]
    text = "563" + "".join(blow_up(root.t.fill(a) + "3") for a in inst.A) + "45"
    alts = []
    max_word = 0
    for b in inst.B:
        D = subtree_dictionary(gadgets, (), b)
        max_word = max([max_word] + [len(w) for w in D])
        words = list(dict.fromkeys(list(STATE_WORDS_HEAD) + [blow_up(w) for w in D] + list(STATE_WORDS_TAIL)))
        alts.append(Plus(Alt(tuple(_word_item(w) for w in words))))
    pattern = Alt(tuple(alts))
    return ReductionInstance(text, pattern, _meta(inst, OPOC, Problem.MEMBERSHIP, swapped, text, pattern, seed,
                                                  root_text_len=len(root.t), max_word_len=max_word))


# -- dispatch -----------------------------------------------------------------


def build_reduction(inst: FormulaPairInstance, kind: str, problem, seed=None) -> ReductionInstance:
    kind = parse_type_code(kind)
    problem = Problem.parse(problem)
    if kind == OPOC:
        if problem is not Problem.MEMBERSHIP:
            raise ValueError("|+|∘ is a membership construction")
        return build_membership_opoc(inst, seed=seed)
    if kind not in MATCHING_TYPES:
        raise ValueError(f"unknown type {kind!r}")
    if problem is Problem.MATCHING:
        return build_matching(inst, kind, seed=seed)
    return build_membership_from_matching(inst, kind, seed=seed)
