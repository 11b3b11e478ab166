"""Symbol changes of texts and the maximum over a pattern's language.

A pattern profile keeps, for every pair ``(first, last)`` of symbols, the
largest number of changes of a non-empty word in the language starting with
``first`` and ending with ``last``.  That table composes exactly under
concatenation and alternation.  Repetition is bounded only when the repeated
language uses a single symbol; anything else is reported as unbounded.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..pattern import Alt, Concat, Plus, Star, Symbol
from .gadgets import HoleB, S


def symbol_changes(t: str) -> int:
    """Number of positions ``i`` with ``t[i] != t[i+1]``."""
    return sum(1 for x, y in zip(t, t[1:]) if x != y)


@dataclass(frozen=True)
class ChangeProfile:
    max_changes: int | None  # None means unbounded
    first: frozenset
    last: frozenset
    nullable: bool

    @property
    def unbounded(self) -> bool:
        return self.max_changes is None


_UNBOUNDED = object()


def _table(node) -> tuple[dict, bool] | object:
    if isinstance(node, Symbol):
        return {(node.char, node.char): 0}, False
    if isinstance(node, Concat):
        table: dict = {}
        nullable = True
        for child in node.children:
            if isinstance(child, Symbol):
                # fast path for the long literal stretches of gadget patterns
                c = child.char
                new = {}
                for (f, last), v in table.items():
                    w = v + (last != c)
                    if new.get((f, c), -1) < w:
                        new[(f, c)] = w
                if nullable:
                    new[(c, c)] = max(new.get((c, c), -1), 0)
                table, nullable = new, False
                continue
            sub = _table(child)
            if sub is _UNBOUNDED:
                return _UNBOUNDED
            ct, cn = sub
            new = {}

            def put(key, v):
                if new.get(key, -1) < v:
                    new[key] = v

            for (f1, l1), v1 in table.items():
                for (f2, l2), v2 in ct.items():
                    put((f1, l2), v1 + v2 + (l1 != f2))
            if cn:
                for k, v in table.items():
                    put(k, v)
            if nullable:
                for k, v in ct.items():
                    put(k, v)
            table, nullable = new, nullable and cn
        return table, nullable
    if isinstance(node, Alt):
        table = {}
        nullable = False
        for child in node.children:
            sub = _table(child)
            if sub is _UNBOUNDED:
                return _UNBOUNDED
            ct, cn = sub
            for k, v in ct.items():
                if table.get(k, -1) < v:
                    table[k] = v
            nullable = nullable or cn
        return table, nullable
    if isinstance(node, (Plus, Star)):
        sub = _table(node.child)
        if sub is _UNBOUNDED:
            return _UNBOUNDED
        ct, cn = sub
        letters = {f for f, _ in ct} | {last for _, last in ct}
        if len(letters) > 1 or any(v for v in ct.values()):
            return _UNBOUNDED
        return dict(ct), cn or isinstance(node, Star)
    raise TypeError(f"not a pattern node: {node!r}")


def pattern_changes(p) -> ChangeProfile:
    """Profile of ``p``; ``HoleB`` items (in template lists) stand for ``0|1``."""
    if isinstance(p, list):
        items = [Alt((S("0"), S("1"))) if isinstance(x, HoleB) else x for x in p]
        p = items[0] if len(items) == 1 else Concat(tuple(items))
    sub = _table(p)
    if sub is _UNBOUNDED:
        return ChangeProfile(None, frozenset(), frozenset(), False)
    table, nullable = sub
    mx = max(table.values(), default=0)
    return ChangeProfile(mx, frozenset(f for f, _ in table), frozenset(last for _, last in table), nullable)


@dataclass
class ChangeClaim:
    path: tuple
    a_u: int
    a_t: tuple  # symbol changes of t_g(a) over the assignments tried
    a_q: int | None
    a_p: int | None

    @property
    def ok(self) -> bool:
        return (self.a_q is not None and self.a_p is not None
                and all(x == self.a_u for x in self.a_t) and self.a_q == self.a_u
                and 2 * self.a_u > self.a_p)


def check_change_claim(gadgets: dict, assignments) -> list[ChangeClaim]:
    """Per gate: ``A(u) = A(t(a)) = A(q)`` and ``2 A(u) > A(p)``; ``p`` is taken over every ``b``."""
    out = []
    for path, g in gadgets.items():
        a_t = tuple(symbol_changes(g.t_of(a)) for a in assignments) if g.t.holes() else (symbol_changes(g.t_of(())),)
        out.append(ChangeClaim(path, symbol_changes(g.u), a_t,
                               pattern_changes(g.q).max_changes, pattern_changes(g.p).max_changes))
    return out
