"""Faster matching and membership for the easy homogeneous types.

Two families are handled.  Alternatives that are concatenations of symbol
sets (types ``|∘|`` and ``+|∘|``) go through the interval set ``M``;
alternatives that are concatenations of symbols and single-symbol pluses
(types ``|∘+`` and ``+|∘+``) go through the flagged interval set ``M′``.
Patterns are split at a threshold ``f``: large ones are matched by the NFA
baseline, small ones are batched into orthogonal-vector queries whose
candidates are then checked exactly, so every answer is exact.
"""

from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass

from . import nfa as _nfa
from .ov import CHI_C, BitVec, ChiEncoder, batch_ov, concat_all
from .pattern import Alt, Concat, Pattern, Plus, Problem, Star, Symbol, alt, concat, parse_pattern


class UnsupportedType(ValueError):
    """The pattern is outside the types the fast engine handles; use the baseline."""


def default_threshold(n: int, m: int) -> int:
    k = max(1, min(n, m))
    return max(2, int(2 ** (math.sqrt(math.log2(k)) / 3)))


# -- run-length encodings -----------------------------------------------------


class RunKind(enum.Enum):
    EXACT = "="
    AT_LEAST = "≥"


@dataclass(frozen=True)
class Run:
    symbol: str
    length: int
    kind: RunKind = RunKind.EXACT

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("run length must be positive")

    @property
    def at_least(self) -> bool:
        return self.kind is RunKind.AT_LEAST

    def accepts(self, symbol: str, length: int) -> bool:
        """Does this pattern run match a text run ``(symbol, length)``?"""
        if symbol != self.symbol:
            return False
        return length >= self.length if self.at_least else length == self.length

    def __str__(self):
        return f"({self.symbol},{self.kind.value}{self.length})"


def rle(t: str) -> list[Run]:
    runs: list[Run] = []
    k = 0
    while k < len(t):
        e = k
        while e + 1 < len(t) and t[e + 1] == t[k]:
            e += 1
        runs.append(Run(t[k], e - k + 1))
        k = e + 1
    return runs


def expand(runs) -> str:
    return "".join(r.symbol * r.length for r in runs)


def _plus_items(p: Pattern) -> list[tuple[str, bool]]:
    """``(symbol, plussed)`` items of a concatenation of symbols and symbol pluses."""
    out = []
    for node in _flat_concat(p):
        node = _unwrap_unary(node)
        if isinstance(node, Symbol):
            out.append((node.char, False))
        elif isinstance(node, Plus):
            c = node.child
            while isinstance(c, Plus) or (isinstance(c, Alt) and len(c.children) == 1):
                c = c.child if isinstance(c, Plus) else c.children[0]
            if not isinstance(c, Symbol):
                raise UnsupportedType("a Plus must wrap a single symbol")
            out.append((c.char, True))
        else:
            raise UnsupportedType(f"unexpected {type(node).__name__} in a ∘+ alternative")
    return out


def rle_pattern(p) -> list[Run]:
    """Runs of a ``∘+`` pattern; literal and plussed copies of a symbol merge."""
    if isinstance(p, str):
        p = parse_pattern(p)
    items = _plus_items(p) if not isinstance(p, list) else p
    runs: list[Run] = []
    for c, plussed in items:
        if runs and runs[-1].symbol == c:
            last = runs[-1]
            kind = RunKind.AT_LEAST if (plussed or last.at_least) else RunKind.EXACT
            runs[-1] = Run(c, last.length + 1, kind)
        else:
            runs.append(Run(c, 1, RunKind.AT_LEAST if plussed else RunKind.EXACT))
    return runs


def runs_to_pattern(runs) -> Pattern:
    items: list[Pattern] = []
    for r in runs:
        if r.at_least:
            items.extend(Symbol(r.symbol) for _ in range(r.length - 1))
            items.append(Plus(Symbol(r.symbol)))
        else:
            items.extend(Symbol(r.symbol) for _ in range(r.length))
    return concat(items)


class _TextRuns:
    """Run structure of a text: run index and bounds of every 1-based position."""

    def __init__(self, t: str):
        self.t = t
        self.runs = rle(t)
        self.start: list[int] = []  # 1-based first position of each run
        self.run_of = [0] * (len(t) + 2)
        pos = 1
        for k, r in enumerate(self.runs):
            self.start.append(pos)
            for q in range(pos, pos + r.length):
                self.run_of[q] = k
            pos += r.length

    def end(self, k: int) -> int:
        return self.start[k] + self.runs[k].length - 1


# -- pattern decomposition ----------------------------------------------------


def _unwrap_unary(node):
    while isinstance(node, Alt) and len(node.children) == 1:
        node = node.children[0]
    return node


def _flat_concat(p):
    p = _unwrap_unary(p)
    if isinstance(p, Concat):
        for c in p.children:
            yield from _flat_concat(c)
    else:
        yield p


def _flat_alt(p):
    if isinstance(p, Alt):
        for c in p.children:
            yield from _flat_alt(c)
    else:
        yield p


def _symbol_set(node) -> frozenset | None:
    node = _unwrap_unary(node)
    if isinstance(node, Symbol):
        return frozenset(node.char)
    if isinstance(node, Alt):
        out = set()
        for c in _flat_alt(node):
            if not isinstance(c, Symbol):
                return None
            out.add(c.char)
        return frozenset(out)
    return None


@dataclass
class Decomposition:
    outer_plus: bool
    kind: str  # "or" (symbol sets), "plus" (symbol pluses) or "word"
    alts: list  # per alternative: list of frozensets, or list of (symbol, plussed)

    def type_label(self, prob: Problem) -> str:
        head = "+" if (self.outer_plus and prob is Problem.MEMBERSHIP) else ""
        tail = {"or": "|", "plus": "+", "word": ""}[self.kind]
        return f"{head}|∘{tail}"


def decompose(p: Pattern | str, prob: Problem | str = Problem.MEMBERSHIP) -> Decomposition:
    """Split ``p`` into an optional outer Plus and a list of simple alternatives.

    Raises :class:`UnsupportedType` when ``p`` does not have one of the
    supported shapes.
    """
    if isinstance(p, str):
        p = parse_pattern(p)
    prob = Problem.parse(prob)
    outer = False
    p = _unwrap_unary(p)
    while isinstance(p, Plus):
        outer = True
        p = _unwrap_unary(p.child)
    if isinstance(p, Star) or any(isinstance(n, Star) for n in _walk(p)):
        raise UnsupportedType("patterns with a Kleene Star are not handled by the fast engine")
    set_alts, plus_alts = [], []
    has_set = has_plus = False
    for a in _flat_alt(p):
        sets = []
        ok = True
        for node in _flat_concat(a):
            s = _symbol_set(node)
            if s is None:
                ok = False
                break
            sets.append(s)
        if ok:
            set_alts.append(sets)
            plus_alts.append([(next(iter(s)), False) for s in sets] if all(len(s) == 1 for s in sets) else None)
            has_set = has_set or any(len(s) > 1 for s in sets)
            continue
        items = _plus_items(a)
        has_plus = True
        set_alts.append(None)
        plus_alts.append(items)
    if has_set and has_plus:
        raise UnsupportedType("alternatives mix symbol sets and Kleene Plus")
    if has_plus:
        return Decomposition(outer, "plus", plus_alts)
    return Decomposition(outer, "or" if has_set else "word", set_alts)


def _walk(p):
    stack = [p]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, (Concat, Alt)):
            stack.extend(n.children)
        elif isinstance(n, (Plus, Star)):
            stack.append(n.child)


def _as_alts(alts):
    return [parse_pattern(a) if isinstance(a, str) else a for a in alts]


# -- the interval set M -------------------------------------------------------


def _or_alt_items(a) -> list[frozenset]:
    if isinstance(a, list):
        return a
    sets = []
    for node in _flat_concat(a):
        s = _symbol_set(node)
        if s is None:
            raise UnsupportedType("alternative is not a concatenation of symbol sets")
        sets.append(s)
    return sets


def _sets_pattern(sets) -> Pattern:
    return concat([Symbol(next(iter(s))) if len(s) == 1 else alt(Symbol(c) for c in sorted(s)) for s in sets])


def compute_match_set(t: str, alts, f: int | None = None, seed: int = 0,
                      stats: dict | None = None, chi_c: float = CHI_C) -> set[tuple[int, int]]:
    """All ``(i, j)`` such that ``t[i..j]`` (1-based, closed) matches some alternative."""
    n = len(t)
    items = [_or_alt_items(a) for a in _as_alts(alts)]
    if n == 0 or not items:
        return set()
    sigma = set(t)
    m = sum(sum(len(s) for s in sets) for sets in items)
    f = f or default_threshold(n, m)
    out: set[tuple[int, int]] = set()
    groups: dict[int, list] = defaultdict(list)
    for sets in items:
        if len(sets) > len(sigma) * n or len(sets) > n:
            continue
        sets = [s & sigma for s in sets]
        if any(not s for s in sets):
            continue  # a position no text symbol can fill
        if len(sets) > f or max(len(s) for s in sets) > f:
            _count(stats, "large")
            out |= _nfa.match_intervals(t, _sets_pattern(sets))
        else:
            groups[len(sets)].append(sets)
    enc = None
    for j, group in sorted(groups.items()):
        if len(group) == 1:
            _count(stats, "singleton")
            out |= _nfa.match_intervals(t, _sets_pattern(group[0]))
            continue
        _count(stats, "batched")
        if enc is None:
            enc = ChiEncoder(sigma, f, seed=seed, c=chi_c)
        pad = [enc.symbol(enc.fresh)] * (f - j)
        sym_vecs = [enc.symbol(c) for c in t]
        T = [concat_all(sym_vecs[i:i + j] + pad) for i in range(n - j + 1)]
        P = [~concat_all([enc.set(s) for s in sets] + pad) for sets in group]
        cand = batch_ov(T, P)
        for i, hit in enumerate(cand):
            if not hit:
                continue
            if any(all(t[i + q] in sets[q] for q in range(j)) for sets in group):
                out.add((i + 1, i + j))
            else:
                _count(stats, "false_positive")
    return out


def _count(stats, key):
    if stats is not None:
        stats[key] = stats.get(key, 0) + 1


def _reach(n_nodes: int, adj, src: int, dst: int) -> bool:
    seen = bytearray(n_nodes)
    seen[src] = 1
    stack = [src]
    while stack:
        v = stack.pop()
        if v == dst:
            return True
        for w in adj[v]:
            if not seen[w]:
                seen[w] = 1
                stack.append(w)
    return False


def member_or(t: str, p, prob: Problem | str = Problem.MEMBERSHIP, f: int | None = None,
              seed: int = 0, chi_c: float = CHI_C) -> bool:
    """Solve an instance of type ``+|∘|`` / ``|∘|`` through the interval set ``M``."""
    prob = Problem.parse(prob)
    d = p if isinstance(p, Decomposition) else decompose(p, prob)
    if d.kind == "plus":
        raise UnsupportedType("alternatives carry Kleene Plus; use member_plus")
    M = compute_match_set(t, d.alts, f=f, seed=seed, chi_c=chi_c)
    if prob is Problem.MATCHING:
        return bool(M)
    n = len(t)
    if not d.outer_plus:
        return (1, n) in M
    adj = [[] for _ in range(n + 1)]
    for i, j in M:
        adj[i - 1].append(j)
    return n > 0 and _reach(n + 1, adj, 0, n)


# -- the flagged interval set M′ ----------------------------------------------


@dataclass
class _PlusAlt:
    runs: list  # stripped runs: first and last are exact
    flag_first: int
    flag_last: int

    @property
    def length(self) -> int:
        return sum(r.length for r in self.runs)

    def matches(self, runs) -> bool:
        return len(runs) == len(self.runs) and all(pr.accepts(tr.symbol, tr.length) for pr, tr in zip(self.runs, runs))


def _strip(runs) -> _PlusAlt:
    ff, fe = int(runs[0].at_least), int(runs[-1].at_least)
    out = list(runs)
    out[0] = Run(out[0].symbol, out[0].length)
    out[-1] = Run(out[-1].symbol, out[-1].length)
    return _PlusAlt(out, ff, fe)


def _plus_alt_runs(a) -> list[Run]:
    if isinstance(a, list):
        return rle_pattern(a)
    return rle_pattern(_plus_items(a))


def _run_code_bits(sigma) -> tuple[dict, int]:
    letters = sorted(sigma)
    nb = max(1, math.ceil(math.log2(len(letters)))) if len(letters) > 1 else 1
    return {c: k for k, c in enumerate(letters)}, nb


def _bin(code: int, nb: int) -> list[int]:
    return [(code >> (nb - 1 - k)) & 1 for k in range(nb)]


def encode_text_run(code: int, r: int, nb: int, F3: int) -> BitVec:
    if not 1 <= r <= F3:
        raise ValueError(f"run length {r} outside 1..{F3}")
    b = _bin(code, nb)
    bits = b + [1 - x for x in b] + [0] * r + [1] * (F3 - r) + [1] * r + [0] * (F3 - r)
    return BitVec.from_bits(bits)


def encode_pattern_run(code: int, run: Run, nb: int, F3: int) -> BitVec:
    r = run.length
    if r > F3:
        raise ValueError(f"run length {r} outside 1..{F3}")
    b = _bin(code, nb)
    head = [1 - x for x in b] + b + [1] * r + [0] * (F3 - r)
    tail = [0] * F3 if run.at_least else [0] * r + [1] * (F3 - r)
    return BitVec.from_bits(head + tail)


def run_vec_orthogonal(x: tuple[str, int], y: Run, f: int) -> bool:
    """Decide whether text run ``x`` matches pattern run ``y`` through their bit encodings."""
    F3 = f ** 3
    if x[1] >= F3 or y.length >= F3:
        raise ValueError(f"run lengths must be below f^3 = {F3}")
    codes, nb = _run_code_bits({x[0], y.symbol})
    a = encode_text_run(codes[x[0]], x[1], nb, F3)
    b = encode_pattern_run(codes[y.symbol], y, nb, F3)
    return a.dot(b) == 0


def _emit_baseline(t, pa: _PlusAlt, out):
    for i, j in _nfa.match_intervals(t, runs_to_pattern(pa.runs)):
        out.add((pa.flag_first, i, j, pa.flag_last))


def _long_run_scan(tr: _TextRuns, pa: _PlusAlt, F3: int, out):
    """Align each middle pattern run with each text run of length at least ``F3``."""
    runs = tr.runs
    r = len(pa.runs)
    for k, text_run in enumerate(runs):
        if text_run.length < F3:
            continue
        for q in range(1, r - 1):
            if not pa.runs[q].accepts(text_run.symbol, text_run.length):
                continue
            k0, k1 = k - q, k + (r - 1 - q)
            if k0 < 0 or k1 >= len(runs):
                continue
            if not all(pa.runs[x].accepts(runs[k0 + x].symbol, runs[k0 + x].length) for x in range(1, r - 1)):
                continue
            first, last = pa.runs[0], pa.runs[-1]
            if runs[k0].symbol != first.symbol or runs[k0].length < first.length:
                continue
            if runs[k1].symbol != last.symbol or runs[k1].length < last.length:
                continue
            i = tr.end(k0) - first.length + 1
            j = tr.start[k1] + last.length - 1
            out.add((pa.flag_first, i, j, pa.flag_last))


def _short_substrings(tr: _TextRuns, nruns: int, F3: int):
    """Substrings with exactly ``nruns`` runs, every run (within it) shorter than ``F3``.

    Yields ``(i, j, runs)`` with 1-based closed bounds.
    """
    t = tr.t
    n = len(t)
    for i in range(1, n + 1):
        k = tr.run_of[i]
        first_len = tr.end(k) - i + 1
        if nruns == 1:
            for ln in range(1, min(first_len, F3 - 1) + 1):
                yield i, i + ln - 1, [Run(t[i - 1], ln)]
            continue
        if first_len >= F3 or k + nruns - 1 >= len(tr.runs):
            continue
        mids = tr.runs[k + 1:k + nruns - 1]
        if any(m.length >= F3 for m in mids):
            continue
        lastk = k + nruns - 1
        head = [Run(t[i - 1], first_len)] + mids
        for ln in range(1, min(tr.runs[lastk].length, F3 - 1) + 1):
            yield i, tr.start[lastk] + ln - 1, head + [Run(tr.runs[lastk].symbol, ln)]


def compute_flagged_set(t: str, alts, f: int | None = None, prune: bool = True,
                        stats: dict | None = None) -> set[tuple[int, int, int, int]]:
    """Flagged intervals ``(f, i, j, e)`` for ``∘+`` alternatives.

    ``t[i..j]`` matches an alternative whose first and last runs have their
    Plus removed; ``f``/``e`` record whether those runs were plussed, so the
    match may extend left/right within the text runs of ``t_i``/``t_j``.
    With ``prune`` the tuples that are reachable from a smaller tuple of the
    same flag class by in-run extension are dropped.
    """
    n = len(t)
    run_lists = [_plus_alt_runs(a) for a in _as_alts(alts)]
    if n == 0 or not run_lists:
        return set()
    sigma = set(t)
    m = sum(sum(r.length for r in runs) for runs in run_lists)
    f = f or default_threshold(n, m)
    F3 = f ** 3
    tr = _TextRuns(t)
    out: set = set()
    groups: dict[tuple, list] = defaultdict(list)
    for runs in run_lists:
        pa = _strip(runs)
        if pa.length > n or any(r.symbol not in sigma for r in pa.runs):
            continue
        if pa.length > f:
            _count(stats, "large")
            _emit_baseline(t, pa, out)
        else:
            groups[(len(pa.runs), pa.flag_first, pa.flag_last)].append(pa)
    codes, nb = _run_code_bits(sigma)
    for (nruns, ff, fe), group in sorted(groups.items()):
        if len(group) == 1:
            _count(stats, "singleton")
            _emit_baseline(t, group[0], out)
            continue
        _count(stats, "batched")
        for pa in group:
            _long_run_scan(tr, pa, F3, out)
        subs = list(_short_substrings(tr, nruns, F3))
        if not subs:
            continue
        T = [concat_all(encode_text_run(codes[r.symbol], r.length, nb, F3) for r in runs) for _, _, runs in subs]
        P = [concat_all(encode_pattern_run(codes[r.symbol], r, nb, F3) for r in pa.runs) for pa in group]
        for (i, j, runs), hit in zip(subs, batch_ov(T, P)):
            if hit and any(pa.matches(runs) for pa in group):
                out.add((ff, i, j, fe))
    return prune_flagged(t, out) if prune else out


def prune_flagged(t: str, tuples) -> set:
    """Drop tuples reachable from a strictly smaller tuple of the same flag class."""
    tr = _TextRuns(t)
    buckets: dict[tuple, list] = defaultdict(list)
    for ff, i, j, fe in tuples:
        key = (ff, fe, tr.run_of[i] if ff else ("at", i), tr.run_of[j] if fe else ("at", j))
        buckets[key].append((i, j))
    out = set()
    for (ff, fe, _, _), items in buckets.items():
        # keep the tuples minimal under (i' >= i, j' <= j)
        items.sort(key=lambda ij: (-ij[0], ij[1]))
        best_j = None
        for i, j in items:
            if best_j is None or j < best_j:
                out.add((ff, i, j, fe))
                best_j = j
    return out


def flagged_span(t: str, tup) -> tuple[int, int]:
    """The widest interval a flagged tuple covers once its flagged runs are extended."""
    ff, i, j, fe = tup
    tr = _TextRuns(t)
    lo = tr.start[tr.run_of[i]] if ff else i
    hi = tr.end(tr.run_of[j]) if fe else j
    return lo, hi


def member_plus(t: str, p, prob: Problem | str = Problem.MEMBERSHIP, f: int | None = None) -> bool:
    """Solve an instance of type ``+|∘+`` / ``|∘+`` through the flagged set ``M′``."""
    prob = Problem.parse(prob)
    d = p if isinstance(p, Decomposition) else decompose(p, prob)
    if d.kind == "or":
        raise UnsupportedType("alternatives contain symbol sets; use member_or")
    alts = d.alts if d.kind == "plus" else [[(next(iter(s)), False) for s in sets] for sets in d.alts]
    Mp = compute_flagged_set(t, alts, f=f)
    if prob is Problem.MATCHING:
        return bool(Mp)
    n = len(t)
    if n == 0:
        return False
    tr = _TextRuns(t)
    if not d.outer_plus:
        first_end = tr.end(0)
        last_start = tr.start[-1]
        return any((i == 1 if ff == 0 else i <= first_end) and (j == n if fe == 0 else j >= last_start)
                   for ff, i, j, fe in Mp)
    N = n + 1

    def node(version, k):
        return version * N + k

    adj = [[] for _ in range(3 * N)]
    for k in range(N):
        adj[node(2, k)].append(node(0, k))
        adj[node(0, k)].append(node(1, k))
    for r_idx in range(len(tr.runs)):
        a, b = tr.start[r_idx], tr.end(r_idx)
        for k in range(a, b):
            adj[node(1, k - 1)].append(node(1, k))
            adj[node(2, k)].append(node(2, k + 1))
    for ff, i, j, fe in Mp:
        adj[node(ff, i - 1)].append(node(2 if fe else 0, j))
    return _reach(3 * N, adj, node(0, 0), node(0, n))


# -- dispatch -----------------------------------------------------------------


def fast_solve(t: str, p, prob: Problem | str = Problem.MEMBERSHIP, f: int | None = None,
               seed: int = 0, chi_c: float = CHI_C) -> bool:
    """Decide matching or membership with the fast engine; raises :class:`UnsupportedType`."""
    prob = Problem.parse(prob)
    if isinstance(p, str):
        p = parse_pattern(p)
    d = decompose(p, prob)
    if d.kind == "plus":
        return member_plus(t, d, prob, f=f)
    return member_or(t, d, prob, f=f, seed=seed, chi_c=chi_c)
