"""Thompson NFA baseline: exact O(nm) membership, matching and interval search.

States live in four parallel int32 arrays (``kind``, ``sym``, ``out1``,
``out2``).  Symbols are stored as code points, so texts are simulated by
their code point sequence.  Two simulators are available: the sparse
Pike-style one (compiled or pure Python) and, for automata with at most
``BITSET_LIMIT`` states, a bit-parallel one over Python ints that uses a
precomputed ε-closure matrix.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .kernels import EPS, MATCH, SPLIT, SYM
from .pattern import Alt, Concat, Pattern, Plus, Star, Symbol, parse_pattern

BITSET_LIMIT = 512


class Nfa:
    """An immutable compiled automaton; simulation scratch is allocated per call."""

    def __init__(self, kind, sym, out1, out2, start: int, accept: int):
        self.kind = kernels.as_i32(kind)
        self.sym = kernels.as_i32(sym)
        self.out1 = kernels.as_i32(out1)
        self.out2 = kernels.as_i32(out2)
        self.start = start
        self.accept = accept
        for a in (self.kind, self.sym, self.out1, self.out2):
            a.flags.writeable = False
        # plain lists for the pure-Python simulators
        self._lists = (self.kind.tolist(), self.sym.tolist(), self.out1.tolist(), self.out2.tolist())
        self._bits = None

    @property
    def n_states(self) -> int:
        return len(self.kind)

    def __repr__(self):
        return f"Nfa(states={self.n_states}, start={self.start}, accept={self.accept})"

    # -- bit-parallel tables ----------------------------------------------------

    def _bitset_tables(self):
        if self._bits is None:
            self._bits = _BitTables(self)
        return self._bits


class _BitTables:
    def __init__(self, nfa: Nfa):
        kind, sym, out1, out2 = nfa._lists
        n = len(kind)
        closure = [0] * n
        for s in range(n):
            seen = set()
            stack = [s]
            mask = 0
            while stack:
                x = stack.pop()
                if x in seen:
                    continue
                seen.add(x)
                k = kind[x]
                if k == SPLIT:
                    stack.append(out1[x])
                    stack.append(out2[x])
                elif k == EPS:
                    stack.append(out1[x])
                else:
                    mask |= 1 << x
            closure[s] = mask
        self.closure = closure
        self.follow = [closure[out1[x]] if kind[x] == SYM else 0 for x in range(n)]
        self.sym_mask: dict[int, int] = {}
        for x in range(n):
            if kind[x] == SYM:
                self.sym_mask[sym[x]] = self.sym_mask.get(sym[x], 0) | (1 << x)
        self.start = closure[nfa.start]
        self.accept_bit = 1 << nfa.accept
        self._chunks: dict[tuple[int, int], int] = {}

    def step(self, active: int, c: int) -> int:
        m = active & self.sym_mask.get(c, 0)
        nxt = 0
        chunks = self._chunks
        while m:
            k = (m.bit_length() - 1) >> 3
            byte = (m >> (k << 3)) & 0xFF
            key = (k, byte)
            v = chunks.get(key)
            if v is None:
                v = 0
                base = k << 3
                for b in range(8):
                    if byte >> b & 1:
                        v |= self.follow[base + b]
                chunks[key] = v
            nxt |= v
            m &= ~(0xFF << (k << 3))
        return nxt


# -- compilation --------------------------------------------------------------


class _Builder:
    def __init__(self):
        self.kind: list[int] = []
        self.sym: list[int] = []
        self.out1: list[int] = []
        self.out2: list[int] = []

    def new(self, kind: int, sym: int = -1, out1: int = -1, out2: int = -1) -> int:
        self.kind.append(kind)
        self.sym.append(sym)
        self.out1.append(out1)
        self.out2.append(out2)
        return len(self.kind) - 1

    def build(self, p: Pattern, nxt: int) -> int:
        """Emit states for ``p`` continuing into ``nxt``; return the entry state."""
        if isinstance(p, Symbol):
            return self.new(SYM, ord(p.char), nxt)
        if isinstance(p, Concat):
            for c in reversed(p.children):
                nxt = self.build(c, nxt)
            return nxt
        if isinstance(p, Alt):
            entries = [self.build(c, nxt) for c in p.children]
            entry = entries[-1]
            for e in reversed(entries[:-1]):
                entry = self.new(SPLIT, -1, e, entry)
            return entry
        if isinstance(p, Plus):
            loop = self.new(SPLIT, -1, -1, nxt)
            entry = self.build(p.child, loop)
            self.out1[loop] = entry
            return entry
        if isinstance(p, Star):
            loop = self.new(SPLIT, -1, -1, nxt)
            self.out1[loop] = self.build(p.child, loop)
            return loop
        raise TypeError(f"not a pattern node: {p!r}")


def compile_nfa(p: Pattern | str) -> Nfa:
    if isinstance(p, str):
        p = parse_pattern(p)
    b = _Builder()
    accept = b.new(MATCH)
    start = b.build(p, accept)
    return Nfa(b.kind, b.sym, b.out1, b.out2, start, accept)


def _as_nfa(p) -> Nfa:
    return p if isinstance(p, Nfa) else compile_nfa(p)


def encode_text(t: str) -> np.ndarray:
    return np.frombuffer(t.encode("utf-32-le"), dtype=np.int32)


def _pick(nfa: Nfa, method: str) -> str:
    if method != "auto":
        return method
    if kernels.BACKEND == "cython":
        return "cython"
    return "bitset" if nfa.n_states <= BITSET_LIMIT else "python"


def _kernel_args(nfa: Nfa, backend: str):
    if backend == "cython":
        return (nfa.kind, nfa.sym, nfa.out1, nfa.out2, nfa.start, nfa.accept)
    return (*nfa._lists, nfa.start, nfa.accept)


def _text_arg(t: str, backend: str):
    return encode_text(t) if backend == "cython" else [ord(c) for c in t]


# -- simulation ---------------------------------------------------------------


def nfa_member(t: str, p, method: str = "auto") -> bool:
    """True iff ``t`` is in the language of ``p``."""
    nfa = _as_nfa(p)
    method = _pick(nfa, method)
    if method == "bitset":
        tb = nfa._bitset_tables()
        active = tb.start
        for c in t:
            active = tb.step(active, ord(c))
            if not active:
                return False
        return bool(active & tb.accept_bit)
    fn = kernels.get("nfa_member", method)
    return bool(fn(*_kernel_args(nfa, method), _text_arg(t, method)))


def nfa_match(t: str, p, method: str = "auto") -> bool:
    """True iff some substring of ``t`` (the empty one included) is in the language."""
    nfa = _as_nfa(p)
    method = _pick(nfa, method)
    if method == "bitset":
        tb = nfa._bitset_tables()
        active = tb.start
        if active & tb.accept_bit:
            return True
        for c in t:
            active = tb.step(active, ord(c)) | tb.start
            if active & tb.accept_bit:
                return True
        return False
    fn = kernels.get("nfa_search", method)
    return bool(fn(*_kernel_args(nfa, method), _text_arg(t, method)))


def _ends_bitset(tb: _BitTables, t: str, begin: int) -> list[int]:
    active = tb.start
    ends = []
    for pos in range(begin, len(t)):
        active = tb.step(active, ord(t[pos]))
        if not active:
            break
        if active & tb.accept_bit:
            ends.append(pos + 1)
    return ends


def match_intervals(t: str, p, method: str = "auto") -> set[tuple[int, int]]:
    """All 1-based closed intervals ``(i, j)`` with ``t[i..j]`` in the language.

    Empty substrings are not intervals and are never reported.
    """
    nfa = _as_nfa(p)
    method = _pick(nfa, method)
    out: set[tuple[int, int]] = set()
    if method == "bitset":
        tb = nfa._bitset_tables()
        for b in range(len(t)):
            out.update((b + 1, e) for e in _ends_bitset(tb, t, b))
        return out
    fn = kernels.get("nfa_ends", method)
    args = _kernel_args(nfa, method)
    text = _text_arg(t, method)
    for b in range(len(t)):
        out.update((b + 1, e) for e in fn(*args, text, b))
    return out


def ends_from(t: str, p, begin: int, method: str = "auto") -> list[int]:
    """Exclusive end offsets ``e`` with ``t[begin:e]`` accepted and ``e > begin``."""
    nfa = _as_nfa(p)
    method = _pick(nfa, method)
    if method == "bitset":
        return _ends_bitset(nfa._bitset_tables(), t, begin)
    fn = kernels.get("nfa_ends", method)
    return list(fn(*_kernel_args(nfa, method), _text_arg(t, method), begin))
