"""Pure-Python implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is not built or ``HOMRE_PURE=1`` is set.
"""

from __future__ import annotations

SYM = 0
SPLIT = 1
EPS = 2
MATCH = 3

# Incremented by the sparse simulators when cost accounting is on; tests
# check it against the n * states bound.
COUNTERS = {"visits": 0}
COUNT_VISITS = False


def _closure_into(kind, out1, out2, s, mark, gen, dest):
    stack = [s]
    visits = 0
    while stack:
        x = stack.pop()
        if mark[x] == gen:
            continue
        mark[x] = gen
        visits += 1
        k = kind[x]
        if k == SPLIT:
            stack.append(out2[x])
            stack.append(out1[x])
        elif k == EPS:
            stack.append(out1[x])
        else:
            dest.append(x)
    if COUNT_VISITS:
        COUNTERS["visits"] += visits


def nfa_member(kind, sym, out1, out2, start, accept, text):
    nstates = len(kind)
    mark = [-1] * nstates
    gen = 0
    clist: list = []
    _closure_into(kind, out1, out2, start, mark, gen, clist)
    for c in text:
        gen += 1
        nlist: list = []
        for x in clist:
            if kind[x] == SYM and sym[x] == c:
                _closure_into(kind, out1, out2, out1[x], mark, gen, nlist)
        clist = nlist
        if not clist:
            return False
    return accept in clist


def nfa_search(kind, sym, out1, out2, start, accept, text):
    """True if some substring of ``text`` (possibly empty) is accepted."""
    nstates = len(kind)
    mark = [-1] * nstates
    gen = 0
    clist: list = []
    _closure_into(kind, out1, out2, start, mark, gen, clist)
    if accept in clist:
        return True
    for c in text:
        gen += 1
        nlist: list = []
        for x in clist:
            if kind[x] == SYM and sym[x] == c:
                _closure_into(kind, out1, out2, out1[x], mark, gen, nlist)
        _closure_into(kind, out1, out2, start, mark, gen, nlist)
        if accept in nlist:
            return True
        clist = nlist
    return False


def nfa_ends(kind, sym, out1, out2, start, accept, text, begin):
    """Exclusive end offsets ``e > begin`` with ``text[begin:e]`` accepted."""
    nstates = len(kind)
    mark = [-1] * nstates
    gen = 0
    clist: list = []
    _closure_into(kind, out1, out2, start, mark, gen, clist)
    ends = []
    for pos in range(begin, len(text)):
        c = text[pos]
        gen += 1
        nlist: list = []
        for x in clist:
            if kind[x] == SYM and sym[x] == c:
                _closure_into(kind, out1, out2, out1[x], mark, gen, nlist)
        if not nlist:
            break
        if accept in nlist:
            ends.append(pos + 1)
        clist = nlist
    return ends


def batch_ov_ints(A: list, B: list) -> list:
    """``A``/``B`` are packed vectors as Python ints; word-parallel AND per pair."""
    out = []
    for a in A:
        hit = False
        for b in B:
            if not a & b:
                hit = True
                break
        out.append(hit)
    return out


def batch_ov_words(A, B):
    """Rows of ``uint64`` words; returns a list of bools per row of ``A``."""
    nw = A.shape[1]
    rows_b = [tuple(int(w) for w in row) for row in B]
    out = []
    for row in A:
        ra = tuple(int(w) for w in row)
        hit = False
        for rb in rows_b:
            for k in range(nw):
                if ra[k] & rb[k]:
                    break
            else:
                hit = True
                break
        out.append(hit)
    return out
