# cython: language_level=3
"""Compiled hot kernels: sparse Thompson-NFA simulation and word-packed Batch-OV.

Mirrors ``_pykernels``; all arrays are int32 (NFA tables, text codes) or
uint64 (packed bit-vectors).
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free
from libc.stdint cimport int32_t, uint64_t

cnp.import_array()

DEF SYM = 0
DEF SPLIT = 1
DEF EPS = 2
DEF MATCH = 3


cdef struct Sim:
    const int32_t* kind
    const int32_t* sym
    const int32_t* out1
    const int32_t* out2
    int32_t* mark
    int32_t* stack
    int32_t* clist
    int32_t* nlist
    int nstates


cdef inline int closure(Sim* s, int start, int gen, int32_t* dest, int n) noexcept nogil:
    cdef int top = 0
    cdef int x, k
    s.stack[top] = start
    top += 1
    while top > 0:
        top -= 1
        x = s.stack[top]
        if s.mark[x] == gen:
            continue
        s.mark[x] = gen
        k = s.kind[x]
        if k == SPLIT:
            s.stack[top] = s.out2[x]
            top += 1
            s.stack[top] = s.out1[x]
            top += 1
        elif k == EPS:
            s.stack[top] = s.out1[x]
            top += 1
        else:
            dest[n] = x
            n += 1
    return n


cdef int sim_alloc(Sim* s, const int32_t[::1] kind, const int32_t[::1] sym,
                   const int32_t[::1] out1, const int32_t[::1] out2) except -1:
    cdef int n = kind.shape[0]
    cdef int i
    s.nstates = n
    s.kind = &kind[0]
    s.sym = &sym[0]
    s.out1 = &out1[0]
    s.out2 = &out2[0]
    s.mark = <int32_t*> malloc(n * sizeof(int32_t))
    # each state is pushed at most twice per closure (SPLIT pushes two)
    s.stack = <int32_t*> malloc((2 * n + 2) * sizeof(int32_t))
    s.clist = <int32_t*> malloc((n + 1) * sizeof(int32_t))
    s.nlist = <int32_t*> malloc((n + 1) * sizeof(int32_t))
    if not s.mark or not s.stack or not s.clist or not s.nlist:
        sim_free(s)
        raise MemoryError()
    for i in range(n):
        s.mark[i] = -1
    return 0


cdef void sim_free(Sim* s) noexcept:
    free(s.mark)
    free(s.stack)
    free(s.clist)
    free(s.nlist)


cdef inline int contains(int32_t* lst, int n, int v) noexcept nogil:
    cdef int i
    for i in range(n):
        if lst[i] == v:
            return 1
    return 0


def nfa_member(const int32_t[::1] kind, const int32_t[::1] sym, const int32_t[::1] out1,
               const int32_t[::1] out2, int start, int accept, const int32_t[::1] text):
    cdef Sim s
    cdef int gen = 0, nc, nn, i, x, pos, c
    cdef int32_t* tmp
    cdef int ntext = text.shape[0]
    cdef bint result
    sim_alloc(&s, kind, sym, out1, out2)
    try:
        with nogil:
            nc = closure(&s, start, gen, s.clist, 0)
            for pos in range(ntext):
                c = text[pos]
                gen += 1
                nn = 0
                for i in range(nc):
                    x = s.clist[i]
                    if s.kind[x] == SYM and s.sym[x] == c:
                        nn = closure(&s, s.out1[x], gen, s.nlist, nn)
                tmp = s.clist
                s.clist = s.nlist
                s.nlist = tmp
                nc = nn
                if nc == 0:
                    break
            result = contains(s.clist, nc, accept)
    finally:
        sim_free(&s)
    return bool(result)


def nfa_search(const int32_t[::1] kind, const int32_t[::1] sym, const int32_t[::1] out1,
               const int32_t[::1] out2, int start, int accept, const int32_t[::1] text):
    cdef Sim s
    cdef int gen = 0, nc, nn, i, x, pos, c
    cdef int32_t* tmp
    cdef int ntext = text.shape[0]
    cdef bint result = 0
    sim_alloc(&s, kind, sym, out1, out2)
    try:
        with nogil:
            nc = closure(&s, start, gen, s.clist, 0)
            if contains(s.clist, nc, accept):
                result = 1
            else:
                for pos in range(ntext):
                    c = text[pos]
                    gen += 1
                    nn = 0
                    for i in range(nc):
                        x = s.clist[i]
                        if s.kind[x] == SYM and s.sym[x] == c:
                            nn = closure(&s, s.out1[x], gen, s.nlist, nn)
                    nn = closure(&s, start, gen, s.nlist, nn)
                    if contains(s.nlist, nn, accept):
                        result = 1
                        break
                    tmp = s.clist
                    s.clist = s.nlist
                    s.nlist = tmp
                    nc = nn
    finally:
        sim_free(&s)
    return bool(result)


def nfa_ends(const int32_t[::1] kind, const int32_t[::1] sym, const int32_t[::1] out1,
             const int32_t[::1] out2, int start, int accept, const int32_t[::1] text, int begin):
    cdef Sim s
    cdef int gen = 0, nc, nn, i, x, pos, c
    cdef int32_t* tmp
    cdef int ntext = text.shape[0]
    ends = []
    sim_alloc(&s, kind, sym, out1, out2)
    try:
        nc = closure(&s, start, gen, s.clist, 0)
        for pos in range(begin, ntext):
            c = text[pos]
            gen += 1
            nn = 0
            for i in range(nc):
                x = s.clist[i]
                if s.kind[x] == SYM and s.sym[x] == c:
                    nn = closure(&s, s.out1[x], gen, s.nlist, nn)
            if nn == 0:
                break
            if contains(s.nlist, nn, accept):
                ends.append(pos + 1)
            tmp = s.clist
            s.clist = s.nlist
            s.nlist = tmp
            nc = nn
    finally:
        sim_free(&s)
    return ends


def batch_ov_words(const uint64_t[:, ::1] A, const uint64_t[:, ::1] B):
    cdef Py_ssize_t na = A.shape[0], nb = B.shape[0], nw = A.shape[1]
    cdef Py_ssize_t i, j, k
    cdef bint hit
    out = np.zeros(na, dtype=np.bool_)
    cdef cnp.npy_bool[::1] res = out
    if nb == 0 or na == 0:
        return out
    with nogil:
        for i in range(na):
            hit = 0
            for j in range(nb):
                for k in range(nw):
                    if A[i, k] & B[j, k]:
                        break
                else:
                    hit = 1
                    break
            res[i] = hit
    return out
