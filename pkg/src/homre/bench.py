"""Timing helpers comparing the compiled kernels with the pure-Python fallback.

Nothing here feeds back into the engines; the functions only time them.
"""

from __future__ import annotations

import random
import time

import numpy as np

from . import kernels, nfa
from .ov import BitVec, batch_ov

NFA_PATTERNS = ("(a|b|c)*a(a|b|c)(a|b|c)(a|b|c)(a|b|c)", "((a|b|c)+c)+(a|b|c)*", "(a+|b+|c+|ab|bc)+")


def _best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def random_vectors(count: int, dim: int, density: float, rng: np.random.Generator) -> list[BitVec]:
    rows = rng.random((count, dim)) < density
    out = []
    for row in rows:
        packed = np.packbits(row, bitorder="little").tobytes()
        out.append(BitVec(dim, int.from_bytes(packed, "little")))
    return out


def scalar_ov(A, B) -> list[bool]:
    """The plain double loop: one inner product per pair, no blocking."""
    out = []
    for a in A:
        x = a.bits
        hit = False
        for b in B:
            if x & b.bits == 0:
                hit = True
                break
        out.append(hit)
    return out


def bench_batch_ov(n: int = 4096, m: int = 4096, dim: int = 512, density: float = 0.5,
                   seed: int = 0, repeat: int = 1) -> dict:
    rng = np.random.default_rng(seed)
    A = random_vectors(n, dim, density, rng)
    B = random_vectors(m, dim, density, rng)
    row = {"n": n, "m": m, "dim": dim}
    row["scalar_s"] = _best_of(lambda: scalar_ov(A, B), repeat)
    for backend in ("cython", "python"):
        if backend == "cython" and not kernels.have_extension():
            continue
        row[f"{backend}_s"] = _best_of(lambda: batch_ov(A, B, backend=backend), repeat)
    if "cython_s" in row:
        row["speedup"] = row["scalar_s"] / max(row["cython_s"], 1e-9)
    return row


def bench_nfa(length: int = 100_000, seed: int = 0, repeat: int = 3) -> list[dict]:
    rng = random.Random(seed)
    text = "".join(rng.choice("abc") for _ in range(length))
    rows = []
    methods = ["python", "bitset"] + (["cython"] if kernels.have_extension() else [])
    for src in NFA_PATTERNS:
        machine = nfa.compile_nfa(src)
        row = {"pattern": src, "states": machine.n_states, "length": length}
        for method in methods:
            row[f"{method}_s"] = _best_of(lambda: nfa.nfa_member(text, machine, method=method), repeat)
        rows.append(row)
    return rows


def format_rows(rows: list[dict]) -> list[str]:
    out = []
    for row in rows:
        parts = []
        for k, v in row.items():
            parts.append(f"{k}={v:.4f}" if isinstance(v, float) else f"{k}={v}")
        out.append(" ".join(parts))
    return out


def run(quick: bool = False) -> list[str]:
    if quick:
        rows = bench_nfa(length=20_000, repeat=1) + [bench_batch_ov(512, 512, 256)]
    else:
        rows = bench_nfa() + [bench_batch_ov()]
    return [f"backend={kernels.BACKEND}"] + format_rows(rows)
