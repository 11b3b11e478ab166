"""Bit vectors, batched orthogonal-vector queries and the random χ encoder."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

CHI_C = 8.0
MIN_UNIVERSE = 16


@dataclass(frozen=True)
class BitVec:
    """A fixed-dimension bit vector; bit ``k`` is ``(bits >> k) & 1``."""

    dim: int
    bits: int = 0

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("negative dimension")
        if self.bits < 0 or self.bits >> self.dim:
            raise ValueError("bits outside the dimension")

    @classmethod
    def from_bits(cls, seq) -> "BitVec":
        seq = list(seq)
        v = 0
        for k, b in enumerate(seq):
            if b:
                v |= 1 << k
        return cls(len(seq), v)

    def __getitem__(self, k: int) -> int:
        if not 0 <= k < self.dim:
            raise IndexError(k)
        return (self.bits >> k) & 1

    def _check(self, other: "BitVec"):
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def dot(self, other: "BitVec") -> int:
        self._check(other)
        return (self.bits & other.bits).bit_count()

    def __or__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self.dim, self.bits | other.bits)

    def __and__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self.dim, self.bits & other.bits)

    def __invert__(self) -> "BitVec":
        return BitVec(self.dim, ~self.bits & ((1 << self.dim) - 1))

    def concat(self, other: "BitVec") -> "BitVec":
        """``self`` followed by ``other`` (``other`` occupies the high bits)."""
        return BitVec(self.dim + other.dim, self.bits | (other.bits << self.dim))

    def issubset(self, other: "BitVec") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def popcount(self) -> int:
        return self.bits.bit_count()

    def __str__(self):
        return "".join(str(self[k]) for k in range(self.dim))


def concat_all(vecs) -> BitVec:
    bits = 0
    dim = 0
    for v in vecs:
        bits |= v.bits << dim
        dim += v.dim
    return BitVec(dim, bits)


def pack_words(vecs: list, dim: int) -> np.ndarray:
    """Pack vectors into a C-contiguous ``(len, ceil(dim/64))`` uint64 array."""
    nw = max(1, (dim + 63) // 64)
    buf = b"".join(v.bits.to_bytes(nw * 8, "little") for v in vecs)
    return np.frombuffer(buf, dtype="<u8").astype(np.uint64).reshape(len(vecs), nw)


def batch_ov(A: list, B: list, block: int | None = None, backend: str | None = None) -> list[bool]:
    """For each ``a`` in ``A``: is there ``b`` in ``B`` with ``<a, b> = 0``?

    The larger side is cut into blocks the size of the smaller side (or of
    ``block`` when given) and each balanced block pair is solved on its own;
    the answer never depends on the cut.
    """
    if not A:
        return []
    dim = A[0].dim
    for v in list(A) + list(B):
        if v.dim != dim:
            raise ValueError(f"dimension mismatch: {v.dim} vs {dim}")
    if not B:
        return [False] * len(A)
    backend = backend or kernels.BACKEND
    if backend == "cython":
        WA, WB = pack_words(A, dim), pack_words(B, dim)
        fn = kernels.get("batch_ov_words", "cython")

        def solve(ia, ib):
            return fn(WA[ia[0]:ia[1]], WB[ib[0]:ib[1]]).tolist()
    else:
        IA, IB = [v.bits for v in A], [v.bits for v in B]
        fn = kernels.get("batch_ov_ints", "python")

        def solve(ia, ib):
            return fn(IA[ia[0]:ia[1]], IB[ib[0]:ib[1]])

    n, m = len(A), len(B)
    size = block if block is not None else min(n, m)
    if size < 1:
        raise ValueError("block size must be positive")
    result = [False] * n
    if n >= m or block is not None:
        # blocks of A against blocks of B; results of B-blocks are OR-ed
        for a0 in range(0, n, size):
            a1 = min(n, a0 + size)
            acc = [False] * (a1 - a0)
            for b0 in range(0, m, size):
                part = solve((a0, a1), (b0, min(m, b0 + size)))
                acc = [x or y for x, y in zip(acc, part)]
                if all(acc):
                    break
            result[a0:a1] = acc
        return result
    for b0 in range(0, m, size):
        part = solve((0, n), (b0, min(m, b0 + size)))
        result = [x or y for x, y in zip(result, part)]
        if all(result):
            break
    return result


def batch_ov_naive(A: list, B: list) -> list[bool]:
    return [any(a.dot(b) == 0 for b in B) for a in A]


# -- χ encoder ----------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Sentinel:
    """A padding symbol guaranteed not to collide with any text character."""

    index: int

    def __repr__(self):
        return f"<pad{self.index}>"


class ChiEncoder:
    """Random characteristic vectors over a padded alphabet.

    ``fresh`` is a sentinel outside the text alphabet used for padding
    blocks.  Every bit of every ``χ(σ)`` is set independently with
    probability ``1/f``, drawn from ``numpy.random.default_rng(seed)`` in a
    fixed universe order, so encoders are reproducible.
    """

    def __init__(self, alphabet, f: int, seed: int = 0, c: float = CHI_C, min_universe: int = MIN_UNIVERSE):
        if f < 1:
            raise ValueError("threshold f must be at least 1")
        letters = sorted(set(alphabet), key=repr)
        self.fresh = Sentinel(0)
        universe = letters + [self.fresh]
        k = 1
        while len(universe) < max(len(letters), min_universe):
            universe.append(Sentinel(k))
            k += 1
        self.universe = tuple(universe)
        self.f = f
        self.c = c
        self.seed = seed
        self.dim = math.ceil(c * f * math.log(len(universe)))
        rng = np.random.default_rng(seed)
        draws = rng.random((len(universe), self.dim)) < 1.0 / f
        self._vecs = {}
        for sigma, row in zip(universe, draws):
            packed = np.packbits(row, bitorder="little").tobytes()
            self._vecs[sigma] = BitVec(self.dim, int.from_bytes(packed, "little"))

    def __contains__(self, sigma) -> bool:
        return sigma in self._vecs

    def symbol(self, sigma) -> BitVec:
        try:
            return self._vecs[sigma]
        except KeyError:
            raise KeyError(f"symbol {sigma!r} is not in the encoder universe") from None

    def set(self, S) -> BitVec:
        S = set(S)
        if len(S) > self.f:
            raise ValueError(f"set of size {len(S)} exceeds threshold f={self.f}")
        bits = 0
        for s in S:
            bits |= self.symbol(s).bits
        return BitVec(self.dim, bits)


def chi_symbol(enc: ChiEncoder, sigma) -> BitVec:
    return enc.symbol(sigma)


def chi_set(enc: ChiEncoder, S) -> BitVec:
    return enc.set(S)
