"""Seeded random instances for differential testing of the fast engine."""

from __future__ import annotations

import random

from .pattern import Alt, Concat, Pattern, Plus, Problem, Symbol, alt, concat, size

# (kind, problem) pairs the fast engine handles, with their display labels
FAST_TYPES = {
    ("or", Problem.MATCHING): "|∘|",
    ("plus", Problem.MATCHING): "|∘+",
    ("or", Problem.MEMBERSHIP): "+|∘|",
    ("plus", Problem.MEMBERSHIP): "+|∘+",
}


def sample_member(p: Pattern, rng: random.Random, max_rep: int = 3) -> str:
    """A random word of ``L(p)``; repetitions are bounded by ``max_rep``."""
    out: list[str] = []

    def go(node):
        if isinstance(node, Symbol):
            out.append(node.char)
        elif isinstance(node, Concat):
            for c in node.children:
                go(c)
        elif isinstance(node, Alt):
            go(rng.choice(node.children))
        elif isinstance(node, Plus):
            for _ in range(rng.randint(1, max_rep)):
                go(node.child)
        else:
            for _ in range(rng.randint(0, max_rep)):
                go(node.child)

    go(p)
    return "".join(out)


def _alternative(kind: str, sigma: list, rng: random.Random, max_items: int) -> Pattern:
    items = []
    for _ in range(rng.randint(1, max_items)):
        if kind == "or":
            s = rng.sample(sigma, rng.randint(1, min(3, len(sigma))))
            items.append(Symbol(s[0]) if len(s) == 1 else alt(Symbol(c) for c in s))
        else:
            c = rng.choice(sigma)
            items.append(Plus(Symbol(c)) if rng.random() < 0.4 else Symbol(c))
    return concat(items)


def random_fast_pattern(kind: str, prob: Problem, rng: random.Random, sigma: list,
                        max_alts: int = 8, max_items: int = 5, max_size: int = 50) -> Pattern:
    """A ``|∘|``/``|∘+`` pattern (wrapped in ``+`` for membership) of size at most ``max_size``."""
    alts: list = []
    for _ in range(rng.randint(1, max_alts)):
        a = _alternative(kind, sigma, rng, max_items)
        trial = alts + [a]
        p = trial[0] if len(trial) == 1 else alt(trial)
        if prob is Problem.MEMBERSHIP:
            p = Plus(p)
        if size(p) > max_size:
            break
        alts = trial
    if not alts:
        alts = [Symbol(rng.choice(sigma))]
    p = alts[0] if len(alts) == 1 else alt(alts)
    return Plus(p) if prob is Problem.MEMBERSHIP else p


def random_fast_instance(kind: str, prob, rng: random.Random, max_sigma: int = 4,
                         max_text: int = 60) -> tuple[str, Pattern]:
    """``(t, p)`` with ``|t| <= max_text``; about half the texts are built from members of ``L(p)``."""
    prob = Problem.parse(prob)
    sigma = list("abcd"[: rng.randint(1, max_sigma)])
    p = random_fast_pattern(kind, prob, rng, sigma)
    if rng.random() < 0.5:
        t = sample_member(p, rng)
        if prob is Problem.MATCHING:
            pad = lambda: "".join(rng.choice(sigma) for _ in range(rng.randint(0, 8)))  # noqa: E731
            t = pad() + t + pad()
        if rng.random() < (0.6 if prob is Problem.MATCHING else 0.3) and t:
            k = rng.randrange(len(t))
            t = t[:k] + rng.choice(sigma) + t[k + 1:]
        t = t[:max_text]
    else:
        # short texts keep "no match" answers common for matching
        cap = max_text if prob is Problem.MEMBERSHIP else rng.choice([2, 4, 8, 16, max_text])
        letters = sigma + ["e"] * rng.choice([0, len(sigma)])
        t = "".join(rng.choice(letters) for _ in range(rng.randint(0, min(cap, max_text))))
    return t, p
