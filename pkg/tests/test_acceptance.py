"""Acceptance criteria 1 to 10, one recorded PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines as they are
produced; they are also repeated in the terminal summary.
"""

import itertools
import random
import time

import pytest
from scipy.stats import binomtest

from homre import bench, fast, nfa
from homre.formula import (
    FormulaPairInstance, Leaf, Or, arity, brute_force_pair, check_formula, formula_depth, leaf_count,
    random_formula, random_instance, bin_width,
)
from homre.ov import ChiEncoder
from homre.pattern import Alt, Concat, Plus, Problem, Star, Symbol, classify
from homre.randgen import FAST_TYPES, random_fast_instance
from homre.reductions import build_reduction, check_change_claim, check_helper, encode_gates
from homre.reductions.gadgets import CPC, COC, COP, CPO, CS, MATCHING_TYPES, OPOC

from strategies import gate_triple_failures

METHODS = ["python", "bitset", "cython"] if nfa.kernels.have_extension() else ["python", "bitset"]


def _bits(k):
    return ["".join(x) for x in itertools.product("01", repeat=k)]


# -- criterion 1 ----------------------------------------------------------------


def _trees(k, memo={}):
    """Every pattern tree over {a, b} with exactly ``k`` nodes."""
    if k in memo:
        return memo[k]
    out = []
    if k == 1:
        out = [Symbol("a"), Symbol("b")]
    else:
        for c in _trees(k - 1):
            out += [Plus(c), Star(c), Alt((c,))]
        for parts in _compositions(k - 1):
            for kids in itertools.product(*(_trees(x) for x in parts)):
                out += [Concat(kids), Alt(kids)]
    memo[k] = out
    return out


def _compositions(total):
    """Ordered splits of ``total`` into at least two positive parts."""
    for cuts in range(1, total):
        for pos in itertools.combinations(range(1, total), cuts):
            bounds = (0,) + pos + (total,)
            yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def _language(p, limit):
    """All words of ``L(p)`` of length at most ``limit``."""
    if isinstance(p, Symbol):
        return {p.char}
    if isinstance(p, Alt):
        return set().union(*(_language(c, limit) for c in p.children))
    if isinstance(p, Concat):
        acc = {""}
        for c in p.children:
            words = _language(c, limit)
            acc = {x + y for x in acc for y in words if len(x) + len(y) <= limit}
        return acc
    base = _language(p.child, limit)
    acc, frontier = set(base), set(base)
    while frontier:
        frontier = {x + y for x in frontier for y in base if len(x) + len(y) <= limit} - acc
        acc |= frontier
    if isinstance(p, Star):
        acc.add("")
    return acc


def test_criterion_01_baseline_exhaustive(acceptance):
    t0 = time.perf_counter()
    texts = [""] + ["".join(w) for k in range(1, 6) for w in itertools.product("ab", repeat=k)]
    n_patterns = bad = 0
    for k in range(1, 7):
        for p in _trees(k):
            if not classify(p).homogeneous:
                continue
            n_patterns += 1
            lang = _language(p, 5)
            m = nfa.compile_nfa(p)
            for method in METHODS:
                for t in texts:
                    bad += nfa.nfa_member(t, m, method) != (t in lang)
    dt = time.perf_counter() - t0
    acceptance(1, bad == 0, f"{n_patterns} patterns x {len(texts)} texts x {len(METHODS)} simulators, "
                            f"{bad} disagreements, {dt:.1f}s")
    assert bad == 0


# -- criterion 2 ----------------------------------------------------------------


def test_criterion_02_fast_engine_differential(acceptance):
    t0 = time.perf_counter()
    runs_example = fast.fast_solve("aaaabccba", "(a+|a+b|bc+|cba|b+a)+", Problem.MEMBERSHIP)
    details, bad = [], 0
    for k, ((kind, prob), label) in enumerate(FAST_TYPES.items()):
        rng = random.Random(1000 + k)
        wrong = trues = 0
        for _ in range(2000):
            t, p = random_fast_instance(kind, prob, rng)
            want = nfa.nfa_member(t, p) if prob is Problem.MEMBERSHIP else nfa.nfa_match(t, p)
            f = rng.choice([None, 2, 3, 4])
            wrong += fast.fast_solve(t, p, prob, f=f, seed=rng.getrandbits(32)) != want
            trues += want
        bad += wrong
        details.append(f"{label}:{2000 - wrong}/2000 ({trues} true)")
    ok = bad == 0 and runs_example is True
    acceptance(2, ok, f"{' '.join(details)}; aaaabccba example={runs_example}; {time.perf_counter() - t0:.1f}s")
    assert ok


# -- criterion 3 ----------------------------------------------------------------


def test_criterion_03_flagged_canonical(acceptance):
    t = "0" * 5 + "1" * 5
    M = fast.compute_flagged_set(t, ["0+1+"])
    spans = [fast.flagged_span(t, x) for x in M]
    both_flags = all(x[0] and x[3] for x in M)
    member = fast.member_plus(t, "(0+1+)+")
    ok = len(M) == 1 and both_flags and spans == [(1, 10)] and member == nfa.nfa_member(t, "(0+1+)+") is True
    acceptance(3, ok, f"M'={sorted(M)} span={spans} member_plus={member}")
    assert ok


# -- criterion 4 ----------------------------------------------------------------


def _random_small_formula(rng, max_s=6):
    s = rng.randint(1, max_s)
    lo = max(1, (s - 1).bit_length())
    d = rng.randint(lo, max(lo, min(s - 1, 4)))
    return random_formula(s, d, rng)


def test_criterion_04_gate_triple(acceptance):
    t0 = time.perf_counter()
    details, failures = [], 0
    for k, kind in enumerate(MATCHING_TYPES):
        rng = random.Random(400 + k)
        gates = bad = 0
        for _ in range(50):
            F = _random_small_formula(rng)
            ka, kb = arity(F)
            gates += 2 * leaf_count(F) - 1
            bad += len(gate_triple_failures(F, kind, _bits(ka), _bits(kb)))
        failures += bad
        details.append(f"{kind}:{gates} gates/{bad} bad")
    acceptance(4, failures == 0, f"{' '.join(details)}; {time.perf_counter() - t0:.1f}s")
    assert failures == 0


# -- criterion 5 ----------------------------------------------------------------

# Membership transforms whose instances grow quadratically with the matching
# text; these run on a reduced scale (s <= 2, depth <= 1, n, m <= 2).
QUADRATIC = {CPC, COC, CS, COP}
CONSTRUCTIONS = [(k, "matching") for k in MATCHING_TYPES] + [(k, "membership") for k in MATCHING_TYPES] + [
    (OPOC, "membership")]


def _criterion5_instances(kind, problem, count=200):
    rng = random.Random(f"{kind}/{problem}")
    reduced = problem == "membership" and kind in QUADRATIC
    for _ in range(count):
        if reduced:
            s, d, n, m = rng.randint(1, 2), 1, rng.randint(1, 2), rng.randint(1, 2)
        else:
            s, n, m = rng.randint(1, 8), rng.randint(1, 3), rng.randint(1, 3)
            d = rng.randint(max(1, (s - 1).bit_length()), 3)
        yield random_instance(s, d, n, m, rng.getrandbits(32)), reduced


def test_criterion_05_end_to_end(acceptance):
    t0 = time.perf_counter()
    details, bad_total = [], 0
    for kind, problem in CONSTRUCTIONS:
        bad = sat = 0
        reduced = False
        for inst, reduced in _criterion5_instances(kind, problem):
            ri = build_reduction(inst, kind, problem)
            want = brute_force_pair(inst) is not None
            got = nfa.nfa_match(ri.text, ri.pattern) if problem == "matching" else nfa.nfa_member(ri.text, ri.pattern)
            bad += got != want
            sat += want
        bad_total += bad
        tag = "m" if problem == "matching" else "M"
        details.append(f"{tag}{kind}{'*' if reduced else ''}:{200 - bad}/200({sat} sat)")
    acceptance(5, bad_total == 0, f"{' '.join(details)}; * = reduced scale; {time.perf_counter() - t0:.0f}s")
    assert bad_total == 0


# -- criterion 6 ----------------------------------------------------------------


def _formulas_for_claim(seed, count, max_s):
    rng = random.Random(seed)
    for _ in range(count):
        yield _random_small_formula(rng, max_s)


def _claims(kind, seed, count, max_s):
    out = []
    for F in _formulas_for_claim(seed, count, max_s):
        ka = arity(F)[0]
        asg = _bits(ka) if ka <= 4 else random.Random(ka).sample(_bits(ka), 16)
        out += check_change_claim(encode_gates(F, kind), asg)
    return out


def test_criterion_06_symbol_changes_star(acceptance):
    claims = _claims(CS, 600, 100, 12)
    bad = [c for c in claims if not c.ok]
    acceptance(6, not bad, f"∘⋆: {len(claims) - len(bad)}/{len(claims)} gates satisfy the inequalities")
    assert not bad


@pytest.mark.xfail(strict=True, reason="barred parts raise A(p) above 2·A(u) for ∘|+ gadgets")
def test_criterion_06_symbol_changes_bar_plus(acceptance):
    claims = _claims(COP, 601, 100, 12)
    bad = [c for c in claims if not c.ok]
    ratio = max((c.a_p / c.a_u for c in claims if c.a_u), default=0)
    # the property the inequality is meant to protect still holds
    rng = random.Random(602)
    triple_bad = 0
    for _ in range(30):
        F = _random_small_formula(rng, 5)
        ka, kb = arity(F)
        triple_bad += len(gate_triple_failures(F, COP, _bits(ka), _bits(kb)))
    acceptance(6, not bad, f"∘|+: {len(claims) - len(bad)}/{len(claims)} gates satisfy 2A(u)>A(p) "
                           f"(max A(p)/A(u)={ratio:.2f}); gate triple on 30 formulas: {triple_bad} failures")
    assert triple_bad == 0
    assert not bad


# -- criterion 7 ----------------------------------------------------------------


def test_criterion_07_helper_checks(acceptance):
    checked = bad = 0
    for kind in (CS, CPO, COP):
        for problem in ("matching", "membership"):
            for inst, _ in _criterion5_instances(kind, problem):
                if inst.m > inst.n:
                    inst = inst.swapped()
                u = encode_gates(inst.F, kind)[()].u
                hc = check_helper(kind, u)
                checked += 1
                bad += not (hc.short_ok and hc.long_ok)
    acceptance(7, bad == 0, f"{checked - bad}/{checked} generic outer-OR instances: 4^l and 4^l3u34^l in L(H)")
    assert bad == 0


# -- criterion 8 ----------------------------------------------------------------


def test_criterion_08_chi_properties(acceptance):
    trials_per_encoder, encoders, f = 1000, 100, 4
    alphabet = "abcdefgh"
    fn = fp = 0
    universe_size = None
    rng = random.Random(8)
    for e in range(encoders):
        enc = ChiEncoder(alphabet, f, seed=e, c=8)
        universe_size = len(enc.universe)
        for _ in range(trials_per_encoder):
            S = rng.sample(enc.universe, rng.randint(1, f))
            XS = enc.set(S)
            fn += not enc.symbol(rng.choice(S)).issubset(XS)
            outside = rng.choice([x for x in enc.universe if x not in S])
            fp += enc.symbol(outside).issubset(XS)
    n = trials_per_encoder * encoders
    hi = binomtest(fp, n).proportion_ci(0.95, method="exact").high
    ok = fn == 0 and universe_size >= 16 and hi <= 1 / universe_size
    acceptance(8, ok, f"{n} trials: {fn} false negatives; false positives {fp} "
                      f"(rate {fp / n:.2e}, 95% upper {hi:.2e} vs 1/|U|={1 / universe_size:.4f})")
    assert ok


# -- criterion 9 ----------------------------------------------------------------


def _or_tree(s, d, counter):
    """All-OR formula with ``s`` leaves and depth ``d``: balanced at minimum depth, else a left spine."""
    if s == 1:
        counter[0] += 1
        k = counter[0]
        return Leaf("a" if k % 2 else "b", (k + 1) // 2)
    if d == (s - 1).bit_length():
        left = (s + 1) // 2
        return Or(_or_tree(left, (left - 1).bit_length(), counter), _or_tree(s - left, (s - left - 1).bit_length(), counter))
    return Or(_or_tree(s - 1, d - 1, counter), _or_tree(1, 0, counter))


def _sweep_instance(s, d, n, m=2):
    F = _or_tree(s, d, [0])
    check_formula(F)
    assert leaf_count(F) == s and formula_depth(F) == d
    ka, kb = arity(F)
    A = [format(i % 2**ka, f"0{ka}b") for i in range(n)]
    B = [format((i + 1) % 2**kb, f"0{kb}b") for i in range(m)]
    return FormulaPairInstance(F, A, B)


SWEEP = [(s, d) for s in (4, 8, 16) for d in (2, 3, 4) if (s - 1).bit_length() <= d <= s - 1]


def test_criterion_09_size_growth(acceptance):
    tlen, opoc = {}, {}
    for s, d in SWEEP:
        for n in (2, 4):
            tlen[s, d, n] = len(build_reduction(_sweep_instance(s, d, n), CPC, "matching").text)
        ri = build_reduction(_sweep_instance(s, d, 2), OPOC, "membership")
        opoc[s, d] = (ri.meta["text_len"], ri.meta["max_word_len"])
    notes, ok = [], True
    # depth: growth factor per unit depth at fixed s
    ratios = [tlen[s, d + 1, 2] / tlen[s, d, 2] for s, d in SWEEP if (s, d + 1) in SWEEP]
    ok &= all(r <= 5.5 for r in ratios)
    notes.append("depth factors " + ",".join(f"{r:.2f}" for r in ratios))
    # n: doubling n doubles |t|
    nr = [tlen[s, d, 4] / (2 * tlen[s, d, 2]) for s, d in SWEEP]
    ok &= all(abs(r - 1) <= 0.25 for r in nr)
    notes.append(f"n-linearity {min(nr):.2f}..{max(nr):.2f}")

    # s log s: normalized constant on balanced formulas (every leaf at depth d)
    def K(s, d):
        return tlen[s, d, 2] / (2 * 5**d * s * bin_width(s))

    balanced = [(s, d) for s, d in SWEEP if d == (s - 1).bit_length()]
    kb = [K(s, d) for s, d in balanced]
    mean = sum(kb) / len(kb)
    ok &= all(abs(k / mean - 1) <= 0.25 for k in kb)
    ok &= all(K(s, d) <= 1.25 * mean for s, d in SWEEP)
    notes.append(f"K(balanced) {min(kb):.1f}..{max(kb):.1f}")
    # |+|∘: text ~ n s d log s, words ~ d log s
    kt = [opoc[s, d][0] / (2 * s * d * bin_width(s)) for s, d in SWEEP]
    kw = [opoc[s, d][1] / (d * bin_width(s)) for s, d in SWEEP]
    for name, ks in (("K'", kt), ("K''", kw)):
        m = sum(ks) / len(ks)
        ok &= all(abs(k / m - 1) <= 0.25 for k in ks)
        notes.append(f"{name} {min(ks):.1f}..{max(ks):.1f}")
    acceptance(9, ok, "; ".join(notes))
    assert ok


# -- criterion 10 ---------------------------------------------------------------


def test_criterion_10_batch_ov_benchmark(acceptance):
    row = bench.bench_batch_ov(4096, 4096, 512, seed=0)
    fastest = row.get("cython_s", row.get("python_s"))
    speedup = row["scalar_s"] / max(fastest, 1e-9)
    # informational: recorded, never gating
    acceptance(10, speedup >= 10, f"scalar {row['scalar_s']:.3f}s, word-packed {fastest:.3f}s, "
                                  f"speedup {speedup:.1f}x (report only)")
