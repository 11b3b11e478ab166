import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homre import nfa
from homre.formula import And, FormulaPairInstance, Leaf, Or, brute_force_pair, random_instance
from homre.pattern import Alt, Concat, Plus, Problem, Star, Symbol, fits_type, size, symbols
from homre.reductions import (
    ALL_TYPES, MATCHING_TYPES, build_matching_cpc, build_reduction, check_change_claim, check_helper,
    encode_gates, instantiate, pattern_changes, read_bundle, symbol_changes, to_membership,
    verify_reduction, write_bundle,
)
from homre.reductions.builders import encode_opoc, subtree_dictionary
from homre.reductions.gadgets import CPC, COC, COP, CPO, CS, OPOC

from strategies import gate_triple_failures

SLOW_MEMBERSHIP = (CPC, COC, COP)


def _bits(k):
    return ["".join(x) for x in itertools.product("01", repeat=k)]


def _walk(p):
    yield p
    for c in getattr(p, "children", ()):
        yield from _walk(c)
    if hasattr(p, "child"):
        yield from _walk(p.child)


def _verdict(ri):
    if ri.problem is Problem.MATCHING:
        return nfa.nfa_match(ri.text, ri.pattern)
    return nfa.nfa_member(ri.text, ri.pattern)


# -- gate gadgets -------------------------------------------------------------


@pytest.mark.parametrize("kind", [CPC, CS, CPO])
def test_input_gadget_a_leaf(kind):
    g = encode_gates(Leaf("a", 1), kind)[()]
    assert g.u == "0011"
    assert g.t_of("1") == "011" and g.t_of("0") == "001"
    p = g.p_of("")
    assert nfa.nfa_member("011", p) and not nfa.nfa_member("001", p)


def test_input_gadget_b_leaf():
    g = encode_gates(Leaf("b", 1), CPC)[()]
    t, u, q, p1 = instantiate(encode_gates(Leaf("b", 1), CPC), (), "", "1")
    assert t == "011" and nfa.nfa_member(t, p1)
    assert not nfa.nfa_member(t, g.p_of("0"))
    assert nfa.nfa_member(u, q) and nfa.nfa_member(u, p1)


def test_instantiate_missing_value():
    with pytest.raises(ValueError):
        instantiate(encode_gates(Leaf("a", 2), CPC), (), "1", "")


@pytest.mark.parametrize("kind", MATCHING_TYPES)
def test_gate_triple_small_formulas(kind):
    forms = [
        And(Leaf("a", 1), Leaf("b", 1)),
        Or(Leaf("a", 1), Leaf("b", 1)),
        Or(And(Leaf("a", 1), Leaf("b", 1)), Leaf("a", 2)),
        And(Or(Leaf("a", 1), Leaf("b", 1)), Or(Leaf("b", 2), Leaf("a", 2))),
    ]
    for F in forms:
        ka = max((leaf.index for leaf in _leaves(F) if leaf.side == "a"), default=0)
        kb = max((leaf.index for leaf in _leaves(F) if leaf.side == "b"), default=0)
        assert gate_triple_failures(F, kind, _bits(ka), _bits(kb)) == []


def _leaves(F):
    return [x for x in _walk_formula(F) if isinstance(x, Leaf)]


def _walk_formula(F):
    yield F
    if not isinstance(F, Leaf):
        yield from _walk_formula(F.left)
        yield from _walk_formula(F.right)


@pytest.mark.parametrize("kind", MATCHING_TYPES)
def test_gadget_alphabet(kind):
    F = random_instance(6, 3, 1, 1, seed=2).F
    for g in encode_gates(F, kind).values():
        assert set(g.u) <= set("0123")
        assert symbols(g.q_pattern()) <= set("0123")
        assert symbols(g.p_of("0" * 6)) <= set("0123")


def test_coc_gadgets_have_no_repetition():
    F = random_instance(5, 3, 1, 1, seed=4).F
    for g in encode_gates(F, COC).values():
        for part in (g.q_pattern(), g.p_of("1" * 5)):
            assert not any(isinstance(x, (Plus, Star)) for x in _walk(part))


# -- whole reductions ---------------------------------------------------------


def _cases(kind, problem, count, seed0=0):
    small = problem == "membership" and kind in SLOW_MEMBERSHIP
    for seed in range(seed0, seed0 + count):
        rng = random.Random(seed)
        s = rng.randint(1, 2 if small else 4)
        yield random_instance(s, 2, rng.randint(1, 2), rng.randint(1, 2), seed), seed


KIND_PROBLEMS = [(k, "matching") for k in MATCHING_TYPES] + [(k, "membership") for k in ALL_TYPES]


@pytest.mark.parametrize("kind,problem", KIND_PROBLEMS)
def test_end_to_end_small(kind, problem):
    verdicts = set()
    for inst, seed in _cases(kind, problem, 6 if kind in SLOW_MEMBERSHIP and problem == "membership" else 15):
        ri = build_reduction(inst, kind, problem, seed=seed)
        want = brute_force_pair(inst) is not None
        assert _verdict(ri) == want, (seed, inst)
        verdicts.add(want)
        assert fits_type(ri.pattern, kind)
        assert ri.meta["text_len"] == len(ri.text) and ri.meta["pattern_size"] == size(ri.pattern)
    assert verdicts == {True, False}


@pytest.mark.parametrize("kind", MATCHING_TYPES)
def test_matching_alphabet(kind):
    inst = random_instance(4, 2, 2, 2, seed=1)
    ri = build_reduction(inst, kind, "matching")
    allowed = set("0123456")
    assert set(ri.text) <= allowed and symbols(ri.pattern) <= allowed


def test_coc_outer_or_has_no_repetition():
    inst = random_instance(3, 2, 2, 2, seed=3)
    for problem in ("matching", "membership"):
        ri = build_reduction(inst, COC, problem)
        assert not any(isinstance(x, (Plus, Star)) for x in _walk(ri.pattern))


def test_swap_when_more_patterns():
    inst = random_instance(3, 2, 1, 3, seed=5)
    ri = build_reduction(inst, CPC, "matching")
    assert ri.meta["swapped"] == 1 and ri.meta["n"] == 3 and ri.meta["m"] == 1
    assert _verdict(ri) == (brute_force_pair(inst) is not None)


def test_literal_outer_or_misses_last_group():
    inst = FormulaPairInstance(Or(Leaf("a", 1), Leaf("b", 1)), ("0", "1"), ("1",))
    assert brute_force_pair(inst) == (1, 1)
    assert not _verdict(build_matching_cpc(inst, literal=True))
    ri = build_matching_cpc(inst)
    assert ri.meta["pattern_groups"] == 2 and _verdict(ri)


def test_empty_side_rejected():
    inst = FormulaPairInstance(And(Leaf("a", 1), Leaf("b", 1)), ("1",), ())
    with pytest.raises(ValueError):
        build_reduction(inst, CPC, "matching")
    with pytest.raises(ValueError):
        verify_reduction(build_reduction(FormulaPairInstance(inst.F, ("1",), ("1",)), CPC, "matching"), inst)


def test_dispatch_errors():
    inst = random_instance(2, 1, 1, 1, seed=0)
    with pytest.raises(ValueError):
        build_reduction(inst, OPOC, "matching")
    with pytest.raises(ValueError):
        build_reduction(inst, "ppp", "matching")


# -- helper gadgets -----------------------------------------------------------


@pytest.mark.parametrize("kind", [CS, CPO, COP])
def test_helper_checks(kind):
    F = random_instance(4, 2, 1, 1, seed=7).F
    u = encode_gates(F, kind)[()].u
    hc = check_helper(kind, u)
    assert hc.ok and hc.ell == len(u) + 4


# -- matching to membership ---------------------------------------------------


def _random_item(kind, rng, sigma):
    c = rng.choice(sigma)
    word = "".join(rng.choice(sigma) for _ in range(rng.randint(1, 3)))
    if kind == CPC:
        return Plus(Concat(tuple(Symbol(x) for x in word))) if len(word) > 1 else Plus(Symbol(c))
    if kind == COC:
        alts = ["".join(rng.choice(sigma) for _ in range(rng.randint(1, 2))) for _ in range(rng.randint(1, 3))]
        return Alt(tuple(Symbol(w) if len(w) == 1 else Concat(tuple(map(Symbol, w))) for w in alts))
    if kind == CS:
        return Star(Symbol(c)) if rng.random() < 0.5 else Symbol(c)
    if kind == CPO:
        return Plus(Alt(tuple(Symbol(x) for x in sorted(set(word)))))
    return Alt(tuple(Plus(Symbol(x)) if rng.random() < 0.5 else Symbol(x) for x in sorted(set(word))))


@pytest.mark.parametrize("kind", MATCHING_TYPES)
def test_to_membership_preserves_matching(kind):
    rng = random.Random(MATCHING_TYPES.index(kind))
    for _ in range(150):
        sigma = "ab"[: rng.randint(1, 2)] + ("c" if rng.random() < 0.3 else "")
        items = [_random_item(kind, rng, sigma) for _ in range(rng.randint(2, 4))]
        p = Concat(tuple(items))
        t = "".join(rng.choice(sigma) for _ in range(rng.randint(1, 10)))
        t2, p2 = to_membership(t, p, kind)
        assert nfa.nfa_member(t2, p2) == nfa.nfa_match(t, p), (kind, t, p)
        assert fits_type(p2, kind)


def test_to_membership_cpo_example():
    t2, p2 = to_membership("ab", Concat((Plus(Alt((Symbol("a"),))), Symbol("b"))), CPO)
    assert t2 == "aaba"
    assert nfa.nfa_member(t2, p2)


def test_to_membership_cpc_single_symbol():
    t2, p2 = to_membership("aa", Concat((Plus(Symbol("a")), Symbol("a"))), CPC)
    assert len(set(t2)) == 2 and nfa.nfa_member(t2, p2)


def test_to_membership_rejects_unknown():
    with pytest.raises(ValueError):
        to_membership("a", Symbol("a"), OPOC)


# -- symbol changes -----------------------------------------------------------


def test_symbol_changes_examples():
    assert symbol_changes("aaa") == 0
    assert symbol_changes("ab") == 1
    assert symbol_changes("0011") == 1
    assert symbol_changes("") == 0


def _lang_changes(p, max_len):
    best, nullable = None, False
    for k in range(max_len + 1):
        for w in itertools.product("ab", repeat=k):
            w = "".join(w)
            if nfa.nfa_member(w, p):
                best = max(best or 0, symbol_changes(w))
                nullable |= k == 0
    return best, nullable


def _items():
    a, b = Symbol("a"), Symbol("b")
    return st.sampled_from([a, b, Plus(a), Star(b), Alt((a, b)), Concat((a, b)), Alt((a, Concat((a, a))))])


@settings(max_examples=60)
@given(st.lists(_items(), min_size=1, max_size=4))
def test_pattern_changes_against_enumeration(items):
    p = items[0] if len(items) == 1 else Concat(tuple(items))
    prof = pattern_changes(p)
    if prof.unbounded:
        return
    want, nullable = _lang_changes(p, 10)
    assert prof.max_changes == (want or 0)
    assert prof.nullable == nullable


def test_pattern_changes_unbounded():
    assert pattern_changes(Plus(Concat((Symbol("a"), Symbol("b"))))).unbounded
    assert not pattern_changes(Plus(Symbol("a"))).unbounded


def test_change_claim_star_gadgets():
    F = random_instance(5, 3, 1, 1, seed=8).F
    claims = check_change_claim(encode_gates(F, CS), _bits(3))
    assert claims and all(c.ok for c in claims)


# -- bundles and verification -------------------------------------------------


@pytest.mark.parametrize("kind,problem", [(CPC, "matching"), (CS, "membership"), (OPOC, "membership")])
def test_bundle_round_trip_and_verify(tmp_path, kind, problem):
    inst = random_instance(3, 2, 2, 2, seed=11)
    ri = build_reduction(inst, kind, problem, seed=11)
    write_bundle(tmp_path / "case", ri)
    back = read_bundle(tmp_path / "case")
    assert back.text == ri.text and back.pattern == ri.pattern
    assert back.meta["seed"] == 11 and back.type == kind
    rep = verify_reduction(back, inst)
    assert rep.ok and rep.lines()[-1] == "AGREE"


def test_mutations_are_flagged():
    inst = random_instance(3, 2, 2, 2, seed=12)
    ri = build_reduction(inst, CPC, "matching", seed=1)
    rng = random.Random(12)
    flagged = 0
    for _ in range(100):
        k = rng.randrange(len(ri.text))
        c = rng.choice([x for x in "0123" if x != ri.text[k]])
        bad = type(ri)(ri.text[:k] + c + ri.text[k + 1:], ri.pattern, dict(ri.meta))
        rep = verify_reduction(bad, inst)
        flagged += not rep.ok
    assert flagged >= 95


# -- |+|∘ dictionaries --------------------------------------------------------


def test_opoc_dictionary_words():
    inst = random_instance(6, 3, 2, 2, seed=13)
    gadgets = encode_opoc(inst.F)
    for path, gd in gadgets.items():
        assert all(set(w) <= set("012") for w in gd.DS)
        D = subtree_dictionary(gadgets, path, inst.B[0])
        assert D and len(D) == len(set(D))
    ri = build_reduction(inst, OPOC, "membership")
    assert set(ri.text) <= set("0123456")
    assert isinstance(ri.pattern, Alt) and len(ri.pattern.children) == 2
    assert all(isinstance(x, Plus) for x in ri.pattern.children)
