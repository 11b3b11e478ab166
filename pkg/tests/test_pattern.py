import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from homre.pattern import (
    Alt, Concat, Plus, Problem, Star, Symbol, PatternSyntaxError, classify, depth, fits_type,
    is_simplified, parse_pattern, parse_type, render_pattern, simplify_type, size, type_to_ascii,
)

from strategies import patterns


# -- parsing and rendering ----------------------------------------------------


def test_parse_plus_concat():
    assert parse_pattern("0+11+") == Concat((Plus(Symbol("0")), Symbol("1"), Plus(Symbol("1"))))


def test_parse_single_symbol():
    assert parse_pattern("a") == Symbol("a")


def test_parse_nested_example():
    p = parse_pattern("((abc|c)(a|dc)c(db|c|bd))+")
    assert isinstance(p, Plus)
    assert isinstance(p.child, Concat)
    assert [type(c) for c in p.child.children] == [Alt, Alt, Symbol, Alt]


def test_precedence_and_whitespace():
    assert parse_pattern("a b | c") == Alt((Concat((Symbol("a"), Symbol("b"))), Symbol("c")))
    assert parse_pattern("ab*") == Concat((Symbol("a"), Star(Symbol("b"))))
    assert parse_pattern("(ab)*") == Star(Concat((Symbol("a"), Symbol("b"))))


def test_escapes():
    p = parse_pattern(r"\(\+\\")
    assert p == Concat((Symbol("("), Symbol("+"), Symbol("\\")))
    assert parse_pattern(render_pattern(p)) == p


def test_unary_alternative_round_trip():
    p = Concat((Alt((Symbol("0"),)), Alt((Symbol("1"), Symbol("0")))))
    src = render_pattern(p)
    assert parse_pattern(src) == p
    # a plain group is just grouping
    assert parse_pattern("(x)") == Symbol("x")


@pytest.mark.parametrize("src", ["", "   ", "(", "a)", "a||b", "+a", "(ab", "a**b(", "\\"])
def test_syntax_errors(src):
    with pytest.raises(PatternSyntaxError) as info:
        parse_pattern(src)
    assert info.value.offset >= 0


def test_error_offset_points_at_problem():
    with pytest.raises(PatternSyntaxError) as info:
        parse_pattern("ab)c")
    assert info.value.offset == 2


def test_render_examples():
    assert render_pattern(Plus(Symbol("0"))) == "0+"
    assert render_pattern(parse_pattern("0+11+")) == "0+11+"


@given(patterns("abc", max_leaves=10))
def test_round_trip_property(p):
    assert parse_pattern(render_pattern(p)) == p


def test_round_trip_many_seeded():
    rng = random.Random(7)

    def gen(d):
        r = rng.random()
        if d == 0 or r < 0.3:
            return Symbol(rng.choice("ab|+*( )\\x"))
        if r < 0.5:
            return Concat(tuple(gen(d - 1) for _ in range(rng.randint(2, 3))))
        if r < 0.75:
            return Alt(tuple(gen(d - 1) for _ in range(rng.randint(1, 3))))
        return (Plus if rng.random() < 0.5 else Star)(gen(d - 1))

    for _ in range(10_000):
        p = gen(4)
        assert parse_pattern(render_pattern(p)) == p


# -- classification -----------------------------------------------------------


def _levels(p, k=0, acc=None):
    """Independent recursive scan: operation kinds per level."""
    acc = {} if acc is None else acc
    op = {Concat: "∘", Alt: "|", Plus: "+", Star: "⋆"}.get(type(p))
    if op is None:
        return acc
    acc.setdefault(k, set()).add(op)
    kids = p.children if isinstance(p, (Concat, Alt)) else (p.child,)
    for c in kids:
        _levels(c, k + 1, acc)
    return acc


def _height(p):
    if isinstance(p, Symbol):
        return 0
    kids = p.children if isinstance(p, (Concat, Alt)) else (p.child,)
    return 1 + max(_height(c) for c in kids)


def _count(p):
    if isinstance(p, Symbol):
        return 1
    kids = p.children if isinstance(p, (Concat, Alt)) else (p.child,)
    return 1 + sum(_count(c) for c in kids)


def test_classify_nested_example():
    c = classify(parse_pattern("((abc|c)(a|dc)c(db|c|bd))+"))
    assert c.homogeneous and c.type == "+∘|∘" and c.depth == 4
    assert c.ascii_type == "pcoc"


def test_classify_symbol():
    c = classify(parse_pattern("a"))
    assert c.homogeneous and c.type == "" and c.depth == 0 and c.size == 1


def test_classify_mixed_level():
    assert not classify(parse_pattern("(ab)|c+")).homogeneous


def test_unary_alt_counts_as_alternative():
    c = classify(Concat((Alt((Symbol("0"),)), Alt((Symbol("1"), Symbol("0"))))))
    assert c.homogeneous and c.type == "∘|"


@given(patterns("ab", max_leaves=12))
def test_classify_agrees_with_recursive_scan(p):
    c = classify(p)
    levels = _levels(p)
    assert c.homogeneous == all(len(v) == 1 for v in levels.values())
    assert c.depth == _height(p) == depth(p)
    assert c.size == _count(p) == size(p)
    if c.homogeneous:
        assert c.type == "".join(next(iter(levels[k])) for k in sorted(levels))
        assert len(c.type) == c.depth


def test_fits_type_lenient_levels():
    # a+ may stand as one alternative of a |∘+ pattern
    assert fits_type(parse_pattern("a+|bc+"), "|∘+")
    assert not fits_type(parse_pattern("(ab)+"), "|∘+")


# -- type simplification ------------------------------------------------------


def test_simplify_examples():
    assert simplify_type("+∘|", Problem.MATCHING) == "∘|"
    for prob in Problem:
        assert simplify_type("||∘", prob) == "|∘"
    assert simplify_type("+|⋆∘", Problem.MEMBERSHIP) == "+|∘"


def test_simplify_empty_type_for_matching():
    assert simplify_type("+", "matching") == ""


def test_parse_type_ascii():
    assert parse_type("pcoc") == "+∘|∘"
    assert type_to_ascii("∘⋆") == "cs"
    with pytest.raises(ValueError):
        parse_type("cx")


def _no_forbidden(t, prob):
    if any(a == b for a, b in zip(t, t[1:])):
        return False
    if prob is Problem.MATCHING:
        return not t.startswith("+") and not t.startswith("|+")
    if "+|+" in t:
        return False
    k = 0
    while k < len(t) and t[k] in "+|":
        k += 1
    return not (k < len(t) and t[k] == "⋆")


def test_simplify_confluent_and_clean():
    rng = random.Random(11)
    for _ in range(10_000):
        t = "".join(rng.choice("∘|+⋆") for _ in range(rng.randint(0, 12)))
        for prob in Problem:
            fixed = {simplify_type(t, prob, rng=random.Random(rng.random())) for _ in range(4)}
            assert len(fixed) == 1, (t, prob, fixed)
            (res,) = fixed
            assert is_simplified(res, prob)
            assert _no_forbidden(res, prob), (t, prob, res)


@given(st.text(alphabet="∘|+⋆", max_size=8), st.sampled_from(list(Problem)))
def test_simplify_idempotent(t, prob):
    s = simplify_type(t, prob)
    assert simplify_type(s, prob) == s


def test_all_short_types_terminate():
    for k in range(6):
        for letters in itertools.product("∘|+⋆", repeat=k):
            for prob in Problem:
                assert is_simplified(simplify_type("".join(letters), prob), prob)
