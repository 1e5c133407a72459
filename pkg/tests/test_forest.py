import numpy as np
import pytest

from tedk._naive import naive_positions
from tedk.errors import LabelMismatchError, ParseError, UnbalancedError
from tedk.forest import (CLOSE, OPEN, LabeledForest, LabelInterner,
                         parse_json_text, parse_paren_text, serialize_json,
                         serialize_paren)
from tedk.generate import alphabet, random_forest

from conftest import forest


def test_parse_single_node(interner):
    F = forest("(a)", interner)
    assert F.n == 1
    assert interner.text(int(F.labels[0])) == "a"


def test_parse_children_order(interner):
    F = forest("(a(b)(c))", interner)
    assert F.n == 3
    assert [interner.text(int(s)) for s in F.labels] == ["a", "b", "c"]
    assert F.parent.tolist() == [-1, 0, 0]


def test_parse_unbalanced(interner):
    with pytest.raises(UnbalancedError):
        forest("(a))", interner)
    with pytest.raises(UnbalancedError):
        forest("(a", interner)
    with pytest.raises(ParseError):
        forest("(a(b) x)", interner)


def test_label_mismatch_from_codes(interner):
    a = interner.intern("a")
    b = interner.intern("b")
    with pytest.raises(LabelMismatchError):
        LabeledForest.from_codes(np.array([a << 1, (b << 1) | 1]))


def test_paren_seq_empty_and_single(interner):
    assert len(forest("", interner).paren()) == 0
    F = forest("(a)", interner)
    seq = F.paren()
    assert seq.sides.tolist() == [OPEN, CLOSE]
    assert seq.symbols.tolist() == [interner.intern("a")] * 2


def test_paren_positions_example(interner):
    F = forest("(a(b)(c))", interner)
    assert F.o.tolist() == [0, 1, 3]
    assert F.c.tolist() == [5, 2, 4]
    assert len(F.paren()) == 2 * F.n


def test_position_index_examples(interner):
    F = forest("(a(b))", interner)
    assert F.position_index().D.tolist() == [0, 1, 1, 0]
    G = forest("(a)(b)", interner)
    assert G.o[1] == 2 and G.c[1] == 3
    assert G.position_index().D.tolist() == [0, 0, 0, 0]


def test_positions_match_recursive_oracle(interner, rng):
    syms = alphabet(interner, 3)
    for _ in range(25):
        F = random_forest(rng, int(rng.integers(0, 40)), 5, syms)
        o, c, depth = naive_positions(F)
        assert F.o.tolist() == o
        assert F.c.tolist() == c
        assert F.depth.tolist() == depth


def test_height_examples(interner):
    assert forest("", interner).height() == 0
    assert forest("(a)(b)(c)", interner).height() == 1
    assert forest("(a(b(c)))", interner).height() == 3


def test_subtree_trimmed(interner):
    F = forest("(a(b(c))(e))", interner)
    one = F.subtree_trimmed(0, 1)
    assert one.n == 1 and one.labels[0] == interner.intern("a")
    full = F.subtree_trimmed(0, 10)
    assert full == F
    two = F.subtree_trimmed(0, 2)
    assert serialize_paren(two, interner) == "(a(b)(e))"


def test_round_trip_and_bijection(interner, rng):
    syms = alphabet(interner, 4)
    for _ in range(25):
        F = random_forest(rng, int(rng.integers(0, 60)), 6, syms)
        text = serialize_paren(F, interner)
        again = parse_paren_text(text, interner)
        assert again == F
        assert serialize_paren(again, interner) == text
        seq = F.paren()
        assert (seq.sides[F.o] == OPEN).all()
        assert (seq.sides[F.c] == CLOSE).all()
        assert (seq.symbols[F.o] == seq.symbols[F.c]).all()


def test_intervals_are_laminar(interner, rng):
    syms = alphabet(interner, 2)
    F = random_forest(rng, 40, 6, syms)
    for u in range(F.n):
        for v in range(u + 1, F.n):
            a = (int(F.o[u]), int(F.c[u]))
            b = (int(F.o[v]), int(F.c[v]))
            nested = (a[0] < b[0] and b[1] < a[1]) or (b[0] < a[0] and a[1] < b[1])
            disjoint = a[1] < b[0] or b[1] < a[0]
            assert nested or disjoint


def test_json_round_trip(interner, rng):
    syms = alphabet(interner, 3)
    for _ in range(10):
        F = random_forest(rng, int(rng.integers(0, 30)), 5, syms)
        text = serialize_json(F, interner)
        again = parse_json_text(text, interner)
        assert again == F
    with pytest.raises(ParseError):
        parse_json_text('{"label": "a"}', interner)


def test_children_and_roots(interner):
    F = forest("(a(b)(c))(d)", interner)
    assert F.roots.tolist() == [0, 3]
    assert F.children(0).tolist() == [1, 2]
    assert F.children(1).tolist() == []
    assert F.subtree_end.tolist() == [3, 2, 3, 4]


def test_validate_ok(interner, rng):
    syms = alphabet(interner, 2)
    F = random_forest(rng, 30, 4, syms)
    F.validate()


def test_interner_injective():
    it = LabelInterner()
    a1 = it.intern("x")
    a2 = it.intern("x")
    b = it.intern("y")
    assert a1 == a2 != b
    fresh = it.fresh("sep")
    assert "$" in it.text(fresh)
    blk = it.fresh_block(3, "gad")
    assert [it.text(blk + i).startswith("$gad") for i in range(3)] == [True] * 3
