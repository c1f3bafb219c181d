import random
from fractions import Fraction

import pytest

from blocktilt.errors import NotIntegral, ParseError, ScopeTooSmall, TypeMismatch
from blocktilt.lie_data import (
    LieType,
    Root,
    Weight,
    coroot_pairing,
    pair,
    positive_roots,
    rho_pairing,
    shifted,
    simple_roots,
)
from blocktilt.weyl import (
    CoxeterDescriptor,
    StandardGroup,
    WeylElement,
    act,
    antidominant_representative,
    block_members,
    coxeter_isomorphic,
    dot,
    dot_stabilizer,
    facet_scope,
    facet_signature,
    integral_subsystem,
    longest_element,
    natural_reduction,
    reflection,
    same_block,
    same_facet,
)

A, B, C, D = LieType.A, LieType.B, LieType.C, LieType.D


def _random_element(rng, t, level, steps=6):
    gens = [reflection(alpha) for alpha in simple_roots(t, level)]
    w = WeylElement.identity(t)
    for _ in range(steps):
        w = w * rng.choice(gens)
    return w


def test_reflections_act_on_coordinates():
    assert act(reflection(Root(A, "diff", 1, 2)), Weight.of(A, [3, 1])) == Weight.of(A, [1, 3])
    assert act(reflection(Root(B, "short", 1)), Weight.of(B, [2])) == Weight.of(B, [-2])
    assert act(reflection(Root(D, "sum", 2, 1)), Weight.of(D, [1, 0])) == Weight.of(D, [0, -1])


def test_dot_action_rank_one():
    s = reflection(Root(A, "diff", 1, 2))
    assert dot(s, Weight.zero(A)) == Weight.of(A, [-1, 1])
    assert dot(s, Weight.of(A, [-1, 1])) == Weight.zero(A)


@pytest.mark.parametrize("t", [A, B, C, D])
def test_dot_is_a_group_action(t):
    rng = random.Random(11)
    for _ in range(20):
        u = _random_element(rng, t, 4)
        w = _random_element(rng, t, 4)
        lam = Weight.of(t, [rng.randint(-3, 3) for _ in range(4)])
        assert dot(u * w, lam) == dot(u, dot(w, lam))
        assert dot(w.inverse(), dot(w, lam)) == lam


def test_weyl_element_validation():
    with pytest.raises(ValueError):
        WeylElement(D, (), frozenset({1}))
    with pytest.raises(ValueError):
        WeylElement(A, (1, 2), frozenset({2}))
    with pytest.raises(TypeMismatch):
        _ = WeylElement.identity(A) * WeylElement.identity(B)
    assert WeylElement(A, (1, 2, 3)) == WeylElement.identity(A)
    assert reflection(Root(A, "diff", 1, 3)).length() == 3


@pytest.mark.parametrize("t,level", [(A, 2), (A, 4), (B, 3), (C, 3), (D, 2), (D, 3), (D, 4)])
def test_longest_element_length(t, level):
    assert longest_element(t, level).length() == len(positive_roots(t, level))


def test_standard_group_words():
    g = StandardGroup(A, 3)
    assert len(g.elements()) == g.order == 6
    assert g.reduced_word(g.longest()) == (1, 2, 1)
    assert g.reduced_word(g.from_word((2, 1, 2))) == (1, 2, 1)
    assert len(StandardGroup(B, 2).elements()) == 8
    assert len(StandardGroup(D, 3).elements()) == 24


def test_same_block():
    lam = Weight.zero(A)
    assert same_block(lam, Weight.of(A, [-1, 1]))
    assert not same_block(lam, Weight.of(A, [-2, 2]))
    assert not same_block(lam, Weight.of(A, ["1/2", "-1/2"]))
    with pytest.raises(TypeMismatch):
        same_block(lam, Weight.zero(B))


def test_same_block_for_signed_types():
    assert same_block(Weight.zero(B), Weight.of(B, [-1]))
    assert not same_block(Weight.zero(B), Weight.of(B, [1]))
    assert same_block(Weight.zero(C), Weight.of(C, [-2]))
    assert not same_block(Weight.zero(C), Weight.of(C, [1]))
    assert same_block(Weight.zero(D), Weight.of(D, [-1, -1]))
    assert not same_block(Weight.zero(D), Weight.of(D, [1, 1]))


@pytest.mark.parametrize("t", [A, B, C, D])
def test_same_block_is_an_equivalence(t):
    rng = random.Random(23)
    base = [Weight.of(t, [rng.randint(-2, 2) for _ in range(3)]) for _ in range(3)]
    linked = [dot(_random_element(rng, t, 4), lam) for lam in base]
    sample = base + linked + [Weight.of(t, ["1/2", "1/2", "-1/2"])]
    for lam, mu in zip(base, linked):
        assert same_block(lam, mu)
    for a in sample:
        assert same_block(a, a)
        for b in sample:
            assert same_block(a, b) == same_block(b, a)
            if not same_block(a, b):
                continue
            for c in sample:
                if same_block(b, c):
                    assert same_block(a, c)


def test_integral_subsystem_of_half_integral_weight():
    lam = Weight.of(A, ["1/2", 0, "1/2", 0])
    sub = integral_subsystem(lam, 4)
    assert set(sub.positive) == {Root(A, "diff", 1, 3), Root(A, "diff", 2, 4)}
    assert set(sub.simple) == set(sub.positive)
    assert sub.descriptor.components == (("A", 1), ("A", 1))
    assert str(sub.descriptor) == "A1xA1+A_inf"


def test_integral_subsystem_type_c_half_class_is_type_d():
    lam = Weight.of(C, ["1/2", "1/2", 0])
    sub = integral_subsystem(lam, 3)
    letters = {(c.letter, c.indices) for c in sub.components}
    assert (D, (1, 2)) in letters


def test_integral_subsystem_needs_scope():
    with pytest.raises(ScopeTooSmall):
        integral_subsystem(Weight.of(A, [0, 0, 1]), 2)


def test_natural_reduction_splits_components():
    lam = Weight.of(A, ["1/2", 0, "1/2", 0])
    parts = natural_reduction(lam, 4)
    assert [c.indices for c, _ in parts] == [(1, 3), (2, 4)]
    assert parts[0][1] == Weight.of(A, ["1/2", "-1/2"])
    assert parts[1][1] == Weight.of(A, [-1, -2])


def test_facet_signature_and_same_facet():
    lam = Weight.zero(A)
    sig = facet_signature(lam, 2)
    assert sig.as_dict() == {Root(A, "diff", 1, 2): "+"}
    assert not same_facet(lam, Weight.of(A, [-1, 1]))
    assert same_facet(Weight.of(A, [2, 0]), Weight.of(A, [1, 1]))
    assert facet_signature(Weight.of(A, [-1, 0]), 2).counts() == {"+": 0, "0": 1, "-": 0}


@pytest.mark.parametrize(
    "lam",
    [
        Weight.of(A, [-1, 0, 0]),
        Weight.of(A, [-2, -1]),
        Weight.of(A, [-2, -1, 0, 1]),
        Weight.of(B, ["-1/2", 1]),
        Weight.of(C, [-1, 0, 1]),
        Weight.of(D, [0, -1]),
        Weight.of(D, [0, -1, "1/2"]),
    ],
)
def test_facet_signature_is_fixed_by_the_stabilizer(lam):
    rng = random.Random(31)
    t = lam.lie_type
    scope = facet_scope(lam)
    walls = [reflection(alpha) for alpha in dot_stabilizer(lam, scope)]
    assert walls
    before = facet_signature(lam, scope)
    for _ in range(6):
        w = WeylElement.identity(t)
        for _ in range(rng.randint(1, 3)):
            w = w * rng.choice(walls)
        assert dot(w, lam) == lam
        assert facet_signature(dot(w, lam), scope) == before


@pytest.mark.parametrize("t", [A, B, C, D])
def test_tail_roots_pair_like_rho(t):
    rng = random.Random(29)
    level = 8
    for _ in range(10):
        lam = Weight.of(t, [Fraction(rng.randint(-6, 6), 2) for _ in range(3)])
        v = shifted(lam, level)
        for alpha in positive_roots(t, level):
            if min(alpha.i, alpha.j or alpha.i) <= lam.support:
                continue
            assert coroot_pairing(lam, alpha) == 0
            assert pair(v, alpha) == rho_pairing(t, alpha)
            assert pair(v, alpha) > 0


def test_antidominant_representative_rank_one():
    xi, w = antidominant_representative(Weight.zero(A), 2)
    assert xi == Weight.of(A, [-1, 1])
    assert w == reflection(Root(A, "diff", 1, 2))
    assert dot(w, xi) == Weight.zero(A)


@pytest.mark.parametrize("t", [A, B, D])
def test_antidominant_representative_is_minimal(t):
    rng = random.Random(5)
    level = 3
    for _ in range(25):
        lam = Weight.of(t, [rng.randint(-3, 3) for _ in range(level)])
        xi, w = antidominant_representative(lam, level)
        v0 = shifted(xi, level)
        assert all(pair(v0, alpha) <= 0 for alpha in simple_roots(t, level))
        assert dot(w, xi) == lam
        v = shifted(lam, level)
        assert w.length() == sum(1 for alpha in positive_roots(t, level) if pair(v, alpha) > 0)


def test_antidominant_representative_rejects_nonintegral():
    with pytest.raises(NotIntegral):
        antidominant_representative(Weight.of(A, ["1/2"]), 2)


def test_dot_stabilizer_matches_brute_force():
    lam = Weight.of(A, [-1, 0, 0])
    assert dot_stabilizer(lam, 3) == [Root(A, "diff", 1, 2)]
    v = shifted(lam, 3)
    group = StandardGroup(A, 3)
    assert sum(1 for g in group.elements() if group.act(g, v) == v) == 2

    lam_b = Weight.of(B, ["-1/2"])
    assert dot_stabilizer(lam_b, 2) == [Root(B, "short", 1)]
    vb = shifted(lam_b, 2)
    gb = StandardGroup(B, 2)
    assert sum(1 for g in gb.elements() if gb.act(g, vb) == vb) == 2
    assert dot_stabilizer(Weight.zero(A), 3) == []


def test_block_members_sorted_top_first():
    members = block_members(Weight.zero(A), 3)
    assert len(members) == 6
    assert members[0] == Weight.zero(A)
    assert len(block_members(Weight.zero(B), 2)) == 8
    assert all(same_block(Weight.zero(B), m) for m in block_members(Weight.zero(B), 2))


def test_coxeter_isomorphism():
    parse = CoxeterDescriptor.parse
    assert coxeter_isomorphic(parse("B2"), parse("C2"))
    assert coxeter_isomorphic(parse("D3"), parse("A3"))
    assert coxeter_isomorphic(parse("D2"), parse("A1xA1"))
    assert coxeter_isomorphic(parse("B1xA2"), parse("A2xA1"))
    assert not coxeter_isomorphic(parse("A2"), parse("A1xA1"))
    assert not coxeter_isomorphic(parse("B3"), parse("A3"))
    assert parse("A1xA1+A_inf").tail == "A"
    with pytest.raises(ParseError):
        parse("Z2")


def test_pairing_uses_fractions():
    assert pair(shifted(Weight.of(B, ["1/2"]), 1), Root(B, "short", 1)) == Fraction(2)
