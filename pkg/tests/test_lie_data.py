import random
from fractions import Fraction

import pytest

from blocktilt.errors import IllegalLevel, ShapeMismatch, TypeMismatch
from blocktilt.lie_data import (
    LieType,
    Root,
    Weight,
    check_level,
    coroot_pairing,
    from_offset,
    height,
    offset_of,
    parse_root,
    positive_roots,
    rho_pairing,
    root_lattice_coords,
    shifted,
    simple_roots,
    unshifted,
)

A, B, C, D = LieType.A, LieType.B, LieType.C, LieType.D


def test_weight_prints_trailing_zeros_dropped():
    assert str(Weight.of(A, [3, "1/2", 0, -2])) == "3,1/2,0,-2"
    assert str(Weight.of(A, [1, 0, 0])) == "1"
    assert str(Weight.zero(B)) == "0"
    assert Weight.of(A, [0, 2]).support == 2


def test_weight_arithmetic_checks_type():
    lam = Weight.of(A, [1, 2])
    assert lam - lam == Weight.zero(A)
    assert (lam + Weight.of(A, [0, -2])) == Weight.of(A, [1])
    with pytest.raises(TypeMismatch):
        _ = lam + Weight.of(B, [1])


@pytest.mark.parametrize(
    "t,level,count",
    [(A, 4, 6), (B, 3, 9), (C, 3, 9), (D, 3, 6), (D, 2, 2)],
)
def test_positive_root_counts(t, level, count):
    assert len(positive_roots(t, level)) == count


def test_type_d_needs_level_two():
    with pytest.raises(IllegalLevel):
        check_level(D, 1)
    with pytest.raises(IllegalLevel):
        simple_roots(A, 0)


@pytest.mark.parametrize("t", [A, B, C, D])
def test_simple_roots_grow_by_prefix(t):
    small = simple_roots(t, 3)
    assert simple_roots(t, 4)[: len(small)] == small


@pytest.mark.parametrize("t", [A, B, C, D])
def test_simple_roots_have_unit_coordinates(t):
    for k, alpha in enumerate(simple_roots(t, 4), start=1):
        assert root_lattice_coords(alpha.as_weight()) == {k: 1}
        assert rho_pairing(t, alpha) == 1


@pytest.mark.parametrize("t", [A, B, C, D])
def test_rho_pairing_matches_half_sum_of_positive_roots(t):
    for level in range(t.min_level, 7):
        roots = positive_roots(t, level)
        half = Weight.zero(t)
        for alpha in roots:
            half = half + alpha.as_weight()
        half = half.scale(Fraction(1, 2))
        for alpha in roots:
            assert coroot_pairing(half, alpha) == rho_pairing(t, alpha)


@pytest.mark.parametrize("t", [A, B, C, D])
def test_positive_roots_grow_with_level(t):
    for level in range(t.min_level, 6):
        assert set(positive_roots(t, level)) <= set(positive_roots(t, level + 1))


@pytest.mark.parametrize("t", [A, B, C, D])
def test_coroot_pairing_is_linear(t):
    rng = random.Random(7)
    roots = positive_roots(t, 4)

    def rational():
        return Fraction(rng.randint(-6, 6), rng.randint(1, 4))

    for _ in range(30):
        lam = Weight.of(t, [rational() for _ in range(4)])
        mu = Weight.of(t, [rational() for _ in range(4)])
        c = rational()
        alpha = rng.choice(roots)
        total = coroot_pairing(lam, alpha) + coroot_pairing(mu, alpha)
        assert coroot_pairing(lam + mu, alpha) == total
        assert coroot_pairing(lam.scale(c), alpha) == c * coroot_pairing(lam, alpha)


@pytest.mark.parametrize("t", [A, B, C, D])
def test_root_lattice_coords_round_trip(t):
    rng = random.Random(13)
    for _ in range(30):
        simple = simple_roots(t, rng.randint(max(t.min_level, 2), 5))
        coeffs = [rng.randint(-3, 3) for _ in simple]
        delta = Weight.zero(t)
        for c, alpha in zip(coeffs, simple):
            delta = delta + alpha.as_weight().scale(c)
        expected = {k: c for k, c in enumerate(coeffs, start=1) if c}
        assert root_lattice_coords(delta) == expected


def test_root_lattice_membership():
    assert root_lattice_coords(Weight.of(A, ["1/2"])) is None
    assert root_lattice_coords(Weight.of(A, [1])) is None
    assert root_lattice_coords(Weight.of(A, [1, 0, -1])) == {1: 1, 2: 1}
    assert root_lattice_coords(Weight.of(C, [1])) is None
    assert root_lattice_coords(Weight.of(C, [2])) == {1: 1}
    assert root_lattice_coords(Weight.of(D, [1, 1])) == {1: 1}
    assert root_lattice_coords(Weight.of(D, [-1, 1])) == {2: 1}
    assert root_lattice_coords(Weight.of(D, [1])) is None


def test_height_counts_simple_root_coefficients():
    highest = root_lattice_coords(Weight.of(B, [0, 1, 1]))
    assert highest == {1: 2, 2: 2, 3: 1}
    assert height(highest) == 5
    assert height((1, 0, 2)) == 3
    assert height({}) == 0


@pytest.mark.parametrize("t", [A, B, C, D])
def test_offsets_map_back_to_weights(t):
    beta = (1, 0, 2)
    assert offset_of(from_offset(t, beta)) == beta


def test_parse_root_and_text_form():
    for text in ["e1-e2", "e3+e1", "e2", "2e4"]:
        t = C if text.startswith("2") else B
        assert str(parse_root(t, text)) == text
    assert parse_root(B, "e1+e3") == Root(B, "sum", 3, 1)
    with pytest.raises(ShapeMismatch):
        parse_root(A, "ex-y")


def test_coroot_pairing_checks_shape():
    lam = Weight.of(B, [1, "1/2"])
    assert coroot_pairing(lam, Root(B, "short", 2)) == 1
    assert coroot_pairing(lam, Root(B, "diff", 2, 1)) == Fraction(-1, 2)
    with pytest.raises(ShapeMismatch):
        coroot_pairing(Weight.of(A, [1]), Root(A, "short", 1))


def test_shift_by_rho_is_invertible():
    lam = Weight.of(D, ["1/2", -3, 0, 2])
    assert shifted(Weight.zero(D), 3) == [0, 1, 2]
    assert unshifted(D, shifted(lam, 5)) == lam
