from __future__ import annotations

import pytest

from dadw import (
    Element,
    Emptiness,
    GroupSpec,
    InputError,
    Pattern,
    QuotientElement,
    ResolutionError,
    SpacePresentation,
    SubstitutionOracle,
    Trilean,
    Z_KIND,
    identity_factor_map,
    level_collapse,
    letter_code_map,
    modulus_level,
    quotient_system,
)
from dadw.spaces import CoverStatus


def elt(space, k, eps=1):
    return space.group.element(space.group.h_group.identity, QuotientElement(eps, k))


def test_corpus_presentations_validate(binary, dihedral, fibonacci, thue_morse, product):
    for space in (binary, dihedral, fibonacci, thue_morse, product):
        space.validate()


def test_odometer_clopen_algebra(binary):
    U = binary.coset(3, {0})
    V = binary.coset(3, {1, 2})
    both = binary.union([U, V])
    assert sorted(binary.canonical(both).states) == [0, 1, 2]
    assert binary.is_empty(binary.intersect([U, V])) is Emptiness.EMPTY
    comp = binary.complement(U)
    assert binary.sets_equal(binary.union([U, comp]), binary.whole()) is Trilean.YES
    assert binary.is_empty(binary.intersect([U, comp])) is Emptiness.EMPTY
    assert binary.subset_status(U, both) is Trilean.YES
    assert binary.subset_status(V, U) is Trilean.NO


def test_odometer_canonical_reduces_levels(binary):
    # a deep description of a shallow set falls back to the shallow level
    deep = binary.coset(4, {0, 8})
    shallow = binary.coset(3, {0})
    assert binary.sets_equal(deep, shallow) is Trilean.YES
    assert binary.canonical(deep).level == 3


def test_odometer_translate_and_phi(binary):
    U = binary.coset(3, {0})
    assert binary.phi(3, elt(binary, 1)) == 1
    assert binary.phi(3, elt(binary, 8)) == 0
    moved = binary.translate(elt(binary, 1), U)
    assert binary.sets_equal(moved, binary.coset(3, {1})) is Trilean.YES
    back = binary.translate(elt(binary, -1), moved)
    assert binary.sets_equal(back, U) is Trilean.YES


def test_odometer_lift(binary):
    U = binary.coset(2, {0})
    lifted = binary.lift(U, 3)
    assert lifted.level == 3
    assert sorted(lifted.states) == [0, 4]


def test_odometer_member(binary):
    U = binary.coset(3, {0})
    assert binary.member((0, 0, 0), U)
    assert not binary.member((1, 1, 1), U)
    with pytest.raises(ResolutionError):
        binary.member((0,), U)
    with pytest.raises(InputError):
        binary.member((0, 3), U)  # 3 does not project to 0 mod 2


def test_odometer_covers_space(binary):
    U = binary.coset(3, {0})
    ball4 = [elt(binary, k) for k in range(-4, 5)]
    assert binary.covers_space(ball4, U).status is CoverStatus.COVERED
    ball3 = [elt(binary, k) for k in range(-3, 4)]
    res = binary.covers_space(ball3, U)
    assert res.status is CoverStatus.NOT_COVERED
    assert res.witness is not None


def test_subshift_cylinder_and_translate(fibonacci):
    C = fibonacci.cylinder(Pattern.from_word(0, "ab"))
    moved = fibonacci.translate(elt(fibonacci, 1), C)
    assert fibonacci.sets_equal(
        moved, fibonacci.cylinder(Pattern.from_word(1, "ab"))
    ) is Trilean.YES


def test_subshift_reflection_translate(thue_morse):
    C = thue_morse.cylinder(Pattern.from_word(0, "ab"))
    s = thue_morse.group.element(0, QuotientElement(-1, 0))
    moved = thue_morse.translate(s, C)
    # x -> -x sends the window [0, 1] to [-1, 0] and reverses the word
    assert thue_morse.sets_equal(
        moved, thue_morse.cylinder(Pattern.from_word(-1, "ba"))
    ) is Trilean.YES


def test_subshift_complement_partitions(fibonacci):
    C = fibonacci.cylinder(Pattern.from_word(0, "aab"))
    comp = fibonacci.complement(C)
    assert fibonacci.sets_equal(fibonacci.union([C, comp]), fibonacci.whole()) is Trilean.YES
    assert fibonacci.is_empty(fibonacci.intersect([C, comp])) is Emptiness.EMPTY


def test_subshift_forbidden_cylinder_is_empty(fibonacci):
    C = fibonacci.cylinder(Pattern.from_word(0, "bb"))
    assert fibonacci.is_empty(C) is Emptiness.EMPTY
    assert fibonacci.sets_equal(C, fibonacci.empty()) is Trilean.YES


def test_subshift_member(fibonacci):
    C = fibonacci.cylinder(Pattern.from_word(0, "ab"))
    assert fibonacci.member(Pattern.from_word(0, "abaab"), C)
    assert not fibonacci.member(Pattern.from_word(-2, "aabaa"), C)
    with pytest.raises(ResolutionError):
        fibonacci.member(Pattern.from_word(1, "ba"), C)


def test_small_budget_leaves_unknowns():
    tiny = SubstitutionOracle(("a", "b"), {"a": "ab", "b": "a"}, "a", 3)
    space = SpacePresentation.subshift(GroupSpec(Z_KIND), tiny)
    C = space.cylinder(Pattern.from_word(0, "abaababaabaab"))
    assert space.is_empty(C) is Emptiness.UNKNOWN


def test_space_json_round_trip(binary, fibonacci, product):
    for space in (binary, fibonacci, product):
        back = SpacePresentation.from_json(space.to_json())
        assert back.digest() == space.digest()
        assert back.group == space.group


def test_modulus_level_shorthand():
    spec = GroupSpec(Z_KIND)
    level = modulus_level(spec, 6, 3)
    assert level.group.size == 6
    assert level.gen_images["1"] == 1
    assert level.proj == tuple(i % 3 for i in range(6))


def test_identity_factor_map(binary):
    fmap = identity_factor_map(binary)
    fmap.validate()
    assert fmap.same_group()
    U = binary.coset(3, {0})
    assert binary.sets_equal(fmap.pull_back(U), U) is Trilean.YES


def test_level_collapse(binary):
    fmap = level_collapse(binary, 2)
    fmap.validate()
    assert len(fmap.dst.levels) - 1 == 2
    down = fmap.dst.coset(2, {0})
    up = fmap.pull_back(down)
    assert binary.sets_equal(up, binary.coset(2, {0})) is Trilean.YES


def test_quotient_system_collapses_h(product):
    fmap = quotient_system(product, {0, 1})
    fmap.validate()
    assert fmap.dst.group.h_group.size == 1
    g = product.group.element(1, QuotientElement(1, 2))
    assert fmap.map_element(g).h == 0
    assert fmap.map_element(g).q.k == 2
    whole_up = fmap.pull_back(fmap.dst.whole())
    assert product.sets_equal(whole_up, product.whole()) is Trilean.YES


def test_letter_code_map(thue_morse):
    other = SpacePresentation.subshift(
        thue_morse.group,
        SubstitutionOracle(("0", "1"), {"0": "01", "1": "10"}, "0", 12),
    )
    fmap = letter_code_map(thue_morse, other, {"a": "0", "b": "1"})
    fmap.validate()
    down = other.cylinder(Pattern.from_word(0, "01"))
    up = fmap.pull_back(down)
    assert thue_morse.sets_equal(
        up, thue_morse.cylinder(Pattern.from_word(0, "ab"))
    ) is Trilean.YES
