from __future__ import annotations

import pytest

from dadw import (
    CapExceeded,
    GroupSpec,
    Inconclusive,
    InputError,
    Pattern,
    QuotientElement,
    SpacePresentation,
    SubstitutionOracle,
    Trilean,
    Z_KIND,
    build_cover,
    compute_f_set,
    equivalence_classes,
    find_marker,
    normalize_E,
    quotient_pullback,
)

from oracles import brute_f_odometer, brute_f_subshift_z


def elt(space, k, eps=1):
    spec = space.group
    return spec.element(spec.h_group.identity, QuotientElement(eps, k))


def ball(space, N):
    return list(space.group.preimage_ball(N))


def cover_for(space, N):
    return build_cover(space, N, find_marker(space, 5 * N))


def test_normalize_e():
    z = GroupSpec(Z_KIND)
    ident = z.element(0, QuotientElement(1, 0))
    assert normalize_E(z, [ident]) == 0
    pair = [z.element(0, QuotientElement(1, -2)), z.element(0, QuotientElement(1, 1))]
    assert normalize_E(z, pair) == 2
    from dadw import DINF_KIND

    d = GroupSpec(DINF_KIND)
    s = d.element(0, QuotientElement(-1, 0))
    ts = d.element(0, QuotientElement(1, 1))
    assert normalize_E(d, [s, ts]) == 2


def test_check_e_rejections(binary):
    U = binary.coset(3, {0})
    with pytest.raises(InputError):
        compute_f_set(binary, U, [elt(binary, 1), elt(binary, -1)], 4)  # no identity
    with pytest.raises(InputError):
        compute_f_set(binary, U, [elt(binary, 0), elt(binary, 1)], 4)  # not symmetric


def test_build_cover_frozen(binary, dihedral):
    cb = cover_for(binary, 1)
    assert sorted(binary.canonical(cb.U0).states) == [0, 1, 7]
    assert sorted(binary.canonical(cb.U1).states) == [2, 3, 4, 5, 6]
    cd = cover_for(dihedral, 1)
    assert sorted(dihedral.canonical(cd.U0).states) == [0, 4, 5]
    assert sorted(dihedral.canonical(cd.U1).states) == [1, 2, 3, 6, 7]


def test_build_cover_partitions(binary, fibonacci):
    for space in (binary, fibonacci):
        cov = cover_for(space, 1)
        assert space.sets_equal(space.union([cov.U0, cov.U1]), space.whole()) is Trilean.YES
        from dadw import Emptiness

        assert space.is_empty(space.intersect([cov.U0, cov.U1])) is Emptiness.EMPTY


def test_build_cover_needs_wide_marker(binary):
    m = find_marker(binary, 5)
    with pytest.raises(InputError):
        build_cover(binary, 2, m)


def test_binary_f_sets_frozen_and_brute_forced(binary):
    cov = cover_for(binary, 1)
    E = ball(binary, 1)
    m = cov.marker
    f0 = compute_f_set(binary, cov.U0, E, 3)
    f1 = compute_f_set(binary, cov.U1, E, 2 * m.M + 1)
    assert f0.exact and f1.exact
    assert sorted(g.q.k for g in f0.elements) == list(range(-2, 3))
    assert sorted(g.q.k for g in f1.elements) == list(range(-4, 5))
    assert f0.cap_used == 2 and f1.cap_used == 4

    level = m.U.level + 2
    max_len = 4 * (2 * m.M + 1)
    for res, U in ((f0, cov.U0), (f1, cov.U1)):
        brute = brute_f_odometer(binary, U, E, level, max_len)
        assert set(res.elements) == set(brute)
        for g in res.elements:
            lifted = frozenset(binary.lift(binary.canonical(res.attain[g]), level).states)
            assert lifted == brute[g]


def test_dihedral_f_sets_frozen_and_brute_forced(dihedral):
    cov = cover_for(dihedral, 1)
    E = ball(dihedral, 1)
    m = cov.marker
    f0 = compute_f_set(dihedral, cov.U0, E, 3)
    f1 = compute_f_set(dihedral, cov.U1, E, 2 * m.M + 1)
    assert f0.exact and f1.exact
    assert {(g.q.eps, g.q.k) for g in f0.elements} == {
        (1, 0), (1, 1), (1, -1), (-1, 0), (-1, 1)
    }
    assert len(f1.elements) == 9
    assert {(g.q.eps, g.q.k) for g in f0.elements} <= {
        (g.q.eps, g.q.k) for g in f1.elements
    }

    level = m.U.level + 2
    for res, U in ((f0, cov.U0), (f1, cov.U1)):
        brute = brute_f_odometer(dihedral, U, E, level, 4 * (2 * m.M + 1))
        assert set(res.elements) == set(brute)
        for g in res.elements:
            lifted = frozenset(dihedral.lift(dihedral.canonical(res.attain[g]), level).states)
            assert lifted == brute[g]


@pytest.mark.parametrize("name,N,n0,c0,n1,c1", [
    ("binary_odometer", 2, 9, 4, 21, 10),
    ("dihedral_odometer", 2, 9, 4, 21, 10),
    ("binary_odometer", 3, 13, 6, 17, 8),
    ("dihedral_odometer", 3, 13, 6, 17, 8),
])
def test_deeper_f_set_sizes_frozen(name, N, n0, c0, n1, c1):
    from dadw import build_system

    space = build_system(name)
    cov = cover_for(space, N)
    E = ball(space, N)
    M = cov.marker.M
    f0 = compute_f_set(space, cov.U0, E, 3 * N)
    f1 = compute_f_set(space, cov.U1, E, 2 * M + N)
    assert f0.exact and f1.exact
    assert (len(f0.elements), f0.cap_used) == (n0, c0)
    assert (len(f1.elements), f1.cap_used) == (n1, c1)
    spec = space.group
    assert all(spec.word_length(g.q) <= 3 * N for g in f0.elements)
    assert all(spec.word_length(g.q) <= 2 * M + N for g in f1.elements)


def test_fibonacci_f_sets_frozen_and_brute_forced(fibonacci):
    cov = cover_for(fibonacci, 1)
    E = ball(fibonacci, 1)
    m = cov.marker
    f0 = compute_f_set(fibonacci, cov.U0, E, 3)
    f1 = compute_f_set(fibonacci, cov.U1, E, 2 * m.M + 1)
    assert f0.exact and f1.exact
    assert sorted(g.q.k for g in f0.elements) == list(range(-2, 3))
    assert sorted(g.q.k for g in f1.elements) == list(range(-9, 10))

    window = 2 * (2 * m.M + 1) + m.U.width
    assert set(f0.elements) == brute_f_subshift_z(fibonacci, cov.U0, E, window)
    assert set(f1.elements) == brute_f_subshift_z(fibonacci, cov.U1, E, window)


def test_thue_morse_f_set_sizes(thue_morse):
    cov = cover_for(thue_morse, 1)
    E = ball(thue_morse, 1)
    M = cov.marker.M
    f0 = compute_f_set(thue_morse, cov.U0, E, 3)
    f1 = compute_f_set(thue_morse, cov.U1, E, 2 * M + 1)
    assert f0.exact and f1.exact
    assert len(f0.elements) == 5
    assert len(f1.elements) == 86


def test_f_set_monotone_in_u(binary):
    E = ball(binary, 1)
    small = binary.coset(3, {0, 1})
    big = binary.coset(3, {0, 1, 2})
    fs = compute_f_set(binary, small, E, 8)
    fb = compute_f_set(binary, big, E, 8)
    assert set(fs.elements) <= set(fb.elements)


def test_f_set_closed_under_inversion(dihedral):
    cov = cover_for(dihedral, 1)
    E = ball(dihedral, 1)
    res = compute_f_set(dihedral, cov.U1, E, 2 * cov.marker.M + 1)
    spec = dihedral.group
    got = set(res.elements)
    assert {spec.inverse(g) for g in got} == got


def test_cap_exceeded(binary):
    U = binary.coset(3, {2, 3, 4, 5, 6})
    with pytest.raises(CapExceeded) as exc:
        compute_f_set(binary, U, ball(binary, 1), 2)
    assert exc.value.cap == 2


def test_unknown_beyond_cap_is_inconclusive():
    tiny = SubstitutionOracle(("a", "b"), {"a": "ab", "b": "a"}, "a", 3)
    space = SpacePresentation.subshift(GroupSpec(Z_KIND), tiny)
    U = space.cylinder(Pattern.from_word(0, "aba"))
    with pytest.raises(Inconclusive):
        compute_f_set(space, U, ball(space, 1), 1)


def test_equivalence_classes_frozen(binary):
    cov = cover_for(binary, 1)
    E = ball(binary, 1)
    r0 = equivalence_classes(binary, cov.U0, E, level=5)
    assert len(r0.samples) == 4
    assert r0.max_class_size == 3
    assert r0.bound == 5
    r1 = equivalence_classes(binary, cov.U1, E, level=5)
    assert len(r1.samples) == 4
    assert r1.max_class_size == 5
    assert r1.bound == 9
    for rep in (r0, r1):
        assert rep.max_class_size <= rep.bound
    r0deep = equivalence_classes(binary, cov.U0, E, level=6)
    r1deep = equivalence_classes(binary, cov.U1, E, level=6)
    assert len(r0deep.samples) == 8
    assert len(r1deep.samples) == 8
    assert r0deep.max_class_size == 3
    assert r1deep.max_class_size == 5


def test_equivalence_classes_trivial_e_gives_singletons(binary, dihedral):
    for space in (binary, dihedral):
        cov = cover_for(space, 1)
        ident = [elt(space, 0)]
        for U in (cov.U0, cov.U1):
            rep = equivalence_classes(space, U, ident, level=5)
            assert rep.max_class_size == 1
            assert rep.bound == 1
            assert all(size == 1 for _, size in rep.samples)


def test_equivalence_classes_subshift(fibonacci):
    cov = cover_for(fibonacci, 1)
    E = ball(fibonacci, 1)
    words, exact = fibonacci.oracle.factors(21)
    assert exact
    points = [Pattern.from_word(-10, w) for w in sorted(words)]
    rep = equivalence_classes(fibonacci, cov.U0, E, points=points)
    assert rep.bound == 5
    assert 1 <= rep.max_class_size <= rep.bound


def test_quotient_pullback_full_h(product):
    rep = quotient_pullback(product, {0, 1}, 1)
    assert rep.contained and rep.equal
    sizes = {
        p["piece"]: (len(p["upstairs"].elements), len(p["downstairs"].elements))
        for p in rep.pieces
    }
    assert sizes == {"U0": (10, 5), "U1": (18, 9)}
    assert all(not p["missing"] for p in rep.pieces)


def test_quotient_pullback_trivial_k(product):
    rep = quotient_pullback(product, {0}, 1)
    assert rep.contained and rep.equal


def test_quotient_pullback_bad_k(product):
    with pytest.raises(InputError):
        quotient_pullback(product, {1}, 1)
    with pytest.raises(InputError):
        quotient_pullback(product, {0, 5}, 1)
