"""Two-set covers, finite transition sets, and the dimension pipeline.

The cover splits the space into the ball-translates of a marker and the
complement.  For each piece the engine computes the finite set of group
elements attainable as partial products of ball elements along orbit
paths that never leave the piece, together with the clopen attainability
set of each element.  The fixpoint is monotone over a finite lattice, so
the result is order-independent; caps on the quotient word length turn a
bound violation into an explicit error instead of a silent overrun.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

from .certificates import DadCertificate, SEARCH_ORDER
from .errors import CapExceeded, Inconclusive, InputError
from .groups import Element, GroupSpec
from .markers import Marker, find_marker
from .spaces import (
    ODOMETER,
    ClopenSet,
    Emptiness,
    Pattern,
    SpacePresentation,
    quotient_system,
)


@dataclass(frozen=True)
class CoverPair:
    N: int
    U0: ClopenSet
    U1: ClopenSet
    marker: Marker


@dataclass(frozen=True, eq=False)
class FSetResult:
    elements: tuple
    attain: dict
    exact: bool
    cap_used: int


@dataclass(frozen=True)
class EquivClassReport:
    samples: tuple
    max_class_size: int
    bound: int


def normalize_E(spec: GroupSpec, E) -> int:
    """Smallest N with every element of E inside the B_N preimage."""
    N = 0
    for g in E:
        spec._check_element(g)
        N = max(N, spec.word_length(spec.quotient_map(g)))
    return N


def _check_E(spec: GroupSpec, E) -> list:
    elements = list(E)
    seen = set(elements)
    if spec.identity not in seen:
        raise InputError("E must contain the identity")
    for g in elements:
        if spec.inverse(g) not in seen:
            raise InputError(f"E must be symmetric; missing the inverse of {g!r}")
    return sorted(seen, key=spec.sort_key)


def build_cover(space: SpacePresentation, N: int, marker: Marker) -> CoverPair:
    if N < 0:
        raise InputError("N must be nonnegative")
    if marker.disjoint_radius < 5 * N:
        raise InputError(
            f"marker radius {marker.disjoint_radius} is below the required {5 * N}"
        )
    translates = [space.translate(g, marker.U) for g in space.group.preimage_ball(N)]
    U0 = space.canonical(space.union(translates))
    U1 = space.canonical(space.complement(U0))
    return CoverPair(N, U0, U1, marker)


def compute_f_set(space: SpacePresentation, U: ClopenSet, E, cap: int) -> FSetResult:
    spec = space.group
    elements = _check_E(spec, E)
    if cap < 0:
        raise InputError("cap must be nonnegative")
    attain: dict = {spec.identity: U}
    inexact = not U.exact
    counter = 0
    heap = [(0, spec.sort_key(spec.identity), counter, spec.identity)]
    queued = {spec.identity}
    while heap:
        _, _, _, g = heapq.heappop(heap)
        queued.discard(g)
        D_g = attain[g]
        for h in elements:
            T = space.intersect([space.translate(h, D_g), U])
            status = space.is_empty(T)
            if status is Emptiness.EMPTY:
                continue
            if status is Emptiness.UNKNOWN:
                inexact = True
            hg = spec.multiply(h, g)
            wl = spec.word_length(spec.quotient_map(hg))
            if wl > cap:
                if status is Emptiness.NONEMPTY:
                    raise CapExceeded(hg, cap)
                raise Inconclusive(
                    f"attainability of {hg!r} beyond cap {cap} is undecided"
                )
            old = attain.get(hg)
            if old is None:
                new = T
            else:
                new = space.union([old, T])
                if space.sets_equal(new, old):
                    continue
            attain[hg] = space.canonical(new)
            if hg not in queued:
                counter += 1
                heapq.heappush(heap, (wl, spec.sort_key(hg), counter, hg))
                queued.add(hg)
    live = {}
    for g in sorted(attain, key=spec.sort_key):
        status = space.is_empty(attain[g])
        if status is Emptiness.NONEMPTY:
            live[g] = attain[g]
        elif status is Emptiness.UNKNOWN:
            live[g] = attain[g]
            inexact = True
    cap_used = max(
        (spec.word_length(spec.quotient_map(g)) for g in live), default=0
    )
    return FSetResult(tuple(live), live, not inexact, cap_used)


def _point_prefix(space: SpacePresentation, level: int, state: int):
    prefix = [0] * level
    prefix[level - 1] = state
    for n in range(level, 1, -1):
        state = space.levels[n].proj[state]
        prefix[n - 2] = state
    return tuple(prefix)


def equivalence_classes(
    space: SpacePresentation,
    U: ClopenSet,
    E,
    level: int | None = None,
    points=None,
    bound: int | None = None,
    cap: int = 64,
) -> EquivClassReport:
    spec = space.group
    elements = _check_E(spec, E)
    if bound is None:
        bound = len(compute_f_set(space, U, E, cap).elements)
    if space.kind == ODOMETER:
        if level is None:
            raise InputError("odometer class reports need a level")
        if not 1 <= level <= space.depth:
            raise InputError(f"no level {level} in a depth-{space.depth} presentation")
        lifted = space.lift(U, level)
        members = sorted(lifted.states)
        G = space.levels[level].group
        parent = {st: st for st in members}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        member_set = set(members)
        for st in members:
            for h in elements:
                img = G.mul(space.phi(level, h), st)
                if img in member_set:
                    ra, rb = find(st), find(img)
                    if ra != rb:
                        parent[rb] = ra
        sizes: dict = {}
        for st in members:
            sizes.setdefault(find(st), []).append(st)
        samples = tuple(
            (_point_prefix(space, level, min(group)), len(group))
            for root, group in sorted(sizes.items(), key=lambda kv: min(kv[1]))
        )
    else:
        if points is None:
            raise InputError("subshift class reports need sample points")
        pts = list(points)
        idx = {}
        members = []
        for pt in pts:
            if space.member(pt, U):
                idx[pt] = len(members)
                members.append(pt)
        parent = list(range(len(members)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i, pt in enumerate(members):
            for h in elements:
                img = _translate_pattern(space, h, pt)
                j = idx.get(img)
                if j is not None:
                    ra, rb = find(i), find(j)
                    if ra != rb:
                        parent[rb] = ra
        sizes = {}
        for i in range(len(members)):
            sizes.setdefault(find(i), []).append(i)
        samples = tuple(
            (members[min(group)], len(group))
            for root, group in sorted(sizes.items(), key=lambda kv: min(kv[1]))
        )
    max_size = max((size for _, size in samples), default=0)
    return EquivClassReport(samples, max_size, bound)


def _translate_pattern(space: SpacePresentation, g: Element, pt: Pattern) -> Pattern:
    q = space.group.quotient_map(g)
    return Pattern(tuple(sorted((q.eps * i + q.k, c) for i, c in pt.cells)))


@dataclass(frozen=True)
class QuotientReport:
    contained: bool
    equal: bool
    pieces: tuple


def quotient_pullback(space: SpacePresentation, K, N: int) -> QuotientReport:
    """Compare upstairs transition sets with quotient-side preimages.

    Builds the K-quotient system, finds a marker and cover downstairs,
    pulls the cover back, and verifies that every element attainable
    upstairs maps into the downstairs transition set of its piece.
    """
    fmap = quotient_system(space, K)
    qspace = fmap.dst
    marker = find_marker(qspace, max(1, 5 * N))
    cover = build_cover(qspace, N, marker)
    E_up = list(space.group.preimage_ball(N))
    E_dn = sorted(
        {fmap.map_element(g) for g in E_up}, key=qspace.group.sort_key
    )
    caps = {"U0": 3 * N, "U1": 2 * marker.M + N}
    pieces = []
    contained = True
    equal = True
    for name, down_set in (("U0", cover.U0), ("U1", cover.U1)):
        up_set = fmap.pull_back(down_set)
        f_up = compute_f_set(space, up_set, E_up, caps[name])
        f_dn = compute_f_set(qspace, down_set, E_dn, caps[name])
        down_elements = set(f_dn.elements)
        images = {fmap.map_element(g) for g in f_up.elements}
        missing = sorted(images - down_elements, key=qspace.group.sort_key)
        pieces.append(
            {
                "piece": name,
                "upstairs": f_up,
                "downstairs": f_dn,
                "missing": tuple(missing),
            }
        )
        if missing:
            contained = False
        if images != down_elements:
            equal = False
    return QuotientReport(contained, equal, tuple(pieces))


def certify_dad_one(
    space: SpacePresentation,
    N: int,
    strict: bool = True,
    length_budget: int | None = None,
) -> DadCertificate:
    spec = space.group
    if not spec.infinite_quotient():
        raise InputError(
            "dimension-one certification needs an infinite quotient (locally "
            "finite groups have dimension zero)"
        )
    if N < 1:
        raise InputError("N must be at least 1")
    marker = find_marker(space, 5 * N, length_budget)
    cover = build_cover(space, N, marker)
    E = list(spec.preimage_ball(N))
    f0 = compute_f_set(space, cover.U0, E, 3 * N)
    f1 = compute_f_set(space, cover.U1, E, 2 * marker.M + N)
    exact = f0.exact and f1.exact
    if strict and not exact:
        raise Inconclusive(
            "oracle budget left Unknown answers; rerun with a larger budget "
            "or without --strict"
        )
    return DadCertificate(
        version=1,
        group_digest=spec.digest(),
        space_digest=space.digest(),
        N=N,
        marker=marker,
        U0=cover.U0,
        U1=cover.U1,
        f0=f0,
        f1=f1,
        bounds={"U0": 3 * N, "U1": 2 * marker.M + N},
        lower_bound="quotient infinite => not locally finite",
        verdict="dad = 1",
        exact=exact,
        search_order=SEARCH_ORDER,
    )
