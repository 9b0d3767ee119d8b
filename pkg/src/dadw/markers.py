"""Marker construction and verification.

A marker is a clopen set whose translates under a punctured ball are
disjoint from it and whose translates under a finite covering set exhaust
the space.  Odometer markers are single cosets at the shallowest level
whose kernel avoids the punctured ball; subshift markers are cylinders on
words with no short self-overlap, found in shortlex order.  Verification
re-runs the defining emptiness and covering queries from scratch and
reports Inconclusive whenever an oracle answer is not definitive.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

from .errors import CannotSeparate, InputError, NoMarkerFound, PeriodicObstruction
from .groups import DINF_KIND, Z_KIND, Element, GroupSpec, QuotientElement, q_mul
from .spaces import (
    ODOMETER,
    SUBSHIFT,
    ClopenSet,
    CoverStatus,
    Emptiness,
    FactorMap,
    Pattern,
    SpacePresentation,
)


@dataclass(frozen=True)
class Marker:
    U: ClopenSet
    disjoint_radius: int
    cover_set: tuple
    M: int


class MarkerStatus(enum.Enum):
    VERIFIED = "verified"
    FAILED = "failed"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class MarkerCheck:
    status: MarkerStatus
    reason: str = ""


def least_period(word: str) -> int:
    for p in range(1, len(word) + 1):
        if all(word[i] == word[i + p] for i in range(len(word) - p)):
            return p
    return len(word)


def _gen_ball_data(space: SpacePresentation, n: int):
    """BFS over the level-n quotient along generator images.

    Returns (dist, value) arrays: dist[x] = least generator word length
    reaching state x from the identity, value[x] = a quotient element of
    that length mapping to x.  Deterministic: FIFO order, generators in a
    fixed order.
    """
    lvl = space.levels[n]
    G = lvl.group
    spec = space.group
    if spec.quotient_kind == Z_KIND:
        steps = [
            (QuotientElement(1, 1), lvl.gen_images["1"]),
            (QuotientElement(1, -1), G.inv(lvl.gen_images["1"])),
        ]
    elif spec.quotient_kind == DINF_KIND:
        steps = [
            (QuotientElement(-1, 0), lvl.gen_images["s"]),
            (QuotientElement(-1, 1), lvl.gen_images["t"]),
        ]
    else:
        steps = []
    dist = {G.identity: 0}
    value = {G.identity: QuotientElement(1, 0)}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for q_step, img in steps:
            y = G.mul(img, x)
            if y not in dist:
                dist[y] = dist[x] + 1
                value[y] = q_mul(q_step, value[x])
                queue.append(y)
    return dist, value


def _odometer_cover_data(space: SpacePresentation, n: int):
    """Minimal M with the B_M preimage covering from the identity coset.

    Also returns one covering element per state, each of quotient word
    length at most M.  None when the level is not reachable (the group
    does not act transitively on it).
    """
    lvl = space.levels[n]
    G = lvl.group
    spec = space.group
    dist, value = _gen_ball_data(space, n)
    h_list = list(range(spec.h_group.size))
    best: dict[int, tuple[int, int, QuotientElement]] = {}
    for h in h_list:
        himg = lvl.h_images[h]
        inv_himg = G.inv(himg)
        for st in range(G.size):
            target = G.mul(inv_himg, st)
            if target not in dist:
                continue
            cand = (dist[target], h, value[target])
            if st not in best or cand < best[st]:
                best[st] = cand
    if len(best) != G.size:
        return None
    M = max(d for d, _, _ in best.values())
    cover = []
    for st in range(G.size):
        d, h, q = best[st]
        cover.append(Element(h, q))
    cover.sort(key=spec.sort_key)
    return M, tuple(cover)


def find_marker(space: SpacePresentation, R: int, length_budget: int | None = None) -> Marker:
    if R < 1:
        raise InputError("marker radius must be at least 1")
    if space.kind == ODOMETER:
        return _find_marker_odometer(space, R)
    return _find_marker_subshift(space, R, length_budget)


def _find_marker_odometer(space: SpacePresentation, R: int) -> Marker:
    spec = space.group
    ball = [g for g in spec.preimage_ball(R) if g != spec.identity]
    for n in range(1, space.depth + 1):
        e_state = space.levels[n].group.identity
        if any(space.phi(n, g) == e_state for g in ball):
            continue
        data = _odometer_cover_data(space, n)
        if data is None:
            continue
        M, cover = data
        U = space.coset(n, {e_state})
        return Marker(U, R, cover, M)
    deepest = space.depth
    e_state = space.levels[deepest].group.identity

    def scan_key(g):
        i, h = spec.sort_key(g)
        return (spec.word_length(spec.quotient_map(g)), 0 if i > 0 else 1, abs(i), h)

    for g in sorted(ball, key=scan_key):
        if space.phi(deepest, g) == e_state:
            raise PeriodicObstruction(
                g,
                f"{g!r} acts trivially at the deepest presented level; "
                "every point is periodic under it",
            )
    raise NoMarkerFound(space.depth, "no level of the presented tower yields a marker")


def _find_marker_subshift(
    space: SpacePresentation, R: int, length_budget: int | None
) -> Marker:
    spec = space.group
    length_cap = length_budget if length_budget is not None else 4 * R + 12
    ball = [g for g in spec.preimage_ball(R) if g != spec.identity]
    for L in range(R + 1, length_cap + 1):
        words, _ = space.oracle.factors(L)
        for w in sorted(words):
            if least_period(w) <= R:
                continue
            U = space.cylinder(Pattern.from_word(0, w))
            if any(
                space.is_empty(space.intersect([U, space.translate(g, U)]))
                is not Emptiness.EMPTY
                for g in ball
            ):
                continue
            found = _search_cover_radius(space, U, 8 * L + 50)
            if found is None:
                continue
            M = found
            cover = tuple(Element(0, q) for q in spec.ball(M))
            return Marker(U, R, cover, M)
    raise NoMarkerFound(
        length_cap, f"no marker word of length up to {length_cap} at radius {R}"
    )


def _search_cover_radius(space: SpacePresentation, U: ClopenSet, cap: int) -> int | None:
    for M in range(1, cap + 1):
        res = space.covers_space(space.group.preimage_ball(M), U)
        if res.status is CoverStatus.COVERED:
            return M
        if res.status is CoverStatus.UNKNOWN:
            return None
    return None


def marker_from_point(space: SpacePresentation, point, E) -> ClopenSet:
    """A clopen neighbourhood of the point disjoint from its E-translates."""
    elements = list(E)
    for g in elements:
        if g == space.group.identity:
            raise CannotSeparate(g, "a point can never be separated from itself")
    if space.kind == ODOMETER:
        prefix = tuple(int(s) for s in point)
        if not elements:
            if not prefix:
                return space.whole()
            return space.coset(len(prefix), {prefix[-1]})
        if not prefix:
            raise CannotSeparate(elements[0], "empty prefix cannot separate anything")
        for n in range(1, len(prefix) + 1):
            st = prefix[n - 1]
            G = space.levels[n].group
            if all(G.mul(space.phi(n, g), st) != st for g in elements):
                return space.coset(n, {st})
        deepest = len(prefix)
        G = space.levels[deepest].group
        for g in elements:
            if G.mul(space.phi(deepest, g), prefix[-1]) == prefix[-1]:
                raise CannotSeparate(g)
        raise AssertionError("unreachable")  # pragma: no cover
    if not isinstance(point, Pattern) or not point.is_interval():
        raise InputError("subshift points are full-interval patterns")
    lo, width = point.window()
    if not elements:
        return space.cylinder(point) if width else space.whole()
    word = point.word()
    last_offender = None
    for wd in range(1, width + 1):
        U = space.cylinder(Pattern.from_word(lo, word[:wd]))
        offender = None
        for g in elements:
            if (
                space.is_empty(space.intersect([U, space.translate(g, U)]))
                is not Emptiness.EMPTY
            ):
                offender = g
                break
        if offender is None:
            return U
        last_offender = offender
    raise CannotSeparate(
        last_offender, f"point prefix cannot be separated from its {last_offender!r}-translate"
    )


def verify_marker(space: SpacePresentation, m: Marker) -> MarkerCheck:
    spec = space.group
    unknown = []
    for g in spec.preimage_ball(m.disjoint_radius):
        if g == spec.identity:
            continue
        st = space.is_empty(space.intersect([m.U, space.translate(g, m.U)]))
        if st is Emptiness.NONEMPTY:
            return MarkerCheck(
                MarkerStatus.FAILED, f"translate by {g!r} meets the marker set"
            )
        if st is Emptiness.UNKNOWN:
            unknown.append(f"disjointness at {g!r}")
    for g in m.cover_set:
        if spec.word_length(spec.quotient_map(g)) > m.M:
            return MarkerCheck(
                MarkerStatus.FAILED,
                f"cover element {g!r} lies outside the radius-{m.M} ball",
            )
    res = space.covers_space(m.cover_set, m.U)
    if res.status is CoverStatus.NOT_COVERED:
        return MarkerCheck(MarkerStatus.FAILED, "cover translates miss part of the space")
    if res.status is CoverStatus.UNKNOWN:
        unknown.append("covering")
    if unknown:
        return MarkerCheck(MarkerStatus.INCONCLUSIVE, "; ".join(unknown))
    return MarkerCheck(MarkerStatus.VERIFIED)


def pullback_marker(fmap: FactorMap, m: Marker) -> Marker:
    """Preimage of a marker along a factor map over the same group."""
    if not fmap.same_group():
        raise InputError(
            "marker pullback requires a factor map over the same acting group; "
            "group-changing quotient maps only pull back plain clopen sets"
        )
    fmap.validate()
    return Marker(fmap.pull_back(m.U), m.disjoint_radius, m.cover_set, m.M)


def marker_to_json(space: SpacePresentation, m: Marker) -> dict:
    return {
        "U": space.clopen_to_json(m.U),
        "disjointRadius": m.disjoint_radius,
        "coverSet": [space.group.element_to_json(g) for g in m.cover_set],
        "M": m.M,
    }


def marker_from_json(space: SpacePresentation, data: dict) -> Marker:
    if not isinstance(data, dict):
        raise InputError("marker literal must be an object")
    try:
        U = space.clopen_from_json(data["U"])
        radius = int(data["disjointRadius"])
        cover = tuple(space.group.element_from_json(e) for e in data["coverSet"])
        M = int(data["M"])
    except KeyError as exc:
        raise InputError(f"marker literal is missing {exc}") from exc
    return Marker(U, radius, cover, M)
