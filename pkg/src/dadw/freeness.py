"""Freeness certificates via clopen partitions.

A group element acts freely when some clopen partition separates every
cell from its translate.  On odometers the singleton cosets of the first
level with nontrivial image always work, because left multiplication on
a finite group has no fixed points.  On subshifts the cells are the
admissible words on a growing symmetric window; if the search exhausts
its budget while some cell still meets its translate, the surviving
overlap pattern is either a genuine fixed prefix (reported as a witness)
or an unresolved case (reported as Unknown).
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import FixedPointFound, Inconclusive, InputError
from .groups import Element, GroupSpec
from .spaces import (
    ODOMETER,
    ClopenSet,
    Emptiness,
    Pattern,
    SpacePresentation,
    Trilean,
)


@dataclass(frozen=True)
class FreenessCertificate:
    gamma: Element
    partition: tuple


@dataclass(frozen=True)
class FreeBallReport:
    radius: int
    certificates: tuple


def freeness_certificate(
    space: SpacePresentation, gamma: Element, width_budget: int = 24
) -> FreenessCertificate:
    spec = space.group
    spec._check_element(gamma)
    if gamma == spec.identity:
        raise InputError("the identity fixes everything; pick a nontrivial element")
    if space.kind == ODOMETER:
        return _odometer_certificate(space, gamma)
    return _subshift_certificate(space, gamma, width_budget)


def _odometer_certificate(space: SpacePresentation, gamma: Element) -> FreenessCertificate:
    for n in range(1, space.depth + 1):
        G = space.levels[n].group
        if space.phi(n, gamma) != G.identity:
            cells = tuple(space.coset(n, {st}) for st in range(G.size))
            return FreenessCertificate(gamma, cells)
    witness = tuple(space.levels[n].group.identity for n in range(1, space.depth + 1))
    raise FixedPointFound(
        gamma,
        witness,
        f"{gamma!r} acts trivially at every presented level",
    )


def _cell_window(q, w: int) -> tuple[int, int]:
    """A width-growing window; for reflections, one the reflection maps
    to itself so that fixed patterns can show up as palindromic cells."""
    if q.eps == 1:
        return -w, 2 * w + 1
    width = 2 * w + 1 if q.k % 2 == 0 else 2 * w
    return (q.k - width + 1) // 2, width


def _subshift_certificate(
    space: SpacePresentation, gamma: Element, width_budget: int
) -> FreenessCertificate:
    q = space.group.quotient_map(gamma)
    for w in range(1, width_budget + 1):
        lo, width = _cell_window(q, w)
        words, exact = space.oracle.factors(width)
        cells = [space.cylinder(Pattern.from_word(lo, word)) for word in sorted(words)]
        overlaps = []
        definitive = exact
        for cell in cells:
            st = space.is_empty(space.intersect([cell, space.translate(gamma, cell)]))
            if st is Emptiness.NONEMPTY:
                overlaps.append(cell)
            elif st is Emptiness.UNKNOWN:
                definitive = False
        if not overlaps and definitive:
            return FreenessCertificate(gamma, tuple(cells))
        if w == width_budget:
            for cell in overlaps:
                fixed = _fixed_pattern(q, cell)
                if fixed is not None:
                    raise FixedPointFound(
                        gamma, fixed, "translate-invariant pattern survives"
                    )
    raise Inconclusive(
        f"no separating partition for {gamma!r} within width budget {width_budget}"
    )


def _fixed_pattern(q, cell: ClopenSet) -> Pattern | None:
    """The cell's word as a pattern, when it is its own gamma-image.

    A translation fixes no finite full word, so this only produces
    witnesses for reflections whose axis sits inside the window.
    """
    lo, width = cell.lo, cell.width
    word = cell.words[0]
    if q.eps == 1:
        return None
    if q.k - (lo + width - 1) != lo:
        return None
    if word != word[::-1]:
        return None
    return Pattern.from_word(lo, word)


def check_free_ball(space: SpacePresentation, R: int, width_budget: int = 24) -> FreeBallReport:
    if R < 1:
        raise InputError("ball radius must be at least 1")
    spec = space.group

    def scan_key(g):
        i, h = spec.sort_key(g)
        return (spec.word_length(spec.quotient_map(g)), 0 if i > 0 else 1, abs(i), h)

    certs = []
    for gamma in sorted(spec.preimage_ball(R), key=scan_key):
        if gamma == spec.identity:
            continue
        certs.append(freeness_certificate(space, gamma, width_budget))
    return FreeBallReport(R, tuple(certs))


def verify_freeness(space: SpacePresentation, cert: FreenessCertificate) -> Trilean:
    """Re-check a certificate with emptiness queries alone."""
    spec = space.group
    if cert.gamma == spec.identity:
        return Trilean.NO
    unknown = False
    union = space.union(list(cert.partition)) if cert.partition else space.empty()
    st = space.sets_equal(union, space.whole())
    if st is Trilean.NO:
        return Trilean.NO
    if st is Trilean.UNKNOWN:
        unknown = True
    for i, P in enumerate(cert.partition):
        for Q in cert.partition[i + 1 :]:
            st = space.is_empty(space.intersect([P, Q]))
            if st is Emptiness.NONEMPTY:
                return Trilean.NO
            if st is Emptiness.UNKNOWN:
                unknown = True
        st = space.is_empty(space.intersect([space.translate(cert.gamma, P), P]))
        if st is Emptiness.NONEMPTY:
            return Trilean.NO
        if st is Emptiness.UNKNOWN:
            unknown = True
    return Trilean.UNKNOWN if unknown else Trilean.YES


def freeness_to_json(space: SpacePresentation, cert: FreenessCertificate) -> dict:
    return {
        "gamma": space.group.element_to_json(cert.gamma),
        "partition": [space.clopen_to_json(P) for P in cert.partition],
    }


def freeness_from_json(space: SpacePresentation, data: dict) -> FreenessCertificate:
    try:
        gamma = space.group.element_from_json(data["gamma"])
        cells = tuple(space.clopen_from_json(P) for P in data["partition"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed freeness certificate: {exc}") from exc
    return FreenessCertificate(gamma, cells)
