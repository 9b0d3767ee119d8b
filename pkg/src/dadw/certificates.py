"""Certificate data format and the independent verifier.

A certificate carries everything needed to re-check the dimension-one
claim offline: the marker, both cover pieces, the transition sets with
their attainability sets, and the claimed ball bounds.  The verifier
re-derives every obligation using only set algebra and group arithmetic;
it never re-runs the fixpoint, so a forged certificate cannot hide
behind search heuristics.  Serialization is canonical JSON (sorted keys,
no whitespace) so equal certificates are byte-equal.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass

from .errors import InputError
from .groups import SEARCH_ORDER_TAG
from .markers import Marker, marker_from_json, marker_to_json
from .spaces import (
    CoverStatus,
    Emptiness,
    SpacePresentation,
    Trilean,
)

SEARCH_ORDER = SEARCH_ORDER_TAG
CERT_VERSION = 1
LOWER_BOUND_TAG = "quotient infinite => not locally finite"
VERDICT_TAG = "dad = 1"


@dataclass(frozen=True, eq=False)
class FSetData:
    """Transition-set literal as stored in a certificate."""

    elements: tuple
    attain: dict
    exact: bool
    cap_used: int


@dataclass(frozen=True, eq=False)
class DadCertificate:
    version: int
    group_digest: str
    space_digest: str
    N: int
    marker: Marker
    U0: object
    U1: object
    f0: object
    f1: object
    bounds: dict
    lower_bound: str
    verdict: str
    exact: bool
    search_order: str


class VerifyStatus(enum.Enum):
    VALID = "Valid"
    INVALID = "Invalid"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class VerifyResult:
    status: VerifyStatus
    reason: str = ""


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _fset_to_json(space: SpacePresentation, fs) -> dict:
    spec = space.group
    return {
        "elements": [spec.element_to_json(g) for g in fs.elements],
        "attain": [
            [spec.element_to_json(g), space.clopen_to_json(fs.attain[g])]
            for g in fs.elements
        ],
        "exact": fs.exact,
        "capUsed": fs.cap_used,
    }


def _fset_from_json(space: SpacePresentation, data: dict) -> FSetData:
    spec = space.group
    try:
        elements = tuple(spec.element_from_json(e) for e in data["elements"])
        attain = {
            spec.element_from_json(g): space.clopen_from_json(c)
            for g, c in data["attain"]
        }
        exact = bool(data["exact"])
        cap_used = int(data["capUsed"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed transition-set literal: {exc}") from exc
    return FSetData(elements, attain, exact, cap_used)


def certificate_to_json(space: SpacePresentation, cert: DadCertificate) -> dict:
    return {
        "version": cert.version,
        "groupDigest": cert.group_digest,
        "spaceDigest": cert.space_digest,
        "N": cert.N,
        "marker": marker_to_json(space, cert.marker),
        "cover": {
            "U0": space.clopen_to_json(cert.U0),
            "U1": space.clopen_to_json(cert.U1),
        },
        "fsets": {
            "U0": _fset_to_json(space, cert.f0),
            "U1": _fset_to_json(space, cert.f1),
        },
        "bounds": {"U0": cert.bounds["U0"], "U1": cert.bounds["U1"]},
        "lowerBound": cert.lower_bound,
        "verdict": cert.verdict,
        "exact": cert.exact,
        "searchOrderTag": cert.search_order,
    }


def certificate_from_json(space: SpacePresentation, data: dict) -> DadCertificate:
    if not isinstance(data, dict):
        raise InputError("certificate literal must be an object")
    try:
        return DadCertificate(
            version=int(data["version"]),
            group_digest=str(data["groupDigest"]),
            space_digest=str(data["spaceDigest"]),
            N=int(data["N"]),
            marker=marker_from_json(space, data["marker"]),
            U0=space.clopen_from_json(data["cover"]["U0"]),
            U1=space.clopen_from_json(data["cover"]["U1"]),
            f0=_fset_from_json(space, data["fsets"]["U0"]),
            f1=_fset_from_json(space, data["fsets"]["U1"]),
            bounds={"U0": int(data["bounds"]["U0"]), "U1": int(data["bounds"]["U1"])},
            lower_bound=str(data["lowerBound"]),
            verdict=str(data["verdict"]),
            exact=bool(data["exact"]),
            search_order=str(data["searchOrderTag"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed certificate: {exc}") from exc


def dumps_certificate(space: SpacePresentation, cert: DadCertificate) -> str:
    return canonical_json(certificate_to_json(space, cert))


def loads_certificate(space: SpacePresentation, text: str) -> DadCertificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"certificate is not valid JSON: {exc}") from exc
    return certificate_from_json(space, data)


class _Checker:
    """Accumulates Unknown answers; raises _Fail on a definitive violation."""

    def __init__(self):
        self.unknowns: list[str] = []


class _Fail(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def verify_certificate(space: SpacePresentation, cert: DadCertificate) -> VerifyResult:
    chk = _Checker()
    try:
        _verify(space, cert, chk)
    except _Fail as fail:
        return VerifyResult(VerifyStatus.INVALID, fail.reason)
    if chk.unknowns:
        return VerifyResult(
            VerifyStatus.INCONCLUSIVE, "; ".join(chk.unknowns[:4])
        )
    return VerifyResult(VerifyStatus.VALID)


def _verify(space: SpacePresentation, cert: DadCertificate, chk: _Checker) -> None:
    spec = space.group
    if cert.version != CERT_VERSION:
        raise _Fail(f"unsupported certificate version {cert.version}")
    if cert.group_digest != spec.digest():
        raise _Fail("group digest mismatch")
    if cert.space_digest != space.digest():
        raise _Fail("space digest mismatch")
    if cert.N < 1:
        raise _Fail("N must be at least 1")
    N, M = cert.N, cert.marker.M
    if cert.marker.disjoint_radius < 5 * N:
        raise _Fail("marker radius below 5N")
    if cert.bounds != {"U0": 3 * N, "U1": 2 * M + N}:
        raise _Fail("claimed bounds disagree with 3N and 2M+N")
    if cert.verdict != VERDICT_TAG:
        raise _Fail(f"unrecognized verdict {cert.verdict!r}")
    # (f) lower bound: an infinite quotient rules out local finiteness.
    if not spec.infinite_quotient():
        raise _Fail("group quotient is finite; no dimension-one lower bound")
    if cert.lower_bound != LOWER_BOUND_TAG:
        raise _Fail(f"unrecognized lower-bound justification {cert.lower_bound!r}")
    if cert.search_order != SEARCH_ORDER:
        raise _Fail(f"unrecognized search-order tag {cert.search_order!r}")
    for name, fs in (("U0", cert.f0), ("U1", cert.f1)):
        want = max(
            (spec.word_length(spec.quotient_map(g)) for g in fs.elements), default=0
        )
        if fs.cap_used != want:
            raise _Fail(f"{name}: recorded cap usage disagrees with the element list")

    U = cert.marker.U
    # (a) marker disjointness over the punctured 5N ball.
    for g in spec.preimage_ball(cert.marker.disjoint_radius):
        if g == spec.identity:
            continue
        st = space.is_empty(space.intersect([U, space.translate(g, U)]))
        if st is Emptiness.NONEMPTY:
            raise _Fail(f"marker translate by {g!r} meets the marker")
        if st is Emptiness.UNKNOWN:
            chk.unknowns.append(f"marker disjointness at {g!r}")

    # (b) ball covering at radius M, and the cover set's own invariants.
    res = space.covers_space(spec.preimage_ball(M), U)
    if res.status is CoverStatus.NOT_COVERED:
        raise _Fail("radius-M ball translates do not cover the space")
    if res.status is CoverStatus.UNKNOWN:
        chk.unknowns.append("radius-M covering")
    for g in cert.marker.cover_set:
        if spec.word_length(spec.quotient_map(g)) > M:
            raise _Fail(f"cover element {g!r} outside the radius-M ball")
    res = space.covers_space(cert.marker.cover_set, U)
    if res.status is CoverStatus.NOT_COVERED:
        raise _Fail("listed cover set does not cover the space")
    if res.status is CoverStatus.UNKNOWN:
        chk.unknowns.append("cover-set covering")

    # (c) cover reconstruction.
    ball_translates = [space.translate(g, U) for g in spec.preimage_ball(N)]
    want_u0 = space.union(ball_translates)
    eq = _eq(space, cert.U0, want_u0, chk, "U0 reconstruction")
    if eq is False:
        raise _Fail("U0 is not the N-ball saturation of the marker")
    eq = _eq(space, cert.U1, space.complement(cert.U0), chk, "U1 reconstruction")
    if eq is False:
        raise _Fail("U1 is not the complement of U0")

    # (d) closure of the listed transition sets, (e) ball containment.
    E = list(spec.preimage_ball(N))
    for name, piece, fs in (("U0", cert.U0, cert.f0), ("U1", cert.U1, cert.f1)):
        bound = cert.bounds[name]
        listed = set(fs.elements)
        if set(fs.attain) != listed:
            raise _Fail(f"{name}: attainability keys disagree with the element list")
        for g in fs.elements:
            if spec.word_length(spec.quotient_map(g)) > bound:
                raise _Fail(f"{name}: element {g!r} outside the claimed ball")
        empty_piece = space.is_empty(piece)
        if empty_piece is Emptiness.UNKNOWN:
            chk.unknowns.append(f"{name}: piece emptiness")
        if empty_piece is Emptiness.NONEMPTY:
            if spec.identity not in listed:
                raise _Fail(f"{name}: identity missing from a nonempty piece")
            eq = _eq(
                space, fs.attain[spec.identity], piece, chk, f"{name}: identity set"
            )
            if eq is False:
                raise _Fail(f"{name}: identity attainability set is not the piece")
        for g in fs.elements:
            D_g = fs.attain[g]
            sub = space.subset_status(D_g, piece)
            if sub is Trilean.NO:
                raise _Fail(f"{name}: attainability of {g!r} leaves the piece")
            if sub is Trilean.UNKNOWN:
                chk.unknowns.append(f"{name}: containment of D_{g!r}")
            for h in E:
                T = space.intersect([space.translate(h, D_g), piece])
                st = space.is_empty(T)
                if st is Emptiness.EMPTY:
                    continue
                if st is Emptiness.UNKNOWN:
                    # possibly empty: neither an escape nor a checkable step
                    chk.unknowns.append(f"{name}: step {h!r} from {g!r}")
                    continue
                hg = spec.multiply(h, g)
                if hg not in listed:
                    raise _Fail(
                        f"{name}: closure escapes the listed set at {hg!r}"
                    )
                sub = space.subset_status(T, fs.attain[hg])
                if sub is Trilean.NO:
                    raise _Fail(
                        f"{name}: step {h!r} from {g!r} exceeds the listed "
                        f"attainability of {hg!r}"
                    )
                if sub is Trilean.UNKNOWN:
                    chk.unknowns.append(f"{name}: attainability step {h!r}@{g!r}")


def _eq(space, A, B, chk, label):
    st = space.sets_equal(A, B)
    if st is Trilean.YES:
        return True
    if st is Trilean.NO:
        return False
    chk.unknowns.append(label)
    return None
