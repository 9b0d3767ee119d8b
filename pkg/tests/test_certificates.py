from __future__ import annotations

import json

import pytest

from dadw import (
    GroupSpec,
    NoMarkerFound,
    Pattern,
    SpacePresentation,
    SubstitutionOracle,
    VerifyStatus,
    Z_KIND,
    build_system,
    certify_dad_one,
    dumps_certificate,
    loads_certificate,
    verify_certificate,
)
from dadw.certificates import LOWER_BOUND_TAG, SEARCH_ORDER, canonical_json


@pytest.fixture(scope="module")
def dihedral_cert(dihedral):
    cert = certify_dad_one(dihedral, 1)
    return cert, dumps_certificate(dihedral, cert)


def reverify(space, blob: str) -> VerifyStatus:
    return verify_certificate(space, loads_certificate(space, blob)).status


def mutate(blob: str, fn) -> str:
    data = json.loads(blob)
    fn(data)
    return json.dumps(data)


def test_corpus_certificates_all_valid(binary, dihedral, fibonacci, thue_morse):
    cases = [(binary, 1), (binary, 2), (binary, 3), (dihedral, 1), (dihedral, 2),
             (dihedral, 3), (fibonacci, 1), (thue_morse, 1)]
    for space, N in cases:
        cert = certify_dad_one(space, N)
        assert cert.exact
        assert cert.verdict == "dad = 1"
        res = verify_certificate(space, cert)
        assert res.status is VerifyStatus.VALID, res.reason


def test_round_trip_is_bit_exact(binary, dihedral, fibonacci):
    for space in (binary, dihedral, fibonacci):
        cert = certify_dad_one(space, 1)
        blob = dumps_certificate(space, cert)
        again = dumps_certificate(space, loads_certificate(space, blob))
        assert blob == again
        assert blob == canonical_json(json.loads(blob))


def test_certificate_fields(dihedral, dihedral_cert):
    cert, blob = dihedral_cert
    data = json.loads(blob)
    assert set(data) == {
        "version", "groupDigest", "spaceDigest", "N", "marker", "cover",
        "fsets", "bounds", "lowerBound", "verdict", "exact", "searchOrderTag",
    }
    assert data["groupDigest"] == dihedral.group.digest()
    assert data["spaceDigest"] == dihedral.digest()
    assert data["marker"]["disjointRadius"] == 5
    assert data["bounds"] == {"U0": 3, "U1": 2 * cert.marker.M + 1}
    assert data["lowerBound"] == LOWER_BOUND_TAG
    assert data["searchOrderTag"] == SEARCH_ORDER
    assert data["exact"] is True


def test_tamper_matrix(dihedral, dihedral_cert):
    _, blob = dihedral_cert

    def drop_f_element(d):
        gone = d["fsets"]["U1"]["elements"].pop()
        d["fsets"]["U1"]["attain"] = [
            pair for pair in d["fsets"]["U1"]["attain"] if pair[0] != gone
        ]

    def grow_u(d):
        d["marker"]["U"]["states"].append(1)

    def shrink_m(d):
        d["marker"]["M"] -= 1
        d["marker"]["coverSet"] = d["marker"]["coverSet"][:-1]
        d["bounds"] = {"U0": 3, "U1": 2 * d["marker"]["M"] + 1}

    def flip_verdict(d):
        d["verdict"] = "dad = 0"

    def wrong_space_digest(d):
        d["spaceDigest"] = "0" * len(d["spaceDigest"])

    def wrong_group_digest(d):
        d["groupDigest"] = "0" * len(d["groupDigest"])

    def lie_about_bounds(d):
        d["bounds"] = {"U0": 1, "U1": 2}

    def bump_n(d):
        d["N"] = 2

    def bump_version(d):
        d["version"] = 99

    def reword_lower_bound(d):
        d["lowerBound"] = "because it is"

    def reword_search_order(d):
        d["searchOrderTag"] = "some-other-order"

    def lie_about_cap(d):
        d["fsets"]["U0"]["capUsed"] += 1

    def corrupt_u0(d):
        d["cover"]["U0"]["states"].append(2)

    def corrupt_u1(d):
        d["cover"]["U1"]["states"].remove(2)

    def shrink_attain(d):
        for pair in d["fsets"]["U0"]["attain"]:
            pair[1]["states"] = pair[1]["states"][:1]

    def drop_cover_element(d):
        d["marker"]["coverSet"] = d["marker"]["coverSet"][1:]

    def add_far_f_element(d):
        d["fsets"]["U0"]["elements"].append([1, 40])

    tampers = [
        drop_f_element, grow_u, shrink_m, flip_verdict, wrong_space_digest,
        wrong_group_digest, lie_about_bounds, bump_n, bump_version,
        reword_lower_bound, reword_search_order, lie_about_cap, corrupt_u0,
        corrupt_u1, shrink_attain, drop_cover_element, add_far_f_element,
    ]
    for fn in tampers:
        status = reverify(dihedral, mutate(blob, fn))
        assert status is VerifyStatus.INVALID, fn.__name__


def test_exactness_downgrade_is_not_a_soundness_hole(dihedral, dihedral_cert):
    # the exact flag only reports oracle completeness; weakening the claim
    # cannot smuggle in a wrong verdict, so the verifier accepts it
    _, blob = dihedral_cert
    status = reverify(dihedral, mutate(blob, lambda d: d.update(exact=False)))
    assert status is VerifyStatus.VALID


def test_invalid_reasons_are_specific(dihedral, dihedral_cert):
    _, blob = dihedral_cert
    res = verify_certificate(
        dihedral,
        loads_certificate(
            dihedral, mutate(blob, lambda d: d.update(verdict="dad = 0"))
        ),
    )
    assert res.status is VerifyStatus.INVALID
    assert "verdict" in res.reason


def test_verification_against_wrong_space_fails_on_digest(binary, dihedral_cert):
    cert, blob = dihedral_cert
    data = json.loads(blob)
    assert data["spaceDigest"] != binary.digest()


def test_small_budget_cannot_certify():
    tiny = SpacePresentation.subshift(
        GroupSpec(Z_KIND),
        SubstitutionOracle(("a", "b"), {"a": "ab", "b": "a"}, "a", 3),
    )
    with pytest.raises(NoMarkerFound):
        certify_dad_one(tiny, 1)


def test_verifier_reports_inconclusive_when_oracle_runs_dry(fibonacci):
    # transplant a sound certificate onto the same system presented with a
    # starved oracle: nothing is wrong, but nothing is checkable either
    cert = certify_dad_one(fibonacci, 1)
    blob = dumps_certificate(fibonacci, cert)
    tiny = SpacePresentation.subshift(
        GroupSpec(Z_KIND),
        SubstitutionOracle(("a", "b"), {"a": "ab", "b": "a"}, "a", 3),
    )
    swapped = mutate(blob, lambda d: d.update(spaceDigest=tiny.digest()))
    res = verify_certificate(tiny, loads_certificate(tiny, swapped))
    assert res.status is VerifyStatus.INCONCLUSIVE
