from __future__ import annotations

import pytest

from dadw import (
    Emptiness,
    FixedPointFound,
    InputError,
    QuotientElement,
    Trilean,
    check_free_ball,
    freeness_certificate,
    verify_freeness,
)
from dadw.freeness import FreenessCertificate, freeness_from_json, freeness_to_json


def elt(space, eps, k, h=0):
    return space.group.element(h, QuotientElement(eps, k))


def test_odometers_free_on_ball_five(binary, dihedral, product):
    for space, count in ((binary, 10), (dihedral, 10), (product, 21)):
        rep = check_free_ball(space, 5)
        assert rep.radius == 5
        assert len(rep.certificates) == count
        for cert in rep.certificates:
            assert verify_freeness(space, cert) is Trilean.YES


def test_fibonacci_translation_partitions(fibonacci):
    for k, cells in ((1, 4), (2, 6), (3, 8)):
        cert = freeness_certificate(fibonacci, elt(fibonacci, 1, k))
        assert len(cert.partition) == cells
        assert verify_freeness(fibonacci, cert) is Trilean.YES


def test_thue_morse_translations_and_one_reflection(thue_morse):
    for (eps, k), cells in (((1, 1), 6), ((1, 2), 6), ((-1, 0), 12)):
        cert = freeness_certificate(thue_morse, elt(thue_morse, eps, k))
        assert len(cert.partition) == cells
        assert verify_freeness(thue_morse, cert) is Trilean.YES


def test_thue_morse_reflection_with_fixed_point(thue_morse):
    # an even palindrome in the language gives a mirror-symmetric point
    with pytest.raises(FixedPointFound) as exc:
        freeness_certificate(thue_morse, elt(thue_morse, -1, 1))
    gamma = exc.value.gamma
    assert (gamma.q.eps, gamma.q.k) == (-1, 1)
    assert exc.value.witness is not None
    with pytest.raises(FixedPointFound):
        check_free_ball(thue_morse, 1)


def test_periodic_translation_certificate(periodic):
    cert = freeness_certificate(periodic, elt(periodic, 1, 1))
    assert len(cert.partition) == 3
    assert verify_freeness(periodic, cert) is Trilean.YES


def test_periodic_fixed_point_scanned_positives_first(periodic):
    with pytest.raises(FixedPointFound) as exc:
        check_free_ball(periodic, 5)
    assert exc.value.gamma.q == QuotientElement(1, 3)


def test_identity_gamma_rejected(binary):
    with pytest.raises(InputError):
        freeness_certificate(binary, elt(binary, 1, 0))


def test_verify_freeness_rejects_tampered_partitions(binary):
    gamma = elt(binary, 1, 1)
    cert = freeness_certificate(binary, gamma)
    assert verify_freeness(binary, cert) is Trilean.YES
    # dropping a cell breaks the covering condition
    short = FreenessCertificate(gamma=gamma, partition=cert.partition[1:])
    assert verify_freeness(binary, short) is Trilean.NO
    # one big cell meets its own translate
    merged = FreenessCertificate(gamma=gamma, partition=(binary.whole(),))
    assert verify_freeness(binary, merged) is Trilean.NO


def test_freeness_partition_cells_move_off_themselves(fibonacci):
    gamma = elt(fibonacci, 1, 2)
    cert = freeness_certificate(fibonacci, gamma)
    for cell in cert.partition:
        moved = fibonacci.translate(gamma, cell)
        assert fibonacci.is_empty(fibonacci.intersect([moved, cell])) is Emptiness.EMPTY


def test_freeness_json_round_trip(binary, fibonacci):
    for space, gamma in ((binary, elt(binary, 1, 2)), (fibonacci, elt(fibonacci, 1, 1))):
        cert = freeness_certificate(space, gamma)
        data = freeness_to_json(space, cert)
        back = freeness_from_json(space, data)
        assert back == cert
