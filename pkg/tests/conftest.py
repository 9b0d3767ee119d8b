from __future__ import annotations

import pytest

from dadw import build_system


@pytest.fixture(scope="session")
def binary():
    return build_system("binary_odometer")


@pytest.fixture(scope="session")
def dihedral():
    return build_system("dihedral_odometer")


@pytest.fixture(scope="session")
def fibonacci():
    return build_system("fibonacci")


@pytest.fixture(scope="session")
def thue_morse():
    return build_system("thue_morse")


@pytest.fixture(scope="session")
def product():
    return build_system("z_cross_z2_product")


@pytest.fixture(scope="session")
def periodic():
    return build_system("periodic_k")
