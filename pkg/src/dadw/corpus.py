"""Named example systems with their expected properties.

Every expectation recorded here is re-derived by the engines in tests;
the corpus never vouches for anything the checkers cannot confirm.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .groups import DINF_KIND, FiniteGroup, GroupSpec, Z_KIND
from .spaces import OdometerLevel, SpacePresentation, modulus_level
from .substitution import SubstitutionOracle


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    params: dict
    expected: dict
    summary: str


def _z2() -> FiniteGroup:
    return FiniteGroup(((0, 1), (1, 0)), 0)


def _product_level(m: int, prev_m: int | None) -> OdometerLevel:
    """Z/m x Z/2 as one finite stage; index a + m*b."""
    size = 2 * m
    table = []
    for i in range(size):
        a, b = i % m, i // m
        row = []
        for j in range(size):
            c, d = j % m, j // m
            row.append((a + c) % m + m * ((b + d) % 2))
        table.append(tuple(row))
    group = FiniteGroup(tuple(table), 0)
    if prev_m is None:
        proj = tuple(0 for _ in range(size))
    else:
        proj = tuple((i % m) % prev_m + prev_m * (i // m) for i in range(size))
    return OdometerLevel(
        group=group,
        gen_images={"1": 1},
        h_images=(0, m),
        proj=proj,
        shorthand=None,
    )


def _builders():
    def fibonacci(params):
        budget = int(params.get("budget", 10))
        oracle = SubstitutionOracle(("a", "b"), {"a": "ab", "b": "a"}, "a", budget)
        return SpacePresentation.subshift(GroupSpec(Z_KIND), oracle)

    def thue_morse(params):
        budget = int(params.get("budget", 12))
        oracle = SubstitutionOracle(("a", "b"), {"a": "ab", "b": "ba"}, "a", budget)
        return SpacePresentation.subshift(GroupSpec(DINF_KIND), oracle)

    def binary_odometer(params):
        depth = int(params.get("depth", 6))
        if depth < 1:
            raise InputError("depth must be at least 1")
        spec = GroupSpec(Z_KIND)
        levels = []
        for n in range(1, depth + 1):
            levels.append(modulus_level(spec, 2 ** n, None if n == 1 else 2 ** (n - 1)))
        return SpacePresentation.odometer(spec, levels)

    def dihedral_odometer(params):
        depth = int(params.get("depth", 5))
        if depth < 1:
            raise InputError("depth must be at least 1")
        spec = GroupSpec(DINF_KIND)
        levels = []
        for n in range(1, depth + 1):
            levels.append(modulus_level(spec, 2 ** n, None if n == 1 else 2 ** (n - 1)))
        return SpacePresentation.odometer(spec, levels)

    def z_cross_z2_product(params):
        depth = int(params.get("depth", 5))
        if depth < 1:
            raise InputError("depth must be at least 1")
        spec = GroupSpec(Z_KIND, h_group=_z2())
        levels = []
        for n in range(1, depth + 1):
            levels.append(_product_level(2 ** n, None if n == 1 else 2 ** (n - 1)))
        return SpacePresentation.odometer(spec, levels)

    def periodic_k(params):
        k = int(params.get("k", 3))
        if k < 1:
            raise InputError("period must be at least 1")
        spec = GroupSpec(Z_KIND)
        return SpacePresentation.odometer(spec, [modulus_level(spec, k, None)])

    return {
        "fibonacci": fibonacci,
        "thue_morse": thue_morse,
        "binary_odometer": binary_odometer,
        "dihedral_odometer": dihedral_odometer,
        "z_cross_z2_product": z_cross_z2_product,
        "periodic_k": periodic_k,
    }


_BUILDERS = _builders()

ENTRIES = (
    CorpusEntry(
        "fibonacci",
        {"budget": 10},
        {"group": "Z", "free": True, "minimal": True, "kind": "subshift"},
        "Sturmian substitution a->ab, b->a under the shift",
    ),
    CorpusEntry(
        "thue_morse",
        {"budget": 12},
        {"group": "Dinf", "free": None, "minimal": True, "kind": "subshift"},
        "reversal-closed substitution a->ab, b->ba with the flip action; "
        "freeness left to the checker",
    ),
    CorpusEntry(
        "binary_odometer",
        {"depth": 6},
        {"group": "Z", "free": True, "minimal": True, "kind": "odometer"},
        "adding machine on the chain of mod-2^n residues",
    ),
    CorpusEntry(
        "dihedral_odometer",
        {"depth": 5},
        {"group": "Dinf", "free": True, "minimal": True, "kind": "odometer"},
        "left multiplication on the chain of mod-2^n dihedral quotients",
    ),
    CorpusEntry(
        "z_cross_z2_product",
        {"depth": 5},
        {"group": "Z x Z/2", "free": True, "minimal": True, "kind": "odometer"},
        "binary odometer crossed with a two-point flip, for quotient checks",
    ),
    CorpusEntry(
        "periodic_k",
        {"k": 3},
        {"group": "Z", "free": False, "minimal": True, "kind": "odometer"},
        "finite cycle; negative control for markers and freeness",
    ),
)


def corpus_names() -> tuple:
    return tuple(e.name for e in ENTRIES)


def corpus_entry(name: str) -> CorpusEntry:
    for e in ENTRIES:
        if e.name == name:
            return e
    raise InputError(f"unknown corpus system {name!r}")


def build_system(name: str, params: dict | None = None) -> SpacePresentation:
    if name not in _BUILDERS:
        raise InputError(f"unknown corpus system {name!r}")
    merged = dict(corpus_entry(name).params)
    merged.update(params or {})
    return _BUILDERS[name](merged)
