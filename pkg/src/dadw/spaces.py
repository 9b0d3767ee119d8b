"""Finite presentations of zero-dimensional compact group-spaces.

Two backends share one clopen-set calculus:

* subshift: points are bi-infinite sequences over a finite alphabet whose
  finite windows all pass a language oracle; clopen sets are finite unions
  of cylinders stored as full words over a common window.  The group acts
  by affine index maps (q.x)(i) = x(q^{-1} i), so a translation shifts the
  window and a reflection reverses it.  Reflections are admitted only when
  the oracle certifies the language is reversal-closed at the width in
  play, and the finite part H must be trivial.
* odometer: points are compatible chains of states through a finite tower
  of finite groups Q_1 <- Q_2 <- ...; the group acts by left
  multiplication through per-level homomorphisms.  Every query on this
  backend is definitive.

A subshift clopen set carries an ``exact`` flag.  Whenever the oracle is
consulted at a width where the factor enumeration has not stabilised, the
resulting word list may undershoot the intended set, so emptiness and
covering answers derived from it are downgraded to Unknown rather than
asserted.  All values are immutable; the per-space caches are monotone
memo tables only.
"""
from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field

from .errors import Inconclusive, InputError, ResolutionError
from .groups import (
    DINF_KIND,
    FINITE_KIND,
    Q_IDENTITY,
    Z_KIND,
    Element,
    FiniteGroup,
    GroupSpec,
    QuotientElement,
    quotient_by_finite_normal,
)
from .substitution import OracleAnswer, SubstitutionOracle

ODOMETER = "odometer"
SUBSHIFT = "subshift"


class Emptiness(enum.Enum):
    EMPTY = "certainly-empty"
    NONEMPTY = "certainly-nonempty"
    UNKNOWN = "unknown"


class Trilean(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class CoverStatus(enum.Enum):
    COVERED = "covered"
    NOT_COVERED = "not-covered"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class CoverResult:
    status: CoverStatus
    witness: "ClopenSet | None" = None


@dataclass(frozen=True)
class Pattern:
    """Partial configuration: finitely many positions with prescribed letters."""

    cells: tuple  # ((position, letter), ...) sorted, positions distinct

    @classmethod
    def from_cells(cls, mapping: dict) -> "Pattern":
        items = sorted((int(p), str(c)) for p, c in mapping.items())
        positions = [p for p, _ in items]
        if len(set(positions)) != len(positions):
            raise InputError("pattern has duplicate positions")
        return cls(tuple(items))

    @classmethod
    def from_word(cls, lo: int, word: str) -> "Pattern":
        return cls(tuple((lo + i, c) for i, c in enumerate(word)))

    @classmethod
    def from_json(cls, data) -> "Pattern":
        if isinstance(data, dict) and "word" in data:
            return cls.from_word(int(data.get("lo", 0)), str(data["word"]))
        if isinstance(data, dict) and "cells" in data:
            return cls.from_cells(data["cells"])
        raise InputError("pattern must carry either lo/word or cells")

    def to_json(self) -> dict:
        if self.is_interval():
            return {"lo": self.cells[0][0], "word": self.word()}
        return {"cells": {str(p): c for p, c in self.cells}}

    def window(self) -> tuple[int, int]:
        """(lo, width) of the support hull; (0, 0) for the empty pattern."""
        if not self.cells:
            return (0, 0)
        lo = self.cells[0][0]
        hi = self.cells[-1][0]
        return (lo, hi - lo + 1)

    def is_interval(self) -> bool:
        lo, width = self.window()
        return len(self.cells) == width

    def word(self) -> str:
        if not self.is_interval():
            raise InputError("pattern support is not a full interval")
        return "".join(c for _, c in self.cells)


@dataclass(frozen=True)
class ClopenSet:
    """Finite union of cylinders.

    Odometer form: (level, states).  Subshift form: full words over the
    window [lo, lo + width); the denotation is the union of their
    cylinders.  width 0 with words ("",) is the whole space, width 0 with
    no words is the empty set.
    """

    backend: str
    level: int = 0
    states: frozenset = frozenset()
    lo: int = 0
    width: int = 0
    words: tuple = ()
    exact: bool = True

    def is_whole_marker(self) -> bool:
        return self.backend == SUBSHIFT and self.width == 0 and self.words == ("",)

    def __repr__(self):
        if self.backend == ODOMETER:
            return f"Clopen(level={self.level}, states={sorted(self.states)})"
        if self.width == 0:
            return "Clopen(X)" if self.words else "Clopen(empty)"
        return f"Clopen(lo={self.lo}, words={list(self.words)})"


@dataclass(frozen=True)
class OdometerLevel:
    """One stage of the tower: a finite group plus the action data."""

    group: FiniteGroup
    gen_images: dict
    h_images: tuple
    proj: tuple  # into the previous level
    shorthand: int | None = None  # modulus, when built from one


def _trivial_level() -> OdometerLevel:
    return OdometerLevel(FiniteGroup(((0,),), 0), {}, (0,), (0,), None)


def modulus_level(spec: GroupSpec, m: int, prev_m: int | None) -> OdometerLevel:
    """Standard level for modulus m: Z/m, or D/mZ of order 2m.

    The finite part H maps to the identity (these quotients only see the
    infinite direction).  prev_m is the predecessor's modulus, or None when
    the predecessor is the implicit one-state stage.
    """
    if m < 1:
        raise InputError("modulus must be positive")
    if prev_m is not None and m % prev_m != 0:
        raise InputError(f"modulus {m} is not a multiple of its predecessor {prev_m}")
    n_h = spec.h_group.size
    if spec.quotient_kind in (Z_KIND, FINITE_KIND):
        table = tuple(tuple((i + j) % m for j in range(m)) for i in range(m))
        gens = {"1": 1 % m} if spec.quotient_kind == Z_KIND else {}
        proj = tuple(0 if prev_m is None else i % prev_m for i in range(m))
        return OdometerLevel(FiniteGroup(table, 0), gens, (0,) * n_h, proj, m)
    # infinite dihedral: states (eps, k mod m); index k for eps=+1, m+k for eps=-1
    size = 2 * m

    def idx(eps: int, k: int) -> int:
        return (k % m) if eps == 1 else m + (k % m)

    def unidx(i: int) -> tuple[int, int]:
        return (1, i) if i < m else (-1, i - m)

    table = []
    for i in range(size):
        e1, k1 = unidx(i)
        row = []
        for j in range(size):
            e2, k2 = unidx(j)
            row.append(idx(e1 * e2, e1 * k2 + k1))
        table.append(tuple(row))
    gens = {"s": idx(-1, 0), "t": idx(-1, 1)}
    proj = []
    for i in range(size):
        eps, k = unidx(i)
        if prev_m is None:
            proj.append(0)
        else:
            proj.append((k % prev_m) if eps == 1 else prev_m + (k % prev_m))
    return OdometerLevel(
        FiniteGroup(tuple(table), 0), gens, (0,) * n_h, tuple(proj), m
    )


def level_from_json(spec: GroupSpec, entry, prev: OdometerLevel) -> OdometerLevel:
    if isinstance(entry, int):
        if prev.shorthand is None and prev.group.size != 1:
            raise InputError("modulus shorthand cannot follow an explicit level")
        return modulus_level(spec, entry, prev.shorthand)
    if not isinstance(entry, dict):
        raise InputError("odometer level must be a modulus or a table object")
    try:
        table = tuple(tuple(int(v) for v in row) for row in entry["table"])
        group = FiniteGroup(table, int(entry.get("identity", 0)))
        gen_images = {str(k): int(v) for k, v in (entry.get("genImages") or {}).items()}
        h_images = tuple(int(v) for v in entry.get("hImages", [0] * spec.h_group.size))
        proj = tuple(int(v) for v in entry["proj"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed odometer level: {exc}") from exc
    if "size" in entry and int(entry["size"]) != group.size:
        raise InputError("declared level size disagrees with its table")
    return OdometerLevel(group, gen_images, h_images, proj, None)


def level_to_json(level: OdometerLevel):
    if level.shorthand is not None:
        return level.shorthand
    return {
        "size": level.group.size,
        "table": [list(r) for r in level.group.table],
        "identity": level.group.identity,
        "genImages": dict(sorted(level.gen_images.items())),
        "hImages": list(level.h_images),
        "proj": list(level.proj),
    }


@dataclass(frozen=True)
class SpacePresentation:
    """A group action on a symbolically presented Cantor-type space."""

    group: GroupSpec
    kind: str
    oracle: SubstitutionOracle | None = None
    levels: tuple = ()  # OdometerLevel tuple, index 0 = trivial stage
    _phi: dict = field(default_factory=dict, repr=False, compare=False)

    # -- constructors ------------------------------------------------------

    @classmethod
    def subshift(cls, group: GroupSpec, oracle: SubstitutionOracle) -> "SpacePresentation":
        space = cls(group, SUBSHIFT, oracle=oracle)
        space.validate()
        return space

    @classmethod
    def odometer(cls, group: GroupSpec, level_entries) -> "SpacePresentation":
        levels = [_trivial_level()]
        for entry in level_entries:
            if isinstance(entry, OdometerLevel):
                levels.append(entry)
            else:
                levels.append(level_from_json(group, entry, levels[-1]))
        space = cls(group, ODOMETER, levels=tuple(levels))
        space.validate()
        return space

    @classmethod
    def from_json(cls, data: dict) -> "SpacePresentation":
        if not isinstance(data, dict):
            raise InputError("space presentation must be an object")
        group = GroupSpec.from_json(data.get("group") or {})
        kind = data.get("type")
        if kind == SUBSHIFT:
            try:
                oracle = SubstitutionOracle(
                    tuple(str(a) for a in data["alphabet"]),
                    {str(k): str(v) for k, v in data["substitution"].items()},
                    str(data["seed"]),
                    int(data.get("windowBudget", 8)),
                )
            except (KeyError, TypeError) as exc:
                raise InputError(f"malformed subshift presentation: {exc}") from exc
            return cls.subshift(group, oracle)
        if kind == ODOMETER:
            if "levels" not in data or not isinstance(data["levels"], list):
                raise InputError("odometer presentation needs a levels list")
            return cls.odometer(group, data["levels"])
        raise InputError(f"unknown space type {kind!r}")

    def to_json(self) -> dict:
        if self.kind == SUBSHIFT:
            out = self.oracle.to_json()
            out["group"] = self.group.to_json()
            return out
        return {
            "type": ODOMETER,
            "group": self.group.to_json(),
            "levels": [level_to_json(l) for l in self.levels[1:]],
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def describe(self) -> str:
        if self.kind == SUBSHIFT:
            rules = ", ".join(f"{a}->{self.oracle.rules[a]}" for a in self.oracle.alphabet)
            return f"subshift [{rules}] over {self.group.describe()}"
        sizes = "-".join(str(l.group.size) for l in self.levels[1:])
        return f"odometer tower [{sizes}] over {self.group.describe()}"

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        self.group.validate()
        if self.kind == SUBSHIFT:
            if self.oracle is None:
                raise InputError("subshift presentation needs an oracle")
            if self.group.h_group.size != 1:
                raise InputError("the subshift backend requires a trivial finite part")
            if self.group.quotient_kind == FINITE_KIND:
                raise InputError("the subshift backend needs an infinite quotient")
            if self.group.quotient_kind == DINF_KIND:
                self._require_reversal_closed(max(2, max(
                    len(self.oracle.rules[a]) for a in self.oracle.alphabet)))
            return
        if self.kind != ODOMETER:
            raise InputError(f"unknown backend kind {self.kind!r}")
        if len(self.levels) < 2:
            raise InputError("odometer presentation needs at least one level")
        for n in range(1, len(self.levels)):
            self._validate_level(n)

    def _validate_level(self, n: int) -> None:
        lvl = self.levels[n]
        prev = self.levels[n - 1]
        G = lvl.group
        G.validate()
        H = self.group.h_group
        if len(lvl.h_images) != H.size:
            raise InputError(f"level {n}: hImages must list one state per H element")
        for v in lvl.h_images:
            if not (0 <= v < G.size):
                raise InputError(f"level {n}: hImages out of range")
        if lvl.h_images[H.identity] != G.identity:
            raise InputError(f"level {n}: hImages must send identity to identity")
        for a in range(H.size):
            for b in range(H.size):
                if lvl.h_images[H.mul(a, b)] != G.mul(lvl.h_images[a], lvl.h_images[b]):
                    raise InputError(f"level {n}: hImages is not a homomorphism")
        gen_names = set(self.group.generators())
        if set(lvl.gen_images) != gen_names:
            raise InputError(f"level {n}: generator images must cover {sorted(gen_names)}")
        for name, img in lvl.gen_images.items():
            if not (0 <= img < G.size):
                raise InputError(f"level {n}: genImages[{name!r}] out of range")
        # presentation relations make the level map a homomorphism on the extension
        for name in self.group.generators():
            img = lvl.gen_images[name]
            perm = self.group._alpha_perm(name)
            for h in range(H.size):
                lhs = G.mul(G.mul(img, lvl.h_images[h]), G.inv(img))
                if lhs != lvl.h_images[perm[h]]:
                    raise InputError(
                        f"level {n}: conjugation by genImages[{name!r}] does not "
                        "realize alpha"
                    )
        if self.group.quotient_kind == DINF_KIND:
            for name in ("s", "t"):
                img = lvl.gen_images[name]
                if G.mul(img, img) != lvl.h_images[self.group._sigma_h(name)]:
                    raise InputError(
                        f"level {n}: genImages[{name!r}] squared must realize sigma"
                    )
        if len(lvl.proj) != G.size:
            raise InputError(f"level {n}: proj must list one state per level state")
        for v in lvl.proj:
            if not (0 <= v < prev.group.size):
                raise InputError(f"level {n}: proj out of range")
        if set(lvl.proj) != set(range(prev.group.size)):
            raise InputError(f"level {n}: proj must be surjective")
        if lvl.proj[G.identity] != prev.group.identity:
            raise InputError(f"level {n}: proj must preserve the identity")
        for x in range(G.size):
            for y in range(G.size):
                if lvl.proj[G.mul(x, y)] != prev.group.mul(lvl.proj[x], lvl.proj[y]):
                    raise InputError(f"level {n}: proj is not a homomorphism")
        for name, img in lvl.gen_images.items():
            if n == 1:
                continue
            if lvl.proj[img] != prev.gen_images[name]:
                raise InputError(f"level {n}: proj is not compatible with genImages")
        if n > 1:
            for h in range(H.size):
                if lvl.proj[lvl.h_images[h]] != prev.h_images[h]:
                    raise InputError(f"level {n}: proj is not compatible with hImages")

    # -- odometer helpers --------------------------------------------------

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def level_group(self, n: int) -> FiniteGroup:
        return self.levels[n].group

    def phi(self, n: int, g: Element) -> int:
        """Image of the group element in the level-n quotient."""
        key = (n, g)
        if key not in self._phi:
            lvl = self.levels[n]
            G = lvl.group
            acc = G.identity
            for name in self.group._normal_form(g.q):
                if name == "-1":
                    img = G.inv(lvl.gen_images["1"])
                else:
                    img = lvl.gen_images[name]
                acc = G.mul(acc, img)
            self._phi[key] = G.mul(lvl.h_images[g.h], acc)
        return self._phi[key]

    def lift(self, C: ClopenSet, n: int) -> ClopenSet:
        """Rewrite an odometer set at a deeper level."""
        if C.level > n:
            raise InputError("lift target shallower than the set's level")
        states = C.states
        for m in range(C.level + 1, n + 1):
            proj = self.levels[m].proj
            states = frozenset(s for s in range(self.levels[m].group.size) if proj[s] in states)
        return ClopenSet(ODOMETER, level=n, states=states)

    def _reduce(self, C: ClopenSet) -> ClopenSet:
        level, states = C.level, C.states
        while level > 0:
            proj = self.levels[level].proj
            down = frozenset(proj[s] for s in states)
            full_preimage = frozenset(
                s for s in range(self.levels[level].group.size) if proj[s] in down
            )
            if full_preimage != states:
                break
            level, states = level - 1, down
        return ClopenSet(ODOMETER, level=level, states=states)

    # -- subshift helpers --------------------------------------------------

    def _factors(self, width: int):
        return self.oracle.factors(width)

    def _require_reversal_closed(self, width: int) -> None:
        closed, exact = self.oracle.reversal_closed(width)
        if exact and not closed:
            raise InputError(
                f"language is not reversal-closed at width {width}; "
                "the dihedral action is not defined on this subshift"
            )
        if not exact:
            raise Inconclusive(
                f"cannot certify reversal closure at width {width} within budget"
            )

    def _refine(self, C: ClopenSet, lo: int, width: int) -> ClopenSet:
        """Rewrite a subshift set as full words over [lo, lo + width)."""
        if C.width == 0 and not C.words:
            return ClopenSet(SUBSHIFT, lo=lo, width=width, words=(), exact=C.exact)
        if width < C.width or lo > C.lo or lo + width < C.lo + C.width:
            raise InputError("refinement window must contain the current window")
        if width == C.width and lo == C.lo:
            return C
        factors, f_exact = self._factors(width)
        if C.is_whole_marker():
            return ClopenSet(
                SUBSHIFT, lo=lo, width=width, words=tuple(sorted(factors)),
                exact=C.exact and f_exact,
            )
        off = C.lo - lo
        wanted = set(C.words)
        words = tuple(sorted(w for w in factors if w[off : off + C.width] in wanted))
        return ClopenSet(
            SUBSHIFT, lo=lo, width=width, words=words, exact=C.exact and f_exact
        )

    def _common_window(self, sets) -> tuple[int, int]:
        los = [C.lo for C in sets if C.width > 0]
        his = [C.lo + C.width for C in sets if C.width > 0]
        if not los:
            return (0, 0)
        lo = min(los)
        return (lo, max(his) - lo)

    # -- constructors for clopen sets -------------------------------------

    def whole(self) -> ClopenSet:
        if self.kind == ODOMETER:
            return ClopenSet(ODOMETER, level=0, states=frozenset({0}))
        return ClopenSet(SUBSHIFT, width=0, words=("",))

    def empty(self) -> ClopenSet:
        if self.kind == ODOMETER:
            return ClopenSet(ODOMETER, level=0, states=frozenset())
        return ClopenSet(SUBSHIFT, width=0, words=())

    def coset(self, level: int, states) -> ClopenSet:
        if self.kind != ODOMETER:
            raise InputError("coset sets belong to the odometer backend")
        if not (0 <= level <= self.depth):
            raise InputError(f"level {level} outside the presented tower")
        size = self.levels[level].group.size
        st = frozenset(int(s) for s in states)
        if any(not (0 <= s < size) for s in st):
            raise InputError("state outside the level's range")
        return self.canonical(ClopenSet(ODOMETER, level=level, states=st))

    def cylinder(self, pattern: Pattern) -> ClopenSet:
        if self.kind != SUBSHIFT:
            raise InputError("pattern cylinders belong to the subshift backend")
        for _, c in pattern.cells:
            if c not in self.oracle.alphabet:
                raise InputError(f"letter {c!r} outside the alphabet")
        lo, width = pattern.window()
        if width == 0:
            return self.whole()
        factors, f_exact = self._factors(width)
        words = tuple(
            sorted(
                w
                for w in factors
                if all(w[p - lo] == c for p, c in pattern.cells)
            )
        )
        return ClopenSet(SUBSHIFT, lo=lo, width=width, words=words, exact=f_exact)

    # -- the clopen algebra ------------------------------------------------

    def canonical(self, C: ClopenSet) -> ClopenSet:
        self._check_set(C)
        if self.kind == ODOMETER:
            return self._reduce(C)
        if not C.words:
            return ClopenSet(SUBSHIFT, width=0, words=(), exact=C.exact)
        if C.width == 0:
            return ClopenSet(SUBSHIFT, width=0, words=("",), exact=C.exact)
        return ClopenSet(
            SUBSHIFT, lo=C.lo, width=C.width, words=tuple(sorted(set(C.words))),
            exact=C.exact,
        )

    def _check_set(self, C: ClopenSet) -> None:
        if C.backend != self.kind:
            raise InputError(f"clopen set belongs to the {C.backend} backend")
        if self.kind == ODOMETER:
            if not (0 <= C.level <= self.depth):
                raise InputError(f"set level {C.level} outside the presented tower")
            size = self.levels[C.level].group.size
            if any(not (0 <= s < size) for s in C.states):
                raise InputError("set contains out-of-range states")
        else:
            for w in C.words:
                if len(w) != C.width:
                    raise InputError("subshift set words must fill the window")

    def translate(self, g: Element, C: ClopenSet) -> ClopenSet:
        self._check_set(C)
        self.group._check_element(g)
        if self.kind == ODOMETER:
            if C.level == 0:
                return C  # the whole space and the empty set are invariant
            lvl = self.levels[C.level]
            img = self.phi(C.level, g)
            return ClopenSet(
                ODOMETER,
                level=C.level,
                states=frozenset(lvl.group.mul(img, s) for s in C.states),
            )
        q = g.q
        if C.width == 0:
            return C
        if q.eps == 1:
            return ClopenSet(
                SUBSHIFT, lo=C.lo + q.k, width=C.width, words=C.words, exact=C.exact
            )
        if self.group.quotient_kind != DINF_KIND:
            raise InputError("reflections require the dihedral quotient kind")
        self._require_reversal_closed(C.width)
        hi = C.lo + C.width - 1
        return ClopenSet(
            SUBSHIFT,
            lo=q.k - hi,
            width=C.width,
            words=tuple(sorted(w[::-1] for w in C.words)),
            exact=C.exact,
        )

    def union(self, sets) -> ClopenSet:
        sets = [self.canonical(C) for C in sets]
        if not sets:
            return self.empty()
        if self.kind == ODOMETER:
            n = max(C.level for C in sets)
            states = frozenset().union(*(self.lift(C, n).states for C in sets))
            return self._reduce(ClopenSet(ODOMETER, level=n, states=states))
        if any(C.is_whole_marker() for C in sets):
            exact = all(C.exact for C in sets)
            return ClopenSet(SUBSHIFT, width=0, words=("",), exact=exact)
        lo, width = self._common_window(sets)
        if width == 0:
            return ClopenSet(SUBSHIFT, width=0, words=(), exact=all(C.exact for C in sets))
        refined = [self._refine(C, lo, width) for C in sets]
        words = sorted(set().union(*(set(C.words) for C in refined)))
        return ClopenSet(
            SUBSHIFT, lo=lo, width=width, words=tuple(words),
            exact=all(C.exact for C in refined),
        )

    def intersect(self, sets) -> ClopenSet:
        sets = [self.canonical(C) for C in sets]
        if not sets:
            return self.whole()
        if self.kind == ODOMETER:
            n = max(C.level for C in sets)
            lifted = [self.lift(C, n).states for C in sets]
            states = frozenset.intersection(*lifted)
            return self._reduce(ClopenSet(ODOMETER, level=n, states=states))
        exact = all(C.exact for C in sets)
        proper = [C for C in sets if not C.is_whole_marker()]
        if not proper:
            return ClopenSet(SUBSHIFT, width=0, words=("",), exact=exact)
        if any(not C.words for C in proper):
            return ClopenSet(SUBSHIFT, width=0, words=(), exact=exact)
        lo, width = self._common_window(proper)
        refined = [self._refine(C, lo, width) for C in proper]
        words = set(refined[0].words)
        for C in refined[1:]:
            words &= set(C.words)
        return ClopenSet(
            SUBSHIFT, lo=lo, width=width, words=tuple(sorted(words)),
            exact=all(C.exact for C in refined),
        )

    def complement(self, C: ClopenSet) -> ClopenSet:
        C = self.canonical(C)
        if self.kind == ODOMETER:
            n = C.level
            size = self.levels[n].group.size
            states = frozenset(range(size)) - C.states
            return self._reduce(ClopenSet(ODOMETER, level=n, states=states))
        if C.is_whole_marker():
            return ClopenSet(SUBSHIFT, width=0, words=(), exact=C.exact)
        if not C.words:
            return ClopenSet(SUBSHIFT, width=0, words=("",), exact=C.exact)
        factors, f_exact = self._factors(C.width)
        words = tuple(sorted(set(factors) - set(C.words)))
        return ClopenSet(
            SUBSHIFT, lo=C.lo, width=C.width, words=words, exact=C.exact and f_exact
        )

    def algebra(self, op: str, args) -> ClopenSet:
        if op == "union":
            return self.union(list(args))
        if op == "intersect":
            return self.intersect(list(args))
        if op == "complement":
            (C,) = list(args)
            return self.complement(C)
        raise InputError(f"unknown clopen operation {op!r}")

    # -- queries -----------------------------------------------------------

    def is_empty(self, C: ClopenSet) -> Emptiness:
        C = self.canonical(C)
        if self.kind == ODOMETER:
            return Emptiness.EMPTY if not C.states else Emptiness.NONEMPTY
        if C.words:
            # stored words are factors of substitution iterates, so they all
            # genuinely occur in the space
            return Emptiness.NONEMPTY
        return Emptiness.EMPTY if C.exact else Emptiness.UNKNOWN

    def covers_space(self, elements, C: ClopenSet) -> CoverResult:
        translates = [self.translate(g, C) for g in elements]
        T = self.union(translates) if translates else self.empty()
        comp = self.complement(T)
        status = self.is_empty(comp)
        if status is Emptiness.EMPTY:
            return CoverResult(CoverStatus.COVERED)
        if self.kind == ODOMETER:
            wit = ClopenSet(ODOMETER, level=comp.level, states=frozenset({min(comp.states)}))
            return CoverResult(CoverStatus.NOT_COVERED, wit)
        if status is Emptiness.NONEMPTY and T.exact:
            w = comp.words[0]
            wit = ClopenSet(SUBSHIFT, lo=comp.lo, width=comp.width, words=(w,))
            return CoverResult(CoverStatus.NOT_COVERED, wit)
        return CoverResult(CoverStatus.UNKNOWN)

    def subset_status(self, A: ClopenSet, B: ClopenSet) -> Trilean:
        """Is the denoted set of A contained in that of B?"""
        A, B = self.canonical(A), self.canonical(B)
        if self.kind == ODOMETER:
            n = max(A.level, B.level)
            if self.lift(A, n).states <= self.lift(B, n).states:
                return Trilean.YES
            return Trilean.NO
        if not A.words:
            return Trilean.YES if A.exact else Trilean.UNKNOWN
        if B.is_whole_marker():
            return Trilean.YES
        if A.is_whole_marker():
            # A = X: contained in B only if B's complement is empty
            comp = self.complement(B)
            st = self.is_empty(comp)
            if st is Emptiness.EMPTY:
                return Trilean.YES
            return Trilean.NO if st is Emptiness.NONEMPTY else Trilean.UNKNOWN
        lo, width = self._common_window([A, B])
        ra, rb = self._refine(A, lo, width), self._refine(B, lo, width)
        # an inexact word list under-approximates its set: missing words on
        # the left leave containment unproven, missing words on the right
        # leave non-containment unproven
        if set(ra.words) <= set(rb.words):
            return Trilean.YES if ra.exact else Trilean.UNKNOWN
        return Trilean.NO if rb.exact else Trilean.UNKNOWN

    def sets_equal(self, A: ClopenSet, B: ClopenSet) -> Trilean:
        ab = self.subset_status(A, B)
        ba = self.subset_status(B, A)
        if ab is Trilean.YES and ba is Trilean.YES:
            return Trilean.YES
        if ab is Trilean.NO or ba is Trilean.NO:
            return Trilean.NO
        return Trilean.UNKNOWN

    def member(self, point, C: ClopenSet) -> bool:
        C = self.canonical(C)
        if self.kind == ODOMETER:
            prefix = tuple(int(s) for s in point)
            if len(prefix) > self.depth:
                raise InputError("point prefix deeper than the presented tower")
            for i, s in enumerate(prefix, start=1):
                if not (0 <= s < self.levels[i].group.size):
                    raise InputError(f"point state {s} out of range at level {i}")
                if i > 1 and self.levels[i].proj[s] != prefix[i - 2]:
                    raise InputError("point prefix is not projection-compatible")
            if C.level == 0:
                return bool(C.states)
            if len(prefix) < C.level:
                raise ResolutionError(
                    f"point prefix of depth {len(prefix)} cannot decide a "
                    f"level-{C.level} set"
                )
            return prefix[C.level - 1] in C.states
        if not isinstance(point, Pattern):
            raise InputError("subshift points are given as patterns")
        if C.width == 0:
            return bool(C.words)
        if not point.is_interval():
            raise InputError("subshift point prefixes must be full intervals")
        plo, pwidth = point.window()
        if plo > C.lo or plo + pwidth < C.lo + C.width:
            raise ResolutionError("point pattern does not cover the set's window")
        word = point.word()[C.lo - plo : C.lo - plo + C.width]
        return word in C.words

    # -- serialization of sets and points ---------------------------------

    def clopen_to_json(self, C: ClopenSet) -> dict:
        C = self.canonical(C)
        if self.kind == ODOMETER:
            return {"backend": ODOMETER, "level": C.level, "states": sorted(C.states)}
        return {
            "backend": SUBSHIFT,
            "lo": C.lo,
            "width": C.width,
            "words": list(C.words),
        }

    def clopen_from_json(self, data: dict) -> ClopenSet:
        if not isinstance(data, dict) or data.get("backend") != self.kind:
            raise InputError("clopen literal does not match the space's backend")
        if self.kind == ODOMETER:
            C = ClopenSet(
                ODOMETER,
                level=int(data.get("level", 0)),
                states=frozenset(int(s) for s in data.get("states", [])),
            )
        else:
            words = tuple(str(w) for w in data.get("words", []))
            width = int(data.get("width", 0))
            if any(len(w) != width for w in words):
                raise InputError("clopen literal words must fill the window")
            C = ClopenSet(
                SUBSHIFT, lo=int(data.get("lo", 0)), width=width, words=tuple(sorted(words))
            )
        self._check_set(C)
        return self.canonical(C)

    def point_from_json(self, data):
        if self.kind == ODOMETER:
            if not isinstance(data, list):
                raise InputError("odometer points are given as state lists")
            return tuple(int(s) for s in data)
        return Pattern.from_json(data)


# -- factor maps -----------------------------------------------------------


@dataclass(frozen=True)
class FactorMap:
    """Equivariant surjection between presented spaces.

    Covers the identity map, forgetting deep odometer levels, collapsing
    along a finite normal subgroup K of H (the group changes to its
    quotient), and letter-to-letter subshift codes.  ``h_map`` carries the
    finite part of the group homomorphism; the quotient part is always the
    identity.
    """

    src: "SpacePresentation"
    dst: "SpacePresentation"
    h_map: tuple
    level_of: tuple = ()  # odometer: dst level index -> src level index
    state_maps: tuple = ()  # odometer: per dst level, src state -> dst state
    letter_code: tuple = ()  # subshift: ((src letter, dst letter), ...)

    def same_group(self) -> bool:
        return self.dst.group == self.src.group and self.h_map == tuple(
            range(self.src.group.h_group.size)
        )

    def map_element(self, g: Element) -> Element:
        return self.dst.group.element(self.h_map[g.h], g.q)

    def pull_back(self, C: ClopenSet) -> ClopenSet:
        self.dst._check_set(C)
        if self.dst.kind == ODOMETER:
            i = self.level_of[C.level]
            sm = self.state_maps[C.level]
            states = frozenset(
                s for s in range(self.src.levels[i].group.size) if sm[s] in C.states
            )
            return self.src.canonical(ClopenSet(ODOMETER, level=i, states=states))
        C = self.dst.canonical(C)
        if C.width == 0:
            return ClopenSet(SUBSHIFT, width=0, words=C.words, exact=C.exact)
        code = dict(self.letter_code)
        factors, f_exact = self.src._factors(C.width)
        wanted = set(C.words)
        words = tuple(
            sorted(w for w in factors if "".join(code[c] for c in w) in wanted)
        )
        return ClopenSet(
            SUBSHIFT, lo=C.lo, width=C.width, words=words, exact=C.exact and f_exact
        )

    def validate(self) -> None:
        sg, dg = self.src.group, self.dst.group
        if sg.quotient_kind != dg.quotient_kind:
            raise InputError("factor maps preserve the quotient kind")
        if len(self.h_map) != sg.h_group.size:
            raise InputError("h_map must cover the source finite part")
        for a in range(sg.h_group.size):
            for b in range(sg.h_group.size):
                if self.h_map[sg.h_group.mul(a, b)] != dg.h_group.mul(
                    self.h_map[a], self.h_map[b]
                ):
                    raise InputError("h_map is not a homomorphism")
        if self.src.kind != self.dst.kind:
            raise InputError("factor maps connect spaces of the same backend kind")
        if self.src.kind == ODOMETER:
            self._validate_odometer()
        else:
            self._validate_code()

    def _probe_elements(self):
        sg = self.src.group
        probe = [Element(h, Q_IDENTITY) for h in range(sg.h_group.size)]
        for q in sg.generators().values():
            probe.append(Element(sg.h_group.identity, q))
        return probe

    def _validate_odometer(self) -> None:
        if len(self.level_of) != self.dst.depth + 1 or len(self.state_maps) != len(
            self.level_of
        ):
            raise InputError("factor map must cover every destination level")
        if self.level_of[0] != 0:
            raise InputError("level 0 maps to level 0")
        prev = -1
        for j, i in enumerate(self.level_of):
            if not (0 <= i <= self.src.depth) or i <= prev and j > 0:
                raise InputError("source levels must be strictly increasing")
            prev = i
            sm = self.state_maps[j]
            src_size = self.src.levels[i].group.size
            dst_size = self.dst.levels[j].group.size
            if len(sm) != src_size or set(sm) != set(range(dst_size)):
                raise InputError(f"state map {j} is not onto the destination level")
        probe = self._probe_elements()
        for j in range(1, self.dst.depth + 1):
            i = self.level_of[j]
            sm = self.state_maps[j]
            dstG = self.dst.levels[j].group
            for g in probe:
                img = self.dst.phi(j, self.map_element(g))
                src_img = self.src.phi(i, g)
                srcG = self.src.levels[i].group
                for x in range(srcG.size):
                    if sm[srcG.mul(src_img, x)] != dstG.mul(img, sm[x]):
                        raise InputError(
                            f"state map {j} is not equivariant at {g!r}"
                        )
            # compatibility with the towers' projections
            sm_prev = self.state_maps[j - 1]
            for x in range(self.src.levels[i].group.size):
                down = x
                for m in range(i, self.level_of[j - 1], -1):
                    down = self.src.levels[m].proj[down]
                if self.dst.levels[j].proj[sm[x]] != sm_prev[down]:
                    raise InputError(f"state map {j} is not projection-compatible")

    def _validate_code(self) -> None:
        code = dict(self.letter_code)
        if set(code) != set(self.src.oracle.alphabet):
            raise InputError("letter code must cover the source alphabet")
        if any(c not in self.dst.oracle.alphabet for c in code.values()):
            raise InputError("letter code must land in the destination alphabet")
        # the coded language must be admissible downstairs at a sample width
        width = 4
        factors, _ = self.src._factors(width)
        for w in factors:
            if self.dst.oracle.status("".join(code[c] for c in w)) is OracleAnswer.FORBIDDEN:
                raise InputError(f"letter code sends {w!r} outside the language")


def identity_factor_map(space: SpacePresentation) -> FactorMap:
    h_id = tuple(range(space.group.h_group.size))
    if space.kind == ODOMETER:
        fm = FactorMap(
            space,
            space,
            h_id,
            level_of=tuple(range(space.depth + 1)),
            state_maps=tuple(
                tuple(range(l.group.size)) for l in space.levels
            ),
        )
    else:
        fm = FactorMap(
            space, space, h_id,
            letter_code=tuple((a, a) for a in space.oracle.alphabet),
        )
    fm.validate()
    return fm


def level_collapse(space: SpacePresentation, depth: int) -> FactorMap:
    """Forget the tower below the given depth."""
    if space.kind != ODOMETER:
        raise InputError("level collapse applies to odometer presentations")
    if not (1 <= depth <= space.depth):
        raise InputError("collapse depth outside the presented tower")
    dst = SpacePresentation(space.group, ODOMETER, levels=space.levels[: depth + 1])
    dst.validate()
    fm = FactorMap(
        space,
        dst,
        tuple(range(space.group.h_group.size)),
        level_of=tuple(range(depth + 1)),
        state_maps=tuple(tuple(range(l.group.size)) for l in dst.levels),
    )
    fm.validate()
    return fm


def letter_code_map(src: SpacePresentation, dst: SpacePresentation, code: dict) -> FactorMap:
    if src.kind != SUBSHIFT or dst.kind != SUBSHIFT:
        raise InputError("letter codes apply to subshift presentations")
    fm = FactorMap(src, dst, (0,), letter_code=tuple(sorted(code.items())))
    fm.validate()
    return fm


def quotient_system(space: SpacePresentation, k_elements) -> FactorMap:
    """Collapse a finite normal subgroup K of H out of the system.

    Returns the factor map from the given space onto the quotient space
    carrying the quotient group action.  Only odometer presentations
    support nontrivial K (subshifts have trivial H).
    """
    K = frozenset(int(k) for k in k_elements)
    qgroup, h_proj = quotient_by_finite_normal(space.group, K)
    if space.kind == SUBSHIFT:
        if len(K) != 1:
            raise InputError("subshift presentations only admit trivial K")
        return identity_factor_map(space)
    new_levels = [_trivial_level()]
    state_maps = [(0,)]
    for n in range(1, space.depth + 1):
        lvl = space.levels[n]
        G = lvl.group
        images = frozenset(lvl.h_images[k] for k in K)
        # subgroup generated by the K-images (closure under the table)
        sub = set(images) | {G.identity}
        changed = True
        while changed:
            changed = False
            for a in list(sub):
                for b in list(sub):
                    c = G.mul(a, b)
                    if c not in sub:
                        sub.add(c)
                        changed = True
        for x in range(G.size):
            for a in sub:
                if G.mul(G.mul(x, a), G.inv(x)) not in sub:
                    raise InputError(
                        f"level {n}: the image of K does not generate a normal subgroup"
                    )
        coset_of = [-1] * G.size
        reps = []
        for x in range(G.size):
            if coset_of[x] >= 0:
                continue
            label = len(reps)
            reps.append(x)
            for a in sub:
                coset_of[G.mul(a, x)] = label
        m = len(reps)
        table = tuple(
            tuple(coset_of[G.mul(reps[i], reps[j])] for j in range(m)) for i in range(m)
        )
        q_fin = FiniteGroup(table, coset_of[G.identity])
        gen_images = {name: coset_of[img] for name, img in lvl.gen_images.items()}
        h_reps = [None] * qgroup.h_group.size
        for h in range(space.group.h_group.size):
            if h_reps[h_proj[h]] is None:
                h_reps[h_proj[h]] = lvl.h_images[h]
        h_images = tuple(coset_of[r] for r in h_reps)
        prev_sm = state_maps[n - 1]
        proj = tuple(prev_sm[lvl.proj[reps[i]]] for i in range(m))
        new_levels.append(OdometerLevel(q_fin, gen_images, h_images, proj, None))
        state_maps.append(tuple(coset_of))
    dst = SpacePresentation(qgroup, ODOMETER, levels=tuple(new_levels))
    dst.validate()
    fm = FactorMap(
        space,
        dst,
        tuple(h_proj),
        level_of=tuple(range(space.depth + 1)),
        state_maps=tuple(state_maps),
    )
    fm.validate()
    return fm
