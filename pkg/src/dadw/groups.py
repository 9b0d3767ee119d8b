"""Exact arithmetic for infinite virtually cyclic groups.

A group here is an extension of a finite group H by an infinite quotient Q,
where Q is either the integers or the infinite dihedral group
D = <s, t | s^2 = t^2 = e>.  Elements are pairs (h, q) with h an index into
H and q a quotient element; multiplication twists through automorphisms
``alpha`` of H attached to the generators of Q and, for the dihedral kind,
through the squares of the lifted generators (``sigma``).

Quotient elements are stored as affine isometries of the integers
x -> eps*x + k with eps in {+1, -1}; the integers embed as the eps = +1
translations, s acts as x -> -x and t as x -> -x + 1.  Word length in D is
measured against the generating set {s, t}; its Cayley graph is a line, and
``iota`` reads off the (signed) position of an element on that line, with t
on the positive side.  This makes iota an isometry onto the integers for
the right-invariant word metric.

All values are immutable and all operations are pure.  The dihedral
word-length layers are grown once per process and only ever appended to,
so concurrent readers see consistent data.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .errors import InputError

Z_KIND = "Z"
DINF_KIND = "Dinf"
FINITE_KIND = "finite"

SEARCH_ORDER_TAG = "dinf-line:t-positive"


@dataclass(frozen=True, order=True)
class QuotientElement:
    """Affine isometry x -> eps*x + k of the integers."""

    eps: int
    k: int

    def __repr__(self):
        if self.eps == 1 and self.k == 0:
            return "e"
        if self.eps == 1:
            return f"(+1,{self.k:+d})"
        return f"(-1,{self.k:+d})"


Q_IDENTITY = QuotientElement(1, 0)
S_GEN = QuotientElement(-1, 0)
T_GEN = QuotientElement(-1, 1)
Z_GEN = QuotientElement(1, 1)


def q_mul(a: QuotientElement, b: QuotientElement) -> QuotientElement:
    """Compose affine maps: (a.eps, a.k)(b.eps, b.k) = (a.eps*b.eps, a.eps*b.k + a.k)."""
    return QuotientElement(a.eps * b.eps, a.eps * b.k + a.k)


def q_inv(a: QuotientElement) -> QuotientElement:
    return QuotientElement(a.eps, -a.eps * a.k)


@dataclass(frozen=True, order=True)
class Element:
    """Group element (h, q): h indexes the finite normal subgroup, q the quotient."""

    h: int
    q: QuotientElement

    def __repr__(self):
        return f"({self.h},{self.q!r})"


@dataclass(frozen=True)
class Ball:
    """Elements of a metric ball, canonically ordered."""

    radius: int
    elements: tuple

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements


# The Cayley graph of D with respect to {s, t} is a line.  Walking from the
# identity, the two rays are generated by left-multiplying alternately by t
# and s (positive side: t, st, tst, ...) or by s and t (negative side:
# s, ts, sts, ...).  The lists below are extended on demand and cached for
# the whole process; they depend on nothing but the presentation.
_POS_RAY: list[QuotientElement] = [Q_IDENTITY]
_NEG_RAY: list[QuotientElement] = [Q_IDENTITY]
_DINF_IOTA: dict[QuotientElement, int] = {Q_IDENTITY: 0}


def _extend_rays(n: int) -> None:
    while len(_POS_RAY) <= n:
        i = len(_POS_RAY)
        gen = T_GEN if i % 2 == 1 else S_GEN
        nxt = q_mul(gen, _POS_RAY[-1])
        _POS_RAY.append(nxt)
        _DINF_IOTA[nxt] = i
    while len(_NEG_RAY) <= n:
        i = len(_NEG_RAY)
        gen = S_GEN if i % 2 == 1 else T_GEN
        nxt = q_mul(gen, _NEG_RAY[-1])
        _NEG_RAY.append(nxt)
        _DINF_IOTA[nxt] = -i


def dinf_iota(q: QuotientElement) -> int:
    """Signed position of q on the Cayley line, with iota(t) = +1."""
    if q not in _DINF_IOTA:
        # every element lies within 2|k| + 1 steps of the identity
        _extend_rays(2 * abs(q.k) + 2)
    if q not in _DINF_IOTA:
        raise InputError(f"{q!r} is not an element of the infinite dihedral group")
    return _DINF_IOTA[q]


def dinf_word_length(q: QuotientElement) -> int:
    return abs(dinf_iota(q))


def dinf_ball(radius: int) -> tuple[QuotientElement, ...]:
    """Ball of the given radius, ordered by iota from -radius to +radius."""
    _extend_rays(radius)
    neg = [_NEG_RAY[i] for i in range(radius, 0, -1)]
    pos = [_POS_RAY[i] for i in range(1, radius + 1)]
    return tuple(neg + [Q_IDENTITY] + pos)


@dataclass(frozen=True)
class FiniteGroup:
    """Finite group given by its full multiplication table."""

    table: tuple[tuple[int, ...], ...]
    identity: int

    @property
    def size(self) -> int:
        return len(self.table)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        row = self.table[i]
        return row.index(self.identity)

    def validate(self) -> None:
        n = self.size
        if n == 0:
            raise InputError("finite group table is empty")
        for row in self.table:
            if len(row) != n or any(not (0 <= v < n) for v in row):
                raise InputError("finite group table is not square over its index range")
            if sorted(row) != list(range(n)):
                raise InputError("finite group table rows must be permutations")
        for j in range(n):
            col = [self.table[i][j] for i in range(n)]
            if sorted(col) != list(range(n)):
                raise InputError("finite group table columns must be permutations")
        if not (0 <= self.identity < n):
            raise InputError("finite group identity index out of range")
        for i in range(n):
            if self.mul(self.identity, i) != i or self.mul(i, self.identity) != i:
                raise InputError("declared identity is not an identity")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                        raise InputError("finite group table is not associative")

    def is_automorphism(self, perm: tuple[int, ...]) -> bool:
        n = self.size
        if len(perm) != n or sorted(perm) != list(range(n)):
            return False
        return all(
            perm[self.mul(i, j)] == self.mul(perm[i], perm[j])
            for i in range(n)
            for j in range(n)
        )


TRIVIAL_H = FiniteGroup(((0,),), 0)


def _identity_perm(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def _invert_perm(perm: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(perm)
    for i, v in enumerate(perm):
        out[v] = i
    return tuple(out)


@dataclass(frozen=True)
class GroupSpec:
    """Presentation of a virtually cyclic group as a finite-by-Q extension.

    ``alpha`` maps generator names to permutations of H (the conjugation
    action of the lifted generator); ``sigma`` maps generator names to the
    H-element equal to the square of the lifted generator (dihedral kind
    only; for the integer kind the extension splits and sigma is trivial).
    """

    quotient_kind: str
    h_group: FiniteGroup = TRIVIAL_H
    alpha: dict = field(default_factory=dict)
    sigma: dict = field(default_factory=dict)

    # -- basic structure ---------------------------------------------------

    @property
    def identity(self) -> Element:
        return Element(self.h_group.identity, Q_IDENTITY)

    def generators(self) -> dict[str, QuotientElement]:
        if self.quotient_kind == Z_KIND:
            return {"1": Z_GEN}
        if self.quotient_kind == DINF_KIND:
            return {"s": S_GEN, "t": T_GEN}
        return {}

    def element(self, h: int, q: QuotientElement) -> Element:
        g = Element(h, q)
        self._check_element(g)
        return g

    def _check_element(self, g: Element) -> None:
        if not (0 <= g.h < self.h_group.size):
            raise InputError(f"finite part {g.h} out of range")
        if g.q.eps not in (1, -1):
            raise InputError("quotient sign must be +1 or -1")
        if self.quotient_kind in (Z_KIND, FINITE_KIND) and g.q.eps != 1:
            raise InputError("reflections do not belong to this quotient kind")
        if self.quotient_kind == FINITE_KIND and g.q.k != 0:
            raise InputError("nontrivial translation in a finite quotient")

    # -- quotient metric ---------------------------------------------------

    def quotient_map(self, g: Element) -> QuotientElement:
        return g.q

    def word_length(self, q: QuotientElement) -> int:
        if self.quotient_kind == Z_KIND:
            return abs(q.k)
        if self.quotient_kind == DINF_KIND:
            return dinf_word_length(q)
        return 0

    def iota(self, q: QuotientElement) -> int:
        """Isometry from the quotient onto the integers (line order)."""
        if self.quotient_kind == Z_KIND:
            return q.k
        if self.quotient_kind == DINF_KIND:
            return dinf_iota(q)
        raise InputError("iota is only defined for an infinite quotient")

    def ball(self, radius: int) -> Ball:
        if radius < 0:
            raise InputError("ball radius must be nonnegative")
        if self.quotient_kind == Z_KIND:
            elems = tuple(QuotientElement(1, k) for k in range(-radius, radius + 1))
        elif self.quotient_kind == DINF_KIND:
            elems = dinf_ball(radius)
        else:
            elems = (Q_IDENTITY,)
        return Ball(radius, elems)

    def preimage_ball(self, radius: int) -> Ball:
        """All (h, q) with word_length(q) <= radius, ordered by (iota, h)."""
        elems = []
        for q in self.ball(radius):
            for h in range(self.h_group.size):
                elems.append(Element(h, q))
        return Ball(radius, tuple(elems))

    def sort_key(self, g: Element) -> tuple[int, int]:
        if self.quotient_kind == FINITE_KIND:
            return (0, g.h)
        return (self.iota(g.q), g.h)

    def infinite_quotient(self) -> bool:
        return self.quotient_kind in (Z_KIND, DINF_KIND)

    # -- multiplication ----------------------------------------------------

    def _normal_form(self, q: QuotientElement) -> tuple[str, ...]:
        """Generator names (g1, ..., gn) with q = g1 g2 ... gn, n = word length."""
        if self.quotient_kind == Z_KIND:
            return ("1",) * q.k if q.k >= 0 else ("-1",) * (-q.k)
        letters = []
        cur = q
        cur_len = dinf_word_length(cur)
        while cur != Q_IDENTITY:
            for name, gen in (("s", S_GEN), ("t", T_GEN)):
                nxt = q_mul(gen, cur)
                if dinf_word_length(nxt) < cur_len:
                    letters.append(name)
                    cur, cur_len = nxt, cur_len - 1
                    break
            else:  # pragma: no cover - the Cayley line leaves no other case
                raise AssertionError("normal form peeling failed")
        return tuple(letters)

    def _alpha_perm(self, name: str) -> tuple[int, ...]:
        n = self.h_group.size
        if name == "-1":
            base = self.alpha.get("1", _identity_perm(n))
            return _invert_perm(tuple(base))
        return tuple(self.alpha.get(name, _identity_perm(n)))

    def _sigma_h(self, name: str) -> int:
        return self.sigma.get(name, self.h_group.identity)

    def _gen_lmul(self, name: str, h: int, q: QuotientElement) -> tuple[int, QuotientElement]:
        """Left-multiply (h, q) by the lifted generator named ``name``.

        For the dihedral kind the lifted generator squares to sigma(name)
        in H, so when the generator cancels against the leading letter of
        q's normal form the square is picked up as a correction factor.
        """
        if name in ("1", "-1"):
            gen = Z_GEN if name == "1" else QuotientElement(1, -1)
            return self._alpha_perm(name)[h], q_mul(gen, q)
        gen = S_GEN if name == "s" else T_GEN
        new_q = q_mul(gen, q)
        new_h = self._alpha_perm(name)[h]
        if dinf_word_length(new_q) < dinf_word_length(q):
            new_h = self.h_group.mul(new_h, self._sigma_h(name))
        return new_h, new_q

    def multiply(self, a: Element, b: Element) -> Element:
        self._check_element(a)
        self._check_element(b)
        h, q = b.h, b.q
        for name in reversed(self._normal_form(a.q)):
            h, q = self._gen_lmul(name, h, q)
        return Element(self.h_group.mul(a.h, h), q)

    def inverse(self, a: Element) -> Element:
        self._check_element(a)
        # lift the quotient inverse with trivial finite part, then correct in H
        y = Element(self.h_group.identity, q_inv(a.q))
        rem = self.multiply(a, y)
        if rem.q != Q_IDENTITY:  # pragma: no cover
            raise AssertionError("quotient inverse failed")
        return self.multiply(y, Element(self.h_group.inv(rem.h), Q_IDENTITY))

    def conjugate(self, g: Element, x: Element) -> Element:
        return self.multiply(self.multiply(g, x), self.inverse(g))

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        if self.quotient_kind not in (Z_KIND, DINF_KIND, FINITE_KIND):
            raise InputError(f"unknown quotient kind {self.quotient_kind!r}")
        self.h_group.validate()
        n = self.h_group.size
        names = {Z_KIND: ("1",), DINF_KIND: ("s", "t"), FINITE_KIND: ()}[self.quotient_kind]
        for name in self.alpha:
            if name not in names:
                raise InputError(f"alpha defined for unknown generator {name!r}")
        for name in self.sigma:
            if name not in names:
                raise InputError(f"sigma defined for unknown generator {name!r}")
        if self.quotient_kind == Z_KIND and self.sigma:
            raise InputError("the integer quotient kind admits no sigma data")
        for name in names:
            perm = self._alpha_perm(name)
            if not self.h_group.is_automorphism(perm):
                raise InputError(f"alpha[{name!r}] is not an automorphism of H")
        for name in names:
            hg = self._sigma_h(name)
            if not (0 <= hg < n):
                raise InputError(f"sigma[{name!r}] out of range")
        if self.quotient_kind == DINF_KIND:
            mul, inv = self.h_group.mul, self.h_group.inv
            for name in names:
                perm = self._alpha_perm(name)
                hg = self._sigma_h(name)
                if perm[hg] != hg:
                    raise InputError(f"alpha[{name!r}] must fix sigma[{name!r}]")
                for h in range(n):
                    if perm[perm[h]] != mul(mul(hg, h), inv(hg)):
                        raise InputError(
                            f"alpha[{name!r}] squared must be conjugation by sigma[{name!r}]"
                        )
        self._check_associativity()

    def _check_associativity(self) -> None:
        """Exhaustive associativity check over H and the lifted generators."""
        probe = [Element(h, Q_IDENTITY) for h in range(self.h_group.size)]
        for q in self.generators().values():
            probe.append(Element(self.h_group.identity, q))
            probe.append(self.inverse(Element(self.h_group.identity, q)))
        for a in probe:
            for b in probe:
                ab = self.multiply(a, b)
                for c in probe:
                    if self.multiply(ab, c) != self.multiply(a, self.multiply(b, c)):
                        raise InputError(
                            f"extension data is not associative at {a!r},{b!r},{c!r}"
                        )

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {"quotient": self.quotient_kind}
        if self.h_group.size > 1:
            out["H"] = {
                "size": self.h_group.size,
                "table": [list(r) for r in self.h_group.table],
                "identity": self.h_group.identity,
            }
        if self.alpha:
            out["alpha"] = {k: list(v) for k, v in sorted(self.alpha.items())}
        if self.sigma:
            out["sigma"] = dict(sorted(self.sigma.items()))
        return out

    @classmethod
    def from_json(cls, data: dict) -> "GroupSpec":
        if not isinstance(data, dict):
            raise InputError("group specification must be an object")
        kind = data.get("quotient")
        if kind not in (Z_KIND, DINF_KIND, FINITE_KIND):
            raise InputError(f"unknown quotient kind {kind!r}")
        h_group = TRIVIAL_H
        if "H" in data:
            hd = data["H"]
            try:
                table = tuple(tuple(int(v) for v in row) for row in hd["table"])
                h_group = FiniteGroup(table, int(hd.get("identity", 0)))
            except (KeyError, TypeError, ValueError) as exc:
                raise InputError(f"malformed finite group data: {exc}") from exc
            if "size" in hd and int(hd["size"]) != h_group.size:
                raise InputError("declared H size disagrees with its table")
        alpha = {}
        for name, perm in (data.get("alpha") or {}).items():
            alpha[str(name)] = tuple(int(v) for v in perm)
        sigma = {}
        for name, idx in (data.get("sigma") or {}).items():
            sigma[str(name)] = int(idx)
        spec = cls(kind, h_group, alpha, sigma)
        spec.validate()
        return spec

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def describe(self) -> str:
        kind = {Z_KIND: "Z", DINF_KIND: "infinite dihedral", FINITE_KIND: "finite"}[
            self.quotient_kind
        ]
        if self.h_group.size == 1:
            return f"quotient {kind}, trivial finite part"
        return f"quotient {kind}, |H| = {self.h_group.size}"

    def element_to_json(self, g: Element):
        if self.quotient_kind == DINF_KIND:
            q = [g.q.eps, g.q.k]
        else:
            q = g.q.k
        if self.h_group.size == 1:
            return q
        return [g.h, q]

    def element_from_json(self, data) -> Element:
        if self.h_group.size == 1:
            h, qdata = 0, data
        else:
            if not (isinstance(data, list) and len(data) == 2):
                raise InputError(f"element {data!r} must be a pair [h, q]")
            h, qdata = int(data[0]), data[1]
        if self.quotient_kind == DINF_KIND:
            if not (isinstance(qdata, list) and len(qdata) == 2):
                raise InputError(f"dihedral quotient element {qdata!r} must be [eps, k]")
            q = QuotientElement(int(qdata[0]), int(qdata[1]))
        else:
            q = QuotientElement(1, int(qdata))
        g = Element(h, q)
        self._check_element(g)
        return g


def quotient_by_finite_normal(spec: GroupSpec, k_elements: frozenset[int]):
    """Quotient of the group by a subgroup K of H that is normal in the whole group.

    Returns (quotient GroupSpec, finite-part projection list) where the
    projection maps each H index to an index of H/K.  Raises InputError if
    K is not a subgroup of H, not invariant under every alpha, or does not
    contain the sigma corrections needed for the quotient data to make
    sense unchanged (sigma is mapped through the projection, so no
    containment condition is needed beyond normality).
    """
    H = spec.h_group
    K = frozenset(k_elements)
    if H.identity not in K:
        raise InputError("K must contain the identity")
    for a in K:
        if not (0 <= a < H.size):
            raise InputError("K contains an out-of-range index")
    for a in K:
        if H.inv(a) not in K:
            raise InputError("K is not closed under inverses")
        for b in K:
            if H.mul(a, b) not in K:
                raise InputError("K is not closed under multiplication")
    for h in range(H.size):
        for a in K:
            if H.mul(H.mul(h, a), H.inv(h)) not in K:
                raise InputError("K is not normal in H")
    for name in spec.generators():
        perm = spec._alpha_perm(name)
        for a in K:
            if perm[a] not in K:
                raise InputError(f"K is not invariant under alpha[{name!r}]")

    # left cosets hK, labelled in order of least member
    coset_of = [-1] * H.size
    reps: list[int] = []
    for h in range(H.size):
        if coset_of[h] >= 0:
            continue
        label = len(reps)
        reps.append(h)
        for a in K:
            coset_of[H.mul(h, a)] = label
    m = len(reps)
    table = tuple(
        tuple(coset_of[H.mul(reps[i], reps[j])] for j in range(m)) for i in range(m)
    )
    q_h = FiniteGroup(table, coset_of[H.identity])
    alpha = {}
    sigma = {}
    for name in spec.generators():
        perm = spec._alpha_perm(name)
        alpha[name] = tuple(coset_of[perm[reps[i]]] for i in range(m))
        if spec.quotient_kind == DINF_KIND:
            sigma[name] = coset_of[spec._sigma_h(name)]
    out = GroupSpec(spec.quotient_kind, q_h, alpha, sigma)
    out.validate()
    return out, coset_of
