"""Factor-language oracle for primitive substitution subshifts.

The language of the subshift generated by iterating a substitution on a
seed letter is approximated from below by the factors of the iterates
sigma^k(seed).  Because the seed is required to be a prefix of its own
image, the iterates form a nested chain of prefixes, so the factor sets
grow monotonically.  If for some k every factor of length <= n of
sigma^(k+1)(seed) already occurs in sigma^k(seed), then no longer iterate
can contribute a new factor of length <= n either (each factor of a later
iterate sits inside the image of a factor two letters wider from the
previous one, and induction pushes it back down the chain).  At that point
the enumeration is exact and absence from it is a definitive rejection.
Until stabilisation, absence only means the oracle does not know.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import InputError

# stop iterating once a word gets this long, whatever the budget says
_LENGTH_CEILING = 2_000_000


class OracleAnswer(enum.Enum):
    ADMISSIBLE = "admissible"
    FORBIDDEN = "forbidden"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SubstitutionOracle:
    alphabet: tuple[str, ...]
    rules: dict
    seed: str
    budget: int
    _iterates: list = field(default_factory=list, repr=False, compare=False)
    _factors: dict = field(default_factory=dict, repr=False, compare=False)
    _reversal: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        letters = set(self.alphabet)
        if len(self.alphabet) != len(letters) or not self.alphabet:
            raise InputError("alphabet must be a nonempty set of distinct letters")
        if any(len(a) != 1 for a in self.alphabet):
            raise InputError("alphabet entries must be single characters")
        for a in self.alphabet:
            image = self.rules.get(a)
            if not image or any(c not in letters for c in image):
                raise InputError(f"substitution image of {a!r} is missing or malformed")
        if self.seed not in letters:
            raise InputError("seed must be a letter of the alphabet")
        if not self.rules[self.seed].startswith(self.seed):
            raise InputError("seed must be a prefix of its own image")
        if self.budget < 1:
            raise InputError("window budget must be at least 1")
        self._check_primitive()

    def _check_primitive(self) -> None:
        """Every letter must eventually occur in every letter's iterated image."""
        n = len(self.alphabet)
        reach = {a: set(self.rules[a]) for a in self.alphabet}
        for _ in range(n):
            for a in self.alphabet:
                reach[a] = set().union(*(set(self.rules[b]) | reach[b] for b in reach[a]))
        if any(len(reach[a]) != n for a in self.alphabet):
            raise InputError("substitution is not primitive")

    # -- iterates ----------------------------------------------------------

    def _word(self, k: int) -> str:
        if not self._iterates:
            self._iterates.append(self.seed)
        while len(self._iterates) <= k:
            prev = self._iterates[-1]
            if len(prev) > _LENGTH_CEILING:
                return self._iterates[-1]
            self._iterates.append("".join(self.rules[c] for c in prev))
        return self._iterates[k]

    def _max_k(self) -> int:
        k = 0
        while k < self.budget and len(self._word(k)) <= _LENGTH_CEILING:
            k += 1
        return k

    @staticmethod
    def _factors_upto(word: str, n: int) -> frozenset:
        out = set()
        for ln in range(min(n, len(word)) + 1):
            for i in range(len(word) - ln + 1):
                out.add(word[i : i + ln])
        return frozenset(out)

    def factors(self, n: int):
        """All known factors of length exactly n, and whether the list is exact."""
        if n < 0:
            raise InputError("factor length must be nonnegative")
        if n not in self._factors:
            kmax = self._max_k()
            prev = self._factors_upto(self._word(0), n)
            exact = False
            for k in range(1, kmax + 1):
                cur = self._factors_upto(self._word(k), n)
                if cur == prev and len(self._word(k)) > n:
                    exact = True
                    break
                prev = cur
            here = frozenset(w for w in prev if len(w) == n)
            self._factors[n] = (here, exact)
        return self._factors[n]

    def status(self, word: str) -> OracleAnswer:
        if any(c not in self.alphabet for c in word):
            return OracleAnswer.FORBIDDEN
        known, exact = self.factors(len(word))
        if word in known:
            return OracleAnswer.ADMISSIBLE
        return OracleAnswer.FORBIDDEN if exact else OracleAnswer.UNKNOWN

    def sample(self, min_length: int) -> str:
        """An admissible word of at least the requested length, if one is known."""
        k = 0
        while len(self._word(k)) < min_length and k < self._max_k():
            k += 1
        w = self._word(k)
        if len(w) < min_length:
            raise InputError(
                f"cannot produce an admissible word of length {min_length} within budget"
            )
        return w

    def reversal_closed(self, n: int):
        """(closed, exact) for factors of length exactly n under reversal."""
        if n not in self._reversal:
            known, exact = self.factors(n)
            closed = all(w[::-1] in known for w in known)
            self._reversal[n] = (closed, exact)
        return self._reversal[n]

    def to_json(self) -> dict:
        return {
            "type": "subshift",
            "alphabet": list(self.alphabet),
            "substitution": {a: self.rules[a] for a in self.alphabet},
            "seed": self.seed,
            "windowBudget": self.budget,
        }
