"""Weight-lattice combinatorics for the torus acting on a blow-up tower.

Characters of the r-torus are integer vectors of length r.  The admissible
weights on the deepest fixed stratum form the family f_1, ..., f_r; the
projection to one rank lower sends f_{j+1} to f_j and fixes the rest.
Multi-indices carry two gradings: the plain norm |I| and the dyadic weight
sigma(I) = sum_l I_l * 2^(l-1), which controls which monomials survive a
tower pairing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class Character:
    """A character of the r-torus, identified with a vector in Z^r."""

    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def proj(self, j: int) -> int:
        """Coordinate projection pi_j (1-indexed)."""
        if not 1 <= j <= self.rank:
            raise IndexError(f"projection index {j} out of range 1..{self.rank}")
        return self.coords[j - 1]

    def embed(self, s: int) -> "Character":
        """View the character inside a larger torus by appending zeros."""
        if s < self.rank:
            raise ValueError(f"cannot embed rank {self.rank} into rank {s}")
        return Character(self.coords + (0,) * (s - self.rank))


def zero_char(r: int) -> Character:
    if r < 0:
        raise ValueError("rank must be nonnegative")
    return Character((0,) * r)


def f_char(j: int, r: int) -> Character:
    """The j-th admissible weight inside Z^r.

    Coordinates: 1 at position j, 2 at position j-1, 1 at every position
    below that, 0 above j.
    """
    if r < 1:
        raise ValueError("rank must be at least 1")
    if not 1 <= j <= r:
        raise IndexError(f"index {j} out of range 1..{r}")
    coords = [0] * r
    coords[j - 1] = 1
    if j >= 2:
        coords[j - 2] = 2
    for i in range(j - 2):
        coords[i] = 1
    return Character(tuple(coords))


def pi_project(f: Character) -> Character:
    """Project a character of rank m to rank m-1.

    Defined on the restricted domain {0, f_1, ..., f_m} only, where it is
    pinned by: f_m maps to f_{m-1}, every f_i with i < m is fixed, and 0
    maps to 0.  Anything else is rejected.
    """
    m = f.rank
    if m < 1:
        raise ValueError("cannot project a rank-0 character")
    if f.is_zero():
        return zero_char(m - 1)
    for i in range(1, m + 1):
        if f == f_char(i, m):
            if i == m:
                return zero_char(0) if m == 1 else f_char(m - 1, m - 1)
            return f_char(i, m - 1)
    raise ValueError(f"character {f.coords} is outside the projection domain")


def index_norm(exps: Sequence[int]) -> int:
    """The plain multi-index norm |I|."""
    return sum(exps)


def sigma_weight(exps: Sequence[int]) -> int:
    """The dyadic grading sigma(I) = sum_l I_l * 2^(l-1)."""
    total = 0
    for l, e in enumerate(exps):
        if e < 0:
            raise ValueError("multi-index entries must be nonnegative")
        total += e << l
    return total


@dataclass(frozen=True)
class MultiIndex:
    """A nonnegative multi-index with its two gradings."""

    exps: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exps)
        if any(e < 0 for e in exps):
            raise ValueError("multi-index entries must be nonnegative")
        object.__setattr__(self, "exps", exps)

    @property
    def norm(self) -> int:
        return index_norm(self.exps)

    @property
    def sigma(self) -> int:
        return sigma_weight(self.exps)


def _sorted_weights(weights) -> tuple[Character, ...]:
    chars = tuple(w if isinstance(w, Character) else Character(tuple(w)) for w in weights)
    return tuple(sorted(chars, key=lambda c: c.coords))


@dataclass(frozen=True)
class WeightProfile:
    """Multisets of torus weights on the three fixed strata of a tower.

    Stratum 0 is the deepest stratum (over the divisor); strata 1 and 2 are
    the two section-type strata.  All three multisets must have the same
    cardinality: they describe the same bundle restricted to each stratum.
    """

    stratum0: tuple[Character, ...]
    stratum1: tuple[Character, ...]
    stratum2: tuple[Character, ...]

    def __post_init__(self):
        object.__setattr__(self, "stratum0", _sorted_weights(self.stratum0))
        object.__setattr__(self, "stratum1", _sorted_weights(self.stratum1))
        object.__setattr__(self, "stratum2", _sorted_weights(self.stratum2))
        sizes = {len(self.stratum0), len(self.stratum1), len(self.stratum2)}
        if len(sizes) != 1:
            raise ValueError(f"stratum multisets have unequal cardinalities {sizes}")

    @property
    def strata(self) -> tuple[tuple[Character, ...], ...]:
        return (self.stratum0, self.stratum1, self.stratum2)


@dataclass(frozen=True)
class CategoryCheck:
    """Outcome of a weight-profile admissibility test."""

    ok: bool
    stratum: int | None = None
    weight: Character | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_category_weights(profile: WeightProfile, r: int) -> CategoryCheck:
    """Test whether a weight profile is admissible for a rank-r tower.

    Strata 1 and 2 must carry only the zero weight; stratum 0 may carry the
    zero weight (unfiltered directions) and the weights f_1, ..., f_r.
    Returns the first violating stratum and weight, scanning stratum 0
    first and each multiset in sorted order.
    """
    allowed = {zero_char(r).coords} | {f_char(j, r).coords for j in range(1, r + 1)}
    for w in profile.stratum0:
        if w.coords not in allowed:
            return CategoryCheck(False, 0, w)
    for idx, stratum in ((1, profile.stratum1), (2, profile.stratum2)):
        for w in stratum:
            if not w.is_zero():
                return CategoryCheck(False, idx, w)
    return CategoryCheck(True)
