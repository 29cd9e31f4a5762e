"""Parabolic bundle data and transport of Chern classes to the tower.

A parabolic bundle is recorded by its rank, its first Chern class (a
degree-1 base class), and per divisor component a nondecreasing profile of
filtration ranks.  Upstairs, the first Chern class picks up one exceptional
class per filtration step, weighted by the filtration rank at that level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .lattice import WeightProfile, f_char, zero_char
from .ring import TowerClass, TowerMonomial, TowerShape, monomial, t_class, unit_class


def _norm_filtrations(filtrations, rank: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for prof in filtrations:
        prof = tuple(int(x) for x in prof)
        if any(x < 0 or x > rank for x in prof):
            raise ValueError(f"filtration ranks {prof} outside [0, {rank}]")
        if any(a > b for a, b in zip(prof, prof[1:])):
            raise ValueError(f"filtration ranks {prof} are not nondecreasing")
        out.append(prof)
    return tuple(out)


@dataclass(frozen=True)
class ParabolicBundle:
    """Discrete data of a parabolic bundle: rank, c1 and filtration profiles."""

    rank: int
    c1: TowerClass
    filtrations: tuple[tuple[int, ...], ...]
    ch2: TowerClass | None = None

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        object.__setattr__(self, "filtrations", _norm_filtrations(self.filtrations, self.rank))

    def filtration(self, u: int) -> tuple[int, ...]:
        return self.filtrations[u - 1]


@dataclass(frozen=True)
class SubobjectData(ParabolicBundle):
    """Candidate subobject, same discrete shape as a bundle plus a label."""

    name: str = ""


def validate_subobject(parent: ParabolicBundle, sub: ParabolicBundle) -> None:
    """Check the discrete admissibility of a subobject against its parent."""
    if not 1 <= sub.rank < parent.rank:
        raise ValueError(f"subobject rank {sub.rank} not in [1, {parent.rank - 1}]")
    if len(sub.filtrations) != len(parent.filtrations):
        raise ValueError("subobject component count differs from the parent")
    for u, (ps, ss) in enumerate(zip(parent.filtrations, sub.filtrations), start=1):
        if len(ps) != len(ss):
            raise ValueError(f"filtration length mismatch on component {u}")
        for i, (p, sv) in enumerate(zip(ps, ss), start=1):
            if sv > min(p, sub.rank):
                raise ValueError(
                    f"filtration rank {sv} at component {u} level {i} exceeds min({p}, {sub.rank})"
                )


def _check_c1(shape: TowerShape, c1: TowerClass) -> None:
    if not c1.is_base_only():
        raise ValueError("c1 must be supported on base generators")
    if any(deg != 1 for deg in c1.degrees()):
        raise ValueError("c1 must be homogeneous of complex degree 1")
    for mono in c1.terms:
        if len(mono.base) != len(shape.base.gens):
            raise ValueError("c1 arity does not match the geometry")


def c1_upstairs(shape: TowerShape, b: ParabolicBundle) -> TowerClass:
    """First Chern class on the tower: c1 plus filtration-weighted exceptional classes."""
    if len(b.filtrations) != len(shape.ranks):
        raise ValueError("bundle component count does not match the tower")
    for u, r in enumerate(shape.ranks, start=1):
        if len(b.filtration(u)) != r:
            raise ValueError(f"filtration length on component {u} does not match rank {r}")
    _check_c1(shape, b.c1)
    out = b.c1
    for u, r in enumerate(shape.ranks, start=1):
        prof = b.filtration(u)
        for l in range(1, r + 1):
            if prof[l - 1]:
                out = out + t_class(shape, u, l, Fraction(prof[l - 1]))
    return out


def weights_from_filtration(b: ParabolicBundle, u: int) -> WeightProfile:
    """Weight profile of the transported bundle on the strata of component u.

    On the deepest stratum each filtration step contributes its jump as the
    multiplicity of the corresponding admissible weight, the unfiltered
    directions carry the zero weight, and the other strata carry only zero.
    The multiplicities are the unique assignment matching the exceptional
    coefficients of the transported first Chern class.
    """
    prof = b.filtration(u)
    r = len(prof)
    deep = []
    prev = 0
    for i, cur in enumerate(prof, start=1):
        deep.extend([f_char(i, r)] * (cur - prev))
        prev = cur
    deep.extend([zero_char(r)] * (b.rank - prof[-1] if prof else b.rank))
    flat = tuple([zero_char(r)] * b.rank)
    return WeightProfile(tuple(deep), flat, flat)


def ch_upstairs_r1(shape: TowerShape, b: ParabolicBundle, sub_c1: TowerClass) -> TowerClass:
    """Chern character through complex degree 2 on a one-level, one-component tower.

    ``sub_c1`` is the first Chern class of the filtration subbundle, given
    as a base class via the restriction convention.  Degree 0 is the rank,
    degree 1 adds the filtration rank times the exceptional class, degree 2
    adds ch2, the exceptional class cupped with sub_c1, and half the
    filtration rank times the squared exceptional class.
    """
    if shape.ranks != (1,):
        raise ValueError("ch transport is implemented for a single component of rank 1 only")
    if len(b.filtrations) != 1 or len(b.filtration(1)) != 1:
        raise ValueError("bundle filtration does not match the tower")
    _check_c1(shape, b.c1)
    if not sub_c1.is_base_only():
        raise ValueError("sub_c1 must be supported on base generators")
    r1 = Fraction(b.filtration(1)[0])
    out = Fraction(b.rank) * unit_class(shape) + b.c1
    out = out + t_class(shape, 1, 1, r1)
    if b.ch2 is not None:
        if not b.ch2.is_base_only():
            raise ValueError("ch2 must be supported on base generators")
        out = out + b.ch2
    out = out + t_class(shape, 1, 1) * sub_c1
    tt = TowerClass({monomial(shape, texp=((2,),)): r1 / 2})
    return out + tt
