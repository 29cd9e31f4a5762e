"""Stability verdicts over finite subobject lists and the small-scale regime.

Both notions compare slopes of user-supplied candidate subobjects against
the parent: the parabolic slope downstairs, or the scale-polynomial slope
on the tower.  Near zero, the sign of each parent-minus-subobject
difference polynomial is decided by its lowest nonzero coefficient, and a
rational validity bound is certified below the smallest positive root of
any difference.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bundle import ParabolicBundle, SubobjectData, c1_upstairs, validate_subobject
from .cone import WeightSpec
from .epsilon import EpsilonPolynomial, as_fraction, smallest_positive_root
from .ring import TowerShape, base_class
from .slope import par_slope, slope_poly

STABLE = "stable"
SEMISTABLE = "strictly-semistable"
UNSTABLE = "unstable"


@dataclass(frozen=True)
class StabilityVerdict:
    """Verdict with the subobject attaining the maximal slope as witness."""

    verdict: str
    witness: int | None = None
    witness_name: str = ""
    witness_slope: object = None
    parent_slope: object = None
    vacuous: bool = False


@dataclass(frozen=True)
class Scenario:
    """A stability question: shape, bundle, weights, polarization, candidates."""

    shape: TowerShape
    bundle: ParabolicBundle
    weights: WeightSpec
    omega: tuple[Fraction, ...]
    subobjects: tuple[SubobjectData, ...] = ()
    epsilon: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "omega", tuple(as_fraction(x) for x in self.omega))
        object.__setattr__(self, "subobjects", tuple(self.subobjects))
        if self.weights.ranks != self.shape.ranks:
            raise ValueError("weight ranks do not match the tower")
        for sub in self.subobjects:
            validate_subobject(self.bundle, sub)
        if self.epsilon is not None:
            object.__setattr__(self, "epsilon", as_fraction(self.epsilon))


def _verdict_from_comparisons(
    parent_value, values: Sequence, names: Sequence[str], gt, eq
) -> StabilityVerdict:
    """Classify from parent/subobject slope comparisons.

    ``gt(v, w)`` and ``eq(v, w)`` compare slope values; the witness is the
    first subobject attaining the maximum.
    """
    if not values:
        return StabilityVerdict(STABLE, parent_slope=parent_value, vacuous=True)
    best = 0
    for i in range(1, len(values)):
        if gt(values[i], values[best]):
            best = i
    if gt(values[best], parent_value):
        verdict = UNSTABLE
    elif eq(values[best], parent_value):
        verdict = SEMISTABLE
    else:
        verdict = STABLE
    return StabilityVerdict(
        verdict,
        witness=best,
        witness_name=names[best],
        witness_slope=values[best],
        parent_slope=parent_value,
    )


def par_stability(sc: Scenario) -> StabilityVerdict:
    """Parabolic stability over the scenario's subobject list, by exact comparison."""
    parent = par_slope(sc.shape, sc.bundle, sc.omega, sc.weights)
    values = [par_slope(sc.shape, sub, sc.omega, sc.weights) for sub in sc.subobjects]
    names = [sub.name for sub in sc.subobjects]
    return _verdict_from_comparisons(parent, values, names, lambda a, b: a > b, lambda a, b: a == b)


def _sub_slope_polys(sc: Scenario) -> tuple[EpsilonPolynomial, list[EpsilonPolynomial]]:
    parent = slope_poly(
        sc.shape, c1_upstairs(sc.shape, sc.bundle), sc.bundle.rank, sc.omega, sc.weights
    )
    subs = [
        slope_poly(sc.shape, c1_upstairs(sc.shape, sub), sub.rank, sc.omega, sc.weights)
        for sub in sc.subobjects
    ]
    return parent, subs


def equi_stability_at(sc: Scenario, epsilon) -> StabilityVerdict:
    """Tower stability at a fixed rational scale, by exact polynomial evaluation."""
    epsilon = as_fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("the scale must be positive")
    parent, subs = _sub_slope_polys(sc)
    values = [p.evaluate(epsilon) for p in subs]
    names = [sub.name for sub in sc.subobjects]
    return _verdict_from_comparisons(
        parent.evaluate(epsilon), values, names, lambda a, b: a > b, lambda a, b: a == b
    )


@dataclass(frozen=True)
class NearZeroReport:
    """Limiting verdict as the scale tends to zero, with a certified bound.

    ``bound`` is a rational below which every sign determination holds; it
    is None when no difference polynomial has a positive root, in which
    case the verdict holds at every positive scale.  ``exact_ties`` lists
    subobjects whose slope polynomial equals the parent's identically.
    """

    verdict: StabilityVerdict
    bound: Fraction | None
    exact_ties: tuple[int, ...] = ()


_BOUND_PRECISION = Fraction(1, 1024)


def equi_stability_near_zero(sc: Scenario) -> NearZeroReport:
    """Verdict in the small-scale limit, decided by lowest nonzero coefficients."""
    parent, subs = _sub_slope_polys(sc)
    names = [sub.name for sub in sc.subobjects]

    def gt(a: EpsilonPolynomial, b: EpsilonPolynomial) -> bool:
        return (a - b).sign_near_zero() > 0

    def eq(a: EpsilonPolynomial, b: EpsilonPolynomial) -> bool:
        return not (a - b)

    verdict = _verdict_from_comparisons(parent, subs, names, gt, eq)
    ties = tuple(i for i, p in enumerate(subs) if not (parent - p))
    bound: Fraction | None = None
    for p in subs:
        diff = parent - p
        if not diff:
            continue
        bracket = smallest_positive_root(diff, _BOUND_PRECISION, Fraction(1 << 20))
        if bracket is not None and (bound is None or bracket.lo < bound):
            bound = bracket.lo
    return NearZeroReport(verdict=verdict, bound=bound, exact_ties=ties)


@dataclass(frozen=True)
class EstabilitatReport:
    """Outcome of the two correspondence directions on one scenario."""

    parabolic: StabilityVerdict
    near_zero: NearZeroReport
    grid: tuple[Fraction, ...]
    counterexamples: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def theorem_estabilitat_check(sc: Scenario, grid: int = 10) -> EstabilitatReport:
    """Check both correspondence directions on a scale grid below the certified bound.

    Direction one: a parabolically stable scenario must be tower-stable at
    every grid scale.  Direction two: tower semistability at any grid scale
    forbids a parabolically unstable verdict.
    """
    par = par_stability(sc)
    near = equi_stability_near_zero(sc)
    top = near.bound if near.bound is not None else Fraction(1)
    points = tuple(top * k / (grid + 1) for k in range(1, grid + 1))
    bad: list[str] = []
    for eps in points:
        at = equi_stability_at(sc, eps)
        if par.verdict == STABLE and not par.vacuous and at.verdict != STABLE:
            bad.append(f"direction 1 fails at scale {eps}: tower verdict {at.verdict}")
        if at.verdict in (STABLE, SEMISTABLE) and par.verdict == UNSTABLE:
            bad.append(f"direction 2 fails at scale {eps}: tower verdict {at.verdict}")
    return EstabilitatReport(parabolic=par, near_zero=near, grid=points, counterexamples=tuple(bad))


def _profiles(caps: Sequence[int], rank: int) -> list[tuple[int, ...]]:
    """All nondecreasing profiles bounded by min(cap_i, rank) at each level."""
    out: list[tuple[int, ...]] = []

    def rec(i: int, prev: int, acc: tuple[int, ...]):
        if i == len(caps):
            out.append(acc)
            return
        top = min(caps[i], rank)
        for v in range(prev, top + 1):
            rec(i + 1, v, acc + (v,))

    rec(0, 0, ())
    return out


def curve_subobjects(
    shape: TowerShape,
    parent: ParabolicBundle,
    degree_window: tuple[int, int],
    ranks: Sequence[int] | None = None,
) -> tuple[SubobjectData, ...]:
    """Exhaustive curve-case candidates: ranks, integer degrees, admissible profiles.

    Only meaningful over a one-dimensional base, where the degree pins the
    first Chern class as a multiple of the polarization generator.
    """
    if shape.base.dim != 1:
        raise ValueError("the exhaustive generator is for one-dimensional bases")
    lo, hi = int(degree_window[0]), int(degree_window[1])
    if lo > hi:
        raise ValueError("empty degree window")
    vol = shape.base.pair_base(
        tuple(1 if i == 0 else 0 for i in range(len(shape.base.gens)))
    )
    if not vol:
        raise ValueError("the polarization generator pairs to zero; degrees are meaningless")
    rank_list = list(ranks) if ranks is not None else list(range(1, parent.rank))
    out: list[SubobjectData] = []
    for r in rank_list:
        if not 1 <= r < parent.rank:
            raise ValueError(f"subobject rank {r} not in [1, {parent.rank - 1}]")
        prof_choices = [_profiles(parent.filtration(u + 1), r) for u in range(len(shape.ranks))]

        def rec(u: int, chosen: tuple[tuple[int, ...], ...]):
            if u == len(prof_choices):
                for deg in range(lo, hi + 1):
                    c1 = base_class(shape, {"w": Fraction(deg) / vol})
                    out.append(
                        SubobjectData(
                            rank=r,
                            c1=c1,
                            filtrations=chosen,
                            name=f"r{r}.deg{deg}." + "_".join("".join(map(str, p)) for p in chosen),
                        )
                    )
                return
            for prof in prof_choices[u]:
                rec(u + 1, chosen + (prof,))

        rec(0, ())
    return tuple(out)
