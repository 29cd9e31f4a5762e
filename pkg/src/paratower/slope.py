"""Exact slope computations on the tower and the parabolic slope downstairs.

The tower slope of a class is its first Chern class paired against the
appropriate power of the scaled Kaehler class, divided by the factorial and
the rank; it is a polynomial in the scale with exact rational coefficients.
Its coefficients vanish below the expected leading exponent, where the
parabolic slope appears exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .bundle import ParabolicBundle, c1_upstairs
from .cone import WeightSpec, omega_class
from .epsilon import EpsilonPolynomial, as_fraction
from .ring import (
    TowerClass,
    TowerShape,
    base_pair,
    d_class,
    omega_vector_class,
    pair_eval,
    t_class,
    unit_class,
)


def slope_poly(
    shape: TowerShape, w_c1: TowerClass, rank: int, omega: Sequence, weights: WeightSpec
) -> EpsilonPolynomial:
    """Slope of a tower class with first Chern class ``w_c1`` as a polynomial in the scale.

    Expands the (n + |r| - 1)-th power of the scaled Kaehler class, pairs
    every monomial against the fundamental class, and divides by the
    factorial and the rank.
    """
    if rank < 1:
        raise ValueError("rank must be positive")
    if any(deg != 1 for deg in w_c1.degrees()):
        raise ValueError("the first Chern class must be homogeneous of complex degree 1")
    power = shape.pairing_dim - 1  # >= 1: the base has dimension >= 1 and ranks are positive
    omega_cls = omega_class(shape, omega, weights)
    total = pair_eval(shape, omega_cls**power * w_c1)
    scale = Fraction(1, math.factorial(power) * rank)
    return EpsilonPolynomial.lift(total) * scale


def par_slope(
    shape: TowerShape, b: ParabolicBundle, omega: Sequence, weights: WeightSpec
) -> Fraction:
    """Parabolic slope: normalized degree plus weighted filtration contributions."""
    if weights.ranks != shape.ranks:
        raise ValueError("weight ranks do not match the tower")
    if len(b.filtrations) != len(shape.ranks):
        raise ValueError("bundle component count does not match the tower")
    n = shape.base.dim
    omega_cls = omega_vector_class(shape, omega)
    omega_pow = unit_class(shape)
    for _ in range(n - 1):
        omega_pow = omega_pow * omega_cls
    fact = Fraction(1, math.factorial(n - 1))
    total = base_pair(shape, b.c1 * omega_pow) * fact
    for u, r in enumerate(shape.ranks, start=1):
        prof = b.filtration(u)
        if len(prof) != r:
            raise ValueError(f"filtration length on component {u} does not match rank {r}")
        vol = base_pair(shape, omega_pow, extra_divisor=u) * fact
        for i in range(1, r + 1):
            lam = weights.lambdas[u - 1][i - 1]
            if prof[i - 1] and lam:
                total += Fraction(prof[i - 1]) * lam * vol
    return total / b.rank


@dataclass(frozen=True)
class SlopeReport:
    """Slope polynomial of a transported bundle with its leading-term verdicts.

    The verdict properties are recomputed from the stored polynomial on
    every access; nothing is cached independently of it.
    """

    poly: EpsilonPolynomial
    sigma: int
    par: Fraction

    @property
    def leading(self) -> tuple[int, Fraction] | None:
        return self.poly.lowest()

    @property
    def vanishing_below_sigma(self) -> bool:
        low = self.poly.lowest()
        return low is None or low[0] >= self.sigma

    @property
    def leading_matches(self) -> bool:
        return self.poly.coeff(self.sigma) == self.par

    @property
    def ok(self) -> bool:
        return self.vanishing_below_sigma and self.leading_matches

    def deviations(self) -> list[str]:
        out = []
        if not self.vanishing_below_sigma:
            low = self.poly.lowest()
            out.append(f"nonzero coefficient {low[1]} at exponent {low[0]} below sigma={self.sigma}")
        if not self.leading_matches:
            out.append(
                f"coefficient {self.poly.coeff(self.sigma)} at sigma={self.sigma} "
                f"differs from parabolic slope {self.par}"
            )
        return out


def leading_term_report(
    shape: TowerShape, b: ParabolicBundle, omega: Sequence, weights: WeightSpec
) -> SlopeReport:
    """Slope polynomial of the transported bundle, checked against the parabolic slope."""
    poly = slope_poly(shape, c1_upstairs(shape, b), b.rank, omega, weights)
    return SlopeReport(poly=poly, sigma=shape.sigma, par=par_slope(shape, b, omega, weights))


def dim1_exact_slope(
    shape: TowerShape, b: ParabolicBundle, omega: Sequence, alpha
) -> tuple[Fraction, Fraction]:
    """Curve-case slopes: tower slope at omega + d - alpha t, and the parabolic slope.

    Valid on a one-point-per-fiber tower over a curve (dimension 1, one
    component, one level) with 0 < alpha < 1.  The two values agree
    exactly; both are returned so callers can assert it.
    """
    if shape.base.dim != 1 or shape.ranks != (1,):
        raise ValueError("exact slope comparison needs dimension 1 and a single rank-1 component")
    alpha = as_fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie strictly between 0 and 1")
    form = omega_vector_class(shape, omega) + d_class(shape, 1, 1) + t_class(shape, 1, 1, -alpha)
    value = pair_eval(shape, c1_upstairs(shape, b) * form) / b.rank
    return value, par_slope(shape, b, omega, WeightSpec(((alpha,),)))
