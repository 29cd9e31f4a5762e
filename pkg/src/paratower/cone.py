"""Kaehler-cone predicates for blow-up towers and certified scale thresholds.

Cones on the base are finite systems of strict linear inequalities in the
coefficients of a class over (w, D_1, ..., D_s).  Membership for a
single-component tower at level j is the inequality system: every fiber
coefficient positive, every exceptional coefficient negative, the base
class corrected by each partial sum of exceptional coefficients stays in
the base cone, and each fiber coefficient survives the exceptional tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .epsilon import (
    EpsilonPolynomial,
    NoPositiveRegion,
    PrefixBound,
    as_fraction,
    positive_prefix,
)
from .ring import TowerClass, TowerShape, d_class, omega_vector_class, t_class


class ConeError(ValueError):
    """No positive scale satisfies the membership system."""


def _vec(values: Sequence) -> tuple[Fraction, ...]:
    return tuple(as_fraction(v) for v in values)


@dataclass(frozen=True)
class ConeSpec:
    """A convex open cone cut out by strict inequalities row . x > 0.

    The reference class w, with coefficient vector (1, 0, ..., 0), must
    satisfy every inequality.
    """

    rows: tuple[tuple[Fraction, ...], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        rows = tuple(_vec(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        dims = {len(r) for r in rows}
        if len(dims) > 1:
            raise ValueError("inequality rows have inconsistent lengths")
        for r in rows:
            if not r or r[0] <= 0:
                raise ValueError(f"row {r} rejects the reference class (1, 0, ...)")
        if self.labels:
            if len(self.labels) != len(rows):
                raise ValueError("label count does not match the rows")
        else:
            object.__setattr__(self, "labels", tuple(f"row {k}" for k in range(len(rows))))

    @property
    def dim(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def violations(self, vec: Sequence) -> list[str]:
        vec = _vec(vec)
        out = []
        for label, row in zip(self.labels, self.rows):
            if len(row) != len(vec):
                raise ValueError("coefficient vector length does not match the cone")
            if sum(a * x for a, x in zip(row, vec)) <= 0:
                out.append(label)
        return out

    def contains(self, vec: Sequence) -> bool:
        return not self.violations(vec)


@dataclass(frozen=True)
class WeightSpec:
    """Strictly decreasing parabolic weights in (0, 1) per divisor component.

    The contraction ratios are beta[u,1] = lambda[u,1] and
    beta[u,j] = lambda[u,j] / lambda[u,j-1] for j > 1, so that the partial
    products recover the weights.  In last-weight-zero mode the final
    weight of a component may be 0, and its ratio becomes the scale symbol
    itself.
    """

    lambdas: tuple[tuple[Fraction, ...], ...]
    last_weight_zero: bool = False

    def __post_init__(self):
        lams = tuple(_vec(seq) for seq in self.lambdas)
        object.__setattr__(self, "lambdas", lams)
        for u, seq in enumerate(lams, start=1):
            if not seq:
                raise ValueError(f"component {u} has no weights")
            for j, lam in enumerate(seq, start=1):
                last = j == len(seq)
                if lam <= 0 and not (last and self.last_weight_zero and lam == 0):
                    raise ValueError(f"weight {lam} at component {u} position {j} must be positive")
                if lam >= 1:
                    raise ValueError(f"weight {lam} at component {u} position {j} must be below 1")
            if any(a <= b for a, b in zip(seq, seq[1:])):
                raise ValueError(f"weights {seq} on component {u} are not strictly decreasing")

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(len(seq) for seq in self.lambdas)

    def beta(self, u: int, j: int) -> Fraction | None:
        """Contraction ratio; None marks the symbolic ratio of a zero last weight."""
        seq = self.lambdas[u - 1]
        lam = seq[j - 1]
        if lam == 0:
            return None
        return lam if j == 1 else lam / seq[j - 2]


@dataclass(frozen=True)
class ConePoint:
    """A tower class (omega, a, b) = omega + sum a_i d_i + b_i t_i, one component."""

    omega: tuple[Fraction, ...]
    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "omega", _vec(self.omega))
        object.__setattr__(self, "a", _vec(self.a))
        object.__setattr__(self, "b", _vec(self.b))
        if len(self.a) != len(self.b):
            raise ValueError("fiber and exceptional coefficient counts differ")

    def scale(self, c) -> "ConePoint":
        c = as_fraction(c)
        return ConePoint(
            tuple(c * x for x in self.omega),
            tuple(c * x for x in self.a),
            tuple(c * x for x in self.b),
        )

    def __add__(self, other: "ConePoint") -> "ConePoint":
        return ConePoint(
            tuple(x + y for x, y in zip(self.omega, other.omega)),
            tuple(x + y for x, y in zip(self.a, other.a)),
            tuple(x + y for x, y in zip(self.b, other.b)),
        )


def kxx_check(
    w: Sequence,
    w_prime: Sequence,
    b,
    cone_x: ConeSpec,
    cone_x_prime: ConeSpec,
    c: Sequence,
    c_prime: Sequence,
) -> tuple[bool, list[str]]:
    """Membership for the blow-up of a product along a product of divisors.

    The class (w, w', b t) is Kaehler iff w and the corrected class w + b c
    lie in the first cone, w' and w' + b c' in the second, and b < 0.
    """
    w, w_prime, c, c_prime = _vec(w), _vec(w_prime), _vec(c), _vec(c_prime)
    b = as_fraction(b)
    out: list[str] = []
    out += [f"w: {v}" for v in cone_x.violations(w)]
    out += [f"w+bc: {v}" for v in cone_x.violations(tuple(x + b * y for x, y in zip(w, c)))]
    out += [f"w': {v}" for v in cone_x_prime.violations(w_prime)]
    out += [
        f"w'+bc': {v}"
        for v in cone_x_prime.violations(tuple(x + b * y for x, y in zip(w_prime, c_prime)))
    ]
    if b >= 0:
        out.append("b<0")
    return not out, out


def _default_divisor_vector(shape: TowerShape, u: int = 1) -> tuple[Fraction, ...]:
    vec = [Fraction(0)] * (1 + len(shape.base.divisors))
    vec[u] = Fraction(1)
    return tuple(vec)


def kxr_check(
    shape: TowerShape,
    j: int,
    point: ConePoint,
    cone: ConeSpec,
    c: Sequence | None = None,
    component: int = 1,
) -> tuple[bool, list[str]]:
    """Level-j membership for a single-component tower.

    For every 1 <= i <= j: a_i > 0, b_i < 0, the corrected base class
    omega + (b_1 + ... + b_i) c lies in the base cone, and
    a_i + b_i + ... + b_j > 0.
    """
    if not 1 <= j <= shape.ranks[component - 1]:
        raise ValueError(f"level {j} out of range 1..{shape.ranks[component - 1]}")
    if len(point.a) < j:
        raise ValueError("cone point has fewer levels than requested")
    cvec = _vec(c) if c is not None else _default_divisor_vector(shape, component)
    if len(cvec) != len(point.omega):
        raise ValueError("divisor class vector length does not match omega")
    out: list[str] = []
    partial = Fraction(0)
    for i in range(1, j + 1):
        ai, bi = point.a[i - 1], point.b[i - 1]
        if ai <= 0:
            out.append(f"a[{i}]>0")
        if bi >= 0:
            out.append(f"b[{i}]<0")
        partial += bi
        corrected = tuple(x + partial * y for x, y in zip(point.omega, cvec))
        out += [f"omega+(b1+..+b{i})c in K(X): {v}" for v in cone.violations(corrected)]
        if ai + sum(point.b[i - 1 : j]) <= 0:
            out.append(f"a[{i}]+b[{i}]+..+b[{j}]>0")
    return not out, out


def omega_class(shape: TowerShape, omega: Sequence, weights: WeightSpec) -> TowerClass:
    """The scaled tower class with symbolic scale.

    omega plus, per component u and level j, eps^(2^(j-1)) times the fiber
    class minus the contraction ratio times the exceptional class; a zero
    last weight turns its ratio into the scale symbol itself.
    """
    if weights.ranks != shape.ranks:
        raise ValueError(f"weight ranks {weights.ranks} do not match tower ranks {shape.ranks}")
    out = omega_vector_class(shape, omega) * EpsilonPolynomial.constant(1)
    for u, r in enumerate(shape.ranks, start=1):
        for j in range(1, r + 1):
            e = 1 << (j - 1)
            out = out + d_class(shape, u, j) * EpsilonPolynomial.eps(e)
            beta = weights.beta(u, j)
            if beta is None:
                coeff = EpsilonPolynomial.eps(e + 1, -1)
            else:
                coeff = EpsilonPolynomial.eps(e, -beta)
            out = out + t_class(shape, u, j) * coeff
    return out


def omega_cone_point(
    shape: TowerShape, omega: Sequence, weights: WeightSpec, epsilon, component: int = 1
) -> ConePoint:
    """The scaled class at a rational scale, as a cone point of one component."""
    epsilon = as_fraction(epsilon)
    r = shape.ranks[component - 1]
    a = []
    b = []
    for j in range(1, r + 1):
        e = epsilon ** (1 << (j - 1))
        beta = weights.beta(component, j)
        a.append(e)
        b.append(-e * (beta if beta is not None else epsilon))
    return ConePoint(_vec(omega), tuple(a), tuple(b))


@dataclass(frozen=True)
class ThresholdReport:
    """Certified scale threshold for tower cone membership.

    Every rational scale in (0, epsilon0] passes membership; the true
    supremum lies in [sup_lo, sup_hi] unless unbounded within the search
    cap.  ``binding`` names the inequalities whose roots realize the
    supremum bracket.
    """

    epsilon0: Fraction
    sup_lo: Fraction
    sup_hi: Fraction | None
    binding: tuple[str, ...]
    unbounded: bool

    @classmethod
    def from_prefix(cls, p: PrefixBound) -> "ThresholdReport":
        return cls(p.epsilon0, p.sup_lo, p.sup_hi, p.binding, p.unbounded)


def membership_polynomials(
    shape: TowerShape,
    omega: Sequence,
    weights: WeightSpec,
    cone: ConeSpec,
    c: Sequence | None = None,
    component: int = 1,
) -> list[tuple[str, EpsilonPolynomial]]:
    """The level-r membership system for the scaled class, as polynomials in the scale."""
    r = shape.ranks[component - 1]
    if weights.ranks[component - 1] != r:
        raise ValueError("weight ranks do not match the tower component")
    omega = _vec(omega)
    cvec = _vec(c) if c is not None else _default_divisor_vector(shape, component)
    if len(cvec) != len(omega):
        raise ValueError("divisor class vector length does not match omega")
    if cone.rows and len(omega) != cone.dim:
        raise ValueError("omega vector length does not match the cone")

    def b_poly(j: int) -> EpsilonPolynomial:
        e = 1 << (j - 1)
        beta = weights.beta(component, j)
        if beta is None:
            return EpsilonPolynomial.eps(e + 1, -1)
        return EpsilonPolynomial.eps(e, -beta)

    polys: list[tuple[str, EpsilonPolynomial]] = []
    partial = EpsilonPolynomial()
    for i in range(1, r + 1):
        a_i = EpsilonPolynomial.eps(1 << (i - 1))
        polys.append((f"a[{i}]>0", a_i))
        polys.append((f"-b[{i}]>0", -b_poly(i)))
        partial = partial + b_poly(i)
        for label, row in zip(cone.labels, cone.rows):
            const = sum((x * y for x, y in zip(row, omega)), Fraction(0))
            slope = sum((x * y for x, y in zip(row, cvec)), Fraction(0))
            polys.append(
                (
                    f"omega+(b1+..+b{i})c in K(X): {label}",
                    EpsilonPolynomial.constant(const) + partial * slope,
                )
            )
        tail = a_i + sum((b_poly(k) for k in range(i, r + 1)), EpsilonPolynomial())
        polys.append((f"a[{i}]+b[{i}]+..+b[{r}]>0", tail))
    return polys


def epsilon_kahler_threshold(
    shape: TowerShape,
    omega: Sequence,
    weights: WeightSpec,
    cone: ConeSpec,
    c: Sequence | None = None,
    precision=Fraction(1, 1000),
    component: int = 1,
) -> ThresholdReport:
    """Certified lower bound on the scale below which membership holds.

    The bound is found by exact sign-preserving bisection on the membership
    polynomials; the supremum may be irrational, so only a rational bracket
    is reported.
    """
    polys = membership_polynomials(shape, omega, weights, cone, c, component)
    try:
        prefix = positive_prefix(polys, as_fraction(precision))
    except NoPositiveRegion as exc:
        raise ConeError(f"no positive scale satisfies {exc.args[0]}") from None
    return ThresholdReport.from_prefix(prefix)
