"""Exact univariate polynomials in the scale parameter epsilon.

Coefficients are rationals throughout; no floating point enters any
computation.  Besides the arithmetic needed to expand slope polynomials,
this module provides Sturm-chain root isolation so that thresholds of the
form "smallest positive root of a finite inequality family" can be
certified with exact sign tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


def as_fraction(x) -> Fraction:
    """Coerce an int or Fraction; floats are rejected to keep exactness."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


class EpsilonPolynomial:
    """Sparse polynomial in epsilon with Fraction coefficients.

    Stored as exponent -> coefficient with no explicit zeros.  Instances
    are immutable in practice; all operations return fresh objects.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, Fraction] | None = None):
        clean: dict[int, Fraction] = {}
        if coeffs:
            for k, v in coeffs.items():
                k = int(k)
                if k < 0:
                    raise ValueError(f"negative exponent {k}")
                v = as_fraction(v)
                if v:
                    clean[k] = v
        self._coeffs = clean

    @classmethod
    def _raw(cls, coeffs: dict[int, Fraction]) -> "EpsilonPolynomial":
        # hot-path constructor: coefficients already exact and nonzero
        self = object.__new__(cls)
        self._coeffs = coeffs
        return self

    @classmethod
    def constant(cls, value) -> "EpsilonPolynomial":
        return cls({0: as_fraction(value)})

    @classmethod
    def eps(cls, power: int = 1, coeff=1) -> "EpsilonPolynomial":
        return cls({power: as_fraction(coeff)})

    @classmethod
    def lift(cls, value) -> "EpsilonPolynomial":
        if isinstance(value, EpsilonPolynomial):
            return value
        return cls.constant(value)

    # -- inspection ------------------------------------------------------

    def coeff(self, k: int) -> Fraction:
        return self._coeffs.get(k, Fraction(0))

    def to_map(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def degree(self) -> int | None:
        return max(self._coeffs) if self._coeffs else None

    def lowest(self) -> tuple[int, Fraction] | None:
        """Lowest-order term (exponent, coefficient), or None for the zero polynomial."""
        if not self._coeffs:
            return None
        k = min(self._coeffs)
        return k, self._coeffs[k]

    def sign_near_zero(self) -> int:
        """Sign of the polynomial as epsilon -> 0+ (0 for the zero polynomial)."""
        low = self.lowest()
        if low is None:
            return 0
        return 1 if low[1] > 0 else -1

    def evaluate(self, x) -> Fraction:
        x = as_fraction(x)
        return sum((c * x**k for k, c in self._coeffs.items()), Fraction(0))

    def dense(self) -> list[Fraction]:
        deg = self.degree()
        if deg is None:
            return []
        out = [Fraction(0)] * (deg + 1)
        for k, c in self._coeffs.items():
            out[k] = c
        return out

    # -- arithmetic ------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, EpsilonPolynomial):
            return self._coeffs == other._coeffs
        try:
            other = as_fraction(other)
        except TypeError:
            return NotImplemented
        return self._coeffs == EpsilonPolynomial.constant(other)._coeffs

    def __hash__(self):
        return hash(tuple(sorted(self._coeffs.items())))

    def __neg__(self) -> "EpsilonPolynomial":
        return EpsilonPolynomial({k: -v for k, v in self._coeffs.items()})

    def __add__(self, other) -> "EpsilonPolynomial":
        other = EpsilonPolynomial.lift(other)
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            s = out.get(k)
            if s is None:
                out[k] = v
            elif s + v:
                out[k] = s + v
            else:
                del out[k]
        return EpsilonPolynomial._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "EpsilonPolynomial":
        return self + (-EpsilonPolynomial.lift(other))

    def __rsub__(self, other) -> "EpsilonPolynomial":
        return EpsilonPolynomial.lift(other) + (-self)

    def __mul__(self, other) -> "EpsilonPolynomial":
        if isinstance(other, (Fraction, int)) and not isinstance(other, bool):
            if not other:
                return EpsilonPolynomial._raw({})
            return EpsilonPolynomial._raw({k: v * other for k, v in self._coeffs.items()})
        other = EpsilonPolynomial.lift(other)
        out: dict[int, Fraction] = {}
        for k1, v1 in self._coeffs.items():
            for k2, v2 in other._coeffs.items():
                k = k1 + k2
                s = out.get(k)
                p = v1 * v2
                if s is None:
                    out[k] = p
                elif s + p:
                    out[k] = s + p
                else:
                    del out[k]
        return EpsilonPolynomial._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "EpsilonPolynomial":
        other = as_fraction(other)
        if not other:
            raise ZeroDivisionError("division of a polynomial by zero")
        return EpsilonPolynomial({k: v / other for k, v in self._coeffs.items()})

    def __pow__(self, n: int) -> "EpsilonPolynomial":
        if n < 0:
            raise ValueError("negative power")
        out = EpsilonPolynomial.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = [f"({v})*e^{k}" if k else f"({v})" for k, v in sorted(self._coeffs.items())]
        return " + ".join(parts)


ZERO = EpsilonPolynomial()


# -- root isolation on dense coefficient lists ---------------------------


def _eval_dense(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _trim(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _derivative(coeffs: Sequence[Fraction]) -> list[Fraction]:
    return [coeffs[k] * k for k in range(1, len(coeffs))]


def _poly_rem(num: Sequence[Fraction], den: Sequence[Fraction]) -> list[Fraction]:
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    while len(num) - 1 >= dn and _trim(num):
        shift = len(num) - 1 - dn
        q = num[-1] / lead
        for i in range(len(den)):
            num[shift + i] -= q * den[i]
        num = _trim(num)
    return num


def _sturm_chain(coeffs: Sequence[Fraction]) -> list[list[Fraction]]:
    chain = [_trim(list(coeffs))]
    if len(chain[0]) <= 1:
        return chain
    chain.append(_trim(_derivative(chain[0])))
    while len(chain[-1]) > 0:
        rem = _poly_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    return chain


def _variations(chain: Sequence[Sequence[Fraction]], x: Fraction) -> int:
    signs = []
    for poly in chain:
        v = _eval_dense(poly, x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_roots_open(chain, a: Fraction, b: Fraction) -> int:
    # distinct real roots in (a, b); both endpoints must not be roots of chain[0]
    return _variations(chain, a) - _variations(chain, b)


@dataclass(frozen=True)
class RootBracket:
    """Certified bracket: no roots in (0, lo], at least one in (lo, hi]."""

    lo: Fraction
    hi: Fraction


_MAX_BISECTIONS = 100000


def smallest_positive_root(
    poly: EpsilonPolynomial, precision: Fraction, cap: Fraction
) -> RootBracket | None:
    """Bracket the smallest positive root of ``poly`` to within ``precision``.

    Returns None when the polynomial has no root in (0, cap].  The zero
    polynomial is rejected.  Roots are counted without multiplicity, so a
    bracket is produced even where the sign does not change.
    """
    dense = _trim(poly.dense())
    if not dense:
        raise ValueError("zero polynomial has no isolated roots")
    # factor out the power of epsilon; only roots > 0 are of interest
    k = 0
    while not dense[k]:
        k += 1
    dense = dense[k:]
    if len(dense) == 1:
        return None
    chain = _sturm_chain(dense)

    def roots_upto(x: Fraction) -> int:
        # roots in (0, x]; x must not itself be a root when this is called
        return _count_roots_open(chain, Fraction(0), x)

    lo, hi = Fraction(0), as_fraction(cap)
    if _eval_dense(dense, hi) == 0:
        pass  # cap itself is a root; bracket invariant already holds
    elif roots_upto(hi) == 0:
        return None
    for _ in range(_MAX_BISECTIONS):
        if lo > 0 and hi - lo <= precision:
            return RootBracket(lo, hi)
        mid = (lo + hi) / 2
        if _eval_dense(dense, mid) == 0 or roots_upto(mid) > 0:
            hi = mid
        else:
            lo = mid
    raise RuntimeError("root bisection failed to converge")


class NoPositiveRegion(ValueError):
    """An inequality is violated arbitrarily close to epsilon = 0."""


@dataclass(frozen=True)
class PrefixBound:
    """Largest certified prefix (0, epsilon0] on which a family of polynomials is positive.

    ``sup_lo <= sup <= sup_hi`` brackets the true supremum; ``sup_hi`` is
    None when no polynomial in the family vanishes below the search cap.
    """

    epsilon0: Fraction
    sup_lo: Fraction
    sup_hi: Fraction | None
    binding: tuple[str, ...]
    unbounded: bool


def positive_prefix(
    polys: Iterable[tuple[str, EpsilonPolynomial]],
    precision: Fraction,
    cap: Fraction = Fraction(1 << 20),
) -> PrefixBound:
    """Certify the largest epsilon0 with all polynomials positive on (0, epsilon0].

    Each polynomial must be positive immediately to the right of zero;
    otherwise NoPositiveRegion is raised naming the offending label.
    """
    precision = as_fraction(precision)
    cap = as_fraction(cap)
    brackets: list[tuple[str, RootBracket]] = []
    for label, poly in polys:
        low = poly.lowest()
        if low is None or low[1] < 0:
            raise NoPositiveRegion(label)
        br = smallest_positive_root(poly, precision, cap)
        if br is not None:
            brackets.append((label, br))
    if not brackets:
        return PrefixBound(cap, cap, None, (), True)
    eps0 = min(br.lo for _, br in brackets)
    sup_hi = min(br.hi for _, br in brackets)
    binding = tuple(label for label, br in brackets if br.lo <= sup_hi)
    return PrefixBound(eps0, eps0, sup_hi, binding, False)
