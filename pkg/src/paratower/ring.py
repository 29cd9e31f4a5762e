"""Intersection pairings on iterated blow-up towers over divisor components.

A tower is built over a base of complex dimension n with divisor components
D_1, ..., D_s; over each component u it stacks r_u levels.  Its degree-2
classes are the base generators together with, at each level l of each
component u, a fiber-point class d[u,l] and an exceptional class t[u,l].
The base enters purely numerically: a table of pairings of degree-n base
monomials against the fundamental class.

The pairing of a monomial against the tower's fundamental class is computed
by a normal-form reduction which processes every component independently,
top level first:

* a squared fiber class kills the monomial (d^2 = 0);
* a fiber class meeting an exceptional class of the same level kills it
  (the fiber class restricts to zero on the exceptional divisor);
* a bare fiber class is stripped and the evaluation descends one level;
* a level carrying neither class leaves the fiber direction unsaturated
  and the pairing vanishes;
* an exceptional class moves the evaluation onto the exceptional divisor,
  where one exponent is consumed per level of descent, squares rewrite to
  the next level down with a sign, and any remaining fiber class below
  kills the monomial; a descent that still carries an unconsumed exponent
  when an exponent runs out vanishes (pure pullbacks pair to zero);
* a component whose exceptional descent reaches the base multiplies the
  surviving base monomial by the component's divisor class once, plus once
  more for every leftover shifted exponent.

Closed-form values for the extremal exponent patterns are implemented
separately (:func:`closed_form_dIJ`, :func:`closed_form_tdIJ`,
:func:`closed_form_nc`) from pure pattern arithmetic, so they can serve as
an independent oracle for the reduction engine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .epsilon import as_fraction
from .lattice import index_norm, sigma_weight


class TableGapError(LookupError):
    """A degree-n base monomial was needed but is absent from the table."""


_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")
_LEVEL_RE = re.compile(r"^[dt][0-9.]+$")


def _check_name(name: str) -> str:
    if not _NAME_RE.match(name):
        raise ValueError(f"invalid generator name {name!r}")
    if name == "w" or _LEVEL_RE.match(name):
        raise ValueError(f"generator name {name!r} collides with a reserved token")
    return name


class BaseGeometry:
    """The numerical shadow of the base manifold.

    Stores the complex dimension, the ordered degree-1 generators (the
    ample class ``w``, the divisor classes, optional extra named classes)
    and the pairing table of degree-n monomials.  Lookups of degree-n
    monomials missing from the table are errors, never silent zeros.
    """

    def __init__(
        self,
        dim: int,
        divisors: Sequence[str],
        table: Mapping,
        extras: Sequence[str] = (),
    ):
        if dim < 1:
            raise ValueError("base dimension must be at least 1")
        self.dim = int(dim)
        self.divisors = tuple(_check_name(d) for d in divisors)
        self.extras = tuple(_check_name(e) for e in extras)
        self.gens = ("w",) + self.divisors + self.extras
        if len(set(self.gens)) != len(self.gens):
            raise ValueError("generator names must be distinct")
        self._index = {name: i for i, name in enumerate(self.gens)}
        self.table: dict[tuple[int, ...], Fraction] = {}
        for key, value in table.items():
            exps = self.parse_base_monomial(key) if isinstance(key, str) else tuple(int(e) for e in key)
            if len(exps) != len(self.gens) or any(e < 0 for e in exps):
                raise ValueError(f"bad table key {key!r}")
            if sum(exps) != self.dim:
                raise ValueError(
                    f"table key {self.base_monomial_str(exps)} has degree {sum(exps)}, expected {self.dim}"
                )
            self.table[exps] = as_fraction(value)

    @property
    def n_components(self) -> int:
        return len(self.divisors)

    def gen_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown base generator {name!r}") from None

    def divisor_index(self, u: int) -> int:
        """Base-generator index of divisor component u (1-indexed)."""
        if not 1 <= u <= len(self.divisors):
            raise IndexError(f"divisor component {u} out of range")
        return 1 + (u - 1)

    def parse_base_monomial(self, text: str) -> tuple[int, ...]:
        exps = [0] * len(self.gens)
        text = text.strip()
        if text in ("", "1"):
            return tuple(exps)
        for token in text.split():
            name, _, power = token.partition("^")
            k = int(power) if power else 1
            if k < 0:
                raise ValueError(f"negative exponent in {token!r}")
            exps[self.gen_index(name)] += k
        return tuple(exps)

    def base_monomial_str(self, exps: Sequence[int]) -> str:
        parts = []
        for name, e in zip(self.gens, exps):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return " ".join(parts) if parts else "1"

    def pair_base(self, exps: Sequence[int]) -> Fraction:
        exps = tuple(exps)
        if sum(exps) != self.dim:
            raise ValueError(
                f"base pairing of {self.base_monomial_str(exps)} has degree {sum(exps)} != {self.dim}"
            )
        try:
            return self.table[exps]
        except KeyError:
            raise TableGapError(
                f"no table entry for degree-{self.dim} monomial {self.base_monomial_str(exps)}"
            ) from None


@dataclass(frozen=True)
class TowerShape:
    """A base geometry together with the per-component tower ranks."""

    base: BaseGeometry
    ranks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(int(r) for r in self.ranks))
        if len(self.ranks) != self.base.n_components:
            raise ValueError(
                f"{len(self.ranks)} ranks given for {self.base.n_components} divisor components"
            )
        if not self.ranks:
            raise ValueError("a tower needs at least one divisor component")
        if any(r < 1 for r in self.ranks):
            raise ValueError("tower ranks must be at least 1")

    @property
    def total_rank(self) -> int:
        return sum(self.ranks)

    @property
    def pairing_dim(self) -> int:
        return self.base.dim + self.total_rank

    @property
    def sigma(self) -> int:
        """Expected leading exponent: sum of 2^(r_u) minus the component count."""
        return sum(1 << r for r in self.ranks) - len(self.ranks)


@dataclass(frozen=True)
class TowerMonomial:
    """A monomial in base generators and the classes d[u,l], t[u,l]."""

    base: tuple[int, ...]
    dexp: tuple[tuple[int, ...], ...]
    texp: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(int(e) for e in self.base))
        object.__setattr__(self, "dexp", tuple(tuple(int(e) for e in c) for c in self.dexp))
        object.__setattr__(self, "texp", tuple(tuple(int(e) for e in c) for c in self.texp))
        if any(e < 0 for e in self.base) or any(
            e < 0 for comp in self.dexp + self.texp for e in comp
        ):
            raise ValueError("monomial exponents must be nonnegative")

    def degree(self) -> int:
        return (
            sum(self.base)
            + sum(e for comp in self.dexp for e in comp)
            + sum(e for comp in self.texp for e in comp)
        )

    def sort_key(self):
        return (self.base, self.dexp, self.texp)

    @classmethod
    def _raw(cls, base, dexp, texp) -> "TowerMonomial":
        # hot-path constructor for already-normalized tuples
        self = object.__new__(cls)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "dexp", dexp)
        object.__setattr__(self, "texp", texp)
        return self


def _mono_matches(shape: TowerShape, mono: TowerMonomial) -> None:
    if len(mono.base) != len(shape.base.gens):
        raise ValueError("monomial base arity does not match the geometry")
    if len(mono.dexp) != len(shape.ranks) or len(mono.texp) != len(shape.ranks):
        raise ValueError("monomial component count does not match the tower")
    for u, r in enumerate(shape.ranks):
        if len(mono.dexp[u]) != r or len(mono.texp[u]) != r:
            raise ValueError(f"monomial level count on component {u + 1} does not match rank {r}")


def _mul_mono(a: TowerMonomial, b: TowerMonomial) -> TowerMonomial | None:
    """Product of monomials, or None when a ring relation kills it.

    Relations used: d[u,l]^2 = 0 and d[u,l]*t[u,l] = 0 (the fiber class
    restricts to zero on the exceptional divisor of its own level).
    """
    base = tuple(x + y for x, y in zip(a.base, b.base))
    dexp = []
    texp = []
    for du, dv, tu, tv in zip(a.dexp, b.dexp, a.texp, b.texp):
        dn = tuple(x + y for x, y in zip(du, dv))
        tn = tuple(x + y for x, y in zip(tu, tv))
        for d, t in zip(dn, tn):
            if d >= 2 or (d and t):
                return None
        dexp.append(dn)
        texp.append(tn)
    return TowerMonomial._raw(base, tuple(dexp), tuple(texp))


class TowerClass:
    """A formal rational combination of tower monomials.

    Coefficients may be Fractions or EpsilonPolynomials; zero coefficients
    are never stored.  All generators have even real degree, so the product
    is commutative.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[TowerMonomial, object] | None = None):
        clean: dict[TowerMonomial, object] = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    clean[mono] = coeff
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "TowerClass":
        self = object.__new__(cls)
        self.terms = terms
        return self

    @staticmethod
    def zero() -> "TowerClass":
        return TowerClass()

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TowerClass):
            return NotImplemented
        return self.terms == other.terms

    def __neg__(self) -> "TowerClass":
        return TowerClass({m: -c for m, c in self.terms.items()})

    def __add__(self, other: "TowerClass") -> "TowerClass":
        if not isinstance(other, TowerClass):
            return NotImplemented
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            s = out.get(mono, 0) + coeff
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return TowerClass._raw(out)

    def __sub__(self, other: "TowerClass") -> "TowerClass":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TowerClass):
            out: dict[TowerMonomial, object] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    mono = _mul_mono(m1, m2)
                    if mono is None:
                        continue
                    s = out.get(mono, 0) + c1 * c2
                    if s:
                        out[mono] = s
                    else:
                        out.pop(mono, None)
            return TowerClass._raw(out)
        return TowerClass({m: c * other for m, c in self.terms.items()})

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int) -> "TowerClass":
        if n < 0:
            raise ValueError("negative power")
        out = None
        for _ in range(n):
            out = self if out is None else out * self
        if out is None:
            raise ValueError("the empty product needs a shape-aware unit; use unit_class")
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def degrees(self) -> set[int]:
        return {m.degree() for m in self.terms}

    def graded_part(self, k: int) -> "TowerClass":
        return TowerClass({m: c for m, c in self.terms.items() if m.degree() == k})

    def is_base_only(self) -> bool:
        return all(
            not any(e for comp in m.dexp for e in comp)
            and not any(e for comp in m.texp for e in comp)
            for m in self.terms
        )

    def __repr__(self) -> str:
        if not self.terms:
            return "TowerClass(0)"
        bits = [f"({c})*{m.base}|d{m.dexp}|t{m.texp}" for m, c in self.sorted_terms()]
        return "TowerClass(" + " + ".join(bits) + ")"


# -- constructors ---------------------------------------------------------


def _zero_exps(shape: TowerShape) -> tuple[tuple[int, ...], ...]:
    return tuple((0,) * r for r in shape.ranks)


def monomial(
    shape: TowerShape,
    base: Sequence[int] | None = None,
    dexp: Sequence[Sequence[int]] | None = None,
    texp: Sequence[Sequence[int]] | None = None,
) -> TowerMonomial:
    mono = TowerMonomial(
        tuple(base) if base is not None else (0,) * len(shape.base.gens),
        tuple(tuple(c) for c in dexp) if dexp is not None else _zero_exps(shape),
        tuple(tuple(c) for c in texp) if texp is not None else _zero_exps(shape),
    )
    _mono_matches(shape, mono)
    return mono


def unit_class(shape: TowerShape) -> TowerClass:
    return TowerClass({monomial(shape): Fraction(1)})


def gen_class(shape: TowerShape, name: str, coeff=1) -> TowerClass:
    base = [0] * len(shape.base.gens)
    base[shape.base.gen_index(name)] = 1
    return TowerClass({monomial(shape, base=base): as_fraction(coeff)})


def d_class(shape: TowerShape, u: int, l: int, coeff=1) -> TowerClass:
    dexp = [list(c) for c in _zero_exps(shape)]
    dexp[u - 1][l - 1] = 1
    return TowerClass({monomial(shape, dexp=dexp): as_fraction(coeff)})


def t_class(shape: TowerShape, u: int, l: int, coeff=1) -> TowerClass:
    texp = [list(c) for c in _zero_exps(shape)]
    texp[u - 1][l - 1] = 1
    return TowerClass({monomial(shape, texp=texp): as_fraction(coeff)})


def base_class(shape: TowerShape, coeffs: Mapping[str, object]) -> TowerClass:
    """Degree-1 base class from a name -> coefficient mapping."""
    out = TowerClass.zero()
    for name, c in coeffs.items():
        out = out + gen_class(shape, name, as_fraction(c))
    return out


def omega_vector_class(shape: TowerShape, vec: Sequence) -> TowerClass:
    """Base class from a coefficient vector over (w, D_1, ..., D_s)."""
    names = ("w",) + shape.base.divisors
    if len(vec) != len(names):
        raise ValueError(f"expected {len(names)} coefficients over {names}")
    return base_class(shape, dict(zip(names, vec)))


# -- the reduction engine -------------------------------------------------


def _reduce_component(
    r: int,
    I: Sequence[int],
    J: Sequence[int],
    say: Callable[[str], None] | None = None,
) -> tuple[int, int] | None:
    """Reduce one component; return (sign, divisor power) or None for zero."""
    l = r
    while l >= 1:
        i, j = I[l - 1], J[l - 1]
        if i >= 2:
            if say:
                say(f"level {l}: squared fiber class, zero")
            return None
        if i == 1 and j >= 1:
            if say:
                say(f"level {l}: fiber class dies on the exceptional divisor, zero")
            return None
        if i == 1:
            if say:
                say(f"level {l}: strip fiber class, descend")
            l -= 1
            continue
        if j == 0:
            if say:
                say(f"level {l}: unsaturated fiber direction, zero")
            return None
        # exceptional descent entered at level l
        if any(I[k] for k in range(l - 1)):
            if say:
                say(f"level {l}: leftover fiber class below the exceptional descent, zero")
            return None
        if say:
            say(f"level {l}: enter exceptional descent")
        sign = 1
        a = j - 1
        for k in range(l, 0, -1):
            if a == 0:
                if say:
                    say(f"level {k}: pure pullback on the exceptional divisor, zero")
                return None
            if a % 2:
                sign = -sign
            a = a - 1 + (J[k - 2] if k >= 2 else 0)
        if say:
            say(f"descent reaches the base, divisor power {a + 1}, sign {sign:+d}")
        return sign, a + 1
    if say:
        say("all levels stripped through fiber classes")
    return 1, 0


def reduce_monomial(
    shape: TowerShape, mono: TowerMonomial, trace: list[str] | None = None
) -> Fraction:
    """Pair one monomial against the tower's fundamental class."""
    _mono_matches(shape, mono)
    say = trace.append if trace is not None else None
    if mono.degree() != shape.pairing_dim:
        if say:
            say(f"degree {mono.degree()} != {shape.pairing_dim}, contributes 0")
        return Fraction(0)
    sign = 1
    exps = list(mono.base)
    for u in range(len(shape.ranks), 0, -1):
        comp_say = (lambda msg, u=u: say(f"component {u}, {msg}")) if say else None
        out = _reduce_component(shape.ranks[u - 1], mono.dexp[u - 1], mono.texp[u - 1], comp_say)
        if out is None:
            return Fraction(0)
        sg, gain = out
        sign *= sg
        exps[shape.base.divisor_index(u)] += gain
    value = shape.base.pair_base(exps)
    if say:
        say(f"table {shape.base.base_monomial_str(exps)} = {value}, sign {sign:+d}")
    return sign * value


def pair_eval(shape: TowerShape, cls: TowerClass, trace: list[str] | None = None):
    """Pair a class against the tower's fundamental class.

    Returns a Fraction for rational coefficients, or an EpsilonPolynomial
    when the class carries polynomial coefficients.  Monomials of the
    wrong complex degree contribute zero; a missing base-table entry for a
    surviving monomial raises TableGapError.
    """
    total = Fraction(0)
    terms = cls.sorted_terms() if trace is not None else cls.terms.items()
    for mono, coeff in terms:
        sub: list[str] | None = [] if trace is not None else None
        value = reduce_monomial(shape, mono, sub)
        if trace is not None:
            name = monomial_str(shape, mono)
            for line in sub or []:
                trace.append(f"{name}: {line}")
        if value:
            total = coeff * value + total
    return total


def monomial_str(shape: TowerShape, mono: TowerMonomial) -> str:
    """Canonical token string, e.g. ``w^2 d1 t2`` or ``d1.1 t2.1`` for s > 1."""
    parts = []
    base = shape.base.base_monomial_str(mono.base)
    if base != "1":
        parts.append(base)
    single = len(shape.ranks) == 1
    for u in range(len(shape.ranks)):
        for l in range(shape.ranks[u]):
            tag = f"{l + 1}" if single else f"{u + 1}.{l + 1}"
            d, t = mono.dexp[u][l], mono.texp[u][l]
            if d:
                parts.append(f"d{tag}" + (f"^{d}" if d > 1 else ""))
            if t:
                parts.append(f"t{tag}" + (f"^{t}" if t > 1 else ""))
    return " ".join(parts) if parts else "1"


# -- closed-form pattern values (independent oracle) ----------------------


def base_pair(shape: TowerShape, eta: TowerClass, extra_divisor: int | None = None) -> Fraction:
    """Evaluate a base class against [X], optionally cut down to a divisor.

    With ``extra_divisor`` set to a component u, computes the pairing of
    eta restricted to D_u, i.e. eta times the divisor class, from the
    table.  Parts of eta of the wrong degree contribute zero.
    """
    if not eta.is_base_only():
        raise ValueError("eta must be supported on base generators")
    total = Fraction(0)
    n = shape.base.dim
    for mono, coeff in eta.sorted_terms():
        exps = list(mono.base)
        if extra_divisor is not None:
            exps[shape.base.divisor_index(extra_divisor)] += 1
        if sum(exps) != n:
            continue
        total += as_fraction(coeff) * shape.base.pair_base(exps)
    return total


def closed_form_dIJ(
    shape: TowerShape, I: Sequence[int], J: Sequence[int], eta: TowerClass
) -> Fraction | None:
    """Pattern value of <eta d^I t^J> on a single-component tower.

    Returns the pairing when the lemma pins it (the all-ones fiber pattern,
    a failed bound, or an off-pattern equality) and None when the exponents
    fall outside every covered case.
    """
    if len(shape.ranks) != 1:
        raise ValueError("closed_form_dIJ needs a single-component tower")
    r = shape.ranks[0]
    I, J = tuple(I), tuple(J)
    if len(I) != r or len(J) != r:
        raise ValueError("exponent length does not match the tower rank")
    if I == (1,) * r and J == (0,) * r:
        return base_pair(shape, eta)
    norm = index_norm(I) + index_norm(J)
    sig = sigma_weight(I) + sigma_weight(J)
    if norm < r or sig < (1 << r) - 1:
        return Fraction(0)
    if norm == r or sig == (1 << r) - 1:
        return Fraction(0)  # equality forces the all-ones pattern, which failed
    return None


def _mixed_pattern_total(r: int, I: tuple[int, ...], T: tuple[int, ...]) -> int | None:
    """Match the extremal mixed exponents on the total t-vector T.

    The same monomial admits several splittings into one distinguished
    exceptional factor times the rest, so the pattern is recognized on the
    total exponents: T = (1, ..., 1, 2, 0, ..., 0) with the 2 at position l
    and I = (0, ..., 0, 1, ..., 1) with ones above l.  Returns l or None.
    """
    for l in range(1, r + 1):
        if T == (1,) * (l - 1) + (2,) + (0,) * (r - l) and I == (0,) * l + (1,) * (r - l):
            return l
    return None


def closed_form_tdIJ(
    shape: TowerShape, level: int, I: Sequence[int], J: Sequence[int], eta: TowerClass
) -> Fraction | None:
    """Pattern value of <t_level eta d^I t^J> on a single-component tower.

    J excludes the distinguished factor t_level; the pattern is matched on
    the total exponents.  The bounds |I| + |J| >= r and
    sigma(I) + sigma(J) >= 2^r - 1 are necessary for a nonzero pairing;
    equality in the dyadic bound forces the mixed pattern, whose value is
    (-1)^l eta against the divisor.  Equality in the plain norm alone does
    not pin the value (t[r]^3 is a nonzero example), so that case is left
    to the reduction engine.
    """
    if len(shape.ranks) != 1:
        raise ValueError("closed_form_tdIJ needs a single-component tower")
    r = shape.ranks[0]
    if not 1 <= level <= r:
        raise ValueError(f"level {level} out of range 1..{r}")
    I, J = tuple(I), tuple(J)
    if len(I) != r or len(J) != r:
        raise ValueError("exponent length does not match the tower rank")
    total = tuple(j + (1 if k == level - 1 else 0) for k, j in enumerate(J))
    l = _mixed_pattern_total(r, I, total)
    if l is not None:
        value = base_pair(shape, eta, extra_divisor=1)
        return -value if l % 2 else value
    norm = index_norm(I) + index_norm(J)
    sig = sigma_weight(I) + sigma_weight(J)
    if norm < r or sig < (1 << r) - 1:
        return Fraction(0)
    if sig == (1 << r) - 1:
        return Fraction(0)  # dyadic equality off the mixed pattern
    return None


def closed_form_nc(
    shape: TowerShape,
    P: Sequence[Sequence[int]],
    Q: Sequence[Sequence[int]],
    eta: TowerClass,
    extra: tuple[int, int] | None = None,
) -> Fraction | None:
    """Pattern value of <eta prod_u d_u^{P_u} t_u^{Q_u}> with an optional extra t[v,j].

    Component v with the extra factor must carry the mixed pattern with the
    extra level equal to the number of leading exceptional exponents; the
    value is then (-1)^l times eta paired against the divisor D_v.  All
    other components must carry the all-ones fiber pattern, giving eta
    against the base.  Failed bounds and off-pattern equalities give zero;
    anything else is not covered and returns None.
    """
    s = len(shape.ranks)
    P = tuple(tuple(p) for p in P)
    Q = tuple(tuple(q) for q in Q)
    if len(P) != s or len(Q) != s:
        raise ValueError("component count does not match the tower")
    v = extra[0] if extra is not None else None
    if extra is not None and not (
        1 <= extra[0] <= s and 1 <= extra[1] <= shape.ranks[extra[0] - 1]
    ):
        raise ValueError(f"extra factor t{extra} out of range")
    sign_l = 0
    all_pattern = True
    for u in range(1, s + 1):
        r = shape.ranks[u - 1]
        Pu, Qu = P[u - 1], Q[u - 1]
        if len(Pu) != r or len(Qu) != r:
            raise ValueError(f"exponent length on component {u} does not match rank {r}")
        norm = index_norm(Pu) + index_norm(Qu)
        sig = sigma_weight(Pu) + sigma_weight(Qu)
        if norm < r or sig < (1 << r) - 1:
            return Fraction(0)
        if u == v:
            total = tuple(q + (1 if k == extra[1] - 1 else 0) for k, q in enumerate(Qu))
            l = _mixed_pattern_total(r, Pu, total)
            on_pattern = l is not None
            if on_pattern:
                sign_l = l
            # plain-norm equality does not pin the mixed component; only the
            # dyadic equality does
            if not on_pattern and sig == (1 << r) - 1:
                return Fraction(0)
        else:
            on_pattern = Pu == (1,) * r and Qu == (0,) * r
            if not on_pattern and (norm == r or sig == (1 << r) - 1):
                return Fraction(0)
        if not on_pattern:
            all_pattern = False
    if not all_pattern:
        return None
    if v is None:
        return base_pair(shape, eta)
    value = base_pair(shape, eta, extra_divisor=v)
    return -value if sign_l % 2 else value
