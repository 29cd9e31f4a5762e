"""Built-in acceptance suites, runnable from the CLI and from the test suite.

Every suite is deterministic: random corpora are drawn from fixed seeds and
all arithmetic is exact, so the outcome (and the rendered report) is
byte-stable across runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .bundle import ParabolicBundle, c1_upstairs
from .cone import ConePoint, ConeSpec, WeightSpec, epsilon_kahler_threshold, kxr_check, omega_cone_point
from .epsilon import EpsilonPolynomial
from .lattice import f_char, index_norm, pi_project, sigma_weight, zero_char
from .ring import (
    BaseGeometry,
    TowerShape,
    base_class,
    closed_form_dIJ,
    closed_form_tdIJ,
    monomial,
    pair_eval,
    reduce_monomial,
    TowerClass,
)
from .scenario import fraction_str, render_report
from .slope import dim1_exact_slope, leading_term_report
from .stability import Scenario, curve_subobjects, theorem_estabilitat_check


@dataclass(frozen=True)
class CriterionResult:
    name: str
    ok: bool
    details: dict

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}"


def _rand_fraction(rng: random.Random, den: int = 16, lo: int = -8, hi: int = 8, nonzero=False) -> Fraction:
    while True:
        x = Fraction(rng.randint(lo, hi), rng.choice([1, 2, den]))
        if x or not nonzero:
            return x


def _rand_lambdas(rng: random.Random, r: int, den: int = 64) -> tuple[Fraction, ...]:
    nums = sorted(rng.sample(range(1, den), r), reverse=True)
    return tuple(Fraction(k, den) for k in nums)


def _all_degree_monomials(n_gens: int, degree: int):
    if n_gens == 1:
        yield (degree,)
        return
    for first in range(degree + 1):
        for rest in _all_degree_monomials(n_gens - 1, degree - first):
            yield (first,) + rest


def _random_geometry(rng: random.Random, n: int, s: int) -> BaseGeometry:
    divisors = tuple(f"D{u}" for u in range(1, s + 1))
    table = {}
    for exps in _all_degree_monomials(1 + s, n):
        table[exps] = _rand_fraction(rng, den=4, lo=-5, hi=5, nonzero=True)
    # keep the polarization volumes positive so slopes behave like volumes
    wpow = tuple(n if i == 0 else 0 for i in range(1 + s))
    table[wpow] = abs(table[wpow])
    return BaseGeometry(n, divisors, table)


def _random_filtration(rng: random.Random, rank: int, r: int) -> tuple[int, ...]:
    return tuple(sorted(rng.randint(0, rank) for _ in range(r)))


_CORPUS_SHAPES = tuple(
    (n, ranks)
    for n in (1, 2)
    for ranks in (
        (1,), (2,), (3,),
        (1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3), (3, 2), (3, 3),
    )
)


def criterion_leading_term(per_shape: int = 3, heavy_per_shape: int = 2) -> CriterionResult:
    """Slope polynomials vanish below the expected exponent and lead with the parabolic slope."""
    rng = random.Random(20121)
    failures: list[str] = []
    count = 0
    for n, ranks in _CORPUS_SHAPES:
        reps = heavy_per_shape if sum(ranks) >= 5 else per_shape
        for rep in range(reps):
            geom = _random_geometry(rng, n, len(ranks))
            shape = TowerShape(geom, ranks)
            rank = rng.randint(1, 4)
            c1 = base_class(
                shape,
                {name: _rand_fraction(rng, den=3, lo=-4, hi=4) for name in ("w",) + geom.divisors},
            )
            bundle = ParabolicBundle(
                rank=rank,
                c1=c1,
                filtrations=tuple(_random_filtration(rng, rank, r) for r in ranks),
            )
            zero_mode = rep == 0 and n == 1
            lams = []
            for r in ranks:
                lam = _rand_lambdas(rng, r)
                if zero_mode:
                    lam = lam[:-1] + (Fraction(0),)
                lams.append(lam)
            weights = WeightSpec(tuple(lams), last_weight_zero=zero_mode)
            omega = (Fraction(1),) + (Fraction(0),) * len(ranks)
            report = leading_term_report(shape, bundle, omega, weights)
            count += 1
            if not report.ok:
                failures.append(
                    f"n={n} ranks={ranks} rep={rep}: " + "; ".join(report.deviations())
                )
    details = {"scenarios": count, "failures": failures}
    return CriterionResult("leading-term", count >= 50 and not failures, details)


_SWEEP_TABLES = {
    1: {"w": 1, "D1": 3},
    2: {"w^2": 1, "w D1": 2, "D1^2": -3},  # negative self-intersection on purpose
}


def _sweep_shapes():
    for n in (1, 2):
        for r in (1, 2, 3):
            geom = BaseGeometry(n, ("D1",), _SWEEP_TABLES[n])
            yield TowerShape(geom, (r,))


def criterion_oracle_equivalence() -> CriterionResult:
    """Closed-form pattern values agree with the reduction engine wherever defined."""
    checked = 0
    covered = 0
    failures: list[str] = []
    for shape in _sweep_shapes():
        n, r = shape.base.dim, shape.ranks[0]
        ranges_i = range(0, 3)
        ranges_j = range(0, 4)
        for I in product(ranges_i, repeat=r):
            for J in product(ranges_j, repeat=r):
                for extra in (None, *range(1, r + 1)):
                    used = index_norm(I) + index_norm(J) + (1 if extra else 0)
                    deg_eta = shape.pairing_dim - used
                    if deg_eta < 0 or deg_eta > n:
                        continue
                    for eta_exps in _all_degree_monomials(2, deg_eta):
                        eta = TowerClass({monomial(shape, base=eta_exps): Fraction(1)})
                        if extra is None:
                            closed = closed_form_dIJ(shape, I, J, eta)
                            texp = (J,)
                        else:
                            closed = closed_form_tdIJ(shape, extra, I, J, eta)
                            J2 = list(J)
                            J2[extra - 1] += 1
                            texp = (tuple(J2),)
                        checked += 1
                        if closed is None:
                            continue
                        covered += 1
                        mono = monomial(shape, base=eta_exps, dexp=(I,), texp=texp)
                        engine = reduce_monomial(shape, mono)
                        if engine != closed:
                            failures.append(
                                f"n={n} r={r} I={I} J={J} extra={extra} eta={eta_exps}: "
                                f"closed={closed} engine={engine}"
                            )
    details = {"monomials": checked, "covered": covered, "failures": failures}
    return CriterionResult("oracle-equivalence", covered > 0 and not failures, details)


def criterion_curve_exactness(samples: int = 100) -> CriterionResult:
    """Tower slope equals the parabolic slope exactly on curve scenarios."""
    rng = random.Random(31337)
    failures: list[str] = []
    # the worked value: rank 2, degree 3, one filtration step, one point, alpha 1/2
    geom = BaseGeometry(1, ("D1",), {"w": 1, "D1": 1})
    shape = TowerShape(geom, (1,))
    bundle = ParabolicBundle(rank=2, c1=base_class(shape, {"w": 3}), filtrations=((1,),))
    got = dim1_exact_slope(shape, bundle, (Fraction(1), Fraction(0)), Fraction(1, 2))
    if got != (Fraction(7, 4), Fraction(7, 4)):
        failures.append(f"worked value: expected (7/4, 7/4), got {got}")
    for k in range(samples):
        vol = Fraction(rng.randint(1, 4))
        pts = Fraction(rng.randint(1, 5))
        geom = BaseGeometry(1, ("D1",), {(1, 0): vol, (0, 1): pts})
        shape = TowerShape(geom, (1,))
        rank = rng.randint(1, 5)
        bundle = ParabolicBundle(
            rank=rank,
            c1=base_class(shape, {"w": _rand_fraction(rng, den=6), "D1": _rand_fraction(rng, den=6)}),
            filtrations=((rng.randint(0, rank),),),
        )
        alpha = Fraction(rng.randint(1, 63), 64)
        omega = (Fraction(rng.randint(1, 3)), Fraction(0))
        slope_value, par_value = dim1_exact_slope(shape, bundle, omega, alpha)
        if slope_value != par_value:
            failures.append(f"sample {k}: slope {slope_value} != parabolic {par_value}")
    return CriterionResult(
        "curve-exactness", not failures, {"samples": samples + 1, "failures": failures}
    )


def _p2_line():
    geom = BaseGeometry(2, ("L",), {"w^2": 1, "w L": 1, "L^2": 1})
    cone = ConeSpec(((Fraction(1), Fraction(1)),), ("ample",))
    return geom, cone


def criterion_kahler_threshold() -> CriterionResult:
    """Certified threshold on the plane-with-a-line scenario, grid membership, convexity."""
    failures: list[str] = []
    geom, cone = _p2_line()
    shape = TowerShape(geom, (2,))
    weights = WeightSpec(((Fraction(1, 2), Fraction(1, 4)),))
    omega = (Fraction(1), Fraction(0))
    precision = Fraction(1, 1000)
    report = epsilon_kahler_threshold(shape, omega, weights, cone, precision=precision)
    if report.unbounded or report.sup_hi is None:
        failures.append("threshold unexpectedly unbounded")
    else:
        if not (report.sup_lo <= 1 <= report.sup_hi):
            failures.append(f"supremum bracket [{report.sup_lo}, {report.sup_hi}] misses 1")
        if report.sup_hi - report.sup_lo > precision:
            failures.append("supremum bracket wider than the precision")
        if 1 - report.epsilon0 > precision:
            failures.append(f"certified bound {report.epsilon0} more than precision below 1")
        if not any("in K(X)" in label for label in report.binding):
            failures.append(f"binding set {report.binding} does not name the cone inequality")
        for k in range(1, 101):
            eps = report.epsilon0 * k / 100
            point = omega_cone_point(shape, omega, weights, eps)
            ok, viols = kxr_check(shape, 2, point, cone)
            if not ok:
                failures.append(f"grid point {eps} fails: {viols}")
                break
        above = report.sup_hi + Fraction(1, 1000)
        ok, _ = kxr_check(shape, 2, omega_cone_point(shape, omega, weights, above), cone)
        if ok:
            failures.append(f"membership unexpectedly holds just above the root, at {above}")

    shape1 = TowerShape(geom, (1,))
    report1 = epsilon_kahler_threshold(
        shape1, omega, WeightSpec(((Fraction(1, 2),),)), cone, precision=precision
    )
    if report1.sup_hi is None or not (report1.sup_lo <= 2 <= report1.sup_hi):
        failures.append("rank-1 threshold is not 2")

    rng = random.Random(4242)
    pairs = 0
    while pairs < 100:
        def rand_point() -> ConePoint:
            a = tuple(Fraction(rng.randint(1, 8), rng.randint(1, 4)) for _ in range(2))
            b = tuple(-Fraction(rng.randint(1, 8), rng.randint(4, 16)) for _ in range(2))
            w0 = Fraction(rng.randint(1, 4))
            return ConePoint((w0, Fraction(0)), a, b)

        p, q = rand_point(), rand_point()
        if not (kxr_check(shape, 2, p, cone)[0] and kxr_check(shape, 2, q, cone)[0]):
            continue
        pairs += 1
        if not kxr_check(shape, 2, p + q, cone)[0]:
            failures.append(f"sum of passing points fails: {p} + {q}")
            break
        if not kxr_check(shape, 2, p.scale(2), cone)[0]:
            failures.append(f"doubling a passing point fails: {p}")
            break
    details = {
        "threshold": fraction_str(report.epsilon0),
        "sup_bracket": [fraction_str(report.sup_lo), fraction_str(report.sup_hi or Fraction(0))],
        "binding": list(report.binding),
        "convex_pairs": pairs,
        "failures": failures,
    }
    return CriterionResult("kahler-threshold", not failures, details)


def criterion_stability_correspondence(samples: int = 100) -> CriterionResult:
    """Both correspondence directions hold over exhaustive curve subobject lists."""
    rng = random.Random(57721)
    failures: list[str] = []
    scenarios = 0
    for k in range(samples):
        r = 1 if k % 5 != 0 else 2  # mostly one level, some two-level towers
        pts = rng.randint(1, 3)
        geom = BaseGeometry(1, ("D1",), {(1, 0): 1, (0, 1): pts})
        shape = TowerShape(geom, (r,))
        rank = rng.randint(2, 4)
        deg = rng.randint(-6, 6)
        parent = ParabolicBundle(
            rank=rank,
            c1=base_class(shape, {"w": deg}),
            filtrations=(_random_filtration(rng, rank, r),),
        )
        weights = WeightSpec((_rand_lambdas(rng, r),))
        center = round(deg / rank)
        subs = curve_subobjects(shape, parent, (center - 3, center + 3), ranks=(1,))
        sc = Scenario(
            shape=shape, bundle=parent, weights=weights,
            omega=(Fraction(1), Fraction(0)), subobjects=subs,
        )
        outcome = theorem_estabilitat_check(sc)
        scenarios += 1
        if not outcome.ok:
            failures.append(f"sample {k}: {outcome.counterexamples}")
    return CriterionResult(
        "stability-correspondence",
        scenarios == samples and not failures,
        {"scenarios": scenarios, "failures": failures},
    )


def criterion_lattice_identities(max_rank: int = 64, sigma_rank: int = 6) -> CriterionResult:
    """Projection identities up to rank 64 and the extremality characterization."""
    failures: list[str] = []
    for m in range(2, max_rank + 1):
        if pi_project(f_char(m, m)) != f_char(m - 1, m - 1):
            failures.append(f"projection of f_{m} is not f_{m - 1}")
        for i in range(1, m):
            if pi_project(f_char(i, m)) != f_char(i, m - 1):
                failures.append(f"projection moves f_{i} inside rank {m}")
        if pi_project(zero_char(m)) != zero_char(m - 1):
            failures.append(f"projection moves 0 inside rank {m}")

    # pure extremality of the dyadic grading
    for r in range(1, sigma_rank + 1):
        for I in product(range(0, r + 1), repeat=r):
            both = index_norm(I) == r and sigma_weight(I) == (1 << r) - 1
            if both != (I == (1,) * r):
                failures.append(f"extremality fails at I={I}")

    # equality cases force the all-ones pattern among nonvanishing pairings
    geom = BaseGeometry(1, ("D1",), {"w": 1, "D1": 1})
    checked = 0
    for r in range(1, sigma_rank + 1):
        shape = TowerShape(geom, (r,))
        bound = (1 << r) - 1
        for total in (r, r + 1):
            for IJ in _compositions(total, 2 * r):
                I, J = IJ[:r], IJ[r:]
                deg_eta = 1 + r - total
                mono = monomial(shape, base=(deg_eta, 0), dexp=(I,), texp=(J,))
                value = reduce_monomial(shape, mono)
                checked += 1
                if value:
                    norm = index_norm(I) + index_norm(J)
                    sig = sigma_weight(I) + sigma_weight(J)
                    if norm < r or sig < bound:
                        failures.append(f"r={r} I={I} J={J}: nonzero below the bounds")
                    if (norm == r or sig == bound) and not (I == (1,) * r and J == (0,) * r):
                        failures.append(f"r={r} I={I} J={J}: nonzero equality off-pattern")
    return CriterionResult(
        "lattice-identities", not failures, {"pairings_checked": checked, "failures": failures}
    )


def _compositions(total: int, slots: int):
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


def criterion_exactness_determinism() -> CriterionResult:
    """Reports render byte-identically and carry no floating-point values."""
    failures: list[str] = []
    geom, cone = _p2_line()
    shape = TowerShape(geom, (1,))
    bundle = ParabolicBundle(rank=2, c1=base_class(shape, {"w": 3}), filtrations=((1,),))
    weights = WeightSpec(((Fraction(1, 2),),))
    omega = (Fraction(1), Fraction(0))

    def build() -> str:
        from .scenario import make_report, poly_map

        report = leading_term_report(shape, bundle, omega, weights)
        results = {
            "sigma": report.sigma,
            "polynomial": poly_map(report.poly),
            "par_slope": fraction_str(report.par),
            "ok": report.ok,
        }
        return render_report(make_report("slope", "sha256:selftest", results))

    first, second = build(), build()
    if first != second:
        failures.append("re-rendering the same report changed its bytes")
    if "7/4" not in first:
        failures.append("expected leading coefficient 7/4 in the rendered report")
    try:
        render_report({"x": 0.5})
        failures.append("float leak was not detected")
    except ValueError:
        pass
    return CriterionResult("exactness-determinism", not failures, {"failures": failures})


def run_all() -> list[CriterionResult]:
    return [
        criterion_leading_term(),
        criterion_oracle_equivalence(),
        criterion_curve_exactness(),
        criterion_kahler_threshold(),
        criterion_stability_correspondence(),
        criterion_lattice_identities(),
        criterion_exactness_determinism(),
    ]
