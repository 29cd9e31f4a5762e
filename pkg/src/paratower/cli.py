"""Command-line interface: scenario ingestion, dispatch, canonical JSON reports.

Exit codes: 0 on success, 1 on a verdict-level failure (a check that ran
and came out negative), 2 on input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .bundle import c1_upstairs, weights_from_filtration
from .cone import ConeError, WeightSpec, epsilon_kahler_threshold, kxr_check, omega_cone_point
from .lattice import check_category_weights
from .ring import TableGapError, TowerClass, monomial_str, pair_eval
from .scenario import (
    ScenarioError,
    ScenarioFile,
    fraction_str,
    input_digest,
    load_scenario_text,
    make_report,
    parse_monomial,
    parse_rational,
    poly_map,
    render_report,
    verdict_json,
)
from .selftest import run_all
from .slope import dim1_exact_slope, leading_term_report
from .stability import curve_subobjects, equi_stability_at, theorem_estabilitat_check


def _max_rank() -> int:
    raw = os.environ.get("PARATOWER_MAX_RANK", "8")
    try:
        value = int(raw)
    except ValueError:
        raise ScenarioError("PARATOWER_MAX_RANK", f"not an integer: {raw!r}") from None
    return max(1, min(value, 64))  # the CLI never exceeds 64 levels per component


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _apply_mode(sf: ScenarioFile, args) -> ScenarioFile:
    if getattr(args, "mode", None) == "last-weight-zero" and sf.weights is not None:
        weights = WeightSpec(sf.weights.lambdas, last_weight_zero=True)
        sf = ScenarioFile(
            shape=sf.shape, omega=sf.omega, bundle=sf.bundle, weights=weights,
            cone=sf.cone, divisor_classes=sf.divisor_classes,
            subobjects=sf.subobjects, options=sf.options,
        )
    return sf


def _option(sf: ScenarioFile, args, name: str, default=None):
    value = getattr(args, name.replace("-", "_"), None)
    if value is not None:
        return value
    if sf.options and name in sf.options:
        return sf.options[name]
    return default


def _args_echo(args) -> dict:
    echo = {}
    for key in ("epsilon", "precision", "mode", "grid", "monomial", "trace"):
        value = getattr(args, key, None)
        if value not in (None, False):
            echo[key] = fraction_str(value) if isinstance(value, Fraction) else value
    return echo


def run_pair(sf: ScenarioFile, text: str, args) -> tuple[dict, int]:
    mono = parse_monomial(sf.shape, args.monomial)
    trace: list[str] | None = [] if args.trace else None
    value = pair_eval(sf.shape, TowerClass({mono: Fraction(1)}), trace)
    results = {
        "monomial": monomial_str(sf.shape, mono),
        "value": fraction_str(value),
    }
    if trace is not None:
        results["trace"] = trace
    return results, 0


def run_slope(sf: ScenarioFile, text: str, args) -> tuple[dict, int]:
    sf.require(bundle=True, weights=True, omega=True)
    report = leading_term_report(sf.shape, sf.bundle, sf.omega, sf.weights)
    leading = report.leading
    results = {
        "sigma": report.sigma,
        "polynomial": poly_map(report.poly),
        "leading_exponent": leading[0] if leading else None,
        "leading_coefficient": fraction_str(leading[1]) if leading else None,
        "par_slope": fraction_str(report.par),
        "vanishing_below_sigma": report.vanishing_below_sigma,
        "leading_matches": report.leading_matches,
        "ok": report.ok,
        "deviations": report.deviations(),
    }
    if sf.shape.base.dim == 1 and sf.shape.ranks == (1,):
        alpha = sf.weights.lambdas[0][0]
        if 0 < alpha < 1:
            slope_value, par_value = dim1_exact_slope(sf.shape, sf.bundle, sf.omega, alpha)
            results["curve_exact"] = {
                "slope": fraction_str(slope_value),
                "par_slope": fraction_str(par_value),
                "equal": slope_value == par_value,
            }
    return results, 0 if report.ok else 1


def run_cone(sf: ScenarioFile, text: str, args) -> tuple[dict, int]:
    sf.require(weights=True, omega=True, cone=True)
    precision = _option(sf, args, "precision", Fraction(1, 1000))
    epsilon = _option(sf, args, "epsilon")
    components = {}
    code = 0
    for u in range(1, len(sf.shape.ranks) + 1):
        c = sf.divisor_classes[u - 1] if sf.divisor_classes else None
        try:
            report = epsilon_kahler_threshold(
                sf.shape, sf.omega, sf.weights, sf.cone, c, precision=precision, component=u
            )
        except ConeError as exc:
            components[str(u)] = {"error": str(exc)}
            code = 1
            continue
        entry = {
            "epsilon0": fraction_str(report.epsilon0),
            "sup_lo": fraction_str(report.sup_lo),
            "sup_hi": fraction_str(report.sup_hi) if report.sup_hi is not None else None,
            "binding": list(report.binding),
            "unbounded": report.unbounded,
        }
        if epsilon is not None:
            point = omega_cone_point(sf.shape, sf.omega, sf.weights, epsilon, component=u)
            ok, violations = kxr_check(sf.shape, sf.shape.ranks[u - 1], point, sf.cone, c, component=u)
            entry["at_epsilon"] = {"epsilon": fraction_str(epsilon), "member": ok, "violations": violations}
        components[str(u)] = entry
    results = {"components": components, "joint_heuristic": len(sf.shape.ranks) > 1}
    return results, code


def run_stability(sf: ScenarioFile, text: str, args) -> tuple[dict, int]:
    sf.require(bundle=True, weights=True, omega=True)
    sc = sf.scenario()
    window = _option(sf, args, "degree_window")
    generate = bool(_option(sf, args, "generate_curve_subobjects", False))
    if generate:
        if window is None:
            raise ScenarioError("options.degree_window", "subobject generation needs a degree window")
        ranks = _option(sf, args, "subobject_ranks")
        subs = curve_subobjects(sf.shape, sf.bundle, window, ranks=ranks)
        sc = type(sc)(
            shape=sc.shape, bundle=sc.bundle, weights=sc.weights,
            omega=sc.omega, subobjects=sc.subobjects + subs, epsilon=sc.epsilon,
        )
    grid = int(_option(sf, args, "grid", 10))
    outcome = theorem_estabilitat_check(sc, grid=grid)
    near = outcome.near_zero
    results = {
        "subobjects": [sub.name or f"#{i}" for i, sub in enumerate(sc.subobjects)],
        "parabolic": verdict_json(outcome.parabolic),
        "near_zero": {
            "verdict": verdict_json(near.verdict),
            "bound": fraction_str(near.bound) if near.bound is not None else None,
            "exact_ties": list(near.exact_ties),
        },
        "theorem_check": {
            "ok": outcome.ok,
            "grid": [fraction_str(x) for x in outcome.grid],
            "counterexamples": list(outcome.counterexamples),
        },
    }
    epsilon = _option(sf, args, "epsilon", sc.epsilon)
    if epsilon is not None:
        results["at_epsilon"] = {
            "epsilon": fraction_str(epsilon),
            **verdict_json(equi_stability_at(sc, epsilon)),
        }
    return results, 0 if outcome.ok else 1


def run_weights(sf: ScenarioFile, text: str, args) -> tuple[dict, int]:
    sf.require(bundle=True)
    components = []
    all_ok = True
    for u in range(1, len(sf.shape.ranks) + 1):
        profile = weights_from_filtration(sf.bundle, u)
        check = check_category_weights(profile, sf.shape.ranks[u - 1])
        all_ok = all_ok and check.ok

        def multiset(stratum):
            counts: dict[tuple[int, ...], int] = {}
            for ch in stratum:
                counts[ch.coords] = counts.get(ch.coords, 0) + 1
            return [[list(coords), mult] for coords, mult in sorted(counts.items())]

        components.append(
            {
                "component": u,
                "stratum0": multiset(profile.stratum0),
                "stratum1": multiset(profile.stratum1),
                "stratum2": multiset(profile.stratum2),
                "category_check": {
                    "ok": check.ok,
                    "stratum": check.stratum,
                    "weight": list(check.weight.coords) if check.weight else None,
                },
            }
        )
    c1_up = c1_upstairs(sf.shape, sf.bundle)
    results = {
        "components": components,
        "c1_upstairs": {monomial_str(sf.shape, m): fraction_str(c) for m, c in c1_up.sorted_terms()},
        "ok": all_ok,
    }
    return results, 0 if all_ok else 1


def run_selftest(args) -> tuple[dict, int]:
    outcomes = run_all()
    results = {
        "criteria": [
            {"name": r.name, "ok": r.ok, "details": r.details} for r in outcomes
        ],
        "ok": all(r.ok for r in outcomes),
    }
    return results, 0 if results["ok"] else 1


_COMMANDS = {
    "pair": run_pair,
    "slope": run_slope,
    "cone": run_cone,
    "stability": run_stability,
    "weights": run_weights,
}


def _process_file(command: str, path: str, args) -> tuple[dict, int]:
    text = _read(path)
    sf = _apply_mode(load_scenario_text(text, max_rank=_max_rank()), args)
    results, code = _COMMANDS[command](sf, text, args)
    report = make_report(command, input_digest(text), results, _args_echo(args))
    return report, code


def _add_common(p: argparse.ArgumentParser, files: bool = True):
    if files:
        p.add_argument("files", nargs="+", help="scenario JSON files ('-' for stdin)")
    p.add_argument("--epsilon", type=lambda s: parse_rational(s, "--epsilon"), default=None)
    p.add_argument("--precision", type=lambda s: parse_rational(s, "--precision"), default=None)
    p.add_argument("--mode", choices=["last-weight-zero"], default=None)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1, help="parallel scenario evaluation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paratower",
        description="Exact pairings, slopes, cone membership and stability on blow-up towers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pair", help="pair a monomial against the tower fundamental class")
    p.add_argument("file", help="scenario JSON file ('-' for stdin)")
    p.add_argument("monomial", help="factor tokens, e.g. 'w^2 d1 t2' or 'd1.1 t2.1'")
    p.add_argument("--trace", action="store_true", help="emit the reduction trace")
    p.add_argument("--mode", choices=["last-weight-zero"], default=None)

    for name, help_text in (
        ("slope", "slope polynomial, leading term and parabolic slope"),
        ("cone", "certified Kaehler-scale threshold and membership"),
        ("stability", "stability verdicts and the correspondence check"),
        ("weights", "stratum weight profiles from the filtration"),
    ):
        _add_common(sub.add_parser(name, help=help_text))

    sub.add_parser("selftest", help="run the built-in acceptance suites")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            results, code = run_selftest(args)
            sys.stdout.write(render_report(make_report("selftest", None, results, {})))
            return code
        if args.command == "pair":
            report, code = _process_file("pair", args.file, args)
            sys.stdout.write(render_report(report))
            return code
        paths = args.files
        jobs = max(1, args.jobs or 1)
        if jobs > 1 and len(paths) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                outcomes = list(pool.map(lambda p: _process_file(args.command, p, args), paths))
        else:
            outcomes = [_process_file(args.command, p, args) for p in paths]
        code = max(c for _, c in outcomes)
        if len(outcomes) == 1:
            sys.stdout.write(render_report(outcomes[0][0]))
        else:
            sys.stdout.write(render_report({"reports": [r for r, _ in outcomes]}))
        return code
    except ScenarioError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except (TableGapError, ConeError, ValueError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"cannot read input: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
