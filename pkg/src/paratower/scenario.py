"""Scenario file ingestion and canonical machine-readable reports.

Scenario files are JSON; every rational is a string "p/q" (or an integer),
never a float, so values round-trip exactly.  Reports are emitted as
canonical JSON (sorted keys, fixed indentation, no floats) so identical
inputs produce byte-identical output.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .bundle import ParabolicBundle, SubobjectData
from .cone import ConeSpec, WeightSpec
from .epsilon import EpsilonPolynomial
from .ring import BaseGeometry, TowerClass, TowerMonomial, TowerShape, base_class, monomial
from .stability import Scenario


class ScenarioError(ValueError):
    """Input problem, labeled with the JSON path of the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path or '<root>'}: {message}")


def parse_rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise ScenarioError(path, "expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ScenarioError(path, f"floats are not exact; write {value!r} as a 'p/q' string")
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ScenarioError(path, f"cannot parse rational {value!r}") from None
    raise ScenarioError(path, f"expected a rational, got {type(value).__name__}")


def fraction_str(x: Fraction) -> str:
    return str(Fraction(x))


def poly_map(p: EpsilonPolynomial) -> dict[str, str]:
    return {str(k): fraction_str(v) for k, v in sorted(p.to_map().items())}


def _expect(obj, path: str, kind, what: str):
    if not isinstance(obj, kind):
        raise ScenarioError(path, f"expected {what}, got {type(obj).__name__}")
    return obj


def _get(obj: Mapping, path: str, key: str, kind, what: str, default=_expect):
    if key not in obj:
        if default is not _expect:
            return default
        raise ScenarioError(path, f"missing required field '{key}'")
    return _expect(obj[key], f"{path}.{key}" if path else key, kind, what)


def _parse_base(obj: Mapping, path: str) -> BaseGeometry:
    dim = _get(obj, path, "dim", int, "an integer")
    divisors = _get(obj, path, "divisors", list, "a list of names")
    extras = _get(obj, path, "extra_generators", list, "a list of names", default=[])
    table_obj = _get(obj, path, "table", dict, "a monomial -> rational table")
    names = [_expect(d, f"{path}.divisors", str, "a name") for d in divisors]
    extra_names = [_expect(e, f"{path}.extra_generators", str, "a name") for e in extras]
    table = {
        key: parse_rational(value, f"{path}.table[{key!r}]") for key, value in table_obj.items()
    }
    try:
        return BaseGeometry(dim, names, table, extra_names)
    except (ValueError, KeyError) as exc:
        raise ScenarioError(path, str(exc)) from None


def _parse_class(obj, path: str, shape: TowerShape) -> TowerClass:
    coeffs = {}
    for name, value in _expect(obj, path, dict, "a generator -> coefficient map").items():
        if name not in shape.base.gens:
            raise ScenarioError(f"{path}[{name!r}]", f"unknown base generator {name!r}")
        coeffs[name] = parse_rational(value, f"{path}[{name!r}]")
    return base_class(shape, coeffs)


def _parse_base_poly(obj, path: str, shape: TowerShape, degree: int) -> TowerClass:
    """Parse a {base monomial string: rational} map into a base-only class."""
    terms = {}
    for key, value in _expect(obj, path, dict, "a monomial -> rational map").items():
        try:
            exps = shape.base.parse_base_monomial(_expect(key, path, str, "a monomial string"))
        except (ValueError, KeyError) as exc:
            raise ScenarioError(f"{path}[{key!r}]", str(exc)) from None
        if sum(exps) != degree:
            raise ScenarioError(f"{path}[{key!r}]", f"expected a degree-{degree} monomial")
        mono = monomial(shape, base=exps)
        terms[mono] = terms.get(mono, Fraction(0)) + parse_rational(value, f"{path}[{key!r}]")
    return TowerClass(terms)


def _parse_bundle(obj: Mapping, path: str, shape: TowerShape, as_sub: bool = False):
    rank = _get(obj, path, "rank", int, "an integer")
    c1 = _parse_class(_get(obj, path, "c1", dict, "a coefficient map", default={}), f"{path}.c1", shape)
    filtrations = _get(obj, path, "filtrations", list, "a list of rank profiles")
    profs = []
    for u, prof in enumerate(filtrations):
        prof = _expect(prof, f"{path}.filtrations[{u}]", list, "a list of integers")
        profs.append(
            tuple(
                _expect(x, f"{path}.filtrations[{u}][{i}]", int, "an integer")
                for i, x in enumerate(prof)
            )
        )
    if len(profs) != len(shape.ranks) or any(
        len(p) != r for p, r in zip(profs, shape.ranks)
    ):
        raise ScenarioError(f"{path}.filtrations", f"expected profiles of lengths {shape.ranks}")
    ch2 = None
    if "ch2" in obj:
        ch2 = _parse_base_poly(obj["ch2"], f"{path}.ch2", shape, degree=2)
    try:
        if as_sub:
            name = _get(obj, path, "name", str, "a string", default="")
            return SubobjectData(rank=rank, c1=c1, filtrations=tuple(profs), ch2=ch2, name=name)
        return ParabolicBundle(rank=rank, c1=c1, filtrations=tuple(profs), ch2=ch2)
    except ValueError as exc:
        raise ScenarioError(path, str(exc)) from None


def _parse_weights(obj: Mapping, path: str) -> WeightSpec:
    lam_obj = _get(obj, path, "lambdas", list, "a list of weight sequences")
    mode = _get(obj, path, "last_weight_zero", bool, "a boolean", default=False)
    lams = []
    for u, seq in enumerate(lam_obj):
        seq = _expect(seq, f"{path}.lambdas[{u}]", list, "a list of rationals")
        lams.append(tuple(parse_rational(x, f"{path}.lambdas[{u}][{i}]") for i, x in enumerate(seq)))
    try:
        return WeightSpec(tuple(lams), last_weight_zero=mode)
    except ValueError as exc:
        raise ScenarioError(path, str(exc)) from None


def _parse_cone(obj: Mapping, path: str) -> ConeSpec:
    rows_obj = _get(obj, path, "rows", list, "a list of coefficient rows")
    labels = _get(obj, path, "labels", list, "a list of strings", default=[])
    rows = []
    for k, row in enumerate(rows_obj):
        row = _expect(row, f"{path}.rows[{k}]", list, "a list of rationals")
        rows.append(tuple(parse_rational(x, f"{path}.rows[{k}][{i}]") for i, x in enumerate(row)))
    try:
        return ConeSpec(tuple(rows), tuple(_expect(l, f"{path}.labels", str, "a string") for l in labels))
    except ValueError as exc:
        raise ScenarioError(path, str(exc)) from None


@dataclass(frozen=True)
class ScenarioFile:
    """Everything a scenario file can declare; sections are optional until a command needs them."""

    shape: TowerShape
    omega: tuple[Fraction, ...] | None = None
    bundle: ParabolicBundle | None = None
    weights: WeightSpec | None = None
    cone: ConeSpec | None = None
    divisor_classes: tuple[tuple[Fraction, ...], ...] | None = None
    subobjects: tuple[SubobjectData, ...] = ()
    options: dict | None = None

    def require(self, **sections) -> None:
        for name, needed in sections.items():
            if needed and getattr(self, name) in (None, ()):
                raise ScenarioError(name, f"this command needs the '{name}' section")

    def scenario(self) -> Scenario:
        self.require(bundle=True, weights=True, omega=True)
        eps = None
        if self.options and "epsilon" in self.options:
            eps = self.options["epsilon"]
        try:
            return Scenario(
                shape=self.shape,
                bundle=self.bundle,
                weights=self.weights,
                omega=self.omega,
                subobjects=self.subobjects,
                epsilon=eps,
            )
        except ValueError as exc:
            raise ScenarioError("subobjects", str(exc)) from None


def parse_scenario(data, max_rank: int = 8) -> ScenarioFile:
    """Validate a decoded scenario object into typed sections."""
    obj = _expect(data, "", dict, "a JSON object")
    base = _parse_base(_get(obj, "", "base", dict, "an object"), "base")
    tower = _get(obj, "", "tower", dict, "an object")
    ranks_obj = _get(tower, "tower", "ranks", list, "a list of integers")
    ranks = tuple(
        _expect(r, f"tower.ranks[{i}]", int, "an integer") for i, r in enumerate(ranks_obj)
    )
    for i, r in enumerate(ranks):
        if r > max_rank:
            raise ScenarioError(f"tower.ranks[{i}]", f"rank {r} exceeds the cap {max_rank}")
    try:
        shape = TowerShape(base, ranks)
    except ValueError as exc:
        raise ScenarioError("tower.ranks", str(exc)) from None

    omega = None
    if "omega" in obj:
        omega_cls = _parse_class(obj["omega"], "omega", shape)
        vec = [Fraction(0)] * (1 + len(base.divisors))
        for mono, coeff in omega_cls.terms.items():
            idx = next(i for i, e in enumerate(mono.base) if e)
            if idx > len(base.divisors):
                raise ScenarioError("omega", "omega must lie in the span of w and the divisors")
            vec[idx] = coeff
        omega = tuple(vec)

    bundle = weights = cone = None
    if "bundle" in obj:
        bundle = _parse_bundle(_expect(obj["bundle"], "bundle", dict, "an object"), "bundle", shape)
    if "weights" in obj:
        weights = _parse_weights(_expect(obj["weights"], "weights", dict, "an object"), "weights")
        if weights.ranks != shape.ranks:
            raise ScenarioError("weights.lambdas", f"weight ranks {weights.ranks} != tower ranks {shape.ranks}")
    if "kahler_cone" in obj:
        cone = _parse_cone(_expect(obj["kahler_cone"], "kahler_cone", dict, "an object"), "kahler_cone")
        if cone.rows and cone.dim != 1 + len(base.divisors):
            raise ScenarioError("kahler_cone.rows", f"rows must have length {1 + len(base.divisors)}")

    divisor_classes = None
    if "divisor_classes" in obj:
        dc = _expect(obj["divisor_classes"], "divisor_classes", dict, "an object")
        vecs = []
        for u, name in enumerate(base.divisors, start=1):
            if name in dc:
                row = _expect(dc[name], f"divisor_classes.{name}", list, "a list of rationals")
                if len(row) != 1 + len(base.divisors):
                    raise ScenarioError(
                        f"divisor_classes.{name}", f"expected {1 + len(base.divisors)} coefficients"
                    )
                vecs.append(tuple(parse_rational(x, f"divisor_classes.{name}[{i}]") for i, x in enumerate(row)))
            else:
                vecs.append(tuple(Fraction(1 if i == u else 0) for i in range(1 + len(base.divisors))))
        divisor_classes = tuple(vecs)

    subobjects = []
    for k, sub in enumerate(_get(obj, "", "subobjects", list, "a list", default=[])):
        sub = _expect(sub, f"subobjects[{k}]", dict, "an object")
        subobjects.append(_parse_bundle(sub, f"subobjects[{k}]", shape, as_sub=True))

    options = {}
    opt_obj = _get(obj, "", "options", dict, "an object", default={})
    for key in ("epsilon", "precision"):
        if key in opt_obj:
            options[key] = parse_rational(opt_obj[key], f"options.{key}")
    if "grid" in opt_obj:
        options["grid"] = _expect(opt_obj["grid"], "options.grid", int, "an integer")
    if "degree_window" in opt_obj:
        win = _expect(opt_obj["degree_window"], "options.degree_window", list, "a pair of integers")
        if len(win) != 2 or not all(isinstance(x, int) for x in win):
            raise ScenarioError("options.degree_window", "expected [lo, hi] integers")
        options["degree_window"] = (win[0], win[1])
    if "generate_curve_subobjects" in opt_obj:
        options["generate_curve_subobjects"] = _expect(
            opt_obj["generate_curve_subobjects"], "options.generate_curve_subobjects", bool, "a boolean"
        )
    if "subobject_ranks" in opt_obj:
        ranks_list = _expect(opt_obj["subobject_ranks"], "options.subobject_ranks", list, "a list of integers")
        options["subobject_ranks"] = tuple(
            _expect(r, f"options.subobject_ranks[{i}]", int, "an integer") for i, r in enumerate(ranks_list)
        )

    return ScenarioFile(
        shape=shape,
        omega=omega,
        bundle=bundle,
        weights=weights,
        cone=cone,
        divisor_classes=divisor_classes,
        subobjects=tuple(subobjects),
        options=options,
    )


def load_scenario_text(text: str, max_rank: int = 8) -> ScenarioFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return parse_scenario(data, max_rank=max_rank)


def parse_monomial(shape: TowerShape, text: str) -> TowerMonomial:
    """Parse whitespace-separated factor tokens like ``w^2 d1 t2`` or ``d1.2``.

    Level tokens without a component prefix are only valid on
    single-component towers.
    """
    base = [0] * len(shape.base.gens)
    dexp = [[0] * r for r in shape.ranks]
    texp = [[0] * r for r in shape.ranks]
    text = text.strip()
    tokens = [] if text in ("", "1") else text.split()
    for token in tokens:
        name, _, power = token.partition("^")
        try:
            k = int(power) if power else 1
        except ValueError:
            raise ScenarioError("monomial", f"bad exponent in token {token!r}") from None
        if k < 0:
            raise ScenarioError("monomial", f"negative exponent in token {token!r}")
        if name and name[0] in "dt" and name[1:] and name[1] in "0123456789":
            target = dexp if name[0] == "d" else texp
            body = name[1:]
            if "." in body:
                ustr, _, lstr = body.partition(".")
            else:
                if len(shape.ranks) != 1:
                    raise ScenarioError(
                        "monomial", f"token {token!r} needs a component: use {name[0]}<u>.<l>"
                    )
                ustr, lstr = "1", body
            try:
                u, l = int(ustr), int(lstr)
            except ValueError:
                raise ScenarioError("monomial", f"cannot parse token {token!r}") from None
            if not 1 <= u <= len(shape.ranks) or not 1 <= l <= shape.ranks[u - 1]:
                raise ScenarioError("monomial", f"token {token!r} is outside the tower")
            target[u - 1][l - 1] += k
        else:
            try:
                base[shape.base.gen_index(name)] += k
            except KeyError:
                raise ScenarioError("monomial", f"unknown generator in token {token!r}") from None
    return monomial(shape, base=base, dexp=dexp, texp=texp)


# -- reports ---------------------------------------------------------------

CONVENTIONS = (
    "first contraction ratio equals the first weight: beta[u,1] = lambda[u,1], "
    "so the partial products of ratios recover the weights",
    "mixed-pattern pairings carrying one extra exceptional factor on component v "
    "evaluate against the divisor class of v, with sign (-1)^l",
    "curve-case comparison class is w + d - alpha t, with unit coefficient on the fiber class",
    "multi-component cone membership is tested as the per-component inequality systems "
    "sharing the base class (a documented heuristic, not a closed description)",
    "the zero weight is admitted on the deepest stratum alongside the admissible family "
    "(unfiltered directions)",
)


def input_digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def verdict_json(v) -> dict[str, Any]:
    slope_field = (
        poly_map(v.witness_slope)
        if isinstance(v.witness_slope, EpsilonPolynomial)
        else (fraction_str(v.witness_slope) if v.witness_slope is not None else None)
    )
    parent_field = (
        poly_map(v.parent_slope)
        if isinstance(v.parent_slope, EpsilonPolynomial)
        else (fraction_str(v.parent_slope) if v.parent_slope is not None else None)
    )
    return {
        "verdict": v.verdict,
        "vacuous": v.vacuous,
        "witness": v.witness,
        "witness_name": v.witness_name,
        "witness_slope": slope_field,
        "parent_slope": parent_field,
    }


def make_report(command: str, digest: str | None, results: dict, args: dict | None = None) -> dict:
    return {
        "command": command,
        "args": args or {},
        "input_digest": digest,
        "results": results,
        "conventions": list(CONVENTIONS),
    }


def render_report(report: dict) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline, no floats."""
    _assert_exact(report, "report")
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _assert_exact(obj, path: str) -> None:
    if isinstance(obj, float):
        raise ValueError(f"float leaked into report at {path}")
    if isinstance(obj, dict):
        for k, v in obj.items():
            _assert_exact(v, f"{path}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _assert_exact(v, f"{path}[{i}]")
