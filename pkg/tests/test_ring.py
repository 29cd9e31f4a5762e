import random
from fractions import Fraction
from itertools import product

import pytest

from paratower.lattice import index_norm, sigma_weight
from paratower.ring import (
    BaseGeometry,
    TableGapError,
    TowerClass,
    TowerShape,
    base_class,
    closed_form_dIJ,
    closed_form_nc,
    closed_form_tdIJ,
    d_class,
    gen_class,
    monomial,
    pair_eval,
    reduce_monomial,
    t_class,
    unit_class,
)

F = Fraction


@pytest.fixture
def curve():
    geom = BaseGeometry(1, ("D1",), {"w": 1, "D1": 1})
    return TowerShape(geom, (1,))


@pytest.fixture
def surface():
    geom = BaseGeometry(2, ("D1",), {"w^2": 1, "w D1": 2, "D1^2": -3})
    return TowerShape(geom, (1,))


def test_curve_relations(curve):
    w = gen_class(curve, "w")
    d = d_class(curve, 1, 1)
    t = t_class(curve, 1, 1)
    assert pair_eval(curve, t * d) == 0
    assert pair_eval(curve, d * d) == 0
    assert pair_eval(curve, t * w) == 0
    assert pair_eval(curve, d * w) == 1
    assert pair_eval(curve, t * t) == -1


def test_degree_filter(curve):
    w = gen_class(curve, "w")
    assert pair_eval(curve, w) == 0
    assert pair_eval(curve, w * w) == 0
    assert pair_eval(curve, unit_class(curve)) == 0


def test_squared_fiber_class_is_zero_even_when_built_directly(curve):
    mono = monomial(curve, dexp=((2,),))
    assert reduce_monomial(curve, mono) == 0


def test_unsaturated_component_is_zero(surface):
    # right degree, but no d or t on the component
    mono = monomial(surface, base=(3, 0))
    assert reduce_monomial(surface, mono) == 0


def test_exceptional_powers_on_surface(surface):
    t = t_class(surface, 1, 1)
    w = gen_class(surface, "w")
    assert pair_eval(surface, t * t * w) == -2      # -<w D1>
    assert pair_eval(surface, t * t * t) == -3      # +<D1^2>
    d = d_class(surface, 1, 1)
    assert pair_eval(surface, d * w * w) == 1       # <w^2>
    assert pair_eval(surface, d * w * t) == 0       # same-level d and t


def test_two_level_descent_values():
    geom = BaseGeometry(1, ("D1",), {"w": 1, "D1": 5})
    shape = TowerShape(geom, (2,))
    w = gen_class(shape, "w")
    d1, d2 = d_class(shape, 1, 1), d_class(shape, 1, 2)
    t1, t2 = t_class(shape, 1, 1), t_class(shape, 1, 2)
    assert pair_eval(shape, w * d1 * d2) == 1
    # mixed pattern with l = 1: t1^2 d2
    assert pair_eval(shape, t1 * t1 * d2) == -5
    # mixed pattern with l = 2: t2^2 t1
    assert pair_eval(shape, t2 * t2 * t1) == 5
    # the square rewrites one level down: t2^3 consumes t1's slot itself
    assert pair_eval(shape, t2 * t2 * t2) == -5
    # pullback with no exceptional exponent at the entry level dies
    assert pair_eval(shape, t1 * d2 * w) == 0
    assert pair_eval(shape, t2 * t1 * w) == 0


def test_leftover_fiber_class_below_descent_dies():
    geom = BaseGeometry(1, ("D1",), {"w": 1, "D1": 5})
    shape = TowerShape(geom, (2,))
    mono = monomial(shape, dexp=((1, 0),), texp=((0, 2),))
    assert reduce_monomial(shape, mono) == 0


def test_linearity_random(curve):
    rng = random.Random(7)
    w = gen_class(curve, "w")
    t = t_class(curve, 1, 1)
    d = d_class(curve, 1, 1)
    for _ in range(50):
        a = F(rng.randint(-9, 9), rng.randint(1, 9))
        b = F(rng.randint(-9, 9), rng.randint(1, 9))
        c1 = w * d + t * t
        c2 = d * w
        lhs = pair_eval(curve, a * c1 + b * c2)
        assert lhs == a * pair_eval(curve, c1) + b * pair_eval(curve, c2)


def test_random_wrong_degree_monomials_vanish(surface):
    rng = random.Random(11)
    for _ in range(100):
        mono = monomial(
            surface,
            base=(rng.randint(0, 3), rng.randint(0, 2)),
            dexp=((rng.randint(0, 1),),),
            texp=((rng.randint(0, 3),),),
        )
        if mono.degree() != surface.pairing_dim:
            assert reduce_monomial(surface, mono) == 0


def test_table_gap_is_an_error():
    geom = BaseGeometry(1, ("D1",), {"w": 1})  # <D1> deliberately missing
    shape = TowerShape(geom, (1,))
    t = t_class(shape, 1, 1)
    with pytest.raises(TableGapError):
        pair_eval(shape, t * t)


def test_table_keys_must_have_base_degree():
    with pytest.raises(ValueError):
        BaseGeometry(2, ("D1",), {"w": 1})


def test_reserved_generator_names_rejected():
    with pytest.raises(ValueError):
        BaseGeometry(1, ("w",), {"w": 1})
    with pytest.raises(ValueError):
        BaseGeometry(1, ("d1",), {"w": 1, "d1": 1})


def test_multiplication_commutes(curve):
    w = gen_class(curve, "w")
    t = t_class(curve, 1, 1)
    d = d_class(curve, 1, 1)
    x = w + 2 * t - 3 * d
    y = t + d
    assert x * y == y * x


# -- closed forms against the engine ---------------------------------------


def _eta(shape, exps):
    return TowerClass({monomial(shape, base=exps): F(1)})


def _degree_monomials(n_gens, degree):
    if n_gens == 1:
        yield (degree,)
        return
    for first in range(degree + 1):
        for rest in _degree_monomials(n_gens - 1, degree - first):
            yield (first,) + rest


def _sweep_single(shape):
    n, r = shape.base.dim, shape.ranks[0]
    for I in product(range(3), repeat=r):
        for J in product(range(4), repeat=r):
            for extra in (None, *range(1, r + 1)):
                used = index_norm(I) + index_norm(J) + (1 if extra else 0)
                deg_eta = shape.pairing_dim - used
                if deg_eta < 0 or deg_eta > n:
                    continue
                for eta_exps in _degree_monomials(2, deg_eta):
                    yield I, J, extra, eta_exps


@pytest.mark.parametrize("n,r", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)])
def test_closed_forms_match_engine_exhaustively(n, r):
    tables = {1: {"w": 1, "D1": 3}, 2: {"w^2": 1, "w D1": 2, "D1^2": -3}}
    shape = TowerShape(BaseGeometry(n, ("D1",), tables[n]), (r,))
    covered = 0
    for I, J, extra, eta_exps in _sweep_single(shape):
        eta = _eta(shape, eta_exps)
        if extra is None:
            closed = closed_form_dIJ(shape, I, J, eta)
            texp = (J,)
        else:
            closed = closed_form_tdIJ(shape, extra, I, J, eta)
            J2 = list(J)
            J2[extra - 1] += 1
            texp = (tuple(J2),)
        if closed is None:
            continue
        covered += 1
        engine = reduce_monomial(shape, monomial(shape, base=eta_exps, dexp=(I,), texp=texp))
        assert engine == closed, (I, J, extra, eta_exps)
    assert covered > 0


def test_nonvanishing_implies_bounds_single_component():
    for n, r in [(1, 1), (1, 2), (1, 3)]:
        shape = TowerShape(BaseGeometry(1, ("D1",), {"w": 1, "D1": 3}), (r,))
        for I, J, extra, eta_exps in _sweep_single(shape):
            if extra is not None:
                continue
            value = reduce_monomial(shape, monomial(shape, base=eta_exps, dexp=(I,), texp=(J,)))
            if value:
                assert index_norm(I) + index_norm(J) >= r
                assert sigma_weight(I) + sigma_weight(J) >= (1 << r) - 1


def test_closed_form_dIJ_examples():
    shape = TowerShape(BaseGeometry(1, ("D1",), {"w": 1, "D1": 1}), (2,))
    w = _eta(shape, (1, 0))
    assert closed_form_dIJ(shape, (1, 1), (0, 0), w) == 1
    assert closed_form_dIJ(shape, (0, 1), (0, 0), w) == 0
    assert closed_form_dIJ(shape, (1, 1), (1, 0), w) is None


def test_closed_form_tdIJ_examples():
    shape1 = TowerShape(BaseGeometry(1, ("D1",), {"w": 1, "D1": 1}), (1,))
    one = _eta(shape1, (0, 0))
    assert closed_form_tdIJ(shape1, 1, (0,), (1,), one) == -1
    assert closed_form_tdIJ(shape1, 1, (1,), (0,), one) == 0
    shape2 = TowerShape(BaseGeometry(1, ("D1",), {"w": 1, "D1": 1}), (2,))
    eta = _eta(shape2, (0, 0))
    assert closed_form_tdIJ(shape2, 1, (0, 1), (1, 0), eta) == -1


def test_closed_form_nc_examples():
    geom = BaseGeometry(2, ("D1", "D2"), {
        "w^2": 1, "w D1": 2, "w D2": 3, "D1^2": -1, "D1 D2": 5, "D2^2": -2,
    })
    shape = TowerShape(geom, (1, 1))
    omega = TowerClass({monomial(shape, base=(1, 0, 0)): F(1)})
    # all-fiber pattern gives eta against the base
    assert closed_form_nc(shape, ((1,), (1,)), ((0,), (0,)), omega * omega) == 1
    # one extra exceptional factor on component 1
    assert closed_form_nc(shape, ((0,), (1,)), ((1,), (0,)), omega, extra=(1, 1)) == -2
    # failed bound
    assert closed_form_nc(shape, ((0,), (1,)), ((0,), (0,)), omega * omega) == 0


def test_closed_form_nc_matches_engine_exhaustively():
    geom = BaseGeometry(1, ("D1", "D2"), {"w": 1, "D1": 2, "D2": -3})
    for ranks in [(1, 1), (1, 2), (2, 2)]:
        shape = TowerShape(geom, ranks)
        r1, r2 = ranks
        for P1 in product(range(2), repeat=r1):
            for Q1 in product(range(3), repeat=r1):
                for P2 in product(range(2), repeat=r2):
                    for Q2 in product(range(3), repeat=r2):
                        extras = [None] + [
                            (u, j) for u in (1, 2) for j in range(1, ranks[u - 1] + 1)
                        ]
                        for extra in extras:
                            used = sum(map(index_norm, (P1, Q1, P2, Q2)))
                            used += 1 if extra else 0
                            deg_eta = shape.pairing_dim - used
                            if deg_eta < 0 or deg_eta > 1:
                                continue
                            for eta_exps in _degree_monomials(3, deg_eta):
                                eta = TowerClass({monomial(shape, base=eta_exps): F(1)})
                                closed = closed_form_nc(
                                    shape, (P1, P2), (Q1, Q2), eta, extra=extra
                                )
                                if closed is None:
                                    continue
                                texp = [list(Q1), list(Q2)]
                                if extra:
                                    texp[extra[0] - 1][extra[1] - 1] += 1
                                mono = monomial(
                                    shape,
                                    base=eta_exps,
                                    dexp=(P1, P2),
                                    texp=tuple(tuple(x) for x in texp),
                                )
                                assert reduce_monomial(shape, mono) == closed, (
                                    ranks, P1, Q1, P2, Q2, extra, eta_exps,
                                )


def test_closed_form_nc_spot_checks_rank3():
    geom = BaseGeometry(1, ("D1", "D2"), {"w": 1, "D1": 2, "D2": -3})
    shape = TowerShape(geom, (3, 3))
    w = TowerClass({monomial(shape, base=(1, 0, 0)): F(1)})
    one = TowerClass({monomial(shape, base=(0, 0, 0)): F(1)})
    ones, zeros = (1, 1, 1), (0, 0, 0)
    assert closed_form_nc(shape, (ones, ones), (zeros, zeros), w) == 1
    engine = reduce_monomial(
        shape, monomial(shape, base=(1, 0, 0), dexp=(ones, ones), texp=(zeros, zeros))
    )
    assert engine == 1
    # mixed pattern on component 2 with l = 2
    P = (ones, (0, 0, 1))
    Q = (zeros, (1, 1, 0))
    closed = closed_form_nc(shape, P, Q, one, extra=(2, 2))
    assert closed == -3  # (-1)^2 <D2>
    mono = monomial(shape, base=(0, 0, 0), dexp=P, texp=((0, 0, 0), (1, 2, 0)))
    assert reduce_monomial(shape, mono) == closed


def test_pair_eval_accepts_scalar_coefficient_classes(curve):
    d = d_class(curve, 1, 1)
    w = gen_class(curve, "w")
    cls = F(2, 3) * (d * w)
    assert pair_eval(curve, cls) == F(2, 3)


def test_trace_records_rules(curve):
    trace = []
    t = t_class(curve, 1, 1)
    value = pair_eval(curve, t * t, trace)
    assert value == -1
    assert any("exceptional descent" in line for line in trace)
    assert any("table" in line for line in trace)
