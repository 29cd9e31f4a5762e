from fractions import Fraction

import pytest

from paratower.epsilon import (
    EpsilonPolynomial,
    NoPositiveRegion,
    as_fraction,
    positive_prefix,
    smallest_positive_root,
)

F = Fraction
P = EpsilonPolynomial


def test_arithmetic_and_zero_normalization():
    p = P({0: 1, 2: F(1, 2)})
    q = P({2: F(-1, 2), 1: 3})
    assert (p + q).to_map() == {0: F(1), 1: F(3)}
    assert (p - p).to_map() == {}
    assert not (p - p)
    assert (p * q).coeff(3) == F(3, 2)
    assert (2 * p).coeff(2) == F(1)
    assert (p / 2).coeff(0) == F(1, 2)


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(TypeError):
        P({1: 0.5})


def test_evaluate_and_lowest():
    p = P({1: F(7, 4), 2: F(-1, 8)})
    assert p.evaluate(F(1, 10)) == F(7, 40) - F(1, 800)
    assert p.lowest() == (1, F(7, 4))
    assert p.sign_near_zero() == 1
    assert (-p).sign_near_zero() == -1
    assert P().sign_near_zero() == 0


def test_power():
    p = P({0: 1, 1: 1})
    assert (p**3).to_map() == {0: F(1), 1: F(3), 2: F(3), 3: F(1)}


def test_smallest_positive_root_simple():
    # (1 - x)(2 - x) = 2 - 3x + x^2: smallest positive root 1
    p = P({0: 2, 1: -3, 2: 1})
    br = smallest_positive_root(p, F(1, 1000), F(1 << 10))
    assert br.lo < 1 <= br.hi
    assert br.hi - br.lo <= F(1, 1000)


def test_smallest_positive_root_double_root():
    # (x - 1)^2 has no sign change; Sturm still isolates it
    p = P({0: 1, 1: -2, 2: 1})
    br = smallest_positive_root(p, F(1, 512), F(8))
    assert br.lo < 1 <= br.hi


def test_smallest_positive_root_none():
    assert smallest_positive_root(P({0: 1, 2: 1}), F(1, 64), F(1 << 10)) is None
    # pure epsilon power has no positive root
    assert smallest_positive_root(P({3: 5}), F(1, 64), F(1 << 10)) is None


def test_smallest_positive_root_ignores_negative_roots():
    # (x + 1)(x - 3): negative root skipped
    p = P({0: -3, 1: -2, 2: 1})
    br = smallest_positive_root(p, F(1, 128), F(1 << 10))
    assert br.lo < 3 <= br.hi


def test_positive_prefix_binding_and_bound():
    polys = [
        ("first", P({0: 1, 1: -F(1, 2)})),        # root at 2
        ("second", P({0: 1, 1: -F(1, 2), 2: -F(1, 2)})),  # root at 1
        ("never", P({1: 1})),                      # positive for all eps > 0
    ]
    out = positive_prefix(polys, F(1, 1000))
    assert not out.unbounded
    assert out.sup_lo <= 1 <= out.sup_hi
    assert out.sup_hi - out.sup_lo <= F(1, 1000)
    assert "second" in out.binding and "first" not in out.binding
    assert 1 - out.epsilon0 <= F(1, 1000)


def test_positive_prefix_unbounded():
    out = positive_prefix([("up", P({0: 1, 1: 1}))], F(1, 64), cap=F(256))
    assert out.unbounded
    assert out.epsilon0 == 256
    assert out.sup_hi is None


def test_positive_prefix_rejects_negative_near_zero():
    with pytest.raises(NoPositiveRegion):
        positive_prefix([("bad", P({0: -1, 1: 5}))], F(1, 64))
    with pytest.raises(NoPositiveRegion):
        positive_prefix([("flat-negative", P({2: -1}))], F(1, 64))


def test_prefix_certificate_holds_on_grid():
    polys = [("q", P({0: 3, 1: -4, 3: -1}))]
    out = positive_prefix(polys, F(1, 4096))
    for k in range(1, 101):
        x = out.epsilon0 * k / 100
        assert polys[0][1].evaluate(x) > 0
