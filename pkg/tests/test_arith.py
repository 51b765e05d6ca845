import random
from fractions import Fraction

import pytest

from albert_theta.arith import (
    FieldMismatchError,
    QuadExt,
    quad_arith,
    rational_from_str,
    rational_to_str,
    squarefree_decomposition,
)


def rand_q(rng, d):
    def r():
        return Fraction(rng.randint(-50, 50), rng.randint(1, 20))

    return QuadExt(r(), r(), d)


def test_defining_relation():
    w = QuadExt.sqrt(-2)
    assert quad_arith(w, w, "mul") == -2


def test_norm_form():
    w = QuadExt.sqrt(-2)
    assert quad_arith(1 + w, 1 - w, "mul") == 3


def test_rationalize_denominator():
    q = quad_arith(QuadExt(1, 0, 5), QuadExt.sqrt(5), "div")
    assert (q.base, q.surd) == (0, Fraction(1, 5))


def test_mismatched_fields_rejected():
    with pytest.raises(FieldMismatchError):
        QuadExt.sqrt(-1) + QuadExt.sqrt(-2)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        quad_arith(QuadExt(1, 0, 3), QuadExt(0, 0, 3), "div")


@pytest.mark.parametrize("d", [0, 1, 4, -8, 12])
def test_bad_d(d):
    with pytest.raises(ValueError):
        QuadExt(1, 1, d)


@pytest.mark.parametrize("d", [-1, -2, -7, 2, 5])
def test_field_laws(d):
    rng = random.Random(d)
    for _ in range(1000):
        x, y, z = rand_q(rng, d), rand_q(rng, d), rand_q(rng, d)
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        if y:
            assert (x * y) / y == x
        assert (x * y).conj() == x.conj() * y.conj()
        assert x.norm() == (x * x.conj()).base


def test_exact_sign():
    r2 = QuadExt.sqrt(2)
    assert (r2 - Fraction(141, 100)).sign() == 1
    assert (r2 - Fraction(142, 100)).sign() == -1
    assert (3 - 2 * r2).sign() == 1
    assert QuadExt(0, 0, 2).sign() == 0


def test_serialization_round_trip():
    x = QuadExt(Fraction(-3, 7), Fraction(5, 2), -11)
    assert x.to_json() == {"base": "-3/7", "surd": "5/2", "d": -11}
    assert QuadExt.from_json(x.to_json()) == x
    assert rational_to_str(Fraction(4, 2)) == "2/1"
    assert rational_from_str("6/4") == Fraction(3, 2)


def test_squarefree_decomposition():
    assert squarefree_decomposition(-72) == (-2, 6)
    assert squarefree_decomposition(45) == (5, 3)
    assert squarefree_decomposition(1) == (1, 1)
