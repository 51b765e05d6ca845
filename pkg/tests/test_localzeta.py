from decimal import Decimal, localcontext
from fractions import Fraction

import pytest

from albert_theta.arith import QuadExt
from albert_theta.localzeta import (
    ConvergenceError,
    SatakeParam,
    bracket,
    half_power,
    inner_integral,
    tail_bound,
    zeta_closed,
    zeta_row,
    zeta_truncated,
)


def test_inner_integral():
    assert inner_integral(0, 5) == 1 - Fraction(1, 625)
    assert inner_integral(1, 2) == Fraction(135, 128)
    assert inner_integral(0, 3) == Fraction(80, 81)


def test_bracket_limits():
    assert bracket(Fraction(1), 4) == 5
    assert bracket(Fraction(-1), 3) == -4
    assert bracket(Fraction(2), 1) == 2 + Fraction(1, 2)
    for n in range(6):
        assert bracket(Fraction(3), n) == bracket(Fraction(1, 3), n)


def test_single_term():
    s = SatakeParam(Fraction(1), 2)
    assert zeta_truncated(s, 0) == QuadExt(Fraction(15, 16), 0, 2)


def test_closed_form_value():
    s = SatakeParam(Fraction(1), 2)
    r = half_power(2, -5)
    r11 = half_power(2, -11)
    want = Fraction(15, 16) * Fraction(255, 256) / ((1 - r) ** 2 * (1 - r11) ** 2)
    assert zeta_closed(s) == want


@pytest.mark.parametrize("alpha", [Fraction(1, 2), Fraction(3), Fraction(-1), Fraction(5, 7)])
def test_symmetry_in_alpha(alpha):
    for p in (2, 3):
        assert zeta_closed(SatakeParam(alpha, p)) == zeta_closed(SatakeParam(1 / alpha, p))
        assert zeta_truncated(SatakeParam(alpha, p), 6) == zeta_truncated(SatakeParam(1 / alpha, p), 6)


@pytest.mark.parametrize("alpha,p", [(Fraction(1, 2), 3), (Fraction(3), 5), (Fraction(1), 5)])
def test_truncation_converges(alpha, p):
    row = zeta_row(alpha, p, 60)
    assert row.within_bound


@pytest.mark.parametrize("alpha,p", [(Fraction(1), 2), (Fraction(3), 3), (Fraction(1, 2), 5)])
def test_tails_decay_geometrically(alpha, p):
    s = SatakeParam(alpha, p)
    c = zeta_closed(s)
    with localcontext() as ctx:
        ctx.prec = 80
        t40 = abs((zeta_truncated(s, 40) - c).to_decimal(80))
        t41 = abs((zeta_truncated(s, 41) - c).to_decimal(80))
        rate = half_power(p, -5).to_decimal(80) * Decimal(max(abs(alpha), 1 / abs(alpha)).numerator) \
            / Decimal(max(abs(alpha), 1 / abs(alpha)).denominator)
        assert abs(t41 / t40 / rate - 1) < Decimal("0.05")


def test_bound_shape():
    s = SatakeParam(Fraction(2), 3)
    assert tail_bound(s, 2) == half_power(3, -10) * 40


def test_parameter_validation():
    with pytest.raises(ValueError):
        SatakeParam(Fraction(0), 2)
    with pytest.raises(ValueError):
        SatakeParam(Fraction(1), 4)
    with pytest.raises(ConvergenceError):
        SatakeParam(Fraction(6), 2)
    with pytest.raises(ConvergenceError):
        SatakeParam(Fraction(1, 6), 2)


def test_row_dict():
    d = zeta_row(Fraction(3), 5, 60).as_dict(20)
    assert d["within_bound"] is True
    assert set(d) >= {"alpha", "p", "N", "truncated", "closed", "abs_difference", "tail_bound", "ratio"}
