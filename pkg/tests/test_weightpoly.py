from fractions import Fraction

import numpy as np
import pytest

from albert_theta.acceptance import je_points, jz_points
from albert_theta.albert import AlbertElement, adjoint, jordan_product, rank
from albert_theta.arith import QuadExt
from albert_theta.enumerate import get_shell
from albert_theta.lattice import lattice_cross, lattice_form, make_lattice
from albert_theta.modforms import delta, eisenstein
from albert_theta.octonion import Octonion
from albert_theta.weightpoly import (
    BudgetExceededError,
    DegenerateSolutionError,
    NotCollinearError,
    SymTensor,
    WeightPolynomial,
    XElement,
    builtin_B,
    evaluate,
    leading_term_identity,
    scriptP,
    search_xelements,
    solve_collinear,
    sym_pairing,
    theta_from_shells,
    theta_series,
    third_point_on_line,
)

JZ, JE = make_lattice("JZ"), make_lattice("JE")
E1, E2, E3 = (AlbertElement.idempotent(i) for i in (1, 2, 3))
I = AlbertElement.identity()
O0 = Octonion.zero()
U = AlbertElement(0, 1, 1, Octonion.unit(0), O0, O0)


@pytest.fixture(scope="module")
def B():
    return builtin_B()


@pytest.fixture(scope="module")
def Q2(B):
    return WeightPolynomial(2, B)


@pytest.fixture(scope="module")
def jz_x():
    return search_xelements(JZ, jz_points(2), want=2)


@pytest.fixture(scope="module")
def je_x(shell_cache):
    return search_xelements(JE, je_points(shell_cache), want=2)


def test_builtin_B(B):
    A = B.A
    assert A.trace() == 0
    assert adjoint(A).is_zero()
    assert A.y.norm() == -2
    assert rank(A) == 1
    assert jordan_product(A, A).is_zero()
    assert B.d == 2


def test_xelement_validation():
    with pytest.raises(ValueError):
        XElement(E1, "JZ", 1)
    with pytest.raises(ValueError):
        XElement(AlbertElement.zero(), "JZ", 1)


def test_third_point_on_line():
    P0 = third_point_on_line(JZ, E2, E3, E1, U)
    assert rank(P0) == 1
    assert lattice_form(JZ, P0, E1) == 0
    assert lattice_form(JZ, P0, lattice_cross(JZ, E2, E3)) == 0


def test_third_point_degenerate():
    with pytest.raises(DegenerateSolutionError):
        third_point_on_line(JZ, E2, E3, E1, E1.scale(2))


def test_solve_collinear_example():
    x = solve_collinear(JZ, E2, E3, U)
    i = QuadExt.sqrt(-1)
    one = QuadExt(1, 0, -1)
    assert x.d == 1
    assert x.A == AlbertElement(0 * one, i, -i, Octonion.unit(0, one), O0, O0)
    assert x.A.trace() == 0


def test_solve_collinear_rejects_non_collinear():
    with pytest.raises(NotCollinearError):
        solve_collinear(JZ, E1, E2, U)


def test_evaluate(Q2):
    assert evaluate(Q2, E1) == 4
    assert evaluate(Q2, I) == 0
    assert evaluate(Q2, E2) == 1
    assert evaluate(WeightPolynomial.constant(), E1) == 1


def test_constant_theta():
    b, s = theta_series(JZ, WeightPolynomial.constant(), 2, "elkies_gross")
    assert b.coeffs == (1, 720, 179280)
    assert s.is_zero()
    b, _ = theta_series(JZ, WeightPolynomial.constant(), 2, "plain")
    assert b.coeffs == (0, 3, 747)


def test_degree_one_vanishes(B, jz_x):
    for x in [B] + jz_x:
        b, s = theta_series(JZ, WeightPolynomial(1, x), 4)
        assert b.is_zero() and s.is_zero()


def test_degree_two(Q2):
    b, s = theta_series(JZ, Q2, 2)
    assert b.coeffs == (0, 6, 1296)
    assert s.is_zero()
    assert b.weight == 16


def test_first_coefficient_is_sum_over_idempotents(B):
    for n in (2, 4, 6):
        P = WeightPolynomial(n, B)
        b, _ = theta_series(JZ, P, 1)
        assert b.coeffs[1] == sum(evaluate(P, E) for E in (E1, E2, E3))
        assert b.coeffs[1] == 2 ** n + 2 * (-1) ** n


def test_block_engine_matches_elementwise_sum(B, jz_x):
    shells = [get_shell("JZ", n) for n in (1, 2)]
    for x in [B] + jz_x:
        for n in (1, 2, 3):
            P = WeightPolynomial(n, x)
            assert theta_series(JZ, P, 2) == theta_from_shells(shells, P, 2)


@pytest.mark.slow
def test_block_engine_matches_elementwise_sum_trace_three(B, jz_x):
    # trace 3 is the first shell with unit-pivot factored blocks
    shells = [get_shell("JZ", 3)]
    for x, n in ((B, 3), (jz_x[0], 2)):
        P = WeightPolynomial(n, x)
        want_b, want_s = theta_from_shells(shells, P, 3)
        b, s = theta_series(JZ, P, 3)
        assert (b[3], s[3]) == (want_b[3], want_s[3])


def test_isotope_matches_elementwise_sum(je_x, shell_cache):
    assert je_x
    shells = [get_shell("JE", n, shell_cache) for n in (1, 2)]
    for x in je_x:
        for n in (2, 4):
            P = WeightPolynomial(n, x)
            assert theta_series(JE, P, 2, cache=shell_cache) == theta_from_shells(shells, P, 2)


def test_isotope_budget():
    with pytest.raises(BudgetExceededError):
        theta_series(JE, WeightPolynomial.constant(), 3)


def test_homogeneity(B):
    x3 = XElement(B.A.scale(3), "JZ", 2, "scaled")
    for n in (2, 3):
        b, s = theta_series(JZ, WeightPolynomial(n, B), 3)
        b3, s3 = theta_series(JZ, WeightPolynomial(n, x3), 3)
        assert b3 == b.scale(3 ** n) and s3 == s.scale(3 ** n)


def test_degree_two_is_cusp_multiple(Q2):
    b, _ = theta_series(JZ, Q2, 4)
    assert b == (eisenstein(4, 4) * delta(4)).scale(6)


def test_lattice_mismatch(je_x):
    with pytest.raises(ValueError):
        theta_series(JZ, WeightPolynomial(2, je_x[0]), 2)


def test_xelement_search_provenance(jz_x, je_x):
    for x in jz_x + je_x:
        assert x.provenance
        assert XElement.from_json(x.to_json()).A == x.A


def test_sym_pairing(Q2, B):
    T = E1 + E2.scale(3)
    assert sym_pairing(SymTensor.elementary([T, T]), Q2) == evaluate(Q2, T)
    vw = SymTensor.elementary([E1, U]) - SymTensor.elementary([U, E1])
    assert sym_pairing(vw, Q2) == 0
    assert sym_pairing(SymTensor.elementary([E1, E2]), Q2) == -2
    with pytest.raises(ValueError):
        sym_pairing(SymTensor.elementary([E1]), Q2)


def test_scriptP_low_degrees(B):
    assert scriptP(0, []) == SymTensor.scalar(1)
    for A in (E1, U, E2.scale(3) + U):
        want = SymTensor.elementary([A]) + SymTensor.scalar(4 * A.trace())
        assert scriptP(1, [A]) == want


def test_leading_term_identity(B):
    for n in (1, 2):
        lhs, rhs = leading_term_identity(n, B.A)
        assert lhs == rhs
    A = B.A
    assert scriptP(1, [A]) == SymTensor.elementary([A])
