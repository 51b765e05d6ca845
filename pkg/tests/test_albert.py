import random
from fractions import Fraction

import pytest

from albert_theta.acceptance import random_lattice_element
from albert_theta.albert import (
    AlbertElement,
    adjoint,
    bilinear_trace_cross,
    cross,
    det,
    det_expansion,
    det_polarize,
    form,
    is_psd,
    jordan_product,
    rank,
    trace,
)
from albert_theta.arith import QuadExt
from albert_theta.octonion import Octonion

E1, E2, E3 = (AlbertElement.idempotent(i) for i in (1, 2, 3))
I = AlbertElement.identity()
O0 = Octonion.zero()


def test_identity():
    assert det(I) == 1
    assert adjoint(I) == I
    assert trace(I) == 3


def test_idempotents():
    assert rank(E1) == 1
    assert adjoint(E1).is_zero()
    assert form(E1, E2) == 0
    assert form(E1, E1) == 1


def test_off_diagonal():
    e1 = Octonion.unit(1)
    X = AlbertElement(0, 0, 0, e1, O0, O0)
    assert det(X) == 0
    assert adjoint(X) == AlbertElement(-1, 0, 0, O0, O0, O0)


def test_cross_of_idempotents():
    assert cross(E2, E3) == E1


def test_bilinear_trace_cross():
    f, t, c = bilinear_trace_cross(E1, E2)
    assert (f, t, c) == (0, 1, E3)


def test_rank_and_psd():
    assert rank(AlbertElement.diag(1, 1, 0)) == 2
    assert is_psd(AlbertElement.diag(1, 1, 0))
    assert not is_psd(AlbertElement.diag(1, -1, 0))
    assert rank(AlbertElement.zero()) == 0


def test_psd_rejects_irrational():
    w = QuadExt.sqrt(-2)
    with pytest.raises(ValueError):
        is_psd(AlbertElement(w, 0, 0, O0, O0, O0))


def test_laws_on_random_elements():
    rng = random.Random(11)
    for _ in range(300):
        A, B = random_lattice_element(rng), random_lattice_element(rng)
        assert adjoint(adjoint(A)) == A.scale(det(A))
        assert form(jordan_product(A, B), I) == form(A, B)
        assert det_expansion(A, B) == [det(A), form(adjoint(A), B), form(adjoint(B), A), det(B)]
        D1, _ = det_polarize(A, A, A)
        assert D1 == 3 * det(A)
        assert cross(A, A) == adjoint(A).scale(2)


def test_det_scaling():
    rng = random.Random(3)
    A = random_lattice_element(rng)
    assert det(A.scale(Fraction(3, 2))) == Fraction(27, 8) * det(A)


def test_json_round_trip():
    rng = random.Random(5)
    A = random_lattice_element(rng)
    assert AlbertElement.from_json(A.to_json()) == A
    assert AlbertElement.from_doubled_ref(A.doubled_ref()) == A


def test_isotope_point():
    h = Fraction(1, 2)
    beta = Octonion((-h,) + (h,) * 7)
    E = AlbertElement(2, 2, 2, beta, beta, beta)
    assert det(E) == 1
    assert adjoint(E) == AlbertElement(2, 2, 2, beta.conj(), beta.conj(), beta.conj())
    assert form(E1, E) == 2
    assert form(I, I) == 3


def test_jordan_product_examples():
    rng = random.Random(13)
    A = random_lattice_element(rng)
    assert jordan_product(I, A) == A
    assert jordan_product(E1, E2).is_zero()


def test_psd_with_off_diagonal_unit():
    z = Octonion.unit(3)
    assert is_psd(AlbertElement(1, 1, 0, O0, O0, z))
    assert is_psd(I)


def test_det_examples():
    assert det(E1 + E2) == 0
    D1, _ = det_polarize(E1, E1, I)
    assert D1 == 1


def test_polarized_form():
    rng = random.Random(17)
    for _ in range(50):
        A, B = random_lattice_element(rng), random_lattice_element(rng)
        a1, _ = det_polarize(A, A, I)
        b1, _ = det_polarize(B, B, I)
        _, d2 = det_polarize(A, B, I)
        assert a1 * b1 - d2 == form(A, B)
