import random
from fractions import Fraction

import numpy as np
import pytest
import sympy

from albert_theta.acceptance import random_lattice_element
from albert_theta.albert import AlbertElement, adjoint, det, form
from albert_theta.enumerate import enumerate_rank1_general
from albert_theta.lattice import (
    NotInLatticeError,
    adjoint_vanishes_r2,
    content,
    lattice_adjoint,
    lattice_cross,
    lattice_form,
    lattice_trace,
    lattice_trace_and_form,
    make_lattice,
    standard_adjoint4_r2,
    trace_r2,
)
from albert_theta.octonion import Octonion

JZ, JE = make_lattice("JZ"), make_lattice("JE")
E1, E2 = AlbertElement.idempotent(1), AlbertElement.idempotent(2)
I = AlbertElement.identity()


def test_units():
    assert JZ.unit == I
    h = Fraction(1, 2)
    bb = Octonion((-h,) + (-h,) * 7)
    assert JE.unit == AlbertElement(2, 2, 2, bb, bb, bb)


@pytest.mark.parametrize("L", [JZ, JE], ids=["JZ", "JE"])
def test_unit_fixed_and_trace_three(L):
    assert lattice_adjoint(L, L.unit) == L.unit
    assert lattice_trace(L, L.unit) == 3


def test_standard_adjoint_example():
    assert lattice_adjoint(JZ, E1).is_zero()


@pytest.mark.parametrize("L", [JZ, JE], ids=["JZ", "JE"])
def test_gram_unimodular_positive_even_diagonal_free(L):
    G = sympy.Matrix(L.gram.tolist())
    assert G.det() == 1
    assert np.all(np.linalg.eigvalsh(L.gram.astype(float)) > 0)
    assert np.array_equal(L.gram, L.gram.T)


def test_gram_entries_match_pairing():
    for L in (JZ, JE):
        B = L.basis_elements()
        for i in range(0, 27, 4):
            for j in range(0, 27, 5):
                assert L.gram[i, j] == lattice_form(L, B[i], B[j])


@pytest.mark.parametrize("L", [JZ, JE], ids=["JZ", "JE"])
def test_two_routes_to_the_trace_form(L):
    rng = random.Random(23)
    for _ in range(30):
        A, B = random_lattice_element(rng, L), random_lattice_element(rng, L)
        tr, f = lattice_trace_and_form(L, A, B)
        assert tr == lattice_trace(L, A)
        assert f == lattice_form(L, A, B)
        assert f == L.coordinates(A) @ L.gram @ L.coordinates(B)


@pytest.mark.parametrize("L", [JZ, JE], ids=["JZ", "JE"])
def test_closure_and_integrality(L):
    rng = random.Random(29)
    for _ in range(100):
        A, B = random_lattice_element(rng, L), random_lattice_element(rng, L)
        assert L.contains(lattice_adjoint(L, A))
        assert L.contains(lattice_cross(L, A, B))
        assert Fraction(det(A)).denominator == 1
        assert Fraction(lattice_trace(L, A)).denominator == 1
        assert lattice_adjoint(L, lattice_adjoint(L, A)) == A.scale(det(A))


def test_isotope_adjoint_vectorized():
    rng = random.Random(31)
    for L in (JZ, JE):
        Ts = [random_lattice_element(rng, L) for _ in range(20)]
        R2 = np.array([T.doubled_ref() for T in Ts])
        S4 = standard_adjoint4_r2(R2)
        for T, row in zip(Ts, S4):
            assert AlbertElement.from_ref([Fraction(int(v), 4) for v in row]) == adjoint(T)
        want = [int(lattice_trace(L, T)) for T in Ts]
        assert list(trace_r2(L, R2)) == want
        assert not adjoint_vanishes_r2(L, R2).any()


def test_not_in_lattice():
    X = AlbertElement(Fraction(1, 2), 0, 0, Octonion.zero(), Octonion.zero(), Octonion.zero())
    assert not JZ.contains(X)
    with pytest.raises(NotInLatticeError):
        JZ.coordinates(X)


def test_content():
    assert content(JZ, E1.scale(2)) == 2
    z = Octonion.unit(0)
    assert content(JZ, E1 + E2 + AlbertElement(0, 0, 0, Octonion.zero(), Octonion.zero(), z)) == 1
    rng = random.Random(37)
    for _ in range(50):
        T = random_lattice_element(rng)
        if T.is_zero():
            continue
        c = rng.randint(1, 9)
        assert content(JZ, T.scale(c)) == c * content(JZ, T)


def test_lattices_are_inequivalent():
    assert len(enumerate_rank1_general(JZ, 1)) == 3
    assert len(enumerate_rank1_general(JE, 1)) == 0
    assert not np.any(np.diag(JE.gram) == 1)
    assert np.any(np.diag(JZ.gram) == 1)


def test_json():
    d = JE.to_json()
    assert d["name"] == "JE"
    assert len(d["gram"]) == 27
