import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from albert_theta.acceptance import random_order_element
from albert_theta.enumerate import sigma3
from albert_theta.octonion import (
    COXETER_GENERATORS,
    Octonion,
    coxeter_order,
    norm_shell,
    norm_shell_doubled,
    order_contains,
    parse_octonion,
)

H = Fraction(1, 2)


def e(i):
    return Octonion.unit(i)


def test_fano_products():
    assert e(1) * e(2) == e(4)
    assert e(2) * e(1) == -e(4)
    assert e(3) * e(3) == -e(0)


def test_generator_norm():
    h1 = Octonion((H, H, H, 0, H, 0, 0, 0))
    assert h1.norm() == 1
    assert order_contains(h1)


def test_half_unit_not_in_order():
    assert not order_contains(Octonion((H, H, 0, 0, 0, 0, 0, 0)))


def test_order_determinants():
    O = coxeter_order()
    assert round(np.linalg.det(O.gram.astype(float))) == 1
    assert abs(O.basis_det) == 16
    assert np.all(np.diag(O.gram) % 2 == 0)


def test_generators_in_order_and_units():
    for g in COXETER_GENERATORS:
        assert order_contains(g)
        assert g.norm() == 1


def test_non_associative():
    assert (e(1) * e(2)) * e(3) != e(1) * (e(2) * e(3))


@pytest.mark.parametrize("m", range(1, 7))
def test_shell_sizes(m):
    assert len(norm_shell_doubled(m)) == 240 * sigma3(m)


@pytest.mark.parametrize("m", [1, 2])
def test_shell_brute_force(m):
    # every element of norm <= 2 has doubled coordinates in [-2, 2]
    box = np.array(list(itertools.product(range(-2, 3), repeat=8)), dtype=np.int64)
    cand = box[(box * box).sum(axis=1) == 4 * m]
    inside = coxeter_order().contains_doubled(cand)
    want = {tuple(r) for r in cand[inside]}
    assert {tuple(r) for r in norm_shell_doubled(m)} == want


def test_norm_shell_elements():
    roots = norm_shell(1)
    assert len(roots) == 240
    assert all(x.norm() == 1 and order_contains(x) for x in roots)


def test_laws_on_random_order_elements():
    rng = random.Random(7)
    for _ in range(1000):
        x, y, z = (random_order_element(rng) for _ in range(3))
        assert (x * y).norm() == x.norm() * y.norm()
        assert x * (x * y) == (x * x) * y
        assert (y * x) * x == y * (x * x)
        assert ((x * y) * z).trace() == (x * (y * z)).trace()
        assert (x * y).conj() == y.conj() * x.conj()
        assert order_contains(x * y)


def test_parse_and_json():
    x = parse_octonion("1/2,0,0,0,0,3,0,-1")
    assert x == Octonion((H, 0, 0, 0, 0, 3, 0, -1))
    assert Octonion.from_json(x.to_json()) == x
