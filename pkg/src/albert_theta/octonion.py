"""Cayley's definite octonions over an exact coefficient ring, and Coxeter's integral order.

Basis e0 = 1, e1..e7 with e_i e_j = e_k cyclically along the oriented lines
of FANO_LINES.  Coordinates may be ints, Fractions, QuadExt, or any ring-like
scalar supporting + - *.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from .arith import rational_from_str, scalar_from_json, scalar_to_json
from .shortvec import short_vectors, sort_rows

FANO_LINES = ((1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3))


def _build_table():
    sign = [[0] * 8 for _ in range(8)]
    index = [[0] * 8 for _ in range(8)]
    for i in range(8):
        sign[0][i], index[0][i] = 1, i
        sign[i][0], index[i][0] = 1, i
    for i in range(1, 8):
        sign[i][i], index[i][i] = -1, 0
    for a, b, c in FANO_LINES:
        for p, q, r in ((a, b, c), (b, c, a), (c, a, b)):
            sign[p][q], index[p][q] = 1, r
            sign[q][p], index[q][p] = -1, r
    return tuple(map(tuple, sign)), tuple(map(tuple, index))


MUL_SIGN, MUL_INDEX = _build_table()

# e_i e_j = sum_k MUL_TENSOR[i, j, k] e_k
MUL_TENSOR = np.zeros((8, 8, 8), dtype=np.int64)
for _i in range(8):
    for _j in range(8):
        MUL_TENSOR[_i, _j, MUL_INDEX[_i][_j]] = MUL_SIGN[_i][_j]

CONJ_SIGN = np.array([1, -1, -1, -1, -1, -1, -1, -1], dtype=np.int64)


@dataclass(frozen=True)
class Octonion:
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 8:
            raise ValueError("an octonion has 8 coordinates")

    @classmethod
    def zero(cls, one=0) -> "Octonion":
        return cls((one * 0,) * 8)

    @classmethod
    def unit(cls, i: int, one=1) -> "Octonion":
        c = [one * 0] * 8
        c[i] = one
        return cls(tuple(c))

    @classmethod
    def scalar(cls, s) -> "Octonion":
        return cls((s,) + (s * 0,) * 7)

    @classmethod
    def from_doubled(cls, v) -> "Octonion":
        return cls(tuple(Fraction(int(t), 2) for t in v))

    def __add__(self, other: "Octonion") -> "Octonion":
        return Octonion(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Octonion") -> "Octonion":
        return Octonion(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Octonion":
        return Octonion(tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return oct_mul(self, other)
        return Octonion(tuple(a * other for a in self.coords))

    def __rmul__(self, other):
        return Octonion(tuple(other * a for a in self.coords))

    def conj(self) -> "Octonion":
        c = self.coords
        return Octonion((c[0],) + tuple(-a for a in c[1:]))

    def trace(self):
        return 2 * self.coords[0]

    def norm(self):
        s = self.coords[0] * self.coords[0]
        for a in self.coords[1:]:
            s = s + a * a
        return s

    def inner(self, other: "Octonion"):
        """<x, y> = N(x+y) - N(x) - N(y) = Tr(x conj(y))."""
        s = self.coords[0] * other.coords[0]
        for a, b in zip(self.coords[1:], other.coords[1:]):
            s = s + a * b
        return 2 * s

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def doubled(self) -> tuple[int, ...] | None:
        """Integer coordinates of 2x, or None if 2x is not integral."""
        out = []
        for a in self.coords:
            t = Fraction(a) * 2
            if t.denominator != 1:
                return None
            out.append(t.numerator)
        return tuple(out)

    def to_json(self) -> list:
        return [scalar_to_json(a) for a in self.coords]

    @classmethod
    def from_json(cls, obj) -> "Octonion":
        return cls(tuple(scalar_from_json(a) for a in obj))

    def __repr__(self):
        terms = [f"{a}*e{i}" for i, a in enumerate(self.coords) if a != 0]
        return "Octonion(" + (" + ".join(terms) if terms else "0") + ")"


def oct_mul(x: Octonion, y: Octonion) -> Octonion:
    out = [x.coords[0] * 0] * 8
    for i, a in enumerate(x.coords):
        if a == 0:
            continue
        si, ii = MUL_SIGN[i], MUL_INDEX[i]
        for j, b in enumerate(y.coords):
            if b == 0:
                continue
            k = ii[j]
            if si[j] > 0:
                out[k] = out[k] + a * b
            else:
                out[k] = out[k] - a * b
    return Octonion(tuple(out))


def oct_conj_trace_norm(x: Octonion):
    return x.conj(), x.trace(), x.norm()


def mul_array(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Row-wise octonion product of two (n, 8) integer arrays (any common scaling)."""
    return np.einsum("ni,nj,ijk->nk", X, Y, MUL_TENSOR)


def conj_array(X: np.ndarray) -> np.ndarray:
    return X * CONJ_SIGN


# --- Coxeter's integral order -------------------------------------------------

def _half(*idx) -> Octonion:
    return Octonion(tuple(Fraction(1, 2) if i in idx else Fraction(0) for i in range(8)))


COXETER_GENERATORS = tuple(Octonion.unit(i, Fraction(1)) for i in range(8)) + (
    _half(0, 1, 2, 4),
    _half(0, 1, 3, 7),
    _half(0, 1, 5, 6),
    _half(1, 2, 3, 5),
)


@dataclass(frozen=True)
class CoxeterOrder:
    basis: np.ndarray  # rows: doubled coordinates of a Z-basis
    gram: np.ndarray  # <b_i, b_j>
    basis_adjugate: np.ndarray  # adj(basis), for exact coordinate recovery
    basis_det: int

    def elements(self) -> list[Octonion]:
        return [Octonion.from_doubled(r) for r in self.basis]

    def coordinates_doubled(self, X2: np.ndarray) -> np.ndarray | None:
        """Order coordinates of rows of doubled coordinates, or None if some row is outside."""
        num = np.asarray(X2, dtype=np.int64) @ self.basis_adjugate
        if np.any(num % self.basis_det):
            return None
        return num // self.basis_det

    def contains_doubled(self, X2: np.ndarray) -> np.ndarray:
        num = np.asarray(X2, dtype=np.int64) @ self.basis_adjugate
        return np.all(num % self.basis_det == 0, axis=-1)


@lru_cache(maxsize=None)
def coxeter_order() -> CoxeterOrder:
    gens = Matrix([[int(2 * Fraction(a)) for a in g.coords] for g in COXETER_GENERATORS])
    H = hermite_normal_form(gens.T).T
    rows = [list(H.row(i)) for i in range(H.rows) if any(H.row(i))]
    if len(rows) != 8:
        raise RuntimeError("Coxeter generators do not span a rank-8 lattice")
    basis = np.array(rows, dtype=np.int64)
    # <x, y> = 2 sum x_i y_i = (1/2) sum (2x)_i (2y)_i
    gram2 = basis @ basis.T
    if np.any(gram2 % 2):
        raise RuntimeError("order Gram matrix is not integral")
    gram = gram2 // 2
    B = Matrix(rows)
    return CoxeterOrder(
        basis=basis,
        gram=gram,
        basis_adjugate=np.array(B.adjugate().tolist(), dtype=np.int64),
        basis_det=int(B.det()),
    )


def order_coordinates(x: Octonion) -> tuple[int, ...] | None:
    d = x.doubled()
    if d is None:
        return None
    c = coxeter_order().coordinates_doubled(np.array([d]))
    return None if c is None else tuple(int(t) for t in c[0])


def order_contains(x: Octonion) -> bool:
    return order_coordinates(x) is not None


@lru_cache(maxsize=32)
def _shell_doubled(m: int) -> np.ndarray:
    order = coxeter_order()
    coeffs = short_vectors(order.gram, 2 * m)
    out = sort_rows(coeffs @ order.basis)
    out.setflags(write=False)
    return out


def norm_shell_doubled(m: int) -> np.ndarray:
    """Doubled coordinates of the order elements of norm m, lexicographically sorted."""
    if m < 0:
        raise ValueError("norm must be nonnegative")
    return _shell_doubled(int(m))


def norm_shell(m: int) -> list[Octonion]:
    return [Octonion.from_doubled(r) for r in norm_shell_doubled(m)]


def parse_octonion(text: str) -> Octonion:
    """Parse 8 comma-separated rationals, e.g. ``"1/2,1/2,0,0,0,0,0,0"``."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 8:
        raise ValueError("expected 8 comma-separated coordinates")
    return Octonion(tuple(rational_from_str(p) for p in parts))
