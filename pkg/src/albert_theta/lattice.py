"""The two Euclidean Albert lattices J_Z = Her_3(O_Z) and its isotope J_E.

Both live on the same Z^27 module: the diagonal idempotents E1, E2, E3 and the
Coxeter order basis in each of the slots x, y, z.  J_E has unit E^# and the
twisted adjoint X -> (E^#, X^#) E^# - E x X^#, where E = [2,2,2;b,b,b] and
b = (-1 + e1 + ... + e7)/2.

Elements are exchanged in two forms: AlbertElement values, and integer arrays
of *doubled* reference coordinates r2 = 2*(a, b, c, x0..x7, y0..y7, z0..z7),
which the vectorized helpers work on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd

import numpy as np

from .albert import AlbertElement, adjoint, cross, det, det_polarize, form
from .octonion import CONJ_SIGN, MUL_TENSOR, Octonion, coxeter_order

OCT_SLICES = (slice(3, 11), slice(11, 19), slice(19, 27))


class NotInLatticeError(ValueError):
    pass


@dataclass(frozen=True)
class IsotopeData:
    E: AlbertElement
    Esharp: AlbertElement


def isotope_data() -> IsotopeData:
    h = Fraction(1, 2)
    beta = Octonion((-h,) + (h,) * 7)
    E = AlbertElement(Fraction(2), Fraction(2), Fraction(2), beta, beta, beta)
    if det(E) != 1:
        raise RuntimeError("det(E) != 1")
    return IsotopeData(E=E, Esharp=adjoint(E))


@dataclass(frozen=True, eq=False)
class AlbertLattice:
    name: str
    basis2: np.ndarray  # 27x27 int: rows are doubled reference coordinates of the basis
    unit: AlbertElement
    isotope: IsotopeData | None
    gram: np.ndarray = field(repr=False)
    # linear map on reference coordinates: isotope adjoint = M applied to the standard adjoint
    adjoint_map: np.ndarray | None = field(default=None, repr=False)
    trace_functional2: np.ndarray = field(default=None, repr=False)  # Tr_L = (w . r2) / denom
    trace_denom: int = 1

    @property
    def adjoint_kind(self) -> str:
        return "standard" if self.isotope is None else "isotope"

    @property
    def basis(self) -> list[list[Fraction]]:
        return [[Fraction(int(t), 2) for t in row] for row in self.basis2]

    def basis_elements(self) -> list[AlbertElement]:
        return [AlbertElement.from_doubled_ref(r) for r in self.basis2]

    def element(self, coords) -> AlbertElement:
        return AlbertElement.from_doubled_ref(np.asarray(coords, dtype=np.int64) @ self.basis2)

    def coordinates(self, T: AlbertElement) -> np.ndarray:
        r2 = T.doubled_ref()
        if r2 is None:
            raise NotInLatticeError(f"{T} is not in {self.name}")
        c = coords_from_r2(np.array([r2], dtype=np.int64))
        if c is None:
            raise NotInLatticeError(f"{T} is not in {self.name}")
        return c[0]

    def contains(self, T: AlbertElement) -> bool:
        try:
            self.coordinates(T)
        except (NotInLatticeError, TypeError, ValueError):
            return False
        return True

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "adjoint_kind": self.adjoint_kind,
            "basis_doubled": self.basis2.tolist(),
            "unit": self.unit.to_json(),
            "gram": self.gram.tolist(),
        }
        if self.isotope is not None:
            out["E"] = self.isotope.E.to_json()
        return out


# --- coordinates -------------------------------------------------------------------


def _basis2() -> np.ndarray:
    order = coxeter_order()
    B = np.zeros((27, 27), dtype=np.int64)
    for i in range(3):
        B[i, i] = 2
    for s, sl in enumerate(OCT_SLICES):
        B[3 + 8 * s: 11 + 8 * s, sl] = order.basis
    return B


def coords_from_r2(R2: np.ndarray) -> np.ndarray | None:
    """Lattice coordinates of rows of doubled reference coordinates; None if any row is outside."""
    R2 = np.asarray(R2, dtype=np.int64)
    if np.any(R2[:, :3] % 2):
        return None
    order = coxeter_order()
    parts = [R2[:, :3] // 2]
    for sl in OCT_SLICES:
        c = order.coordinates_doubled(R2[:, sl])
        if c is None:
            return None
        parts.append(c)
    return np.concatenate(parts, axis=1)


def in_lattice_r2(R2: np.ndarray) -> np.ndarray:
    R2 = np.asarray(R2, dtype=np.int64)
    ok = np.all(R2[:, :3] % 2 == 0, axis=1)
    order = coxeter_order()
    for sl in OCT_SLICES:
        ok &= order.contains_doubled(R2[:, sl])
    return ok


# --- structure maps -------------------------------------------------------------


def lattice_adjoint(L: AlbertLattice, T: AlbertElement) -> AlbertElement:
    S = adjoint(T)
    if L.isotope is None:
        return S
    E, Es = L.isotope.E, L.isotope.Esharp
    return Es.scale(form(Es, S)) - cross(E, S)


def lattice_cross(L: AlbertLattice, A: AlbertElement, B: AlbertElement) -> AlbertElement:
    return lattice_adjoint(L, A + B) - lattice_adjoint(L, A) - lattice_adjoint(L, B)


def lattice_trace_and_form(L: AlbertLattice, A: AlbertElement, B: AlbertElement):
    """(Tr_L(A), (A,B)_L) from the determinant polarized at the unit of L."""
    u = L.unit

    def pairing(X, Y):
        dx, dxy = det_polarize(X, Y, u)
        dy, _ = det_polarize(Y, X, u)
        return dx * dy - dxy

    return pairing(A, u), pairing(A, B)


def lattice_form(L: AlbertLattice, A: AlbertElement, B: AlbertElement):
    """(A,B)_L through the expanded bilinear formula (fast route).

    Standard: the explicit trace form.  Isotope: (A,B)_E = (E,A)(E,B) - (E^#, A x B).
    """
    if L.isotope is None:
        return form(A, B)
    E, Es = L.isotope.E, L.isotope.Esharp
    return form(E, A) * form(E, B) - form(Es, cross(A, B))


def lattice_trace(L: AlbertLattice, A: AlbertElement):
    if L.isotope is None:
        return A.trace()
    return form(L.isotope.E, A)


def content(L: AlbertLattice, T: AlbertElement) -> int:
    c = L.coordinates(T)
    g = reduce(gcd, (int(t) for t in c), 0)
    if g == 0:
        raise ValueError("content of the zero element is undefined")
    return g


def content_coords(C: np.ndarray) -> np.ndarray:
    return np.gcd.reduce(np.abs(np.asarray(C, dtype=np.int64)), axis=1)


# --- vectorized helpers on doubled reference coordinates -------------------------


def form_functional(L: AlbertLattice, A: AlbertElement) -> list:
    """phi with (T, A)_L = sum_k phi[k] * r[k](T), r the reference coordinates of T."""
    if L.isotope is None:
        G = A
    else:
        E, Es = L.isotope.E, L.isotope.Esharp
        G = E.scale(form(E, A)) - cross(Es, A)
    r = G.ref()
    return [r[k] if k < 3 else 2 * r[k] for k in range(27)]


def _oct_mul_arr(X, Y):
    return np.einsum("ni,nj,ijk->nk", X, Y, MUL_TENSOR, optimize=True)


def standard_adjoint4_r2(R2: np.ndarray) -> np.ndarray:
    """4*T^# in reference coordinates, for rows T of doubled reference coordinates."""
    R2 = np.asarray(R2, dtype=np.int64)
    a, b, c = R2[:, 0], R2[:, 1], R2[:, 2]
    X, Y, Z = (R2[:, sl] for sl in OCT_SLICES)
    out = np.empty_like(R2)
    out[:, 0] = b * c - np.einsum("ij,ij->i", X, X)
    out[:, 1] = c * a - np.einsum("ij,ij->i", Y, Y)
    out[:, 2] = a * b - np.einsum("ij,ij->i", Z, Z)
    out[:, OCT_SLICES[0]] = _oct_mul_arr(Y, Z) * CONJ_SIGN - a[:, None] * X
    out[:, OCT_SLICES[1]] = _oct_mul_arr(Z, X) * CONJ_SIGN - b[:, None] * Y
    out[:, OCT_SLICES[2]] = _oct_mul_arr(X, Y) * CONJ_SIGN - c[:, None] * Z
    return out


def adjoint_vanishes_r2(L: AlbertLattice, R2: np.ndarray) -> np.ndarray:
    """Boolean mask: lattice_adjoint(L, T) == 0 for each row."""
    S4 = standard_adjoint4_r2(R2)
    if L.adjoint_map is None:
        return ~np.any(S4, axis=1)
    return ~np.any(S4 @ L.adjoint_map.T, axis=1)


def trace_r2(L: AlbertLattice, R2: np.ndarray) -> np.ndarray:
    """Exact integer Tr_L for rows (Tr_L is integral on the lattice)."""
    num = np.asarray(R2, dtype=np.int64) @ L.trace_functional2
    if np.any(num % L.trace_denom):
        raise ValueError("non-integral trace: rows are not lattice elements")
    return num // L.trace_denom


def _integral_vector(vals) -> tuple[np.ndarray, int]:
    fr = [Fraction(v) for v in vals]
    den = reduce(lambda m, q: m * q.denominator // gcd(m, q.denominator), fr, 1)
    return np.array([int(v * den) for v in fr], dtype=np.int64), den


# --- construction --------------------------------------------------------------


def _standard_gram(basis: list[AlbertElement]) -> np.ndarray:
    n = len(basis)
    G = np.zeros((n, n), dtype=object)
    for i in range(n):
        for j in range(i, n):
            G[i, j] = G[j, i] = form(basis[i], basis[j])
    return G


def _build(name: str) -> AlbertLattice:
    B2 = _basis2()
    basis = [AlbertElement.from_doubled_ref(r) for r in B2]
    if name == "JZ":
        iso = None
        unit = AlbertElement.identity()
        G = _standard_gram(basis)
        M = None
    else:
        iso = isotope_data()
        unit = iso.Esharp
        E, Es = iso.E, iso.Esharp
        e = [form(E, v) for v in basis]
        F = [cross(Es, v) for v in basis]
        G = np.zeros((27, 27), dtype=object)
        for i in range(27):
            for j in range(i, 27):
                G[i, j] = G[j, i] = e[i] * e[j] - form(basis[i], F[j])
        # X^{#E} = (E^#, S) E^# - E x S is linear in S = X^#
        cols = []
        for k in range(27):
            S = AlbertElement.from_ref([Fraction(int(k == t)) for t in range(27)])
            cols.append((Es.scale(form(Es, S)) - cross(E, S)).ref())
        Mf = np.array(cols, dtype=object).T
        den = reduce(lambda m, q: m * Fraction(q).denominator // gcd(m, Fraction(q).denominator), Mf.flat, 1)
        M = np.array([[int(Fraction(v) * den) for v in row] for row in Mf], dtype=np.int64)
    if any(Fraction(v).denominator != 1 for v in G.flat):
        raise RuntimeError(f"{name}: trace form is not integral on the basis")
    gram = np.array([[int(v) for v in row] for row in G], dtype=np.int64)
    tf = _trace_functional(iso)
    w, den = _integral_vector([t / 2 for t in tf])
    return AlbertLattice(
        name=name,
        basis2=B2,
        unit=unit,
        isotope=iso,
        gram=gram,
        adjoint_map=M,
        trace_functional2=w,
        trace_denom=den,
    )


def _trace_functional(iso):
    if iso is None:
        return [Fraction(1)] * 3 + [Fraction(0)] * 24
    r = iso.E.ref()
    return [Fraction(r[k]) if k < 3 else 2 * Fraction(r[k]) for k in range(27)]


@lru_cache(maxsize=None)
def _make(name: str) -> AlbertLattice:
    return _build(name)


def make_lattice(which: str) -> AlbertLattice:
    key = str(which).upper()
    if key not in ("JZ", "JE"):
        raise ValueError(f"unknown lattice {which!r}; expected JZ or JE")
    return _make(key)
