"""Rank-1 positive elements of an Albert lattice, shell by shell in the trace.

Two independent algorithms:

* ``enumerate_rank1_parametric`` (J_Z only) solves the adjoint equations
  directly.  For a diagonal (a, b, c) with pivot a > 0 the rank-1 elements are
  y in shell(ca), z in shell(ab), x = conj(yz)/a, subject to x lying in the
  order; the pivot is rotated to the smallest diagonal entry.
* ``enumerate_rank1_general`` uses the rank-1 norm identity (T,T)_L = Tr_L(T)^2
  and filters the norm-n^2 vectors of the Gram matrix.

Large J_Z shells are also exposed as *blocks* (``shell_blocks``) so theta
series can be evaluated without materializing every element.
"""

from __future__ import annotations

import hashlib
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sympy import divisors

from .lattice import (
    OCT_SLICES,
    AlbertLattice,
    adjoint_vanishes_r2,
    content_coords,
    coords_from_r2,
    make_lattice,
    trace_r2,
)
from .octonion import CONJ_SIGN, MUL_TENSOR, coxeter_order, norm_shell_doubled
from .shortvec import iter_short_vectors, sort_rows

log = logging.getLogger(__name__)

CACHE_ENV = "ALBERT_THETA_CACHE"
_BLOCK_PAIRS = 1 << 21


def sigma3(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"sigma3 needs a positive integer, got {n}")
    return sum(d ** 3 for d in divisors(int(n)))


@dataclass(frozen=True, eq=False)
class Rank1Shell:
    lattice_name: str
    trace: int
    coords: np.ndarray  # lattice coordinates, one row per element, lexicographic
    weighted_count: int

    def __len__(self):
        return len(self.coords)

    @property
    def elements(self) -> list[tuple[int, ...]]:
        return [tuple(int(t) for t in row) for row in self.coords]

    def r2(self) -> np.ndarray:
        L = make_lattice(self.lattice_name)
        return self.coords.astype(np.int64) @ L.basis2

    def contents(self) -> np.ndarray:
        if len(self.coords) == 0:
            return np.zeros(0, dtype=np.int64)
        return content_coords(self.coords)


def _weighted(contents: np.ndarray) -> int:
    vals, counts = np.unique(contents, return_counts=True)
    return sum(sigma3(int(v)) * int(k) for v, k in zip(vals, counts))


def _compact(C: np.ndarray) -> np.ndarray:
    if len(C) and np.abs(C).max() < 2 ** 15:
        return C.astype(np.int16)
    return C.astype(np.int64)


def _make_shell(name: str, n: int, C: np.ndarray) -> Rank1Shell:
    C = sort_rows(np.asarray(C, dtype=np.int64).reshape(-1, 27))
    w = _weighted(content_coords(C)) if len(C) else 0
    return Rank1Shell(name, n, _compact(C), w)


# --- J_Z blocks ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExplicitBlock:
    """Rows of doubled reference coordinates."""

    r2: np.ndarray


@dataclass(frozen=True, eq=False)
class FactoredBlock:
    """All rank-1 elements with a fixed positive diagonal.

    Slot ``pivot`` (0: x, 1: y, 2: z) holds w = conj(u v)/d_pivot where u runs
    over ``U2`` in slot pivot+1 and v over ``V2`` in slot pivot+2 (doubled
    coordinates).  With d_pivot = 1 every pair is valid.
    """

    diag: tuple[int, int, int]
    pivot: int
    U2: np.ndarray
    V2: np.ndarray

    @property
    def dp(self) -> int:
        return self.diag[self.pivot]

    @property
    def slots(self) -> tuple[int, int, int]:
        p = self.pivot
        return p, (p + 1) % 3, (p + 2) % 3

    def w2_numerators(self, rows: slice) -> np.ndarray:
        """conj(U2 V2) for the pairs (rows of U) x (all of V); shape (r, |V|, 8)."""
        UV = np.einsum("ui,vj,ijk->uvk", self.U2[rows], self.V2, MUL_TENSOR, optimize=True)
        return UV * CONJ_SIGN

    def iter_rows(self, max_pairs: int = _BLOCK_PAIRS):
        """Yield doubled reference coordinates of the valid elements, in chunks."""
        order = coxeter_order()
        nv = len(self.V2)
        step = max(1, max_pairs // max(nv, 1))
        p, s1, s2 = self.slots
        for start in range(0, len(self.U2), step):
            rows = slice(start, start + step)
            num = self.w2_numerators(rows).reshape(-1, 8)
            den = 2 * self.dp
            ok = np.all(num % den == 0, axis=1)
            W2 = num // den
            ok &= order.contains_doubled(W2)
            nu = len(self.U2[rows])
            out = np.zeros((nu * nv, 27), dtype=np.int64)
            out[:, :3] = 2 * np.array(self.diag)
            out[:, OCT_SLICES[p]] = W2
            out[:, OCT_SLICES[s1]] = np.repeat(self.U2[rows], nv, axis=0)
            out[:, OCT_SLICES[s2]] = np.tile(self.V2, (nu, 1))
            yield out[ok]

    def size_if_unit_pivot(self) -> int:
        return len(self.U2) * len(self.V2)


def compositions(n: int):
    for a in range(n, -1, -1):
        for b in range(n - a, -1, -1):
            yield a, b, n - a - b


def shell_blocks(n: int):
    """Deterministic sequence of blocks covering the J_Z trace-n rank-1 positive cone."""
    if n < 1:
        raise ValueError("trace must be positive")
    for d in compositions(n):
        zeros = [i for i in range(3) if d[i] == 0]
        if len(zeros) == 2:
            r2 = np.zeros((1, 27), dtype=np.int64)
            r2[0, :3] = 2 * np.array(d)
            yield ExplicitBlock(r2)
        elif len(zeros) == 1:
            k = zeros[0]
            i, j = [t for t in range(3) if t != k]
            S = norm_shell_doubled(d[i] * d[j])
            r2 = np.zeros((len(S), 27), dtype=np.int64)
            r2[:, :3] = 2 * np.array(d)
            r2[:, OCT_SLICES[k]] = S
            yield ExplicitBlock(r2)
        else:
            p = min(range(3), key=lambda t: (d[t], t))
            U2 = norm_shell_doubled(d[p] * d[(p + 2) % 3])
            V2 = norm_shell_doubled(d[p] * d[(p + 1) % 3])
            yield FactoredBlock(tuple(d), p, np.asarray(U2), np.asarray(V2))


def _block_rows(block) -> list[np.ndarray]:
    if isinstance(block, ExplicitBlock):
        return [block.r2]
    return list(block.iter_rows())


def _composition_coords(args) -> np.ndarray:
    n, idx = args
    block = list(shell_blocks(n))[idx]
    L = make_lattice("JZ")
    parts = []
    for r2 in _block_rows(block):
        if len(r2) == 0:
            continue
        bad = ~adjoint_vanishes_r2(L, r2)
        if np.any(bad):
            raise AssertionError(f"parametric solve produced an element with nonzero adjoint: {r2[bad][0]}")
        C = coords_from_r2(r2)
        if C is None:
            raise AssertionError("parametric solve produced an element outside J_Z")
        parts.append(C)
    return np.concatenate(parts) if parts else np.zeros((0, 27), dtype=np.int64)


def enumerate_rank1_parametric(n: int, workers: int = 1) -> Rank1Shell:
    """Materialized J_Z shell of trace n (every element re-checked for T^# = 0)."""
    if n < 1:
        raise ValueError("trace must be positive")
    nblocks = sum(1 for _ in compositions(n))
    jobs = [(n, i) for i in range(nblocks)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_composition_coords, jobs))
    else:
        parts = [_composition_coords(j) for j in jobs]
    return _make_shell("JZ", n, np.concatenate(parts))


def weighted_count_blocks(n: int) -> tuple[int, int]:
    """(element count, weighted count) of the J_Z trace-n shell via blocks."""
    count = weighted = 0
    for block in shell_blocks(n):
        if isinstance(block, FactoredBlock) and block.dp == 1:
            k = block.size_if_unit_pivot()
            count += k
            weighted += k
            continue
        for r2 in _block_rows(block):
            if len(r2):
                c = content_coords(coords_from_r2(r2))
                count += len(c)
                weighted += _weighted(c)
    return count, weighted


# --- general (Gram-based) enumeration ----------------------------------------------


def enumerate_rank1_general(L: AlbertLattice, n: int, pruning=None) -> Rank1Shell:
    """Filter the norm-n^2 vectors of L.gram for T^{#_L} = 0 and Tr_L(T) = n.

    ``pruning`` adds linear constraints ``f . coords >= b`` (lattice coordinates)
    used to cut the search tree; the trace equality is always imposed.
    """
    if n < 1:
        raise ValueError("trace must be positive")
    tf = _trace_on_coords(L)
    cons = [(tf, n), ([-t for t in tf], -n)] + list(pruning or [])
    keep = []
    for C in iter_short_vectors(L.gram, n * n, cons):
        R2 = C @ L.basis2
        C = C[trace_r2(L, R2) == n]
        R2 = C @ L.basis2
        keep.append(C[adjoint_vanishes_r2(L, R2)])
    C = np.concatenate(keep) if keep else np.zeros((0, 27), dtype=np.int64)
    return _make_shell(L.name, n, C)


def _trace_on_coords(L: AlbertLattice) -> list:
    from fractions import Fraction

    w = L.basis2 @ L.trace_functional2
    return [Fraction(int(t), L.trace_denom) for t in w]


def jz_sign_pruning() -> list:
    """a, b, c >= 0 on J_Z coordinates (the first three coordinates)."""
    out = []
    for i in range(3):
        f = [0] * 27
        f[i] = 1
        out.append((f, 0))
    return out


# --- disk cache ------------------------------------------------------------------


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "albert_theta"


def _checksum(name: str, n: int, C: np.ndarray, w: int) -> str:
    h = hashlib.sha256()
    h.update(f"{name}:{n}:{w}:{C.dtype.str}:{C.shape}".encode())
    h.update(np.ascontiguousarray(C).tobytes())
    return h.hexdigest()


class ShellCache:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory is not None else default_cache_dir()

    def path(self, name: str, n: int) -> Path:
        return self.directory / f"{name}_trace{n}.npz"

    def write(self, shell: Rank1Shell) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        target = self.path(shell.lattice_name, shell.trace)
        C = np.ascontiguousarray(shell.coords)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".npz.tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                np.savez(
                    fh,
                    coords=C,
                    weighted_count=np.array(str(shell.weighted_count)),
                    meta=np.array([shell.lattice_name, str(shell.trace)]),
                    checksum=np.array(_checksum(shell.lattice_name, shell.trace, C, shell.weighted_count)),
                )
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target

    def read(self, name: str, n: int) -> Rank1Shell | None:
        target = self.path(name, n)
        if not target.exists():
            return None
        try:
            with np.load(target, allow_pickle=False) as z:
                C = z["coords"]
                w = int(str(z["weighted_count"]))
                meta = [str(t) for t in z["meta"]]
                stored = str(z["checksum"])
        except Exception as exc:  # unreadable file counts as corrupt
            log.warning("discarding unreadable cache file %s: %s", target, exc)
            return None
        if meta != [name, str(n)] or stored != _checksum(name, n, C, w):
            log.warning("checksum mismatch in %s; recomputing", target)
            return None
        return Rank1Shell(name, n, C, w)


def get_shell(name: str, n: int, cache: ShellCache | None = None, workers: int = 1) -> Rank1Shell:
    """Shell from the cache, or computed (parametric for J_Z, general for J_E) and cached."""
    name = name.upper()
    if cache is not None:
        hit = cache.read(name, n)
        if hit is not None:
            return hit
    if name == "JZ":
        shell = enumerate_rank1_parametric(n, workers=workers)
    else:
        shell = enumerate_rank1_general(make_lattice(name), n)
    if cache is not None:
        cache.write(shell)
    return shell
