import numpy as np
import pytest

from albert_theta.albert import AlbertElement, is_psd, rank
from albert_theta.enumerate import (
    ShellCache,
    enumerate_rank1_general,
    enumerate_rank1_parametric,
    get_shell,
    shell_blocks,
    sigma3,
    weighted_count_blocks,
)
from albert_theta.lattice import make_lattice
from albert_theta.modforms import delta, eisenstein

JZ, JE = make_lattice("JZ"), make_lattice("JE")


def weight12_coefficient(c, n):
    f = eisenstein(12, n + 1) + delta(n + 1).scale(c)
    return f.coeffs[n]


@pytest.mark.parametrize("n,want", [(1, 1), (2, 9), (6, 252)])
def test_sigma3(n, want):
    assert sigma3(n) == want


def test_sigma3_rejects_nonpositive():
    with pytest.raises(ValueError):
        sigma3(0)


def test_trace_one():
    s = enumerate_rank1_parametric(1)
    els = {JZ.element(c) for c in s.coords}
    assert els == {AlbertElement.idempotent(i) for i in (1, 2, 3)}
    assert s.weighted_count == 3


def test_trace_two():
    s = enumerate_rank1_parametric(2)
    assert (len(s), s.weighted_count) == (723, 3 * sigma3(2) + 3 * 240)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_weighted_counts_against_weight12_form(n):
    from fractions import Fraction

    s = enumerate_rank1_parametric(n) if n < 4 else None
    count, weighted = weighted_count_blocks(n)
    if s is not None:
        assert (count, weighted) == (len(s), s.weighted_count)
    assert 240 * weighted == weight12_coefficient(Fraction(432000, 691), n)


def test_isotope_shells():
    from fractions import Fraction

    assert len(enumerate_rank1_general(JE, 1)) == 0
    s = enumerate_rank1_general(JE, 2)
    assert s.weighted_count == 819
    assert 240 * s.weighted_count == weight12_coefficient(-Fraction(65520, 691), 2)


@pytest.mark.parametrize("n", [1, 2])
def test_general_matches_parametric(n):
    a = enumerate_rank1_general(JZ, n)
    b = enumerate_rank1_parametric(n)
    assert np.array_equal(a.coords, b.coords)
    assert a.weighted_count == b.weighted_count


@pytest.mark.slow
def test_general_matches_parametric_trace_three():
    a = enumerate_rank1_general(JZ, 3)
    b = enumerate_rank1_parametric(3)
    assert np.array_equal(a.coords, b.coords)


@pytest.mark.parametrize("L", [JZ, JE], ids=["JZ", "JE"])
def test_shell_elements_are_rank_one_psd(L):
    s = get_shell(L.name, 2)
    C = s.coords.astype(np.int64)
    assert np.all(np.einsum("ij,jk,ik->i", C, L.gram, C) == 4)
    for row in C[:: max(1, len(C) // 60)]:
        T = L.element(row)
        assert rank(T) == 1
        assert is_psd(T)


def test_blocks_cover_the_shell():
    s = enumerate_rank1_parametric(3)
    n_rows = 0
    for b in shell_blocks(3):
        if hasattr(b, "iter_rows"):
            n_rows += sum(len(r) for r in b.iter_rows())
        else:
            n_rows += len(b.r2)
    assert n_rows == len(s)


def test_cache_round_trip(tmp_path):
    cache = ShellCache(tmp_path)
    s = get_shell("JZ", 2, cache)
    t = cache.read("JZ", 2)
    assert t is not None
    assert np.array_equal(s.coords, t.coords) and t.weighted_count == s.weighted_count
    assert get_shell("JZ", 2, cache).weighted_count == 747


def test_cache_corruption_is_detected(tmp_path):
    cache = ShellCache(tmp_path)
    s = get_shell("JZ", 2, cache)
    path = cache.path("JZ", 2)
    with np.load(path) as z:
        parts = dict(z)
    parts["coords"] = parts["coords"].copy()
    parts["coords"][0, 0] += 1
    np.savez(path, **parts)
    assert cache.read("JZ", 2) is None
    again = get_shell("JZ", 2, cache)
    assert np.array_equal(again.coords, s.coords)
    path.write_bytes(b"garbage")
    assert cache.read("JZ", 2) is None


def test_cache_dir_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("ALBERT_THETA_CACHE", str(tmp_path))
    assert ShellCache().directory == tmp_path
