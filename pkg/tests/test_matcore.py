import numpy as np
import numpy.testing as npt
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from zsf.exceptions import NullSpaceError, SingularMatrixError
from zsf.matcore import (
    CMultiset,
    Tolerances,
    companion,
    eigenvalues,
    left_null_basis,
    match_multisets,
    numerical_rank,
    poly_roots,
    solve_linear,
)
from zsf.zerosolver import RosenbrockPencil

from conftest import random_orthogonal


def test_tolerances_validation():
    with pytest.raises(ValueError):
        Tolerances(rank_rtol=1.5)
    with pytest.raises(ValueError):
        Tolerances(zero_atol=0)
    with pytest.raises(ValueError):
        Tolerances(match_tol=-1)
    assert Tolerances().updated(match_tol=None, zero_atol=1e-3).zero_atol == 1e-3


def test_rank_identity_and_zero():
    assert numerical_rank(np.eye(3), Tolerances(rank_rtol=1e-10)) == 3
    assert numerical_rank(np.zeros((2, 4))) == 0


def test_rank_example5_pencil_matches_exact_rank(ex5):
    # exact rational rank of Z(1) for the corpus realization
    Z = RosenbrockPencil(ex5).evaluate(1.0)
    exact = sp.Matrix(Z.astype(int).tolist()).rank()
    assert exact == 6
    assert numerical_rank(Z) == exact


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 7), st.integers(2, 7), st.integers(0, 7))
def test_rank_invariant_under_orthogonal_and_permutation(seed, rows, cols, r):
    rng = np.random.default_rng(seed)
    r = min(r, rows, cols)
    m = rng.standard_normal((rows, r)) @ rng.standard_normal((r, cols))
    base = numerical_rank(m)
    assert base == r
    m2 = random_orthogonal(rng, rows) @ m @ random_orthogonal(rng, cols)
    assert numerical_rank(m2) == base
    assert numerical_rank(m[rng.permutation(rows)][:, rng.permutation(cols)]) == base


def test_left_null_basis_coordinate():
    N = left_null_basis(np.array([[0.0], [0.0], [1.0]]))
    assert N.shape == (2, 3)
    npt.assert_allclose(N @ [[0], [0], [1]], 0, atol=1e-15)
    npt.assert_allclose(N @ N.T, np.eye(2), atol=1e-12)
    npt.assert_allclose(np.abs(N[:, 2]), 0, atol=1e-15)


def test_left_null_basis_example4(ex4):
    N = left_null_basis(ex4.B)
    assert N.shape == (4, 6)
    assert np.max(np.abs(N @ ex4.B)) < 1e-12


@pytest.mark.parametrize("seed", range(20))
def test_left_null_basis_random(seed):
    rng = np.random.default_rng(seed)
    B = rng.standard_normal((5, 2))
    N = left_null_basis(B)
    assert N.shape == (3, 5)
    assert np.max(np.abs(N @ B)) < 1e-12
    npt.assert_allclose(N @ N.T, np.eye(3), atol=1e-10)
    assert numerical_rank(N) == 3


def test_left_null_basis_full_rank_raises():
    with pytest.raises(NullSpaceError):
        left_null_basis(np.eye(3))


def test_eigenvalues_examples():
    assert match_multisets(eigenvalues([[9, -8], [1, 0]]), [1, 8], 1e-12)
    assert match_multisets(eigenvalues([[-5]]), [-5], 1e-12)
    # s^3 + 2 s^2 - s - 2 = (s - 1)(s + 1)(s + 2)
    assert match_multisets(eigenvalues(companion([1, 2, -1, -2])), [1, -1, -2], 1e-12)


def test_eigenvalues_non_square():
    with pytest.raises(ValueError):
        eigenvalues(np.zeros((2, 3)))


@pytest.mark.parametrize("seed", range(10))
def test_eigenvalues_are_roots_of_characteristic_det(seed):
    rng = np.random.default_rng(seed)
    n = rng.integers(2, 9)
    m = rng.standard_normal((n, n))
    ev = eigenvalues(m)
    assert len(ev) == n
    scale = (1 + np.linalg.norm(m, 2)) ** n
    for lam in ev.expanded():
        assert abs(np.linalg.det(lam * np.eye(n) - m)) < 1e-10 * scale


def test_eigenvalues_conjugate_closed():
    ev = eigenvalues([[0, -2], [2, 0]])
    assert match_multisets(ev, [2j, -2j], 1e-12)
    assert set(ev.values) == {v.conjugate() for v in ev.values}


def test_multiset_merges_split_double_root():
    ms = CMultiset.from_values([1 + 1e-9, 1 - 1e-9, 3.0 + 1e-12j])
    assert ms.pairs() == [(1 + 0j, 2), (3 + 0j, 1)]
    assert len(ms) == 3


def test_poly_roots_examples():
    assert match_multisets(poly_roots([1, -9, 8]), [1, 8], 1e-12)
    assert match_multisets(poly_roots([1, 5]), [-5], 1e-12)
    assert len(poly_roots([3])) == 0
    with pytest.raises(ValueError):
        poly_roots([0, 0])


def test_poly_roots_trims_leading_noise():
    assert match_multisets(poly_roots([1e-14, 1, -3]), [3], 1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_poly_roots_reproduce_coefficients(seed):
    rng = np.random.default_rng(seed)
    deg = rng.integers(1, 11)
    roots = np.sort(rng.uniform(-3, 3, deg))
    while deg > 1 and np.min(np.diff(roots)) < 0.3:
        roots = np.sort(rng.uniform(-3, 3, deg))
    coeffs = np.poly(roots)
    rebuilt = np.real(np.poly(poly_roots(coeffs).expanded()))
    npt.assert_allclose(rebuilt, coeffs, rtol=1e-8, atol=1e-8 * np.max(np.abs(coeffs)))


def test_solve_linear():
    a = np.array([[2.0, 1.0], [1.0, 3.0]])
    x, res = solve_linear(a, np.eye(2))
    npt.assert_allclose(a @ x, np.eye(2), atol=1e-14)
    assert res < 1e-14
    with pytest.raises(SingularMatrixError) as info:
        solve_linear(np.ones((2, 2)), np.eye(2))
    assert info.value.cond > 1e15


def test_match_multisets():
    assert match_multisets([1, 2], [2, 1], 1e-9)
    assert not match_multisets([1, 2], [1, 2, 3], 1e-9)
    assert not match_multisets([1, 2.1], [1, 2], 1e-3)
