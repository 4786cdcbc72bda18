import numpy as np
import numpy.testing as npt
import pytest

from zsf.exceptions import DegeneratePencil
from zsf.matcore import match_multisets
from zsf.oracle import faddeev_leverrier, siso_numerator, square_mimo_zero_roots
from zsf.sysmodel import StateSpace, similarity

from conftest import random_siso, random_similarity


def test_numerator_example1(ex1):
    num = siso_numerator(ex1)
    npt.assert_allclose(num.coeffs / num.coeffs[0], [1, -9, 8], atol=1e-12)
    assert num.scale == pytest.approx(1.0)


def test_numerator_example2(ex2):
    num = siso_numerator(ex2)
    npt.assert_allclose(num.coeffs / num.coeffs[0], [1, 21, 116, 96], atol=1e-10)


def test_numerator_no_input_path():
    num = siso_numerator(StateSpace(np.eye(2), np.zeros((2, 1)), [[1, 1]]))
    assert num.coeffs.size == 0
    assert len(num.roots()) == 0


@pytest.mark.parametrize("n", range(1, 9))
def test_faddeev_closure(n):
    rng = np.random.default_rng(n)
    A = rng.standard_normal((n, n))
    c, M = faddeev_leverrier(A)
    npt.assert_allclose(c, np.poly(A), rtol=1e-8, atol=1e-8)
    closure = A @ M[-1] + c[-1] * np.eye(n)
    assert np.max(np.abs(closure)) < 1e-8 * max(1.0, np.linalg.norm(A, 2)) ** n
    # adj(sI - A) (sI - A) = det(sI - A) I at a sample point
    s = 0.7 + 0.3j
    adj = sum(Mk * s ** (n - 1 - k) for k, Mk in enumerate(M))
    npt.assert_allclose(adj @ (s * np.eye(n) - A), np.polyval(c, s) * np.eye(n), atol=1e-9)


def test_square_oracle_examples(ex3, ex4):
    assert match_multisets(square_mimo_zero_roots(ex4), [-1, 0], 1e-8)
    assert match_multisets(square_mimo_zero_roots(ex3), [-5], 1e-8)


def test_square_oracle_degenerate():
    sys = StateSpace(np.diag([-1.0, -2.0]), np.eye(2), np.zeros((2, 2)))
    with pytest.raises(DegeneratePencil):
        square_mimo_zero_roots(sys)


@pytest.mark.parametrize("seed", range(10))
def test_scale_invariance(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    sys, _ = random_siso(rng, n, int(rng.integers(1, n)))
    ref_num = siso_numerator(sys).roots()
    ref_det = square_mimo_zero_roots(sys)
    k = rng.uniform(0.1, 10) * rng.choice([-1, 1])
    scaled = StateSpace(sys.A, k * sys.B, sys.C / 3)
    assert match_multisets(siso_numerator(scaled).roots(), ref_num, 1e-6)
    assert match_multisets(square_mimo_zero_roots(scaled), ref_det, 1e-6)


@pytest.mark.parametrize("seed", range(10))
def test_oracles_agree(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    sys, zeros = random_siso(rng, n, int(rng.integers(1, n)))
    sys = similarity(sys, random_similarity(rng, n, 10))
    assert match_multisets(siso_numerator(sys).roots(), zeros, 1e-6)
    assert match_multisets(square_mimo_zero_roots(sys), zeros, 1e-6)
