import numpy as np
import numpy.testing as npt
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from zsf.estimator import InvariantZeros, ZeroSubspaceTransformer
from zsf.matcore import match_multisets
from zsf.sysmodel import SystemShape


def test_params_and_clone():
    est = InvariantZeros(zero_atol=1e-8, match_tol=1e-5)
    assert est.get_params() == {"rank_rtol": None, "zero_atol": 1e-8, "match_tol": 1e-5}
    other = clone(est)
    assert other is not est and other.get_params() == est.get_params()
    est.set_params(rank_rtol=1e-12)
    assert est.rank_rtol == 1e-12


def test_invariant_zeros_fit(ex1, ex2):
    est = InvariantZeros().fit(ex1)
    assert match_multisets(est.zeros_, [1, 8], 1e-8)
    assert est.shape_ is SystemShape.SISO and est.n_features_in_ == 3
    est = InvariantZeros().fit((ex2.A, ex2.B, ex2.C, ex2.D))
    assert est.extended_


def test_invariant_zeros_predict(ex1, ex5):
    est = InvariantZeros().fit(ex1)
    npt.assert_array_equal(est.predict([1, 8, 7, 2j]), [True, True, False, False])
    est = InvariantZeros().fit({"A": ex5.A, "B": ex5.B, "C": ex5.C})
    npt.assert_array_equal(est.predict([0, -0.5, 1]), [False, False, True])
    with pytest.raises(ValueError):
        est.predict([np.nan])


def test_transformer_roundtrip(ex4):
    tr = ZeroSubspaceTransformer().fit(ex4)
    X = np.random.default_rng(0).standard_normal((7, 6))
    Z = tr.transform(X)
    npt.assert_allclose(tr.inverse_transform(Z), X, atol=1e-10)
    eta, xi = tr.split(Z)
    assert eta.shape == (7, tr.l_z_) and xi.shape == (7, 4)
    # xi coordinates are the outputs and their derivatives
    npt.assert_allclose(xi[:, 0], X @ ex4.C[0], atol=1e-10)
    with pytest.raises(ValueError):
        tr.transform(X[:, :5])


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ZeroSubspaceTransformer().transform(np.ones((1, 3)))
    with pytest.raises(NotFittedError):
        InvariantZeros().predict([0])


def test_bad_system_type():
    with pytest.raises(TypeError):
        InvariantZeros().fit("A")
