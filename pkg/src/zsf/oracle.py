"""Independent zero computations used to cross-check the solver.

Neither routine touches the zero-subspace machinery: the SISO oracle
expands ``C adj(sI - A) B + D det(sI - A)`` with the Faddeev-LeVerrier
recursion, and the square oracle interpolates ``det Z(lam)`` of the
Rosenbrock matrix on a circle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegeneratePencil
from .matcore import DEFAULT_TOL, CMultiset, Tolerances, poly_roots
from .sysmodel import StateSpace, check_system

__all__ = ["NumeratorPoly", "faddeev_leverrier", "siso_numerator",
           "square_mimo_zero_roots", "TRIM_RTOL"]

TRIM_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class NumeratorPoly:
    coeffs: np.ndarray
    scale: float

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, s):
        return np.polyval(self.coeffs, s) if self.coeffs.size else 0 * s

    def roots(self, tol: Tolerances = DEFAULT_TOL) -> CMultiset:
        if self.coeffs.size == 0:
            return CMultiset()
        return poly_roots(self.coeffs, tol)


def faddeev_leverrier(A):
    """Characteristic polynomial and adjugate coefficients of ``A``.

    Returns ``(c, M)`` with ``det(sI - A) = sum(c[k] s^(n-k))`` (``c[0] = 1``)
    and ``adj(sI - A) = sum(M[k] s^(n-1-k))`` for ``k = 0..n-1``. The closure
    identity ``A @ M[-1] + c[-1] I = 0`` holds in exact arithmetic.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    eye = np.eye(n)
    c = np.zeros(n + 1)
    c[0] = 1.0
    M = [eye]
    for k in range(1, n + 1):
        AM = A @ M[-1]
        c[k] = -np.trace(AM) / k
        if k < n:
            M.append(AM + c[k] * eye)
    return c, M


def _trim(c):
    big = np.max(np.abs(c)) if c.size else 0.0
    if big == 0:
        return c[:0]
    keep = np.nonzero(np.abs(c) > TRIM_RTOL * big)[0]
    return c[keep[0]:]


def siso_numerator(sys: StateSpace) -> NumeratorPoly:
    """Numerator ``C adj(sI - A) B + D det(sI - A)`` in descending powers."""
    sys = check_system(sys)
    if sys.ninputs != 1 or sys.noutputs != 1:
        raise ValueError("siso_numerator needs a single-input single-output system")
    c, M = faddeev_leverrier(sys.A)
    b = sys.B[:, 0]
    cr = sys.C[0]
    d = sys.D[0, 0]
    num = np.zeros(c.size)
    num[0] = d
    num[1:] = [cr @ Mk @ b for Mk in M]
    num[1:] += d * c[1:]
    num = _trim(num)
    return NumeratorPoly(num, float(num[0]) if num.size else 0.0)


def square_mimo_zero_roots(sys: StateSpace, tol: Tolerances = DEFAULT_TOL) -> CMultiset:
    """Roots of ``det Z(lam)`` for a square Rosenbrock matrix.

    The determinant has degree at most ``n = nstates``; it is sampled at the
    ``n + 1`` roots of unity on a circle, where the Vandermonde system is a
    discrete Fourier transform. The circle is sized first from the spectrum
    of ``A`` and then from the roots of that first pass.

    Raises
    ------
    DegeneratePencil
        If the determinant vanishes at every sample.
    """
    sys = check_system(sys)
    if sys.ninputs != sys.noutputs:
        raise ValueError("square_mimo_zero_roots needs as many inputs as outputs")
    # spectral radius, not ||A||: a badly scaled basis inflates the norm
    radius = 1.0 + np.max(np.abs(np.linalg.eigvals(sys.A)))
    roots = _det_roots(sys, radius)
    if roots.size:
        # second pass on a circle sized to the roots themselves
        roots = _det_roots(sys, max(1.0, np.max(np.abs(roots))))
    return CMultiset.from_values(roots, tol)


def _det_roots(sys: StateSpace, radius: float) -> np.ndarray:
    n = sys.nstates
    k = n + 1
    nodes = np.exp(2j * np.pi * np.arange(k) / k)
    top_right = np.vstack([sys.B, -sys.D])
    dets = np.empty(k, dtype=complex)
    for j, w in enumerate(nodes):
        lam = radius * w
        Z = np.hstack([np.vstack([lam * np.eye(n) - sys.A, sys.C]), top_right])
        dets[j] = np.linalg.det(Z)
    if np.max(np.abs(dets)) == 0:
        raise DegeneratePencil("Rosenbrock determinant vanishes identically")
    # det(Z(radius t)) = sum p_q t^q; sampled at t = w^j this is an inverse DFT
    p = np.fft.fft(dets) / k
    coeffs = p.real[::-1]
    if np.max(np.abs(coeffs)) <= 1e-12 * np.max(np.abs(dets)):
        raise DegeneratePencil("Rosenbrock determinant vanishes identically")
    coeffs = _trim(coeffs)
    if coeffs.size <= 1:
        return np.empty(0, dtype=complex)
    return radius * np.roots(coeffs)
