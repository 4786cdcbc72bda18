"""Linear normal form and zero dynamics.

For ``f(x) = A x``, ``g(x) = B`` and ``h(x) = C x`` the Lie derivatives of
the nonlinear construction reduce to matrix powers, so ``alpha(x)`` is the
stack of ``C_i A^rho_i x`` and ``beta`` the stack of ``C_i A^(rho_i-1) B``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateStack, NonzeroFeedthrough
from .matcore import DEFAULT_TOL, Tolerances, numerical_rank
from .sysmodel import RelativeDegree, StateSpace, check_system, relative_degree
from .zsform import build_cbar, select_bz

__all__ = ["NormalForm", "ZeroDynamics", "normal_form", "zero_dynamics",
           "chain_matrices"]


@dataclass(frozen=True, eq=False)
class NormalForm:
    B_n: np.ndarray
    R_eta: np.ndarray
    R_xi: np.ndarray
    zero_dynamics_A: np.ndarray
    coupling: np.ndarray
    A_c: np.ndarray
    B_c: np.ndarray
    alpha_row: np.ndarray
    beta: np.ndarray
    rho: RelativeDegree

    @property
    def l_z(self) -> int:
        return self.B_n.shape[0]

    def xi_blocks(self):
        """``(A_xi_eta, A_xi, B_xi)`` of the input-output chain."""
        return (self.B_c @ self.alpha_row @ self.R_eta,
                self.A_c + self.B_c @ self.alpha_row @ self.R_xi,
                self.B_c @ self.beta)


@dataclass(frozen=True, eq=False)
class ZeroDynamics:
    A: np.ndarray
    coupling: np.ndarray


def chain_matrices(rho: RelativeDegree):
    """Block-diagonal integrator chains ``A_c`` and terminal selector ``B_c``."""
    n = rho.total
    A_c = np.zeros((n, n))
    B_c = np.zeros((n, len(rho.per_output)))
    start = 0
    for i, r in enumerate(rho.per_output):
        A_c[start:start + r - 1, start + 1:start + r] += np.eye(r - 1)
        B_c[start + r - 1, i] = 1.0
        start += r
    return A_c, B_c


def normal_form(sys: StateSpace, b_n=None, tol: Tolerances = DEFAULT_TOL) -> NormalForm:
    """Normal form with internal coordinates ``eta = B_n x``.

    When ``b_n`` is omitted the zero-subspace rows from
    :func:`~zsf.zsform.select_bz` are used, making ``zero_dynamics_A`` equal
    to the zero-subspace ``A_eta``. A supplied ``b_n`` must satisfy
    ``b_n @ B = 0`` and complete ``C-bar`` to a basis.
    """
    sys = check_system(sys)
    if not sys.is_strictly_proper(tol):
        raise NonzeroFeedthrough("normal form needs D = 0")
    rho = relative_degree(sys, tol)
    l_z = sys.nstates - rho.total
    cbar = build_cbar(sys, rho)
    if b_n is None:
        b_n = select_bz(sys, cbar, l_z, tol, rho=rho).B_z
    else:
        b_n = np.atleast_2d(np.asarray(b_n, dtype=float)).reshape(-1, sys.nstates)
        if b_n.shape[0] != l_z:
            raise DegenerateStack(f"B_n needs {l_z} rows, got {b_n.shape[0]}")
        scale = tol.zero_atol * max(1.0, np.linalg.norm(b_n) * np.linalg.norm(sys.B))
        if l_z and np.max(np.abs(b_n @ sys.B)) > scale:
            raise ValueError("B_n does not annihilate B")

    stack = np.vstack([b_n, cbar])
    if numerical_rank(stack, tol) < sys.nstates:
        raise DegenerateStack("[B_n; C-bar] is singular")
    R = np.linalg.inv(stack)
    R_eta, R_xi = R[:, :l_z], R[:, l_z:]

    A_c, B_c = chain_matrices(rho)
    alpha_row = np.vstack([
        sys.C[i] @ np.linalg.matrix_power(sys.A, r) for i, r in enumerate(rho.per_output)
    ])
    beta = np.vstack([
        sys.C[i] @ np.linalg.matrix_power(sys.A, r - 1) @ sys.B
        for i, r in enumerate(rho.per_output)
    ])
    return NormalForm(
        B_n=b_n, R_eta=R_eta, R_xi=R_xi,
        zero_dynamics_A=b_n @ sys.A @ R_eta,
        coupling=b_n @ sys.A @ R_xi,
        A_c=A_c, B_c=B_c, alpha_row=alpha_row, beta=beta, rho=rho,
    )


def zero_dynamics(sys: StateSpace, tol: Tolerances = DEFAULT_TOL) -> ZeroDynamics:
    """Internal dynamics left when the output is held at zero."""
    nf = normal_form(sys, tol=tol)
    return ZeroDynamics(nf.zero_dynamics_A, nf.coupling)
