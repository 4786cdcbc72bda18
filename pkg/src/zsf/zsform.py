"""Construction of the zero-subspace form ``(T A T^-1, T B, C T^-1)``.

The transformation stacks ``B_z`` (directions annihilating ``B``) on top of
the output derivative chain ``C-bar``. After the change of coordinates the
invariant zeros are the eigenvalues of the upper-left ``l_z x l_z`` block.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DegenerateStack,
    IllConditionedWarning,
    NonzeroFeedthrough,
    NullSpaceError,
    TallSystemUnsupported,
)
from .matcore import (
    DEFAULT_TOL,
    Tolerances,
    left_null_basis,
    numerical_rank,
    row_null_basis,
    solve_linear,
)
from .sysmodel import (
    RelativeDegree,
    StateSpace,
    SystemShape,
    check_system,
    classify,
    relative_degree,
)

__all__ = [
    "BzSelection",
    "ZeroSubspaceForm",
    "build_cbar",
    "select_bz",
    "transform",
    "structure_residuals",
    "COND_WARN",
]

COND_WARN = 1e12

FULL_NULL_SPACE = "full-null-space"
RANK_GREEDY = "rank-greedy"
WIDE_COMPLETION = "wide-completion"
USER_SUPPLIED = "user-supplied"


@dataclass(frozen=True, eq=False)
class BzSelection:
    """Rows spanning the zero subspace.

    ``n_null`` counts the leading rows of ``B_z`` that annihilate ``B``; for
    wide systems the remaining rows complete the basis and do not.
    """

    B_z: np.ndarray
    selection_method: str
    residual: float
    n_null: int


@dataclass(frozen=True, eq=False)
class ZeroSubspaceForm:
    T: np.ndarray
    S: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    l_z: int
    rho: RelativeDegree
    cond_T: float
    inverse_residual: float
    selection: BzSelection

    @property
    def A_eta(self):
        return self.A[: self.l_z, : self.l_z]

    @property
    def A_eta_xi(self):
        return self.A[: self.l_z, self.l_z:]

    @property
    def A_xi_eta(self):
        return self.A[self.l_z:, : self.l_z]

    @property
    def A_xi(self):
        return self.A[self.l_z:, self.l_z:]

    @property
    def B_xi(self):
        return self.B[self.l_z:]

    @property
    def C_xi(self):
        return self.C[:, self.l_z:]

    @property
    def S_eta(self):
        return self.S[:, : self.l_z]

    @property
    def S_xi(self):
        return self.S[:, self.l_z:]

    @property
    def B_z(self):
        return self.selection.B_z

    def as_dict(self) -> dict:
        """Plain-list view suitable for JSON output."""
        out = {
            "l_z": self.l_z,
            "rho": list(self.rho.per_output),
            "rho_total": self.rho.total,
            "cond_T": self.cond_T,
            "inverse_residual": self.inverse_residual,
            "selection_method": self.selection.selection_method,
            "bz_residual": self.selection.residual,
        }
        for name in ("T", "S", "A", "B", "C", "B_z", "A_eta", "A_eta_xi",
                     "A_xi_eta", "A_xi", "B_xi", "C_xi"):
            out[name] = getattr(self, name).tolist()
        out["structure_residuals"] = structure_residuals(self)
        return out


def build_cbar(sys: StateSpace, rho: RelativeDegree) -> np.ndarray:
    """Stack ``C_i, C_i A, ..., C_i A^(rho_i - 1)`` for each output in order."""
    sys = check_system(sys)
    rows = []
    for ci, r in zip(sys.C, rho.per_output):
        row = ci.copy()
        for _ in range(r):
            rows.append(row)
            row = row @ sys.A
    if not rows:
        return np.zeros((0, sys.nstates))
    return np.vstack(rows)


def _orth_rows(m, tol):
    """Orthonormal rows spanning the row space of ``m``."""
    if m.shape[0] == 0:
        return m
    _, _, vh = np.linalg.svd(m, full_matrices=False)
    return vh[: numerical_rank(m, tol)]


def select_bz(sys: StateSpace, cbar, l_z: int, tol: Tolerances = DEFAULT_TOL,
              rho: RelativeDegree | None = None) -> BzSelection:
    """Choose ``l_z`` rows completing ``cbar`` to a nonsingular ``T``.

    Candidates come from the left null space of ``B`` with the non-terminal
    ``C-bar`` rows (which already lie in it) projected out. When that space
    has exactly ``l_z`` dimensions it is returned whole. When it is larger,
    the ``l_z`` directions furthest from the row space of ``cbar`` are kept.
    For wide systems it is smaller, and the orthogonal complement of
    ``[N; C-bar]`` supplies the missing rows.

    Raises
    ------
    TallSystemUnsupported
        For systems with fewer inputs than outputs.
    DegenerateStack
        If ``[B_z; C-bar]`` cannot reach full rank.
    """
    sys = check_system(sys)
    cbar = np.asarray(cbar, dtype=float)
    nx = sys.nstates
    shape = classify(sys)
    if shape is SystemShape.TALL:
        raise TallSystemUnsupported(
            f"tall system ({sys.ninputs} inputs, {sys.noutputs} outputs): "
            "the zero-subspace transformation is singular"
        )
    if l_z < 0:
        raise DegenerateStack(f"total relative degree exceeds {nx} states")
    if rho is None:
        rho = relative_degree(sys, tol)

    try:
        null = left_null_basis(sys.B, tol)
    except NullSpaceError:
        null = np.zeros((0, nx))

    terminal = set(rho.terminal_rows())
    nonterminal = cbar[[i for i in range(cbar.shape[0]) if i not in terminal]]
    if null.shape[0]:
        coeff = row_null_basis(nonterminal @ null.T, tol)
        free = coeff @ null
    else:
        free = null

    if free.shape[0] == l_z:
        bz, method = free, FULL_NULL_SPACE
    elif free.shape[0] > l_z:
        q = _orth_rows(cbar, tol)
        remainder = free - (free @ q.T) @ q
        u, _, _ = np.linalg.svd(remainder, full_matrices=False)
        bz, method = u[:, :l_z].T @ free, RANK_GREEDY
        bz = _orth_rows(bz, tol) if bz.shape[0] else bz
    elif shape is SystemShape.WIDE:
        need = l_z - free.shape[0]
        complement = row_null_basis(np.vstack([null, cbar]), tol)
        if complement.shape[0] < need:
            raise DegenerateStack(
                f"wide completion needs {need} rows, complement has "
                f"{complement.shape[0]}"
            )
        bz, method = np.vstack([free, complement[:need]]), WIDE_COMPLETION
    else:
        raise DegenerateStack(
            f"null space offers {free.shape[0]} free directions, need {l_z}"
        )

    n_null = min(free.shape[0], l_z)
    stack = np.vstack([bz, cbar])
    if stack.shape[0] != nx or numerical_rank(stack, tol) < nx:
        raise DegenerateStack(
            "[B_z; C-bar] is rank deficient (singular decoupling matrix?)"
        )
    residual = float(np.max(np.abs(bz[:n_null] @ sys.B))) if n_null else 0.0
    return BzSelection(bz, method, residual, n_null)


def _user_selection(sys, bz, cbar, tol):
    bz = np.atleast_2d(np.asarray(bz, dtype=float))
    stack = np.vstack([bz, cbar])
    if stack.shape != (sys.nstates, sys.nstates) or numerical_rank(stack, tol) < sys.nstates:
        raise DegenerateStack("supplied B_z does not complete C-bar to a basis")
    annihilates = np.max(np.abs(bz @ sys.B), axis=1) <= tol.zero_atol * (
        1 + np.linalg.norm(sys.B)) if bz.shape[0] else np.zeros(0, bool)
    n_null = int(np.argmin(annihilates)) if not annihilates.all() else bz.shape[0]
    residual = float(np.max(np.abs(bz[:n_null] @ sys.B))) if n_null else 0.0
    return BzSelection(bz, USER_SUPPLIED, residual, n_null)


def transform(sys: StateSpace, tol: Tolerances = DEFAULT_TOL,
              b_z=None) -> ZeroSubspaceForm:
    """Zero-subspace form of a strictly proper system.

    Parameters
    ----------
    sys : StateSpace
        Must have ``D = 0``; apply :func:`~zsf.sysmodel.dynamic_extension`
        first otherwise.
    tol : Tolerances
    b_z : array_like, optional
        Explicit ``l_z x l_x`` zero-subspace rows. Selected automatically
        when omitted.
    """
    sys = check_system(sys)
    if not sys.is_strictly_proper(tol):
        raise NonzeroFeedthrough("transform needs D = 0; apply dynamic_extension")
    rho = relative_degree(sys, tol)
    l_z = sys.nstates - rho.total
    cbar = build_cbar(sys, rho)
    if b_z is None:
        selection = select_bz(sys, cbar, l_z, tol, rho=rho)
    else:
        selection = _user_selection(sys, b_z, cbar, tol)

    T = np.vstack([selection.B_z, cbar])
    # unit-norm rows for the solve; T = diag(scale) @ Tn so S = Tn^-1 / scale
    scale = np.linalg.norm(T, axis=1)
    scale[scale == 0] = 1.0
    Sn, _ = solve_linear(T / scale[:, None], np.eye(sys.nstates), tol)
    S = Sn / scale[None, :]
    cond_T = float(np.linalg.cond(T))
    if cond_T > COND_WARN:
        warnings.warn(f"transformation matrix condition number {cond_T:.3g}",
                      IllConditionedWarning, stacklevel=2)
    inv_res = float(np.linalg.norm(T @ S - np.eye(sys.nstates)))
    return ZeroSubspaceForm(
        T=T, S=S,
        A=T @ sys.A @ S, B=T @ sys.B, C=sys.C @ S,
        l_z=l_z, rho=rho, cond_T=cond_T, inverse_residual=inv_res,
        selection=selection,
    )


def structure_residuals(form: ZeroSubspaceForm) -> dict:
    """Largest deviations from the sparse structure of the form.

    Keys
    ----
    xi_eta
        Non-terminal rows of ``A_xi_eta`` (should be zero).
    xi_shift
        Non-terminal rows of ``A_xi`` against the shifted identity.
    b_sparse
        Rows of ``TB`` that must vanish: the null-space part of ``B_z`` and
        the non-terminal ``xi`` rows.
    c_selector
        ``C T^-1`` against the unit rows picking each output's first ``xi``.
    """
    l_z, rho = form.l_z, form.rho
    nrho = rho.total
    terminal = set(rho.terminal_rows())
    nonterm = [i for i in range(nrho) if i not in terminal]

    xi_eta = form.A_xi_eta[nonterm] if nonterm else np.zeros((0, l_z))
    shift = np.zeros((nrho, nrho))
    for i in nonterm:
        shift[i, i + 1] = 1.0
    xi_shift = (form.A_xi - shift)[nonterm] if nonterm else np.zeros((0, nrho))

    zero_b_rows = list(range(form.selection.n_null)) + [l_z + i for i in nonterm]
    b_sparse = form.B[zero_b_rows]

    selector = np.zeros_like(form.C)
    for out, row in enumerate(rho.leading_rows()):
        selector[out, l_z + row] = 1.0
    c_sel = form.C - selector

    def mx(m):
        return float(np.max(np.abs(m))) if m.size else 0.0

    return {
        "xi_eta": mx(xi_eta),
        "xi_shift": mx(xi_shift),
        "b_sparse": mx(b_sparse),
        "c_selector": mx(c_sel),
        "norm_A": float(np.linalg.norm(form.A, 2)),
    }
