"""Linear state-space model, relative degree and dynamic extension."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import NoRelativeDegree, NonzeroFeedthrough
from .matcore import DEFAULT_TOL, Tolerances, as_matrix

__all__ = [
    "StateSpace",
    "RelativeDegree",
    "SystemShape",
    "check_system",
    "relative_degree",
    "dynamic_extension",
    "classify",
    "controllable_canonical",
    "similarity",
]


class SystemShape(str, enum.Enum):
    SISO = "SISO"
    SQUARE = "square-MIMO"
    WIDE = "wide-MIMO"
    TALL = "tall-MIMO"


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Real state-space realization ``(A, B, C, D)``.

    ``D`` defaults to zeros. Arrays are copied and made read-only.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray | None = None

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        B = as_matrix(self.B, "B")
        C = as_matrix(self.C, "C")
        nx = A.shape[0]
        if A.shape != (nx, nx) or nx < 1:
            raise ValueError(f"A must be square and nonempty, got {A.shape}")
        if B.shape[0] != nx:
            # accept a flat vector meant as a column
            if B.shape == (1, nx):
                B = B.T
            else:
                raise ValueError(f"B must have {nx} rows, got {B.shape}")
        if C.shape[1] != nx:
            raise ValueError(f"C must have {nx} columns, got {C.shape}")
        nu, ny = B.shape[1], C.shape[0]
        if nu < 1 or ny < 1:
            raise ValueError("need at least one input and one output")
        if self.D is None:
            D = np.zeros((ny, nu))
        else:
            D = as_matrix(self.D, "D")
            if D.shape == (1, 1) and (ny, nu) != (1, 1) and D[0, 0] == 0:
                D = np.zeros((ny, nu))
            if D.shape != (ny, nu):
                raise ValueError(f"D must have shape {(ny, nu)}, got {D.shape}")
        for name, arr in zip("ABCD", (A, B, C, D)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def nstates(self) -> int:
        return self.A.shape[0]

    @property
    def ninputs(self) -> int:
        return self.B.shape[1]

    @property
    def noutputs(self) -> int:
        return self.C.shape[0]

    @property
    def shape(self):
        return self.nstates, self.ninputs, self.noutputs

    def is_strictly_proper(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return bool(np.all(np.abs(self.D) <= tol.zero_atol))

    def markov(self, k: int) -> np.ndarray:
        """The Markov parameter ``C A^(k-1) B`` for ``k >= 1``."""
        return self.C @ np.linalg.matrix_power(self.A, k - 1) @ self.B

    def __repr__(self):
        nx, nu, ny = self.shape
        return f"StateSpace(nstates={nx}, ninputs={nu}, noutputs={ny})"


def check_system(sys) -> StateSpace:
    """Accept a :class:`StateSpace` or an ``(A, B, C[, D])`` tuple."""
    if isinstance(sys, StateSpace):
        return sys
    if isinstance(sys, dict):
        return StateSpace(sys["A"], sys["B"], sys["C"], sys.get("D"))
    if isinstance(sys, (tuple, list)) and len(sys) in (3, 4):
        return StateSpace(*sys)
    # duck-type objects such as python-control's StateSpace
    if all(hasattr(sys, k) for k in "ABC"):
        return StateSpace(sys.A, sys.B, sys.C, getattr(sys, "D", None))
    raise TypeError(f"cannot interpret {type(sys).__name__} as a state-space system")


@dataclass(frozen=True)
class RelativeDegree:
    per_output: tuple

    @property
    def total(self) -> int:
        return int(sum(self.per_output))

    def __int__(self):
        return self.total

    def terminal_rows(self) -> list[int]:
        """Indices into the stacked ``C-bar`` of each output's last row."""
        return list(np.cumsum(self.per_output) - 1)

    def leading_rows(self) -> list[int]:
        """Indices into the stacked ``C-bar`` of each output's ``C_i`` row."""
        return [int(i) for i in np.cumsum((0,) + tuple(self.per_output))[:-1]]


def relative_degree(sys: StateSpace, tol: Tolerances = DEFAULT_TOL) -> RelativeDegree:
    """Per-output relative degrees of a system whose ``D`` rows vanish.

    ``rho_i`` is the smallest ``k >= 1`` such that
    ``||C_i A^(k-1) B||_inf > zero_atol * ||C_i A^(k-1)|| ||B||``, i.e. the
    Markov parameter is nonzero relative to the rounding scale of the
    product that forms it.

    Raises
    ------
    NonzeroFeedthrough
        If any row of ``D`` is nonzero.
    NoRelativeDegree
        If some output has all Markov parameters zero up to ``k = nstates``.
    """
    sys = check_system(sys)
    bad = np.nonzero(np.any(np.abs(sys.D) > tol.zero_atol, axis=1))[0]
    if bad.size:
        raise NonzeroFeedthrough(f"outputs {bad.tolist()} have nonzero feedthrough")
    norm_b = np.linalg.norm(sys.B, 2)
    rho = []
    for i, ci in enumerate(sys.C):
        row = ci.copy()
        for k in range(1, sys.nstates + 1):
            threshold = tol.zero_atol * np.linalg.norm(row) * norm_b
            if np.max(np.abs(row @ sys.B)) > threshold:
                rho.append(k)
                break
            row = row @ sys.A
        else:
            raise NoRelativeDegree(f"output {i} is not affected by the input")
    return RelativeDegree(tuple(rho))


def dynamic_extension(sys: StateSpace) -> StateSpace:
    """Append one integrator per input, realising ``G(s)/s`` with ``D = 0``.

    The augmented state is ``[x; u_int]`` with ``A_aug = [[A, B], [0, 0]]``,
    ``B_aug = [0; I]`` and ``C_aug = [C, D]``. Finite invariant zeros are
    unchanged.
    """
    sys = check_system(sys)
    nx, nu, ny = sys.shape
    A = np.block([[sys.A, sys.B], [np.zeros((nu, nx + nu))]])
    B = np.vstack([np.zeros((nx, nu)), np.eye(nu)])
    C = np.hstack([sys.C, sys.D])
    return StateSpace(A, B, C, np.zeros((ny, nu)))


def classify(sys: StateSpace) -> SystemShape:
    sys = check_system(sys)
    nu, ny = sys.ninputs, sys.noutputs
    if nu == ny == 1:
        return SystemShape.SISO
    if nu == ny:
        return SystemShape.SQUARE
    return SystemShape.WIDE if nu > ny else SystemShape.TALL


def controllable_canonical(num, den) -> StateSpace:
    """Controllable canonical realization of ``num(s) / den(s)``.

    Coefficients are in descending powers of ``s``. An exactly proper
    transfer function produces a nonzero ``D`` from the polynomial division.
    """
    num = np.trim_zeros(np.atleast_1d(np.asarray(num, dtype=float)), "f")
    den = np.trim_zeros(np.atleast_1d(np.asarray(den, dtype=float)), "f")
    if den.size < 2:
        raise ValueError("denominator must have degree >= 1")
    if num.size == 0:
        num = np.zeros(1)
    n = den.size - 1
    if num.size - 1 > n:
        raise ValueError("improper transfer function: deg(num) > deg(den)")
    num = num / den[0]
    den = den / den[0]
    num = np.concatenate([np.zeros(n + 1 - num.size), num])
    d = num[0]
    rem = num[1:] - d * den[1:]  # s^(n-1) .. s^0
    A = np.zeros((n, n))
    A[:-1, 1:] = np.eye(n - 1)
    A[-1, :] = -den[:0:-1]
    B = np.zeros((n, 1))
    B[-1, 0] = 1.0
    C = rem[::-1].reshape(1, n)
    return StateSpace(A, B, C, [[d]])


def similarity(sys: StateSpace, P) -> StateSpace:
    """The system in coordinates ``x' = P x``: ``(P A P^-1, P B, C P^-1, D)``."""
    sys = check_system(sys)
    P = np.asarray(P, dtype=float)
    Pinv = np.linalg.inv(P)
    return StateSpace(P @ sys.A @ Pinv, P @ sys.B, sys.C @ Pinv, sys.D)
