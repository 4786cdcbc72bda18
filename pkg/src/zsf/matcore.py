"""Dense matrix utilities: rank, null spaces, eigenvalues and polynomial roots.

Everything here works on plain ``numpy`` arrays. The :class:`Tolerances`
bundle is threaded through the rest of the package so that every
"is this zero?" decision uses the same thresholds.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import linear_sum_assignment

from .exceptions import NullSpaceError, SingularMatrixError

__all__ = [
    "Tolerances",
    "CMultiset",
    "as_matrix",
    "numerical_rank",
    "left_null_basis",
    "row_null_basis",
    "eigenvalues",
    "companion",
    "poly_roots",
    "solve_linear",
    "match_multisets",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Tolerances:
    """Thresholds shared by all numerical decisions.

    Parameters
    ----------
    rank_rtol : float or None
        Relative singular-value cutoff for rank decisions. ``None`` selects
        ``max(rows, cols) * eps`` for each matrix.
    zero_atol : float
        Absolute threshold below which a (scaled) Markov parameter or matrix
        residual counts as zero.
    match_tol : float
        Tolerance for pairing complex values, e.g. merging numerically split
        multiple eigenvalues or comparing zero sets.
    """

    rank_rtol: float | None = None
    zero_atol: float = 1e-9
    match_tol: float = 1e-6

    def __post_init__(self):
        if self.rank_rtol is not None and not 0 < self.rank_rtol < 1:
            raise ValueError(f"rank_rtol must lie in (0, 1), got {self.rank_rtol}")
        if not self.zero_atol > 0:
            raise ValueError(f"zero_atol must be positive, got {self.zero_atol}")
        if not self.match_tol > 0:
            raise ValueError(f"match_tol must be positive, got {self.match_tol}")

    def rtol_for(self, shape) -> float:
        if self.rank_rtol is not None:
            return self.rank_rtol
        return max(shape) * _EPS

    def updated(self, **overrides) -> "Tolerances":
        """Return a copy with the non-``None`` overrides applied."""
        overrides = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **overrides)


DEFAULT_TOL = Tolerances()


def as_matrix(m, name="matrix", dtype=float) -> np.ndarray:
    """Coerce ``m`` to a finite 2-D array, raising ``ValueError`` otherwise."""
    arr = np.array(m, dtype=dtype)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


@dataclass(frozen=True)
class CMultiset:
    """Multiset of complex numbers stored as distinct values with multiplicities.

    Values are kept sorted by real part, then imaginary part.
    """

    values: tuple = ()
    multiplicities: tuple = ()

    def __post_init__(self):
        if len(self.values) != len(self.multiplicities):
            raise ValueError("values and multiplicities differ in length")
        if any(int(m) < 1 for m in self.multiplicities):
            raise ValueError("multiplicities must be >= 1")

    @classmethod
    def from_values(cls, values, tol: Tolerances = DEFAULT_TOL) -> "CMultiset":
        """Aggregate raw (possibly numerically split) values into a multiset.

        Imaginary parts below ``match_tol * (1 + |Re|)`` are snapped to zero,
        then values closer than ``match_tol * (1 + |z|)`` are clustered
        (single linkage) and replaced by the cluster mean.
        """
        z = np.asarray(values, dtype=complex).ravel()
        if z.size == 0:
            return cls()
        small_imag = np.abs(z.imag) < tol.match_tol * (1 + np.abs(z.real))
        z = np.where(small_imag, z.real + 0j, z)

        # union-find single-linkage clustering
        parent = list(range(z.size))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(z.size):
            for j in range(i + 1, z.size):
                scale = 1 + max(abs(z[i]), abs(z[j]))
                if abs(z[i] - z[j]) <= tol.match_tol * scale:
                    parent[find(i)] = find(j)

        clusters: dict[int, list[int]] = {}
        for i in range(z.size):
            clusters.setdefault(find(i), []).append(i)
        pairs = []
        for members in clusters.values():
            centre = z[members].mean()
            if abs(centre.imag) < tol.match_tol * (1 + abs(centre.real)):
                centre = complex(centre.real, 0.0)
            pairs.append((complex(centre), len(members)))
        pairs.sort(key=lambda p: (p[0].real, p[0].imag))
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    def __len__(self):
        return int(sum(self.multiplicities))

    def __iter__(self):
        return iter(self.expanded())

    def expanded(self) -> np.ndarray:
        """All members, repeated by multiplicity, in sorted order."""
        if not self.values:
            return np.zeros(0, dtype=complex)
        return np.repeat(np.array(self.values, dtype=complex), self.multiplicities)

    def pairs(self):
        return list(zip(self.values, self.multiplicities))

    def is_real(self) -> bool:
        return all(v.imag == 0 for v in self.values)


def match_multisets(a, b, tol: float) -> bool:
    """True if ``a`` and ``b`` pair up one-to-one within ``tol * (1 + |b|)``."""
    za = a.expanded() if isinstance(a, CMultiset) else np.asarray(a, complex).ravel()
    zb = b.expanded() if isinstance(b, CMultiset) else np.asarray(b, complex).ravel()
    if za.size != zb.size:
        return False
    if za.size == 0:
        return True
    cost = np.abs(za[:, None] - zb[None, :])
    rows, cols = linear_sum_assignment(cost)
    return bool(np.all(cost[rows, cols] <= tol * (1 + np.abs(zb[cols]))))


def numerical_rank(m, tol: Tolerances = DEFAULT_TOL) -> int:
    """Count singular values above ``rtol * sigma_max``."""
    m = np.asarray(m)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol.rtol_for(m.shape) * s[0]))


def row_null_basis(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal rows spanning ``{v : m @ v = 0}``; may have zero rows."""
    m = np.asarray(m)
    n = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(n)
    _, _, vh = np.linalg.svd(m, full_matrices=True)
    r = numerical_rank(m, tol)
    return vh[r:].conj()


def left_null_basis(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal rows ``N`` with ``N @ m = 0``.

    For ``m`` of shape ``(n, k)`` and rank ``r`` the result is ``(n - r, n)``.

    Raises
    ------
    NullSpaceError
        If ``m`` has full row rank, so the left null space is trivial.
    """
    m = np.asarray(m)
    basis = row_null_basis(m.T, tol)
    if basis.shape[0] == 0:
        raise NullSpaceError(f"matrix of shape {m.shape} has full row rank")
    return basis


def eigenvalues(m, tol: Tolerances = DEFAULT_TOL) -> CMultiset:
    """Multispectrum of a square matrix."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"eigenvalues need a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        return CMultiset()
    return CMultiset.from_values(np.linalg.eigvals(m), tol)


def _trim(coeffs, rel: float) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float).ravel()
    if c.size == 0:
        return c
    big = np.max(np.abs(c))
    if big == 0:
        return c[:0]
    keep = np.nonzero(np.abs(c) > rel * big)[0]
    return c[keep[0]:]


def companion(coeffs) -> np.ndarray:
    """Companion matrix of a polynomial given in descending coefficients.

    The last row holds ``-a_0, ..., -a_{n-1}`` of the monic normalisation,
    matching the controllable canonical layout.
    """
    c = np.asarray(coeffs, dtype=float).ravel()
    c = c / c[0]
    n = c.size - 1
    comp = np.zeros((n, n))
    comp[:-1, 1:] = np.eye(n - 1)
    comp[-1, :] = -c[:0:-1]
    return comp


def poly_roots(coeffs, tol: Tolerances = DEFAULT_TOL) -> CMultiset:
    """Roots of a real polynomial (descending coefficients) via its companion matrix."""
    c = np.asarray(coeffs, dtype=float).ravel()
    if c.size == 0 or not np.any(c):
        raise ValueError("the zero polynomial has no well-defined roots")
    c = _trim(c, tol.zero_atol)
    if c.size <= 1:
        return CMultiset()
    return eigenvalues(companion(c), tol)


def solve_linear(a, b, tol: Tolerances = DEFAULT_TOL):
    """Solve ``a @ x = b`` for square, numerically nonsingular ``a``.

    Returns
    -------
    x : ndarray
    residual : float
        ``||a x - b|| / ||b||`` (Frobenius norms).
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"solve_linear needs a square matrix, got {a.shape}")
    if numerical_rank(a, tol) < a.shape[0]:
        raise SingularMatrixError(
            f"matrix of size {a.shape[0]} is numerically singular",
            cond=float(np.linalg.cond(a)),
        )
    x = np.linalg.solve(a, b)
    nb = np.linalg.norm(b)
    residual = float(np.linalg.norm(a @ x - b) / nb) if nb else 0.0
    return x, residual
