"""Invariant zeros as eigenvalues of the zero-subspace block ``A_eta``.

SISO and square systems read the zeros straight off ``mspec(A_eta)``.
Wide systems produce extra candidates, which are filtered by checking
where the Rosenbrock system matrix loses rank.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import TallSystemUnsupported
from .matcore import DEFAULT_TOL, CMultiset, Tolerances, eigenvalues, numerical_rank
from .sysmodel import StateSpace, SystemShape, check_system, classify, dynamic_extension
from .zsform import ZeroSubspaceForm, transform

__all__ = [
    "RosenbrockPencil",
    "RankDrop",
    "ZeroCheck",
    "ZeroSet",
    "VerificationReport",
    "invariant_zeros",
    "rank_drop_test",
    "verify_zero_set",
    "generic_rank",
]

N_PROBES = 3


@dataclass(frozen=True, eq=False)
class RosenbrockPencil:
    """``lam -> [[lam I - A, B], [C, -D]]``."""

    sys: StateSpace

    def evaluate(self, lam) -> np.ndarray:
        s = self.sys
        lam = complex(lam)
        dtype = complex if lam.imag else float
        lam = lam if lam.imag else lam.real
        top = np.hstack([lam * np.eye(s.nstates) - s.A, s.B])
        bottom = np.hstack([s.C, -s.D])
        return np.vstack([top, bottom]).astype(dtype)

    __call__ = evaluate

    @property
    def shape(self):
        s = self.sys
        return s.nstates + s.noutputs, s.nstates + s.ninputs


@dataclass(frozen=True)
class RankDrop:
    rank_at_lambda: int
    generic_rank: int
    drops: bool


@dataclass(frozen=True)
class ZeroCheck:
    value: complex
    multiplicity: int
    rank_nominal: int
    rank_at_zero: int
    confirmed: bool


@dataclass(frozen=True, eq=False)
class ZeroSet:
    zeros: CMultiset
    candidates: CMultiset
    checks: tuple
    shape: SystemShape
    extended: bool
    form: ZeroSubspaceForm | None = None
    notes: tuple = ()

    def __len__(self):
        return len(self.zeros)

    def as_dict(self) -> dict:
        def pairs(ms):
            return [[float(z.real), float(z.imag)] for z in ms.expanded()]

        return {
            "zeros": pairs(self.zeros),
            "candidates": pairs(self.candidates),
            "checks": [
                {
                    "value": [float(c.value.real), float(c.value.imag)],
                    "multiplicity": c.multiplicity,
                    "rank_nominal": c.rank_nominal,
                    "rank_at_zero": c.rank_at_zero,
                    "confirmed": c.confirmed,
                }
                for c in self.checks
            ],
            "shape": self.shape.value,
            "extended": self.extended,
            "notes": list(self.notes),
        }


def _rank_at(pencil, lam, tol, slack=0.0):
    """Rank with singular values up to ``rtol * sigma_max + slack`` discarded."""
    m = pencil.evaluate(lam)
    if slack == 0.0:
        return numerical_rank(m, tol)
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol.rtol_for(m.shape) * s[0] + slack))


def generic_rank(pencil: RosenbrockPencil, tol: Tolerances = DEFAULT_TOL,
                 avoid=(), seed=0) -> int:
    """Normal rank of the pencil, estimated from random probe points.

    Probes have moduli spread over ``[1, 10 max(1, ||A||)]`` and are redrawn
    if they land near any value in ``avoid``.
    """
    rng = np.random.default_rng(seed)
    top = 10 * max(1.0, np.linalg.norm(pencil.sys.A, 2))
    avoid = np.asarray(list(avoid), dtype=complex)
    moduli = np.geomspace(1.0, top, N_PROBES)
    best = 0
    for r in moduli:
        while True:
            lam = r * np.exp(2j * np.pi * rng.random())
            if avoid.size == 0 or np.min(np.abs(avoid - lam)) > 1e-3 * (1 + abs(lam)):
                break
        best = max(best, _rank_at(pencil, lam, tol))
    return best


def rank_drop_test(pencil: RosenbrockPencil, lam, tol: Tolerances = DEFAULT_TOL,
                   nominal: int | None = None) -> RankDrop:
    """Does the pencil lose rank at ``lam``?

    ``lam`` is typically a computed eigenvalue carrying an error of order
    ``match_tol``. Since ``d Z / d lam`` has unit 2-norm, Weyl's inequality
    bounds the resulting shift of each singular value by ``|d lam|``, so
    singular values up to ``match_tol * (1 + |lam|)`` above the usual
    cutoff are treated as zero.
    """
    if nominal is None:
        nominal = generic_rank(pencil, tol, avoid=[lam])
    slack = tol.match_tol * (1 + abs(lam))
    r = _rank_at(pencil, lam, tol, slack)
    return RankDrop(rank_at_lambda=r, generic_rank=nominal, drops=r < nominal)


def _check_all(pencil, candidates: CMultiset, tol) -> tuple:
    nominal = generic_rank(pencil, tol, avoid=candidates.values)
    checks = []
    for value, mult in candidates.pairs():
        res = rank_drop_test(pencil, value, tol, nominal=nominal)
        checks.append(ZeroCheck(value, mult, res.generic_rank, res.rank_at_lambda,
                                res.drops))
    return tuple(checks)


def invariant_zeros(sys: StateSpace, tol: Tolerances = DEFAULT_TOL) -> ZeroSet:
    """Finite invariant zeros of ``sys``.

    Systems with nonzero feedthrough are dynamically extended first. For
    wide systems the eigenvalues of ``A_eta`` are only candidates, and the
    ones where the Rosenbrock matrix keeps its generic rank are discarded.

    Raises
    ------
    TallSystemUnsupported
        If ``sys`` has more outputs than inputs.
    """
    sys = check_system(sys)
    shape = classify(sys)
    if shape is SystemShape.TALL:
        raise TallSystemUnsupported(
            f"tall system ({sys.ninputs} inputs, {sys.noutputs} outputs)"
        )
    extended = not sys.is_strictly_proper(tol)
    work = dynamic_extension(sys) if extended else sys
    form = transform(work, tol)
    candidates = eigenvalues(form.A_eta, tol)
    checks = _check_all(RosenbrockPencil(sys), candidates, tol)
    notes = []
    if extended:
        notes.append("dynamic extension applied")
    if shape is SystemShape.WIDE:
        kept = [(c.value, c.multiplicity) for c in checks if c.confirmed]
        zeros = CMultiset(tuple(v for v, _ in kept), tuple(m for _, m in kept))
        notes.append("wide system: candidates filtered by Rosenbrock rank drop; "
                     "a spurious candidate at a rank-drop point cannot be told apart")
    else:
        zeros = candidates
    return ZeroSet(zeros, candidates, checks, shape, extended, form, tuple(notes))


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple
    unconfirmed: tuple = field(default=())

    @property
    def ok(self) -> bool:
        return not self.unconfirmed


def verify_zero_set(sys: StateSpace, zs, tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """Run the rank-drop test on every member of ``zs``.

    ``zs`` may be a :class:`ZeroSet`, a :class:`CMultiset` or any iterable of
    complex values.
    """
    sys = check_system(sys)
    if isinstance(zs, ZeroSet):
        zs = zs.zeros
    if not isinstance(zs, CMultiset):
        zs = CMultiset.from_values(list(zs), tol)
    checks = _check_all(RosenbrockPencil(sys), zs, tol)
    bad = tuple(c.value for c in checks if not c.confirmed)
    return VerificationReport(checks, bad)
