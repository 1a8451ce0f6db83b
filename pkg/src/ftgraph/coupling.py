"""Vertex couplings on a star graph and their scattering matrices.

Two parameterizations are supported:

* ``CouplingST`` -- the scale-invariant family in ST-form,
  ``[[I, T], [0, 0]] Psi'(0) = [[0, 0], [-T^dagger, I]] Psi(0)``, with a rank
  split ``m`` and a complex ``m x (n-m)`` matrix ``T``.
* ``CouplingAB`` -- a general boundary condition ``A Psi(0) + B Psi'(0) = 0``.

Indices are 0-based in storage. The conventional labelling of the columns of
``T`` by ``m+1..n`` is available only through :meth:`CouplingST.t`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from . import tolerance
from .errors import (
    DegenerateRankError,
    DimensionError,
    InvalidBoundaryError,
    NonFiniteError,
    PreconditionError,
    SingularSystemError,
)


def _frozen(a, dtype=complex):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


def max_dist(a, b):
    """Max-entry distance between two arrays."""
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))


@dataclass(frozen=True, eq=False)
class CouplingST:
    """Scale-invariant coupling of degree ``n`` in ST-form.

    ``perm`` optionally relabels the edges: physical edge ``i`` occupies slot
    ``perm[i]`` of the ST-form, so ``S_phys[i, j] = S_st[perm[i], perm[j]]``.
    It is ``None`` for the plain ST-form ordering.
    """

    n: int
    m: int
    T: np.ndarray
    perm: tuple[int, ...] | None = field(default=None)

    def __post_init__(self):
        T = np.asarray(self.T, dtype=complex)
        if T.ndim == 1:
            # a bare vector is a single row when m == 1, else a single column
            T = T.reshape(1, -1) if self.m == 1 else T.reshape(-1, 1)
        object.__setattr__(self, "T", _frozen(T))
        if self.perm is not None:
            object.__setattr__(self, "perm", tuple(int(p) for p in self.perm))

    def t(self, j, l):
        """Entry ``t_{jl}`` with row label ``j in 1..m``, column label ``l in m+1..n``."""
        if not (1 <= j <= self.m and self.m + 1 <= l <= self.n):
            raise IndexError(f"t_({j},{l}) outside rows 1..{self.m}, columns {self.m + 1}..{self.n}")
        return complex(self.T[j - 1, l - self.m - 1])

    @property
    def perm_matrix(self):
        """Permutation matrix ``P`` with ``S_phys = P^T S_st P``."""
        P = np.zeros((self.n, self.n))
        perm = self.perm if self.perm is not None else range(self.n)
        for i, slot in enumerate(perm):
            P[slot, i] = 1.0
        return P


@dataclass(frozen=True, eq=False)
class CouplingAB:
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", _frozen(self.A))
        object.__setattr__(self, "B", _frozen(self.B))

    @property
    def n(self):
        return self.A.shape[0]


@dataclass(frozen=True, eq=False)
class ScatteringMatrix:
    S: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "S", _frozen(self.S))

    @property
    def n(self):
        return self.S.shape[0]

    def unitarity_defect(self):
        return max_dist(self.S.conj().T @ self.S, np.eye(self.n))

    def hermiticity_defect(self):
        return max_dist(self.S, self.S.conj().T)


def validate_st(coupling):
    n, m, T = coupling.n, coupling.m, coupling.T
    if n < 2:
        raise DegenerateRankError(f"degree n={n} must be at least 2")
    if not 1 <= m <= n - 1:
        raise DegenerateRankError(f"rank split m={m} must satisfy 1 <= m <= n-1 = {n - 1}")
    if T.shape != (m, n - m):
        raise DimensionError(f"T has shape {T.shape}, expected {(m, n - m)}")
    if not np.all(np.isfinite(T)):
        raise NonFiniteError("T contains NaN or Inf entries")
    if coupling.perm is not None and sorted(coupling.perm) != list(range(n)):
        raise DimensionError(f"perm {coupling.perm} is not a permutation of 0..{n - 1}")
    return coupling


def validate_ab(coupling, tol=None):
    tol = tolerance.algebraic(tol)
    A, B = coupling.A, coupling.B
    n = A.shape[0]
    if A.shape != (n, n) or B.shape != (n, n):
        raise DimensionError(f"A and B must both be square of the same size, got {A.shape}, {B.shape}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B))):
        raise NonFiniteError("A or B contains NaN or Inf entries")
    if np.linalg.matrix_rank(np.hstack([A, B])) != n:
        raise InvalidBoundaryError("rank(A|B) != n")
    AB = A @ B.conj().T
    if max_dist(AB, AB.conj().T) > tol * max(1.0, np.abs(AB).max()):
        raise InvalidBoundaryError("A B^dagger is not Hermitian")
    return coupling


def st_to_ab(coupling):
    """Boundary matrices ``(A, B)`` of an ST-form coupling.

    ``A = [[0, 0], [-T^dagger, I]]`` and ``B = [[I, T], [0, 0]]``, with
    columns permuted by ``perm`` when present.
    """
    validate_st(coupling)
    n, m, T = coupling.n, coupling.m, coupling.T
    A = np.zeros((n, n), dtype=complex)
    B = np.zeros((n, n), dtype=complex)
    A[m:, :m] = -T.conj().T
    A[m:, m:] = np.eye(n - m)
    B[:m, :m] = np.eye(m)
    B[:m, m:] = T
    if coupling.perm is not None:
        P = coupling.perm_matrix
        A, B = A @ P, B @ P
    return CouplingAB(A, B)


def _spd_solve(M, rhs):
    # M = I + X X^dagger is Hermitian positive definite; cholesky failing is a bug
    c, lower = linalg.cho_factor(M)
    return linalg.cho_solve((c, lower), rhs)


def ft_scattering(coupling):
    """Momentum-independent scattering matrix of an ST-form coupling."""
    validate_st(coupling)
    m, T = coupling.m, coupling.T
    q = coupling.n - m
    TTh = T @ T.conj().T
    ThT = T.conj().T @ T
    Im, Iq = np.eye(m), np.eye(q)
    upper = _spd_solve(Im + TTh, np.hstack([Im - TTh, 2 * T]))
    lower = _spd_solve(Iq + ThT, np.hstack([2 * T.conj().T, -(Iq - ThT)]))
    S = np.vstack([upper, lower])
    if coupling.perm is not None:
        p = np.asarray(coupling.perm)
        S = S[np.ix_(p, p)]
    return ScatteringMatrix(S)


def ks_scattering(coupling, k):
    """``S(k) = -(A + ikB)^{-1} (A - ikB)`` for a general coupling."""
    if not k > 0:
        raise PreconditionError(f"momentum k={k} must be positive")
    A, B = coupling.A, coupling.B
    lhs = A + 1j * k * B
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        lu, piv = linalg.lu_factor(lhs, check_finite=True)
    rcond = np.min(np.abs(np.diag(lu))) / max(np.max(np.abs(np.diag(lu))), np.finfo(float).tiny)
    if rcond < 1e-14:
        cond = np.linalg.cond(lhs)
        raise SingularSystemError(f"A + ikB is singular at k={k} (cond ~ {cond:.3g})", cond)
    return ScatteringMatrix(-linalg.lu_solve((lu, piv), A - 1j * k * B))


def is_k_independent(coupling, k_samples, tol=None):
    tol = tolerance.algebraic(tol)
    ks = sorted(set(float(k) for k in k_samples))
    if len(ks) < 2:
        raise PreconditionError("need at least two distinct momenta")
    mats = [ks_scattering(coupling, k).S for k in ks]
    worst = max(max_dist(a, b) for i, a in enumerate(mats) for b in mats[i + 1:])
    return worst <= tol


def parameter_count(n, m):
    """Number of real parameters ``2 m (n - m)`` of the rank-``m`` family."""
    if not 1 <= m <= n - 1:
        raise DegenerateRankError(f"rank split m={m} must satisfy 1 <= m <= n-1")
    return 2 * m * (n - m)


def free_coupling(n):
    """Continuity plus vanishing derivative sum: ``m = 1``, ``T = (1, ..., 1)``."""
    return CouplingST(n, 1, np.ones((1, n - 1)))


def delta_coupling(n, alpha):
    """Standard delta coupling of strength ``alpha`` in (A, B)-form.

    Rows ``0..n-2`` impose continuity, the last row
    ``sum psi_j'(0) = alpha psi(0)``.
    """
    A = np.zeros((n, n), dtype=complex)
    B = np.zeros((n, n), dtype=complex)
    for j in range(n - 1):
        A[j, j], A[j, j + 1] = 1.0, -1.0
    A[n - 1, 0] = -alpha
    B[n - 1, :] = 1.0
    return CouplingAB(A, B)
