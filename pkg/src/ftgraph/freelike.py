"""Free-like couplings: the scale-invariant couplings whose amplitudes have
the same moduli as the free vertex, ``|R_j| = 1 - 2/n`` and ``|T_ij| = 2/n``.

Up to a diagonal phase gauge ``D = diag(1, e^{i xi_2}, ..., e^{i xi_n})`` (and
an edge relabelling in the balanced case) the scattering matrix is one of

* ``MinusJ``:   ``-I + (2/n) J``
* ``PlusJ``:    ``I - (2/n) J``
* ``Balanced``: ``[[I - (2/n)J, (2/n)J], [(2/n)J, -I + (2/n)J]]`` (n even,
  blocks of size n/2)

conjugated as ``S = P^T D^dagger M D P``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from . import tolerance
from .coupling import CouplingST, ScatteringMatrix, ft_scattering, max_dist
from .errors import (
    DimensionError,
    InconsistentPartitionError,
    NotFreeLikeError,
    NotHermitianError,
    NotUnitaryError,
    PreconditionError,
    ClassificationError,
)

TWO_PI = 2 * np.pi


class Case(str, enum.Enum):
    MINUS_J = "MinusJ"
    PLUS_J = "PlusJ"
    BALANCED = "Balanced"

    @classmethod
    def parse(cls, value):
        """Accept the enum, its value, or the CLI spellings minus/plus/balanced."""
        if isinstance(value, cls):
            return value
        aliases = {"minus": cls.MINUS_J, "plus": cls.PLUS_J, "balanced": cls.BALANCED}
        key = str(value)
        if key.lower() in aliases:
            return aliases[key.lower()]
        return cls(key)


@dataclass(frozen=True, eq=False)
class FreeLikeForm:
    """Canonical data of a free-like scattering matrix.

    ``phases`` holds ``xi_2..xi_n``; the leading gauge phase is fixed to 0.
    ``permutation[i]`` is the canonical slot of physical edge ``i``.
    """

    n: int
    case: Case
    phases: np.ndarray
    permutation: tuple[int, ...] = field(default=None)
    p: int = field(default=None)

    def __post_init__(self):
        case = Case.parse(self.case)
        object.__setattr__(self, "case", case)
        ph = np.mod(np.asarray(self.phases, dtype=float), TWO_PI)
        ph.setflags(write=False)
        object.__setattr__(self, "phases", ph)
        perm = tuple(range(self.n)) if self.permutation is None else tuple(int(i) for i in self.permutation)
        object.__setattr__(self, "permutation", perm)
        if self.p is None:
            p = {Case.MINUS_J: 0, Case.PLUS_J: self.n, Case.BALANCED: self.n // 2}[case]
            object.__setattr__(self, "p", p)

    @property
    def gauge(self):
        """Diagonal of ``D``."""
        return np.exp(1j * np.concatenate([[0.0], self.phases]))


def validate_form(form):
    n = form.n
    if n < 2:
        raise PreconditionError(f"degree n={n} must be at least 2")
    if form.phases.shape != (n - 1,):
        raise DimensionError(f"expected {n - 1} phases, got {form.phases.shape[0]}")
    if sorted(form.permutation) != list(range(n)):
        raise DimensionError(f"{form.permutation} is not a permutation of 0..{n - 1}")
    if form.case is Case.BALANCED:
        if n % 2:
            raise PreconditionError(f"balanced case needs even n, got n={n}")
        if form.p != n // 2:
            raise PreconditionError(f"balanced case has p = n/2 = {n // 2}, got {form.p}")
    elif form.permutation != tuple(range(n)):
        raise PreconditionError(f"{form.case.value} is permutation invariant; use the identity")
    return form


def canonical_matrix(n, case):
    case = Case.parse(case)
    J = np.full((n, n), 2.0 / n)
    if case is Case.MINUS_J:
        return J - np.eye(n)
    if case is Case.PLUS_J:
        return np.eye(n) - J
    if n % 2:
        raise PreconditionError(f"balanced case needs even n, got n={n}")
    return _balanced(n)


def _balanced(n):
    h = n // 2
    M = np.full((n, n), 2.0 / n)
    M[:h, :h] = np.eye(h) - 2.0 / n
    M[h:, h:] = -np.eye(h) + 2.0 / n
    return M


def is_freelike(s, tol=None):
    tol = tolerance.moduli(tol)
    S = s.S if isinstance(s, ScatteringMatrix) else np.asarray(s)
    n = S.shape[0]
    mod = np.abs(S)
    off = ~np.eye(n, dtype=bool)
    return bool(
        np.all(np.abs(np.diag(mod) - (1 - 2.0 / n)) <= tol)
        and np.all(np.abs(mod[off] - 2.0 / n) <= tol)
    )


def realize_smatrix(form):
    """Closed-form ``S = P^T D^dagger M D P`` of a free-like form."""
    validate_form(form)
    d = form.gauge
    S0 = d.conj()[:, None] * canonical_matrix(form.n, form.case) * d[None, :]
    p = np.asarray(form.permutation)
    return ScatteringMatrix(S0[np.ix_(p, p)])


def build_freelike(form):
    """ST-form coupling whose scattering matrix is ``realize_smatrix(form)``."""
    validate_form(form)
    n = form.n
    d = form.gauge
    if form.case is Case.MINUS_J:
        return CouplingST(n, 1, d[1:].reshape(1, -1))
    if form.case is Case.PLUS_J:
        # T_j = -e^{i(xi_n - xi_j)}; the common factor -d_n fixes the last column
        return CouplingST(n, n - 1, (-d[-1] * d[:-1].conj()).reshape(-1, 1))
    h = n // 2
    X, Y = d[:h], d[h:]
    T = (2.0 / n) * np.outer(X.conj(), Y)
    perm = None if form.permutation == tuple(range(n)) else form.permutation
    return CouplingST(n, h, T, perm)


def classify_freelike(s, tol=None):
    """Decompose a free-like, Hermitian scattering matrix into canonical form.

    The gauge is recovered from the first row of the partition-sorted matrix;
    in the balanced case a second pass fixes the remaining phases from the
    first row of the negative block. The result is checked by re-realizing it.
    """
    tol = tolerance.moduli(tol)
    S = s.S if isinstance(s, ScatteringMatrix) else np.asarray(s, dtype=complex)
    n = S.shape[0]
    if max_dist(S.conj().T @ S, np.eye(n)) > tol:
        raise NotUnitaryError("input is not unitary within tolerance")
    if not is_freelike(S, tol):
        raise NotFreeLikeError("amplitude moduli differ from 1-2/n and 2/n")
    if max_dist(S, S.conj().T) > tol:
        raise NotHermitianError("free-like scattering matrix must be Hermitian")

    if n == 2:
        # all three forms coincide for n = 2 (zero diagonal); report MinusJ
        form = FreeLikeForm(2, Case.MINUS_J, [np.angle(S[0, 1])])
    else:
        diag = S.diagonal().real
        positive = diag > 0
        p = int(np.count_nonzero(positive))
        if p == 0:
            form = FreeLikeForm(n, Case.MINUS_J, np.angle(S[0, 1:]))
        elif p == n:
            form = FreeLikeForm(n, Case.PLUS_J, np.angle(-S[0, 1:]))
        elif 2 * p == n:
            form = _classify_balanced(S, positive)
        else:
            raise InconsistentPartitionError(f"{p} positive reflection amplitudes out of n={n}")

    err = max_dist(realize_smatrix(form).S, S)
    if err > tol:
        raise ClassificationError(f"reconstruction error {err:.3g} exceeds tolerance {tol:.3g}")
    return form


def _classify_balanced(S, positive):
    n = S.shape[0]
    h = n // 2
    order = np.argsort(~positive, kind="stable")
    perm = np.empty(n, dtype=int)
    perm[order] = np.arange(n)
    SP = S[np.ix_(order, order)]

    # first pass: make row 0 equal to the canonical (1-2/n, -2/n.., +2/n..)
    d_hat = np.exp(1j * np.angle(SP[0]))
    d_hat[0] = 1.0
    d_hat[1:h] *= -1.0
    S_hat = d_hat[:, None] * SP * d_hat.conj()[None, :]
    # second pass: row h (first negative-block row) off-diagonal to +2/n
    d_check = np.ones(n, dtype=complex)
    d_check[h + 1:] = np.exp(1j * np.angle(S_hat[h, h + 1:]))
    D = d_check * d_hat
    return FreeLikeForm(n, Case.BALANCED, np.angle(D[1:] / D[0]), tuple(perm), h)


def enumerate_time_reversal(n, case):
    """All free-like couplings of ``case`` with phases in {0, pi}.

    Balanced couplings are enumerated for the identity partition only.
    """
    case = Case.parse(case)
    if n < 2:
        raise PreconditionError(f"degree n={n} must be at least 2")
    out = []
    for bits in itertools.product((0.0, np.pi), repeat=n - 1):
        c = build_freelike(FreeLikeForm(n, case, bits))
        c = replace(c, T=c.T.real.astype(complex))  # phases 0, pi: T is real
        out.append((c, ft_scattering(c)))
    return out
