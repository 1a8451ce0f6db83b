"""Approximating graph for an ST-form coupling.

The vertex is replaced by ``n`` half-line endpoints ``V_j`` carrying delta
couplings of strength ``alpha_j``, joined pairwise by short connectors of
length ``d / gamma``. Each connector carries a constant vector potential on
the middle half of its length. As ``d -> 0`` the scattering matrix of this
graph tends to that of the scale-invariant vertex.

Parameters are fixed by demanding that, connector by connector,
``gamma * exp(-i d A / (2 gamma))`` equals a target built from ``T``:

* cross connectors ``V_k -> V_j`` (``j < m <= k``): target ``conj(t_jk)``,
* intra connectors ``V_j -> V_k`` (``j < k < m``): target ``-sigma_jk`` with
  ``sigma = T T^dagger``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coupling import validate_st
from .errors import DimensionError, PreconditionError

# |target| below this (relative to max(1, |T|^2)) counts as "no connector"
ZERO_CUTOFF = 1e-12


@dataclass(frozen=True)
class Connector:
    """Edge of length ``d / gamma`` oriented ``j -> k``.

    ``potential`` is the vector-potential strength seen when the edge
    variable grows from ``V_j`` to ``V_k``.
    """

    j: int
    k: int
    gamma: float
    potential: float
    d: float

    @property
    def length(self):
        return self.d / self.gamma

    @property
    def support(self):
        return (self.d / (4 * self.gamma), 3 * self.d / (4 * self.gamma))

    @property
    def phase(self):
        """Gauge phase ``A * (support length)`` picked up across the edge."""
        return self.potential * self.d / (2 * self.gamma)

    def reversed(self):
        return Connector(self.k, self.j, self.gamma, -self.potential, self.d)

    def weight(self):
        """``gamma * exp(-i * phase)``, the coefficient entering at ``V_j``."""
        return self.gamma * np.exp(-1j * self.phase)


@dataclass(frozen=True, eq=False)
class ApproxGraph:
    n: int
    d: float
    delta_strengths: np.ndarray
    connectors: tuple[Connector, ...]

    def __post_init__(self):
        a = np.array(self.delta_strengths, dtype=float)
        a.setflags(write=False)
        object.__setattr__(self, "delta_strengths", a)
        object.__setattr__(self, "connectors", tuple(self.connectors))
        seen = set()
        for c in self.connectors:
            pair = frozenset((c.j, c.k))
            if c.j == c.k or pair in seen:
                raise DimensionError(f"duplicate connector or self-loop on {sorted(pair)}")
            if not c.gamma > 0:
                raise PreconditionError(f"connector {c.j}-{c.k} has gamma={c.gamma} <= 0")
            seen.add(pair)

    @property
    def alpha(self):
        return self.delta_strengths


def _arg(z):
    # principal branch (-pi, pi]
    a = float(np.angle(z))
    return np.pi if a == -np.pi else a


def build_approximation(coupling, d):
    validate_st(coupling)
    if not d > 0:
        raise PreconditionError(f"approximation scale d={d} must be positive")
    if coupling.perm is not None:
        raise PreconditionError("relabelled couplings are not supported; approximate the ST ordering")
    n, m, T = coupling.n, coupling.m, coupling.T
    cutoff = ZERO_CUTOFF * max(1.0, float(np.max(np.abs(T), initial=0.0)) ** 2)
    sigma = T @ T.conj().T

    connectors = []
    for j in range(m):
        for col in range(n - m):
            t = T[j, col]
            if abs(t) > cutoff:
                g = abs(t)
                connectors.append(Connector(m + col, j, g, 2 * g / d * _arg(t), d))
    for j in range(m):
        for k in range(j + 1, m):
            s = sigma[j, k]
            if abs(s) > cutoff:
                g = abs(s)
                connectors.append(Connector(j, k, g, -2 * g / d * _arg(-s), d))

    gsum = np.zeros(n)
    for c in connectors:
        gsum[c.j] += c.gamma
        gsum[c.k] += c.gamma
    alpha = np.empty(n)
    # j >= m: d alpha_j + sum gamma = 1
    alpha[m:] = (1.0 - gsum[m:]) / d
    # j < m: d alpha_j = |t_j|^2 - (intra gammas) - (cross gammas)
    alpha[:m] = (sigma.diagonal().real[:m] - gsum[:m]) / d
    return ApproxGraph(n, d, alpha, tuple(connectors))


def reconstruction_targets(coupling, graph):
    """Pairs ``(weight, target)`` for every connector of ``graph``."""
    m, T = coupling.m, coupling.T
    sigma = T @ T.conj().T
    out = []
    for c in graph.connectors:
        if c.j >= m > c.k:
            target = np.conj(T[c.k, c.j - m])
        elif c.k >= m > c.j:
            target = T[c.j, c.k - m]
        else:
            target = -sigma[c.j, c.k]
        out.append((c.weight(), target))
    return out


def reconstruction_residual(coupling, graph):
    pairs = reconstruction_targets(coupling, graph)
    return max((abs(w - t) for w, t in pairs), default=0.0)
