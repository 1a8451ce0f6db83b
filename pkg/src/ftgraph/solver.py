"""Stationary scattering on the approximating graph and convergence studies."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels_py
from .approx import build_approximation
from .coupling import ScatteringMatrix, ft_scattering, max_dist
from .errors import FTGraphError, PreconditionError, SingularSystemError

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

SINGULAR_RATIO = 1e-14

_backend = _compiled if _compiled is not None else _kernels_py


def available_backends():
    return ["compiled", "python"] if _compiled is not None else ["python"]


def get_backend():
    return "compiled" if _backend is _compiled and _compiled is not None else "python"


def set_backend(name):
    """Select the kernel used by :func:`solve_scattering`: 'compiled' or 'python'."""
    global _backend
    if name == "python":
        _backend = _kernels_py
    elif name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel not built; reinstall with Cython and a C compiler")
        _backend = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")


@dataclass(frozen=True)
class EdgeWave:
    """Amplitudes of ``exp(+ikx)`` and ``exp(-ikx)`` on a free segment."""

    a: complex
    b: complex


@dataclass(frozen=True)
class HalflineWave:
    incoming: float
    outgoing: complex


def free_transfer(k, L):
    """Map ``(psi(0), psi'(0)) -> (psi(L), psi'(L))`` for ``-psi'' = k^2 psi``."""
    c, s = math.cos(k * L), math.sin(k * L)
    return np.array([[c, s / k], [-k * s, c]], dtype=complex)


def _segmented_transfer(A, k, L):
    """Transfer matrix across [0, L] with potential ``A`` on [L/4, 3L/4].

    Built from plane waves: ``exp(+-ikx)`` outside the support,
    ``exp(i(A +- k)x)`` inside, matched by continuity of ``psi`` and of the
    covariant derivative ``psi' - iA psi`` at both ends of the support.
    """
    x1, x2 = L / 4, 3 * L / 4

    def free_basis(x):
        # rows: value, derivative; columns: e^{ikx}, e^{-ikx}
        ep, em = np.exp(1j * k * x), np.exp(-1j * k * x)
        return np.array([[ep, em], [1j * k * ep, -1j * k * em]])

    def potential_basis(x):
        # rows: value, covariant derivative; columns: e^{i(A+k)x}, e^{i(A-k)x}
        ep, em = np.exp(1j * (A + k) * x), np.exp(1j * (A - k) * x)
        return np.array([[ep, em], [1j * k * ep, -1j * k * em]])

    M = np.empty((2, 2), dtype=complex)
    for col, start in enumerate(np.eye(2)):
        ab = np.linalg.solve(free_basis(0.0), start)
        pq = np.linalg.solve(potential_basis(x1), free_basis(x1) @ ab)
        ab2 = np.linalg.solve(free_basis(x2), potential_basis(x2) @ pq)
        M[:, col] = free_basis(L) @ ab2
    return M


def connector_transfer(conn, k, mode="lemma"):
    """2x2 transfer matrix of a connector at momentum ``k``.

    ``mode='lemma'`` multiplies the free transfer matrix by the gauge phase;
    ``mode='segmented'`` integrates the three pieces explicitly.
    """
    if not k > 0:
        raise PreconditionError(f"momentum k={k} must be positive")
    L = conn.length
    if mode == "lemma":
        return np.exp(1j * conn.phase) * free_transfer(k, L)
    if mode == "segmented":
        return _segmented_transfer(conn.potential, k, L)
    raise ValueError(f"unknown mode {mode!r}")


def _graph_arrays(graph):
    conns = graph.connectors
    starts = np.array([c.j for c in conns], dtype=np.int64)
    ends = np.array([c.k for c in conns], dtype=np.int64)
    length = np.array([c.length for c in conns], dtype=float)
    phase = np.array([c.phase for c in conns], dtype=float)
    return np.ascontiguousarray(graph.alpha, dtype=float), starts, ends, length, phase


def solve_scattering(graph, k):
    """Scattering matrix of the approximating graph at momentum ``k``."""
    if not k > 0:
        raise PreconditionError(f"momentum k={k} must be positive")
    args = _graph_arrays(graph)
    S, ratio = _backend.solve_graph(graph.n, *args, float(k))
    if not ratio > SINGULAR_RATIO or not np.all(np.isfinite(S)):
        M, _ = _kernels_py.assemble(graph.n, *args, float(k))
        cond = float(np.linalg.cond(M))
        raise SingularSystemError(
            f"graph system singular at k={k}, d={graph.d} (cond ~ {cond:.3g}); retry with k +- 1e-3",
            cond,
        )
    return ScatteringMatrix(S)


def edge_waves(graph, k, incoming):
    """Half-line and connector amplitudes for a wave entering on ``incoming``."""
    args = _graph_arrays(graph)
    M, R = _kernels_py.assemble(graph.n, *args, float(k))
    x = np.linalg.solve(M, R[:, incoming])
    n = graph.n
    half = [HalflineWave(float(i == incoming), complex(x[i])) for i in range(n)]
    edges = []
    for e, conn in enumerate(graph.connectors):
        # kernel unknowns are phi(0) and L phi'(0)
        u, dphi = x[n + 2 * e], x[n + 2 * e + 1] / conn.length
        edges.append(EdgeWave(complex((u + dphi / (1j * k)) / 2), complex((u - dphi / (1j * k)) / 2)))
    return half, edges


@dataclass(frozen=True)
class ConvergenceReport:
    """Errors ``max|S(k; d) - S_exact|`` along a decreasing ``d`` grid.

    ``errors`` holds ``nan`` for rows whose solve failed.
    """

    d: tuple[float, ...]
    errors: tuple[float, ...]
    fitted_order: float
    k: float

    @property
    def rows(self):
        return list(zip(self.d, self.errors))

    @property
    def failed(self):
        return [d for d, e in self.rows if math.isnan(e)]

    def ratios(self):
        e = self.errors
        return [e[i + 1] / e[i] for i in range(len(e) - 1)]

    def to_csv(self):
        buf = io.StringIO()
        buf.write("d,error\n")
        for d, e in self.rows:
            buf.write(f"{d!r},{e!r}\n")
        buf.write(f"# fitted_order = {self.fitted_order!r}\n")
        return buf.getvalue()


FIT_FLOOR = 1e-12


def fit_order(d_values, errors):
    """Least-squares slope of ``log(error)`` against ``log(d)``."""
    pts = [(d, e) for d, e in zip(d_values, errors) if e > FIT_FLOOR and not math.isnan(e)]
    if len(pts) < 2:
        return float("nan")
    x, y = np.log(np.array(pts)).T
    return float(np.polyfit(x, y, 1)[0])


def convergence_study(coupling, k, d_values):
    d_values = [float(d) for d in d_values]
    if len(d_values) < 3:
        raise PreconditionError("need at least three d values")
    if any(d <= 0 for d in d_values) or any(b >= a for a, b in zip(d_values, d_values[1:])):
        raise PreconditionError("d values must be positive and strictly decreasing")
    if not k > 0:
        raise PreconditionError(f"momentum k={k} must be positive")
    exact = ft_scattering(coupling).S
    errors = []
    for d in d_values:
        try:
            S = solve_scattering(build_approximation(coupling, d), k).S
        except SingularSystemError:
            errors.append(float("nan"))
        else:
            errors.append(max_dist(S, exact))
    good = [e for e in errors if not math.isnan(e)]
    if len(good) < 3:
        raise FTGraphError(f"only {len(good)} of {len(errors)} rows solved; need 3")
    return ConvergenceReport(tuple(d_values), tuple(errors), fit_order(d_values, errors), float(k))


def halving_grid(d_start, steps):
    return [d_start * 2.0 ** (-j) for j in range(steps)]
