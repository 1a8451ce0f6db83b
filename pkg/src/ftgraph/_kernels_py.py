"""Pure-Python scattering kernel for the approximating graph.

Reference implementation of :func:`ftgraph._kernels.solve_graph`; used when
the compiled extension is unavailable.

Unknowns for one incoming column: outgoing amplitudes ``c_0..c_{n-1}``
followed by ``(u_e, w_e)`` per connector, where ``u_e = phi(0)`` and
``w_e = L phi'(0)``. Plane-wave amplitudes would blow up like ``1/(kL)`` on
short edges; this basis keeps every entry O(1). Rows: ``n`` derivative
conditions (each divided by its largest coefficient scale), then continuity
at the start and end of every connector.
"""

import math

import numpy as np


def assemble(n, alpha, starts, ends, length, phase, k):
    E = len(starts)
    N = n + 2 * E
    M = np.zeros((N, N), dtype=complex)
    R = np.zeros((N, n), dtype=complex)
    ik = 1j * k
    scale = 1.0 + np.abs(np.asarray(alpha, dtype=float))
    for e in range(E):
        scale[starts[e]] += 1.0 / length[e]
        scale[ends[e]] += 1.0 / length[e]
    for j in range(n):
        # psi_j' - alpha_j psi_j with psi_j = delta_ij e^{-ikx} + c_j e^{ikx}
        M[j, j] = (ik - alpha[j]) / scale[j]
        R[j, j] = (ik + alpha[j]) / scale[j]
    for e in range(E):
        s, t, L = starts[e], ends[e], length[e]
        iu, iw = n + 2 * e, n + 2 * e + 1
        g = np.exp(1j * phase[e])
        c, kL = math.cos(k * L), k * L
        sinc = math.sin(kL) / kL
        # phi(L) = g (cos kL u + sinc w),  L phi'(L) = g (-kL sin kL u + cos kL w)
        # outward derivative at the start: +phi'(0) = w / L
        M[s, iw] += 1.0 / (L * scale[s])
        # outward derivative at the end: -phi'(L)
        M[t, iu] += g * kL * math.sin(kL) / (L * scale[t])
        M[t, iw] -= g * c / (L * scale[t])
        # continuity: phi(0) = psi_s(0), phi(L) = psi_t(0)
        M[iu, iu] = 1.0
        M[iu, s] = -1.0
        R[iu, s] = 1.0
        M[iw, iu] = g * c
        M[iw, iw] = g * sinc
        M[iw, t] = -1.0
        R[iw, t] = 1.0
    return M, R


def solve_graph(n, alpha, starts, ends, length, phase, k):
    """Return ``(S, rcond)``; ``rcond`` near 0 flags a singular system."""
    M, R = assemble(n, alpha, starts, ends, length, phase, k)
    rcond = 1.0 / np.linalg.cond(M)
    if not rcond > 0:
        return np.full((n, n), np.nan, dtype=complex), 0.0
    X = np.linalg.solve(M, R)
    return X[:n, :], rcond
