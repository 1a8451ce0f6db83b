"""Library-wide numerical tolerances.

Functions that accept ``tol=None`` read these module attributes at call time,
so assigning e.g. ``ftgraph.tolerance.ALGEBRAIC = 1e-9`` changes the default
everywhere.
"""

#: algebraic identities: unitarity, Hermiticity, k-independence
ALGEBRAIC = 1e-10

#: modulus checks on scattering amplitudes that may come from noisy solvers
MODULI = 1e-9


def algebraic(tol=None):
    return ALGEBRAIC if tol is None else tol


def moduli(tol=None):
    return MODULI if tol is None else tol
