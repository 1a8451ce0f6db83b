import numpy as np
import pytest

from ftgraph import CouplingST


def random_T(rng, m, q, scale=None):
    """Entries uniform in the complex unit disk, times a scale up to 10."""
    r = np.sqrt(rng.uniform(size=(m, q)))
    z = r * np.exp(2j * np.pi * rng.uniform(size=(m, q)))
    if scale is None:
        scale = rng.uniform(0.1, 10.0)
    return scale * z


def random_coupling(rng, n_max=8, n=None):
    n = n if n is not None else int(rng.integers(2, n_max + 1))
    m = int(rng.integers(1, n))
    return CouplingST(n, m, random_T(rng, m, n - m))


def brute_force_smatrix(coupling, k=1.0):
    """Solve the vertex conditions column by column.

    Unknowns: Psi(0) and Psi'(0) (2n of them). Equations: the n ST-form rows
    plus Psi'(0) - ik Psi(0) = -2ik e_j, which encodes an incoming wave on
    line j.
    """
    n, m, T = coupling.n, coupling.m, coupling.T
    top = np.hstack([np.zeros((m, n)), np.eye(m), T])
    bottom = np.hstack([-T.conj().T, np.eye(n - m), np.zeros((n - m, n))])
    link = np.hstack([-1j * k * np.eye(n), np.eye(n)])
    M = np.vstack([top, bottom, link])
    S = np.empty((n, n), dtype=complex)
    for j in range(n):
        rhs = np.zeros(2 * n, dtype=complex)
        rhs[n + j] = -2j * k
        v = np.linalg.solve(M, rhs)[:n]
        S[:, j] = v - np.eye(n)[j]
    return S


BASKET = {
    "free2": CouplingST(2, 1, [[1.0]]),
    "t2": CouplingST(2, 1, [[2.0]]),
    "ti": CouplingST(2, 1, [[1j]]),
    "n3m1": CouplingST(3, 1, [[2.0, 1j]]),
    "n3m2": CouplingST(3, 2, [[1.0], [1j]]),
    "n4m2": CouplingST(4, 2, 0.5 * np.ones((2, 2))),
}


@pytest.fixture
def rng():
    return np.random.default_rng(20100701)


@pytest.fixture(params=sorted(BASKET))
def basket_coupling(request):
    return BASKET[request.param]


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
