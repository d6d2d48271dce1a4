import numpy as np
import pytest

# numpy.linalg based references, independent of the package's Jacobi routines

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SIGMA_Y, SIGMA_Y)

ACCEPTANCE = {}


def wootters_reference(rho):
    """Descending sqrt-eigenvalues of rho (YY) rho* (YY) via numpy."""
    rho_tilde = YY @ rho.conj() @ YY
    ev = np.linalg.eigvals(rho @ rho_tilde)
    return np.sort(np.sqrt(np.abs(ev.real)))[::-1]


def subconcurrence_reference(rho):
    lam = wootters_reference(rho)
    return lam[0] - lam[1] - lam[2] - lam[3]


def random_density(rng, dim=4, rank=None):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_ket(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {key}: {detail}")
