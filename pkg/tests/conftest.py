import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


@st.composite
def hermitian_matrices(draw, max_dim=20):
    n = draw(st.integers(min_value=1, max_value=max_dim))
    re = draw(arrays(np.float64, (n, n), elements=finite))
    im = draw(arrays(np.float64, (n, n), elements=finite))
    m = re + 1j * im
    return m + m.conj().T


@st.composite
def density_matrices(draw, dim=4, rank=None):
    r = rank or draw(st.integers(min_value=1, max_value=dim))
    re = draw(arrays(np.float64, (dim, r), elements=finite))
    im = draw(arrays(np.float64, (dim, r), elements=finite))
    g = re + 1j * im
    rho = g @ g.conj().T
    tr = np.trace(rho).real
    if tr < 1e-6:
        rho, tr = np.eye(dim, dtype=complex), dim
    return rho / tr


def brute_partial_transpose(rho, subsystem):
    """Index-by-index reference for two qubits."""
    out = np.zeros((4, 4), dtype=complex)
    for i1 in range(2):
        for i2 in range(2):
            for j1 in range(2):
                for j2 in range(2):
                    if subsystem == 1:
                        src = (2 * j1 + i2, 2 * i1 + j2)
                    else:
                        src = (2 * i1 + j2, 2 * j1 + i2)
                    out[2 * i1 + i2, 2 * j1 + j2] = rho[src]
    return out


def brute_negativity(rho):
    w = np.linalg.eigvalsh(brute_partial_transpose(rho, 2))
    return 2 * max(0.0, -w[w < 0].sum())


def brute_concurrence(rho):
    y = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(y, y)
    lam = np.linalg.eigvals(rho @ yy @ rho.conj() @ yy)
    mu = np.sort(np.sqrt(np.clip(lam.real, 0, None)))[::-1]
    return max(0.0, mu[0] - mu[1] - mu[2] - mu[3])


def ket(*amps):
    v = np.asarray(amps, dtype=complex)
    return v / np.linalg.norm(v)


def proj(v):
    return np.outer(v, v.conj())


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# One PASS/FAIL line per acceptance criterion, printed after the run.
_CRITERIA = {}


def pytest_runtest_makereport(item, call):
    if call.when != "call" or not item.name.startswith("test_criterion_"):
        return
    number = int(item.name.split("_")[2])
    detail = "; ".join(v for k, v in item.user_properties if k == "detail")
    _CRITERIA[number] = (call.excinfo is None, item.name, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        ok, name, detail = _CRITERIA[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{status}  {number:>2}  {name[len('test_criterion_'):]}  {detail}".rstrip())
