import numpy as np
import pytest

from rpchain.chain import ChainFrame, QuantumState
from rpchain.symmetry import ReflectionFrame, RotationFrame


def random_vector(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_matrix(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def random_density(rng, n, faithful=True):
    g = random_matrix(rng, n)
    rho = g @ g.conj().T
    if faithful:
        rho += 0.05 * np.eye(n)
    return rho / np.trace(rho).real


def epr_vector(frame):
    """Reflection-paired maximally entangled vector (cone matrix proportional to 1)."""
    from rpchain.symmetry import vector_from_cone_matrix

    n = frame.half_dim
    return vector_from_cone_matrix(np.eye(n) / np.sqrt(n), frame)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[(1, 2), (2, 2), (1, 3)], ids=["2N=2", "2N=4", "2N=2,d=3"])
def frames(request):
    n_half, d = request.param
    frame = ChainFrame(n_half, d)
    return frame, ReflectionFrame(frame), RotationFrame(frame)


@pytest.fixture
def frame4():
    frame = ChainFrame(2)
    return frame, ReflectionFrame(frame), RotationFrame(frame)


def pure(vec, frame):
    return QuantumState.from_vector(vec, frame, normalize=True)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
