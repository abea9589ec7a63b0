"""Canonical purification of half-chain states and natural-cone coordinates."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .chain import QuantumState
from .config import DEFAULT_TOL, DimensionError, PreconditionError, Tolerances
from .rp import check_rp
from .symmetry import ReflectionFrame, cone_matrix, vector_from_cone_matrix


@dataclass(frozen=True, eq=False)
class SchmidtData:
    values: np.ndarray
    left_vectors: np.ndarray
    degeneracy_blocks: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return int(np.sum(self.values > DEFAULT_TOL.rank))


def schmidt(rho_left: QuantumState, tol: Tolerances = DEFAULT_TOL) -> SchmidtData:
    """Eigen-decomposition of a half-chain density, sorted by decreasing weight.

    ``left_vectors[:, i]`` is the eigenvector of ``values[i]``; equal values
    (within ``tol.eigen``) are grouped into degeneracy blocks.
    """
    if rho_left.kind != "density" or rho_left.subsystem == "full":
        raise DimensionError("schmidt expects a half-chain density matrix")
    evals, evecs = np.linalg.eigh(rho_left.data)
    if evals[0] < -tol.psd:
        raise ValueError(f"negative eigenvalue {evals[0]:.3g}")
    order = np.argsort(evals)[::-1]
    values = np.clip(evals[order], 0.0, None)
    vectors = evecs[:, order]
    blocks: list[list[int]] = [[0]]
    for i in range(1, len(values)):
        if abs(values[i] - values[blocks[-1][0]]) <= tol.eigen:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return SchmidtData(values, vectors, tuple(tuple(b) for b in blocks))


def canonical_purification(rho_left: QuantumState, rf: ReflectionFrame) -> QuantumState:
    """``sum_i sqrt(lambda_i) xi_i ⊗ (reflected conj xi_i)`` on the full chain.

    Its cone matrix is ``rho^{1/2}``, so the result lies in the natural cone
    and carries no phase freedom.
    """
    if rho_left.frame != rf.frame:
        raise DimensionError("density and reflection frames differ")
    data = schmidt(rho_left)
    xi = data.left_vectors
    root = (xi * np.sqrt(data.values)) @ xi.conj().T
    root = 0.5 * (root + root.conj().T)
    vec = vector_from_cone_matrix(root, rf.frame)
    return QuantumState.from_vector(vec, rf.frame, normalize=True)


@dataclass(frozen=True, eq=False)
class ConeCoordinates:
    matrix: np.ndarray
    hermiticity_defect: float
    min_eig: float
    schmidt_rank: int

    def is_hermitian(self, tol: float = 1e-11) -> bool:
        return self.hermiticity_defect <= tol

    def is_psd(self, tol: float = 1e-10) -> bool:
        return self.is_hermitian() and self.min_eig >= -tol

    def is_pd(self, tol: float = 1e-10) -> bool:
        return self.is_hermitian() and self.min_eig > tol


def cone_coordinates(psi, rf: ReflectionFrame, tol: Tolerances = DEFAULT_TOL) -> ConeCoordinates:
    """Cone matrix of a full-chain vector with Hermiticity, spectrum and rank data.

    ``min_eig`` is taken from the Hermitian part of the matrix.
    """
    m = cone_matrix(psi, rf.frame)
    herm = float(np.abs(m - m.conj().T).max(initial=0.0))
    lo = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
    rank = int(np.sum(np.linalg.svd(m, compute_uv=False) ** 2 > tol.rank))
    return ConeCoordinates(m, herm, lo, rank)


@dataclass(frozen=True)
class UniquenessReport:
    phases_tested: int
    passing: tuple[tuple[float, ...], ...]
    verdicts: dict

    @property
    def unique(self) -> bool:
        return len(self.passing) == 1 and not any(self.passing[0])


def uniqueness_oracle(
    rho_left: QuantumState,
    rf: ReflectionFrame,
    grid: int = 4,
    tol: Tolerances = DEFAULT_TOL,
) -> UniquenessReport:
    """Brute-force search over phased purifications ``sum sqrt(l_i) e^{i phi_i} xi_i ⊗ xi_i'``.

    Phases run over multiples of ``2 pi / grid``.  The first phase is pinned to
    zero because a global phase does not change the state.  Only the all-zero
    phase vector should yield a reflection positive state.
    """
    data = schmidt(rho_left, tol)
    gaps = -np.diff(data.values)
    if np.any(gaps <= 1e-8):
        raise PreconditionError("spectrum is degenerate; phase family is not well defined")
    if grid < 1:
        raise ValueError("grid must be positive")
    sq = np.sqrt(data.values)
    xi = data.left_vectors
    n_vals = len(sq)
    steps = 2 * math.pi * np.arange(grid) / grid
    passing = []
    counts: dict[str, int] = {}
    tested = 0
    for rest in itertools.product(range(grid), repeat=n_vals - 1):
        phi = np.concatenate([[0.0], steps[list(rest)]])
        m = (xi * (sq * np.exp(1j * phi))) @ xi.conj().T
        vec = vector_from_cone_matrix(m, rf.frame)
        state = QuantumState.from_vector(vec, rf.frame, normalize=True)
        cert = check_rp(state, rf, tol)
        counts[cert.verdict] = counts.get(cert.verdict, 0) + 1
        tested += 1
        if cert.passes:
            passing.append(tuple(float(x) for x in phi))
    return UniquenessReport(tested, tuple(passing), counts)
