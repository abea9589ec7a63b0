"""Rotation by one unit cell, angular momentum of reflection positive states and strictification.

``U`` shifts the chain by two sites, so it commutes with the Ising Hamiltonian
and satisfies ``J U J = U^{-1}``.  A reflection positive ``U``-eigenvector must
carry eigenvalue one; the helpers here build the states used to probe that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .chain import ChainFrame, DenseOperator, QuantumState
from .config import DEFAULT_TOL, ClaimViolation, DimensionError, PreconditionError, Tolerances
from .models import tfim_ground_state
from .purify import cone_coordinates
from .rp import RpCertificate, check_rp, cone_membership, perturb_state
from .symmetry import (
    ReflectionFrame,
    RotationFrame,
    align_to_cone,
    apply_J,
    j_conjugate,
    j_fixed_basis,
    rotate,
    rotate_operator,
    vector_from_cone_matrix,
)

EIGEN_TOL = 1e-10
UNIT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class AngularMomentumReport:
    eigenvalue: complex
    is_invariant: bool
    rp_verdict: RpCertificate
    residual: float

    @property
    def consistent(self) -> bool:
        """An invariant reflection positive vector must have eigenvalue one."""
        if self.is_invariant and self.rp_verdict.passes:
            return abs(self.eigenvalue - 1.0) <= UNIT_TOL
        return True

    def to_dict(self) -> dict:
        return {
            "eigenvalue": [self.eigenvalue.real, self.eigenvalue.imag],
            "is_invariant": self.is_invariant,
            "residual": self.residual,
            "certificate": self.rp_verdict.to_dict(),
            "consistent": self.consistent,
        }


def angular_momentum(
    psi: QuantumState,
    rot: RotationFrame,
    rf: ReflectionFrame,
    tol: Tolerances = DEFAULT_TOL,
) -> AngularMomentumReport:
    """Test ``U psi = lambda psi`` and attach the reflection positivity verdict.

    ``lambda`` is reported as ``<psi, U psi>``, which is the eigenvalue when
    ``psi`` is an eigenvector.  A non-eigenvector is reported, not rejected.
    """
    if psi.kind != "vector" or psi.subsystem != "full":
        raise DimensionError("angular_momentum needs a full-chain vector")
    if rot.frame != psi.frame or rf.frame != psi.frame:
        raise DimensionError("state, rotation and reflection frames differ")
    u_psi = rotate(psi, rot, 1)
    lam = complex(np.vdot(psi.data, u_psi))
    residual = float(np.linalg.norm(u_psi - lam * psi.data))
    return AngularMomentumReport(lam, residual <= EIGEN_TOL, check_rp(psi, rf, tol), residual)


def momentum_twisted_vector(b: np.ndarray, rot: RotationFrame, k: int) -> np.ndarray:
    """``sum_m lambda^{-m} U^m b`` with ``lambda = exp(2 pi i k / N)``, normalized.

    The result is a ``U``-eigenvector with eigenvalue ``lambda``; it is
    ``J``-fixed whenever ``b`` is.
    """
    n_half = rot.frame.n_half
    lam = np.exp(2j * math.pi * k / n_half)
    b = np.asarray(b, dtype=complex)
    out = sum(lam ** (-m) * rotate(b, rot, m) for m in range(n_half))
    norm = np.linalg.norm(out)
    if norm <= 1e-8 * max(np.linalg.norm(b), 1.0):
        raise PreconditionError(f"momentum-{k} projection of the seed vector vanishes")
    return out / norm


def random_j_invariant_eigenvector(
    rng: np.random.Generator, rot: RotationFrame, rf: ReflectionFrame, k: int
) -> QuantumState:
    """A random ``J``-fixed ``U``-eigenvector with eigenvalue ``exp(2 pi i k / N)``."""
    dim = rot.frame.dim
    for _ in range(16):
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        seed = v + apply_J(v, rf)
        try:
            vec = momentum_twisted_vector(seed, rot, k)
        except PreconditionError:
            continue
        return QuantumState.from_vector(vec, rot.frame, normalize=True)
    raise PreconditionError(f"could not draw a momentum-{k} vector")


# ---------------------------------------------------------------- invariant observables


def _grouped_copies(vec: np.ndarray, n_sites: int, copies: int) -> np.ndarray:
    """``vec^{⊗copies}`` regrouped so each site carries ``copies`` qubits, copy 0 leading."""
    tensor = vec.reshape((2,) * n_sites)
    full = tensor
    for _ in range(copies - 1):
        full = np.multiply.outer(full, tensor)
    # axes are (copy, site); reorder to (site, copy)
    axes = [c * n_sites + s for s in range(n_sites) for c in range(copies)]
    return full.transpose(axes).reshape((2**copies,) * n_sites)


def srp_invariant_vector(local_dim: int, n_half: int) -> np.ndarray:
    """Unit vector whose projector is the strictly reflection positive invariant observable.

    Uses ``k`` grouped copies of the Ising ground state with ``2^k >= d`` and
    compresses every site onto its first ``d`` levels.
    """
    if local_dim < 2:
        raise ValueError("local_dim must be at least 2")
    copies = max(1, math.ceil(math.log2(local_dim)))
    n_sites = 2 * n_half
    if (2**copies) ** n_sites > 2**24:
        raise DimensionError("invariant observable construction exceeds the dense size guard")
    ground = tfim_ground_state(n_half).state.data
    grouped = _grouped_copies(ground, n_sites, copies)
    compressed = grouped[(slice(0, local_dim),) * n_sites].ravel()
    norm = np.linalg.norm(compressed)
    if norm <= 1e-12:
        raise ClaimViolation("compressed invariant vector vanishes")
    return compressed / norm


def build_srp_invariant_observable(
    local_dim: int, n_half: int, tol: Tolerances = DEFAULT_TOL
) -> DenseOperator:
    """A projector that is strictly reflection positive and commutes with ``U`` and ``J``."""
    frame = ChainFrame(n_half, local_dim)
    vec = srp_invariant_vector(local_dim, n_half)
    b = DenseOperator(np.outer(vec, vec.conj()), "full", frame)
    verdict = cone_membership(b, ReflectionFrame(frame), tol)
    if verdict.status != "inside":
        raise ClaimViolation(f"invariant observable is not strictly RP (min eig {verdict.min_eig:.3g})")
    rot_defect = float(np.abs(rotate_operator(b.matrix, RotationFrame(frame)) - b.matrix).max())
    j_defect = float(np.abs(j_conjugate(b.matrix, ReflectionFrame(frame)) - b.matrix).max())
    if rot_defect > 1e-11 or j_defect > 1e-11:
        raise ClaimViolation(f"invariant observable breaks U or J ({rot_defect:.3g}, {j_defect:.3g})")
    return b


def strictify(
    psi: QuantumState,
    rot: RotationFrame,
    rf: ReflectionFrame,
    observable: Optional[DenseOperator] = None,
    tol: Tolerances = DEFAULT_TOL,
) -> QuantumState:
    """Perturb an invariant reflection positive vector into a strictly reflection positive one.

    The default observable is ``1 + b`` with ``b`` the invariant projector of
    :func:`build_srp_invariant_observable`.  Its realignment is positive
    definite, and it commutes with ``U``, so the output stays invariant.
    """
    frame = rf.frame
    if psi.kind != "vector" or psi.frame != frame or rot.frame != frame:
        raise DimensionError("strictify needs a full-chain vector on matching frames")
    cert = check_rp(psi, rf, tol)
    if not cert.passes:
        raise PreconditionError(f"input state is not reflection positive ({cert.verdict})")
    aligned = align_to_cone(psi.data, rf, tol)
    if np.linalg.norm(rotate(aligned, rot, 1) - aligned) > EIGEN_TOL:
        raise PreconditionError("input state is not rotation invariant")
    if observable is None:
        b = build_srp_invariant_observable(frame.local_dim, frame.n_half, tol)
        observable = DenseOperator.identity(frame) + b
    out = perturb_state(psi, observable, rf, strict=True, tol=tol)
    if np.linalg.norm(rotate(out, rot, 1) - out.data) > 1e-9:
        raise ClaimViolation("strictified state lost rotation invariance")
    return out


# ---------------------------------------------------------------- random cone states


def random_cone_vector(rng: np.random.Generator, frame: ChainFrame, eps: float = 0.1) -> np.ndarray:
    """Unit vector with positive definite cone matrix ``G^dagger G + eps``."""
    n = frame.half_dim
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g.conj().T @ g + eps * np.eye(n)
    vec = vector_from_cone_matrix(0.5 * (m + m.conj().T), frame)
    return vec / np.linalg.norm(vec)


def random_strict_rp_density(
    rng: np.random.Generator, frame: ChainFrame, k: Optional[int] = None, eps: float = 0.1
) -> QuantumState:
    """Convex mixture of ``k >= 2`` interior cone projectors with random weights."""
    if k is None:
        k = int(rng.integers(2, 5))
    if k < 2:
        raise ValueError("mixture needs at least two components")
    weights = rng.random(k) + 0.05
    weights /= weights.sum()
    rho = np.zeros((frame.dim, frame.dim), dtype=complex)
    for p in weights:
        v = random_cone_vector(rng, frame, eps)
        rho += p * np.outer(v, v.conj())
    return QuantumState.from_density(rho, frame, hermitize=True)


# ---------------------------------------------------------------- Perron-Frobenius


@dataclass(frozen=True, eq=False)
class PerronFrobeniusReport:
    spectral_radius: float
    top_eigenvalue: float
    degenerate: bool
    vector: np.ndarray
    cone_min_eig: float
    schmidt_rank: int
    half_dim: int
    projector_verdict: str

    @property
    def full_rank(self) -> bool:
        return self.schmidt_rank == self.half_dim

    @property
    def ok(self) -> bool:
        return (
            abs(self.top_eigenvalue - self.spectral_radius) <= 1e-12
            and self.cone_min_eig > 0
            and self.full_rank
            and self.projector_verdict == "strictly_rp"
        )

    def to_dict(self) -> dict:
        return {
            "spectral_radius": self.spectral_radius,
            "top_eigenvalue": self.top_eigenvalue,
            "degenerate": self.degenerate,
            "cone_min_eig": self.cone_min_eig,
            "schmidt_rank": self.schmidt_rank,
            "half_dim": self.half_dim,
            "projector_verdict": self.projector_verdict,
            "ok": self.ok,
        }


def perron_frobenius_check(
    rho: QuantumState, rf: ReflectionFrame, tol: Tolerances = DEFAULT_TOL, level_tol: float = 1e-9
) -> PerronFrobeniusReport:
    """Top eigenvector of a strictly reflection positive density and its cone data.

    For a degenerate top eigenvalue the eigenspace is resolved into a
    ``J``-fixed basis and the vector with the largest minimal cone eigenvalue
    is selected.
    """
    if rho.kind != "density" or rho.subsystem != "full":
        raise DimensionError("perron_frobenius_check needs a full-chain density")
    cert = check_rp(rho, rf, tol)
    if cert.verdict != "strictly_rp":
        raise PreconditionError(f"density is not strictly reflection positive ({cert.verdict})")
    evals, evecs = np.linalg.eigh(rho.data)
    radius = float(np.abs(evals).max())
    top = evals[-1]
    block = evecs[:, evals >= top - level_tol]
    degenerate = block.shape[1] > 1
    if degenerate:
        candidates = list(j_fixed_basis(block, rf).T)
    else:
        candidates = [block[:, 0]]
    best = None
    for cand in candidates:
        vec = align_to_cone(cand, rf, tol)
        coords = cone_coordinates(vec, rf, tol)
        if best is None or coords.min_eig > best[1].min_eig:
            best = (vec, coords)
    vec, coords = best
    proj = QuantumState.from_density(np.outer(vec, vec.conj()), rf.frame, hermitize=True)
    verdict = check_rp(proj, rf, tol).verdict
    return PerronFrobeniusReport(
        radius, float(top), degenerate, vec, coords.min_eig, coords.schmidt_rank, rf.frame.half_dim, verdict
    )
