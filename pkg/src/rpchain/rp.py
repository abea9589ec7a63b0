"""Reflection positivity certificates and the cone of reflection positive observables.

A state ``rho`` on the chain is reflection positive when the quadratic form
``x -> Tr(rho x JxJ)`` on left operators is positive semidefinite.  Writing
``x = sum x_ij e_ij`` turns the form into a Hermitian Gram matrix indexed by
pairs of left basis labels; its spectrum decides the verdict exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .chain import ChainFrame, DenseOperator, QuantumState
from .config import DEFAULT_TOL, DimensionError, PreconditionError, Tolerances
from .symmetry import ReflectionFrame, align_to_cone, apply_J, cone_matrix, j_conjugate

Verdict = Literal["strictly_rp", "rp", "not_rp", "not_j_invariant"]
PASSING = ("strictly_rp", "rp")


@dataclass(frozen=True, eq=False)
class RpCertificate:
    verdict: Verdict
    gram_min_eig: float
    gram_dim: int
    j_invariance_defect: float
    witness: Optional[np.ndarray] = None
    reduced_rank: Optional[int] = None

    @property
    def passes(self) -> bool:
        """True for the two non-failing verdicts."""
        return self.verdict in PASSING

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "gram_min_eig": None if math.isnan(self.gram_min_eig) else self.gram_min_eig,
            "gram_dim": self.gram_dim,
            "j_invariance_defect": self.j_invariance_defect,
            "reduced_rank": self.reduced_rank,
        }
        if self.witness is not None:
            out["witness"] = [[float(z.real), float(z.imag)] for z in self.witness.ravel()]
        return out


def gram_matrix(rho: np.ndarray, frame: ChainFrame) -> np.ndarray:
    """Gram matrix ``G[(k,l),(i,j)] = Tr(rho e_ij ⊗ J e_kl J)`` of the RP form.

    ``rho`` may be unnormalised.  For ``x`` with row-major coefficient vector
    ``c`` one has ``c^dagger G c = Tr(rho x ⊗ JxJ)``.
    """
    n, p = frame.half_dim, frame.half_reversal
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (frame.dim, frame.dim):
        raise DimensionError(f"expected a {frame.dim}x{frame.dim} matrix")
    r4 = rho.reshape(n, n, n, n)[:, p][:, :, :, p]
    return np.einsum("jlik->klij", r4).reshape(n * n, n * n)


def _classify(lo: float, gram_dim: int, tol: Tolerances) -> Verdict:
    slack = tol.psd_slack(gram_dim)
    if lo > slack:
        return "strictly_rp"
    if lo >= -slack:
        return "rp"
    return "not_rp"


def check_rp(state: QuantumState, rf: ReflectionFrame, tol: Tolerances = DEFAULT_TOL) -> RpCertificate:
    """Decide (strict) reflection positivity of a full-chain state.

    ``J``-invariance is tested first because the Gram matrix is Hermitian only
    for ``J``-invariant states.  Vector states use the factorised Gram spectrum
    ``{mu_a mu_b}`` of their Hermitian cone matrix; densities assemble ``G``.
    """
    frame = rf.frame
    if state.subsystem != "full" or state.frame != frame:
        raise DimensionError("check_rp needs a full-chain state on the reflection frame")
    n = frame.half_dim
    gram_dim = n * n

    if state.kind == "vector":
        # ||P_v - P_{Jv}|| = ||v - <Jv, v> Jv||; the residual form avoids cancellation
        jv = apply_J(state.data, rf)
        defect = float(np.linalg.norm(state.data - np.vdot(jv, state.data) * jv))
        svals = np.linalg.svd(state.as_matrix(), compute_uv=False)
        rank = int(np.sum(svals**2 > tol.rank))
        if defect > tol.j_invariance:
            return RpCertificate("not_j_invariant", math.nan, gram_dim, defect, None, rank)
        m = cone_matrix(align_to_cone(state.data, rf, tol), frame)
        mu, w = np.linalg.eigh(0.5 * (m + m.conj().T))
        products = np.outer(mu, mu)
        a, b = np.unravel_index(np.argmin(products), products.shape)
        lo = float(products[a, b])
        witness = np.outer(w[:, a], w[:, b].conj())
        return RpCertificate(_classify(lo, gram_dim, tol), lo, gram_dim, defect, witness, rank)

    rho = state.data
    defect = float(np.abs(np.linalg.eigvalsh(rho - j_conjugate(rho, rf))).max())
    r4 = rho.reshape(n, n, n, n)
    rank = int(np.sum(np.linalg.eigvalsh(np.einsum("arbr->ab", r4)) > tol.rank))
    if defect > tol.j_invariance:
        return RpCertificate("not_j_invariant", math.nan, gram_dim, defect, None, rank)
    g = gram_matrix(rho, frame)
    evals, evecs = np.linalg.eigh(0.5 * (g + g.conj().T))
    lo = float(evals[0])
    witness = evecs[:, 0].reshape(n, n)
    return RpCertificate(_classify(lo, gram_dim, tol), lo, gram_dim, defect, witness, rank)


def rp_form(rho: np.ndarray, x: np.ndarray, rf: ReflectionFrame) -> complex:
    """``Tr(rho (x ⊗ JxJ))`` evaluated directly, for cross-checking the Gram route."""
    p = rf.frame.half_reversal
    jxj = x[np.ix_(p, p)].conj()
    return complex(np.einsum("ij,ji->", rho, np.kron(x, jxj)))


def realignment(a: np.ndarray, frame: ChainFrame) -> np.ndarray:
    """``Lambda[(i,j),(r',s')] = a[(i, rev r'), (j, rev s')]``.

    ``Lambda(x ⊗ JxJ) = vec(x) vec(x)^dagger``, so membership in the closed
    positive span of such products is positive semidefiniteness of ``Lambda``.
    """
    n, p = frame.half_dim, frame.half_reversal
    a = np.asarray(a, dtype=complex)
    if a.shape != (frame.dim, frame.dim):
        raise DimensionError(f"expected a {frame.dim}x{frame.dim} matrix")
    a4 = a.reshape(n, n, n, n)[:, p][:, :, :, p]
    return a4.transpose(0, 2, 1, 3).reshape(n * n, n * n)


@dataclass(frozen=True, eq=False)
class ConeVerdict:
    status: Literal["inside", "boundary", "outside"]
    min_eig: float
    hermiticity_defect: float
    witness: np.ndarray

    @property
    def member(self) -> bool:
        return self.status != "outside"


def cone_membership(a: DenseOperator, rf: ReflectionFrame, tol: Tolerances = DEFAULT_TOL) -> ConeVerdict:
    """Locate a full-chain operator relative to the cone of reflection positive observables."""
    if a.subsystem != "full" or a.frame != rf.frame:
        raise DimensionError("cone_membership needs a full-chain operator on the reflection frame")
    lam = realignment(a.matrix, rf.frame)
    herm = float(np.abs(lam - lam.conj().T).max(initial=0.0))
    evals, evecs = np.linalg.eigh(0.5 * (lam + lam.conj().T))
    lo = float(evals[0])
    slack = tol.psd_slack(lam.shape[0])
    n = rf.frame.half_dim
    witness = evecs[:, 0].reshape(n, n)
    if herm > slack or lo < -slack:
        status = "outside"
    elif lo > slack:
        status = "inside"
    else:
        status = "boundary"
    return ConeVerdict(status, lo, herm, witness)


def strict_rp_test_observable(
    a: DenseOperator, rf: ReflectionFrame, tol: Tolerances = DEFAULT_TOL
) -> bool:
    """Whether ``a`` pairs strictly positively with every nonzero cone element.

    Pairing with the tracial inner product is the Hilbert-Schmidt pairing of
    realignments, so this is positive definiteness of ``Lambda(a)``.
    """
    verdict = cone_membership(a, rf, tol)
    if not verdict.member:
        raise PreconditionError(
            f"observable is outside the reflection positive cone (min eig {verdict.min_eig:.3g})"
        )
    return verdict.status == "inside"


def perturb_state(
    omega: QuantumState,
    a: DenseOperator,
    rf: ReflectionFrame,
    *,
    strict: bool = True,
    tol: Tolerances = DEFAULT_TOL,
) -> QuantumState:
    """The vector state ``b -> omega(a* b a) / omega(a* a)`` as the unit vector ``a Omega``.

    ``omega`` must be a reflection positive vector and ``a`` a cone element;
    with ``strict`` (the default) ``a`` must also be strictly reflection
    positive.  The input is first rephased into the natural cone, which ``a``
    preserves.
    """
    if omega.kind != "vector":
        raise PreconditionError("perturb_state needs a pure (vector) state")
    cert = check_rp(omega, rf, tol)
    if not cert.passes:
        raise PreconditionError(f"input state is not reflection positive ({cert.verdict})")
    if strict:
        if not strict_rp_test_observable(a, rf, tol):
            raise PreconditionError("observable is not strictly reflection positive")
    elif not cone_membership(a, rf, tol).member:
        raise PreconditionError("observable is outside the reflection positive cone")
    vec = a.matrix @ align_to_cone(omega.data, rf, tol)
    weight = float(np.vdot(vec, vec).real)
    if weight <= tol.psd:
        raise PreconditionError(f"omega(a* a) = {weight:.3g} is below tolerance")
    vec = vec / math.sqrt(weight)
    return QuantumState.from_vector(align_to_cone(vec, rf, tol), rf.frame, normalize=True)
