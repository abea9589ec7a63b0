"""Concrete chains: the cluster state and its purification, the transverse-field
Ising chain, and reflection positivity of Gibbs states."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chain import (
    ChainFrame,
    DenseOperator,
    PauliString,
    QuantumState,
    assemble,
    expectation,
    reduced_density,
    term,
)
from .config import DEFAULT_TOL, ClaimViolation, DimensionError, PreconditionError, Tolerances
from .purify import canonical_purification
from .rp import RpCertificate, check_rp, cone_membership
from .symmetry import (
    ReflectionFrame,
    RotationFrame,
    align_to_cone,
    conjugate_by_J,
    j_fixed_basis,
    rotate,
)

MAX_SITES = 12


def _site_bits(frame: ChainFrame) -> np.ndarray:
    """``bits[t, s-1]`` is the qubit value of site ``s`` in basis state ``t``."""
    L = frame.n_sites
    idx = np.arange(frame.dim)[:, None]
    return (idx >> (L - 1 - np.arange(L))[None, :]) & 1


# ---------------------------------------------------------------- cluster state


def cluster_stabilizers(n_half: int) -> list[PauliString]:
    """``Z_{i-1} X_i Z_{i+1}`` for every site of the periodic chain."""
    if n_half < 2:
        raise ValueError("cluster state needs N >= 2")
    L = 2 * n_half
    return [term(1.0, {(i - 2) % L + 1: "Z", i: "X", i % L + 1: "Z"}) for i in range(1, L + 1)]


def cluster_hamiltonian(n_half: int) -> DenseOperator:
    """``-sum Z_{i-1} X_i Z_{i+1}``, whose unique ground state is the cluster state."""
    frame = ChainFrame(n_half)
    return -assemble(cluster_stabilizers(n_half), frame)


def build_cluster_state(n_half: int) -> QuantumState:
    """Controlled-Z entangled ``|+>^{2N}`` on the periodic chain.

    The result is the common ``+1`` eigenvector of all ``Z_{i-1} X_i Z_{i+1}``.
    """
    if n_half < 2:
        raise ValueError("cluster state needs N >= 2")
    frame = ChainFrame(n_half)
    bits = _site_bits(frame)
    bonds = (bits * np.roll(bits, -1, axis=1)).sum(axis=1)
    vec = (-1.0) ** bonds / math.sqrt(frame.dim)
    return QuantumState.from_vector(vec, frame)


def zz_rotation_cluster_state(n_half: int) -> QuantumState:
    """``prod_j exp(i pi/4 Z_j Z_{j+1}) |+>^{2N}`` (cyclic).

    Differs from :func:`build_cluster_state` by ``prod_i Z_i`` and a global
    phase, so it is stabilised by ``-Z_{i-1} X_i Z_{i+1}``.
    """
    frame = ChainFrame(n_half)
    z = 1 - 2 * _site_bits(frame)
    zz = (z * np.roll(z, -1, axis=1)).sum(axis=1)
    vec = np.exp(0.25j * np.pi * zz) / math.sqrt(frame.dim)
    return QuantumState.from_vector(vec, frame)


@dataclass(frozen=True, eq=False)
class ClusterDemo:
    """Odd/even layout of the purified chain: odd site ``i`` is paired with even site ``2N + 1 - i``."""

    n_half: int
    layout: dict = field(init=False)

    def __post_init__(self) -> None:
        L = 2 * self.n_half
        object.__setattr__(self, "layout", {i: L + 1 - i for i in range(1, L, 2)})

    @property
    def odd_sites(self) -> list[int]:
        return list(range(1, 2 * self.n_half, 2))

    def physical_site(self, s: int) -> int:
        """Where abstract site ``s`` of the reflected purification chain sits physically.

        Abstract left site ``a`` is odd site ``2a - 1``; its mirror ``2N + 1 - a``
        is that site's partner ``2N + 2 - 2a``.
        """
        N = self.n_half
        return 2 * s - 1 if s <= N else 2 * s - 2 * N


def relabel_sites(vec: np.ndarray, frame: ChainFrame, to_physical) -> np.ndarray:
    """Move the amplitude on abstract site ``s`` to physical site ``to_physical(s)``."""
    L, d = frame.n_sites, frame.local_dim
    inverse = {to_physical(s): s for s in range(1, L + 1)}
    axes = [inverse[p] - 1 for p in range(1, L + 1)]
    return np.ascontiguousarray(vec.reshape((d,) * L).transpose(axes)).ravel()


def epr_pairs(frame: ChainFrame, pairs: dict) -> np.ndarray:
    """Product of EPR pairs ``(|00> + |11>)/sqrt 2`` on the given site pairs."""
    bits = _site_bits(frame)
    mask = np.ones(frame.dim, dtype=bool)
    for i, j in pairs.items():
        mask &= bits[:, i - 1] == bits[:, j - 1]
    return mask / math.sqrt(mask.sum())


@dataclass(frozen=True, eq=False)
class ClusterReport:
    n_half: int
    stabilizers: list
    reduced_density_deviation: float
    zzzz: float
    zz_outer: float
    zz_inner: float
    w_tilde_deviation: float
    purified: QuantumState = field(repr=False)

    @property
    def ok(self) -> bool:
        tol = 1e-10
        return (
            self.reduced_density_deviation < 1e-11
            and abs(self.zzzz - 1) < tol
            and abs(self.zz_outer) < tol
            and abs(self.zz_inner) < tol
            and self.w_tilde_deviation < tol
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n_half,
            "stabilizers": self.stabilizers,
            "reduced_density_deviation": self.reduced_density_deviation,
            "zzzz": self.zzzz,
            "zz_outer": self.zz_outer,
            "zz_inner": self.zz_inner,
            "w_tilde_deviation": self.w_tilde_deviation,
            "ok": self.ok,
        }


def cluster_purification_demo(n_half: int) -> ClusterReport:
    """Restrict the cluster state to odd sites, purify across the odd/even cut,
    and measure the long-range correlators of the result."""
    N = n_half
    demo = ClusterDemo(N)
    frame = ChainFrame(N)
    L = frame.n_sites
    w = build_cluster_state(N)
    stabs = [expectation(w, assemble([s], frame)).real for s in cluster_stabilizers(N)]

    rho_odd = reduced_density(w, demo.odd_sites)
    x_all = assemble([term(1.0, {s: "X" for s in range(1, N + 1)})], ChainFrame(N, 2), "left")
    expected = (np.eye(2**N) + x_all.matrix) / 2**N
    dev = float(np.linalg.norm(rho_odd - expected, 2))

    rf = ReflectionFrame(frame)
    left = QuantumState.from_density(rho_odd, frame, "left", hermitize=True)
    abstract = canonical_purification(left, rf)
    vec = relabel_sites(abstract.data, frame, demo.physical_site)
    psi = QuantumState.from_vector(vec, frame, normalize=True)

    def corr(sites):
        return expectation(psi, assemble([term(1.0, {s: "Z" for s in sites})], frame)).real

    xi = epr_pairs(frame, demo.layout)
    x_even = assemble([term(1.0, {s: "X" for s in range(2, L + 1, 2)})], frame).matrix
    w_tilde = (xi + x_even @ xi) / math.sqrt(2)
    return ClusterReport(
        n_half=N,
        stabilizers=[float(s) for s in stabs],
        reduced_density_deviation=dev,
        zzzz=float(corr([1, L, N, N + 1])),
        zz_outer=float(corr([1, L])),
        zz_inner=float(corr([N, N + 1])),
        w_tilde_deviation=float(np.linalg.norm(psi.data - w_tilde)),
        purified=psi,
    )


# ---------------------------------------------------------------- Ising chain


@dataclass(frozen=True)
class TfimModel:
    """``H = -sum_i X_i X_{i+1} - sum_i Z_i`` on ``2N`` periodic sites."""

    n_half: int
    periodic: bool = True

    def __post_init__(self) -> None:
        if not self.periodic:
            raise ValueError("only the periodic chain is supported")
        if not 1 <= self.n_half <= MAX_SITES // 2:
            raise ValueError(f"2N must lie in 2..{MAX_SITES}")

    @property
    def frame(self) -> ChainFrame:
        return ChainFrame(self.n_half)

    def terms(self) -> list[PauliString]:
        L = 2 * self.n_half
        # at 2N = 2 both bonds join sites 1 and 2, giving -2 X_1 X_2
        bonds = [term(-1.0, {i: "X", i % L + 1: "X"}) for i in range(1, L + 1)]
        return bonds + [term(-1.0, {i: "Z"}) for i in range(1, L + 1)]

    def hamiltonian(self) -> DenseOperator:
        return assemble(self.terms(), self.frame)


@dataclass(frozen=True, eq=False)
class GroundState:
    state: QuantumState
    energy: float
    gap: float
    rotation_defect: float


def tfim_ground_state(n_half: int) -> GroundState:
    """Dense ground state of the Ising chain, rephased into the natural cone."""
    model = TfimModel(n_half)
    frame = model.frame
    energies, vectors = np.linalg.eigh(model.hamiltonian().matrix)
    gap = float(energies[1] - energies[0])
    if gap <= 1e-8:
        raise ClaimViolation(f"Ising ground state is degenerate (gap {gap:.3g})")
    vec = align_to_cone(vectors[:, 0], ReflectionFrame(frame))
    rot = RotationFrame(frame)
    defect = float(np.linalg.norm(rotate(vec, rot, 1) - vec))
    if defect > 1e-8:
        raise ClaimViolation(f"Ising ground state is not rotation invariant ({defect:.3g})")
    return GroundState(QuantumState.from_vector(vec, frame, normalize=True), float(energies[0]), gap, defect)


# ---------------------------------------------------------------- Gibbs states


@dataclass(frozen=True, eq=False)
class GibbsDecomposition:
    """``H = H_L + H_0 + J H_L J`` with inverse temperature ``beta``."""

    h_left: DenseOperator
    h_zero: DenseOperator
    beta: float

    def __post_init__(self) -> None:
        if self.h_left.subsystem != "left" or self.h_zero.subsystem != "full":
            raise DimensionError("h_left must be a left operator and h_zero a full one")
        if self.h_left.frame != self.h_zero.frame:
            raise DimensionError("h_left and h_zero live on different chains")
        if not self.h_left.hermitian or not self.h_zero.hermitian:
            raise PreconditionError("Hamiltonian pieces must be Hermitian")
        if not self.beta >= 0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")

    @property
    def frame(self) -> ChainFrame:
        return self.h_left.frame

    @property
    def h_right(self) -> DenseOperator:
        return conjugate_by_J(self.h_left, ReflectionFrame(self.frame))

    @property
    def hamiltonian(self) -> DenseOperator:
        n = self.frame.half_dim
        eye = np.eye(n)
        mat = np.kron(self.h_left.matrix, eye) + self.h_zero.matrix + np.kron(eye, self.h_right.matrix)
        return DenseOperator(mat, "full", self.frame)

    def with_beta(self, beta: float) -> "GibbsDecomposition":
        return GibbsDecomposition(self.h_left, self.h_zero, beta)


def tfim_decomposition(n_half: int, beta: float = 1.0) -> GibbsDecomposition:
    """Split the Ising chain at the reflection plane; the two cut bonds form ``H_0``."""
    N = n_half
    frame = ChainFrame(N)
    L = frame.n_sites
    left_terms = [term(-1.0, {i: "X", i + 1: "X"}) for i in range(1, N)]
    left_terms += [term(-1.0, {i: "Z"}) for i in range(1, N + 1)]
    h_left = assemble(left_terms, frame, "left")
    h_zero = assemble([term(-1.0, {N: "X", N + 1: "X"}), term(-1.0, {1: "X", L: "X"})], frame)
    return GibbsDecomposition(h_left, h_zero, beta)


def check_gibbs_hypothesis(dec: GibbsDecomposition, rf: ReflectionFrame, tol: Tolerances = DEFAULT_TOL):
    """Verify ``-H_0`` lies in the reflection positive cone; raise otherwise."""
    verdict = cone_membership(-dec.h_zero, rf, tol)
    if not verdict.member:
        raise PreconditionError(
            f"-H_0 is not a reflection positive observable (min eig {verdict.min_eig:.3g})"
        )
    return verdict


def gibbs_state(dec: GibbsDecomposition) -> QuantumState:
    """``exp(-beta H) / Z`` through a Hermitian eigendecomposition."""
    energies, vectors = np.linalg.eigh(dec.hamiltonian.matrix)
    weights = np.exp(-dec.beta * (energies - energies[0]))
    weights /= weights.sum()
    rho = (vectors * weights) @ vectors.conj().T
    return QuantumState.from_density(rho, dec.frame, hermitize=True)


def gibbs_rp(dec: GibbsDecomposition, tol: Tolerances = DEFAULT_TOL) -> RpCertificate:
    """Certificate for the Gibbs state; the cone hypothesis on ``-H_0`` is checked first.

    With ``-H_0`` in the cone the Gibbs state is always reflection positive,
    so a ``not_rp`` verdict here signals a bug; callers treat it as a claim
    violation.
    """
    rf = ReflectionFrame(dec.frame)
    check_gibbs_hypothesis(dec, rf, tol)
    return check_rp(gibbs_state(dec), rf, tol)


@dataclass(frozen=True, eq=False)
class LevelReport:
    energy: float
    multiplicity: int
    verdicts: list
    gram_min_eigs: list


@dataclass(frozen=True, eq=False)
class GroundLimitReport:
    levels: list
    ground_verdict: str
    n_passing: int
    passing_levels: list

    @property
    def ok(self) -> bool:
        return (
            self.ground_verdict in ("rp", "strictly_rp")
            and self.passing_levels == [0]
            and self.n_passing == self.levels[0].multiplicity
        )

    def to_dict(self) -> dict:
        return {
            "ground_verdict": self.ground_verdict,
            "n_passing": self.n_passing,
            "passing_levels": self.passing_levels,
            "levels": [
                {
                    "energy": lv.energy,
                    "multiplicity": lv.multiplicity,
                    "verdicts": lv.verdicts,
                    "gram_min_eigs": lv.gram_min_eigs,
                }
                for lv in self.levels
            ],
            "ok": self.ok,
        }


def gibbs_ground_limit(
    dec: GibbsDecomposition, tol: Tolerances = DEFAULT_TOL, level_tol: float = 1e-9
) -> GroundLimitReport:
    """Scan every eigenstate of ``H`` for reflection positivity.

    Degenerate levels are resolved into an orthonormal ``J``-fixed basis and
    each basis vector is certified.
    """
    rf = ReflectionFrame(dec.frame)
    check_gibbs_hypothesis(dec, rf, tol)
    energies, vectors = np.linalg.eigh(dec.hamiltonian.matrix)
    groups: list[list[int]] = [[0]]
    for i in range(1, len(energies)):
        if energies[i] - energies[groups[-1][0]] <= level_tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    levels = []
    n_passing = 0
    passing_levels = []
    for li, idx in enumerate(groups):
        basis = j_fixed_basis(vectors[:, idx], rf)
        verdicts, lows = [], []
        for col in basis.T:
            cert = check_rp(QuantumState.from_vector(col, dec.frame, normalize=True), rf, tol)
            verdicts.append(cert.verdict)
            lows.append(cert.gram_min_eig)
            if cert.passes:
                n_passing += 1
                if li not in passing_levels:
                    passing_levels.append(li)
        levels.append(LevelReport(float(energies[idx[0]]), len(idx), verdicts, lows))
    return GroundLimitReport(levels, levels[0].verdicts[0], n_passing, passing_levels)
