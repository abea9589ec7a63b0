"""Chain geometry, Pauli strings and dense operator / state containers.

Basis order is big-endian throughout: site 1 is the most significant base-``d``
digit of a basis index.  The left half is sites ``1..N`` and the right half is
sites ``N+1..2N``, so a full-system vector reshaped to ``(d**N, d**N)`` has the
left index on rows.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Literal, Mapping, Sequence, Union

import numpy as np

from .config import DEFAULT_TOL, DimensionError, Tolerances

Subsystem = Literal["full", "left", "right"]
Letter = Union[str, np.ndarray]

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_MATRIX_UNIT = re.compile(r"^E(\d)(\d)$")


@dataclass(frozen=True)
class ChainFrame:
    """A chain of ``2 * n_half`` sites with local dimension ``local_dim``."""

    n_half: int
    local_dim: int = 2

    def __post_init__(self) -> None:
        if int(self.n_half) != self.n_half or self.n_half < 1:
            raise ValueError(f"n_half must be a positive integer, got {self.n_half}")
        if int(self.local_dim) != self.local_dim or self.local_dim < 2:
            raise ValueError(f"local_dim must be an integer >= 2, got {self.local_dim}")

    @property
    def n_sites(self) -> int:
        return 2 * self.n_half

    @property
    def half_dim(self) -> int:
        return self.local_dim**self.n_half

    @property
    def dim(self) -> int:
        return self.local_dim**self.n_sites

    def subsystem_dim(self, subsystem: Subsystem) -> int:
        if subsystem == "full":
            return self.dim
        if subsystem in ("left", "right"):
            return self.half_dim
        raise DimensionError(f"unknown subsystem {subsystem!r}")

    def reflect_site(self, i: int) -> int:
        """Site index mirrored through the chain centre, ``2N + 1 - i``."""
        self.check_site(i)
        return self.n_sites + 1 - i

    def check_site(self, i: int) -> None:
        if not 1 <= i <= self.n_sites:
            raise DimensionError(f"site {i} outside 1..{self.n_sites}")

    @cached_property
    def half_reversal(self) -> np.ndarray:
        """Index map ``m -> rev(m)`` reversing the ``N`` digits of a half-chain index."""
        return _digit_reversal(self.local_dim, self.n_half)

    @cached_property
    def full_reversal(self) -> np.ndarray:
        """Index map reversing all ``2N`` digits of a full-chain index."""
        return _digit_reversal(self.local_dim, self.n_sites)

    @classmethod
    def from_dim(cls, dim: int, local_dim: int = 2, *, half: bool = False) -> "ChainFrame":
        """Infer the frame whose full (or half, if ``half``) dimension is ``dim``."""
        n_sites = round(np.log(dim) / np.log(local_dim))
        if n_sites < 1 or local_dim**n_sites != dim:
            raise DimensionError(f"dimension {dim} is not a power of {local_dim}")
        if half:
            return cls(n_sites, local_dim)
        if n_sites % 2:
            raise DimensionError(f"dimension {dim} = {local_dim}^{n_sites} is not an even chain")
        return cls(n_sites // 2, local_dim)


def _digit_reversal(d: int, n: int) -> np.ndarray:
    idx = np.arange(d**n).reshape((d,) * n)
    return np.ascontiguousarray(idx.transpose(tuple(range(n - 1, -1, -1)))).ravel()


@dataclass(frozen=True, eq=False)
class PauliString:
    """``coefficient`` times a tensor product of single-site letters.

    Letters are ``"I"``, ``"X"``, ``"Y"``, ``"Z"`` (qubits only), ``"Eab"`` for the
    matrix unit ``|a><b|`` (any local dimension), or an explicit ``d x d`` array.
    Sites absent from ``letters`` carry the identity.
    """

    coefficient: complex
    letters: Mapping[int, Letter] = field(default_factory=dict)

    def site_matrix(self, site: int, local_dim: int) -> np.ndarray:
        return letter_matrix(self.letters.get(site, "I"), local_dim)


def letter_matrix(letter: Letter, local_dim: int) -> np.ndarray:
    if isinstance(letter, str):
        key = letter.strip().upper()
        if key == "I":
            return np.eye(local_dim, dtype=complex)
        if key in PAULI:
            if local_dim != 2:
                raise DimensionError(f"Pauli letter {key} needs local_dim 2, not {local_dim}")
            return PAULI[key]
        match = _MATRIX_UNIT.match(key)
        if match:
            a, b = int(match.group(1)), int(match.group(2))
            if max(a, b) >= local_dim:
                raise DimensionError(f"matrix unit {key} exceeds local_dim {local_dim}")
            out = np.zeros((local_dim, local_dim), dtype=complex)
            out[a, b] = 1.0
            return out
        raise DimensionError(f"unknown letter {letter!r}")
    mat = np.asarray(letter, dtype=complex)
    if mat.shape != (local_dim, local_dim):
        raise DimensionError(f"letter of shape {mat.shape} for local_dim {local_dim}")
    return mat


def term(coefficient: complex, letters: Mapping[int, Letter] | None = None) -> PauliString:
    return PauliString(complex(coefficient), dict(letters or {}))


def _is_hermitian(mat: np.ndarray, tol: float) -> bool:
    scale = max(1.0, float(np.abs(mat).max(initial=0.0)))
    return bool(np.abs(mat - mat.conj().T).max(initial=0.0) <= tol * scale)


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """A dense complex matrix on the full chain or on one half."""

    matrix: np.ndarray
    subsystem: Subsystem
    frame: ChainFrame
    hermitian: bool = field(init=False)

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=complex)
        n = self.frame.subsystem_dim(self.subsystem)
        if mat.shape != (n, n):
            raise DimensionError(
                f"{self.subsystem} operator must be {n}x{n}, got shape {mat.shape}"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "hermitian", _is_hermitian(mat, DEFAULT_TOL.hermitian))

    def _same_space(self, other: "DenseOperator") -> None:
        if other.subsystem != self.subsystem or other.frame != self.frame:
            raise DimensionError("operators live on different spaces")

    def __add__(self, other: "DenseOperator") -> "DenseOperator":
        self._same_space(other)
        return DenseOperator(self.matrix + other.matrix, self.subsystem, self.frame)

    def __sub__(self, other: "DenseOperator") -> "DenseOperator":
        self._same_space(other)
        return DenseOperator(self.matrix - other.matrix, self.subsystem, self.frame)

    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        self._same_space(other)
        return DenseOperator(self.matrix @ other.matrix, self.subsystem, self.frame)

    def __mul__(self, scalar: complex) -> "DenseOperator":
        return DenseOperator(scalar * self.matrix, self.subsystem, self.frame)

    __rmul__ = __mul__

    def __neg__(self) -> "DenseOperator":
        return DenseOperator(-self.matrix, self.subsystem, self.frame)

    @property
    def adjoint(self) -> "DenseOperator":
        return DenseOperator(self.matrix.conj().T, self.subsystem, self.frame)

    @classmethod
    def identity(cls, frame: ChainFrame, subsystem: Subsystem = "full") -> "DenseOperator":
        return cls(np.eye(frame.subsystem_dim(subsystem)), subsystem, frame)


def tensor(left: DenseOperator, right: DenseOperator) -> DenseOperator:
    """``left ⊗ right`` as a full-chain operator."""
    if left.subsystem != "left" or right.subsystem != "right":
        raise DimensionError("tensor expects a left and a right operator")
    if left.frame != right.frame:
        raise DimensionError("frames differ")
    return DenseOperator(np.kron(left.matrix, right.matrix), "full", left.frame)


def assemble(
    terms: Sequence[PauliString],
    frame: ChainFrame,
    subsystem: Subsystem = "full",
) -> DenseOperator:
    """Sum of Kronecker products of the given strings.

    For ``subsystem="right"`` site labels still use chain numbering ``N+1..2N``.
    """
    if subsystem == "full":
        sites = range(1, frame.n_sites + 1)
    elif subsystem == "left":
        sites = range(1, frame.n_half + 1)
    elif subsystem == "right":
        sites = range(frame.n_half + 1, frame.n_sites + 1)
    else:
        raise DimensionError(f"unknown subsystem {subsystem!r}")
    n = frame.subsystem_dim(subsystem)
    d = frame.local_dim
    out = np.zeros((n, n), dtype=complex)
    for t in terms:
        for s in t.letters:
            if s not in sites:
                raise DimensionError(f"site {s} outside the {subsystem} subsystem")
        factors: list[np.ndarray] = []
        run = 1
        for s in sites:
            if s in t.letters:
                if run > 1:
                    factors.append(np.eye(run))
                    run = 1
                factors.append(t.site_matrix(s, d))
            else:
                run *= d
        if run > 1:
            factors.append(np.eye(run))
        out += t.coefficient * reduce(np.kron, factors, np.ones((1, 1), dtype=complex))
    return DenseOperator(out, subsystem, frame)


@dataclass(frozen=True, eq=False)
class QuantumState:
    """A unit vector or a density matrix on the full chain or one half."""

    kind: Literal["vector", "density"]
    data: np.ndarray
    frame: ChainFrame
    subsystem: Subsystem = "full"
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.data, dtype=complex)
        n = self.frame.subsystem_dim(self.subsystem)
        if self.kind == "vector":
            if arr.shape != (n,):
                raise DimensionError(f"vector must have length {n}, got {arr.shape}")
            norm = np.linalg.norm(arr)
            if abs(norm - 1.0) > self.tol.state:
                raise ValueError(f"state vector has norm {norm!r}, expected 1")
        elif self.kind == "density":
            if arr.shape != (n, n):
                raise DimensionError(f"density must be {n}x{n}, got {arr.shape}")
            herm = np.abs(arr - arr.conj().T).max(initial=0.0)
            if herm > self.tol.state:
                raise ValueError(f"density matrix is not Hermitian (defect {herm:.3g})")
            tr = np.trace(arr).real
            if abs(tr - 1.0) > self.tol.state:
                raise ValueError(f"density matrix has trace {tr!r}, expected 1")
            lo = np.linalg.eigvalsh(arr).min()
            if lo < -self.tol.psd:
                raise ValueError(f"density matrix has eigenvalue {lo:.3g} < 0")
        else:
            raise ValueError(f"unknown state kind {self.kind!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_vector(
        cls, vec, frame: ChainFrame, subsystem: Subsystem = "full", *, normalize: bool = False
    ) -> "QuantumState":
        vec = np.asarray(vec, dtype=complex)
        if normalize:
            norm = np.linalg.norm(vec)
            if norm == 0:
                raise ValueError("cannot normalize the zero vector")
            vec = vec / norm
        return cls("vector", vec, frame, subsystem)

    @classmethod
    def from_density(
        cls, rho, frame: ChainFrame, subsystem: Subsystem = "full", *, hermitize: bool = False
    ) -> "QuantumState":
        rho = np.asarray(rho, dtype=complex)
        if hermitize:
            rho = 0.5 * (rho + rho.conj().T)
        return cls("density", rho, frame, subsystem)

    @property
    def is_pure_vector(self) -> bool:
        return self.kind == "vector"

    def density_matrix(self) -> np.ndarray:
        if self.kind == "vector":
            return np.outer(self.data, self.data.conj())
        return self.data

    def as_matrix(self) -> np.ndarray:
        """Full-chain vector reshaped to ``(left, right)`` coefficients."""
        if self.kind != "vector" or self.subsystem != "full":
            raise DimensionError("as_matrix needs a full-chain vector")
        n = self.frame.half_dim
        return self.data.reshape(n, n)


def partial_trace(state: QuantumState, keep: Literal["left", "right"]) -> QuantumState:
    """Reduced density matrix of a full-chain state on one half."""
    if state.subsystem != "full":
        raise DimensionError("partial_trace needs a full-chain state")
    n = state.frame.half_dim
    if state.kind == "vector":
        v = state.data.reshape(n, n)
        rho = v @ v.conj().T if keep == "left" else v.T @ v.conj()
    else:
        r4 = state.data.reshape(n, n, n, n)
        if keep == "left":
            rho = np.einsum("arbr->ab", r4)
        elif keep == "right":
            rho = np.einsum("aras->rs", r4)
        else:
            raise DimensionError(f"keep must be 'left' or 'right', got {keep!r}")
    return QuantumState.from_density(rho, state.frame, keep, hermitize=True)


def reduced_density(state: QuantumState, sites: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of a full-chain state on ``sites`` (in the given order)."""
    frame = state.frame
    for s in sites:
        frame.check_site(s)
    if len(set(sites)) != len(sites):
        raise DimensionError("repeated site in reduction")
    d, L = frame.local_dim, frame.n_sites
    keep = [s - 1 for s in sites]
    rest = [i for i in range(L) if i not in keep]
    k = d ** len(keep)
    if state.kind == "vector":
        psi = state.data.reshape((d,) * L).transpose(keep + rest).reshape(k, -1)
        return psi @ psi.conj().T
    rho = state.data.reshape((d,) * (2 * L))
    rho = rho.transpose(keep + rest + [L + i for i in keep] + [L + i for i in rest])
    m = d ** len(rest)
    return np.einsum("arbr->ab", rho.reshape(k, m, k, m))


def expectation(state: QuantumState, op: DenseOperator) -> complex:
    """``<psi|A|psi>`` or ``Tr(rho A)``."""
    if state.frame != op.frame or state.subsystem != op.subsystem:
        raise DimensionError("state and operator live on different spaces")
    if state.kind == "vector":
        value = np.vdot(state.data, op.matrix @ state.data)
    else:
        value = np.einsum("ij,ji->", state.data, op.matrix)
    return complex(value)
