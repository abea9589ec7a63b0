"""CRT reflection ``J``, the shift-by-two rotation ``U`` and cone-matrix bookkeeping.

``J`` is anti-linear, so it is never stored as a matrix.  It is the pair
(site-reversal permutation ``R``, entrywise conjugation): ``J v = R conj(v)``.
For a linear operator ``A`` the conjugated operator ``J A J`` is the ordinary
matrix ``R conj(A) R``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chain import ChainFrame, DenseOperator, QuantumState
from .config import DEFAULT_TOL, DimensionError, PreconditionError, Tolerances


@dataclass(frozen=True, eq=False)
class ReflectionFrame:
    """Site reflection ``i -> 2N + 1 - i`` combined with complex conjugation."""

    frame: ChainFrame
    perm: np.ndarray = field(init=False, repr=False)
    conj_marker: bool = field(default=True, init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "perm", self.frame.full_reversal)

    @property
    def matrix(self) -> np.ndarray:
        """The permutation matrix ``R`` (the linear part of ``J``)."""
        return np.eye(self.frame.dim)[self.perm]


@dataclass(frozen=True, eq=False)
class RotationFrame:
    """Cyclic shift of the chain by two sites, ``U^N = 1``."""

    frame: ChainFrame
    shift: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        L, d = self.frame.n_sites, self.frame.local_dim
        # (U v)[t] = v[s] with s_j = t_{j+2} cyclically
        axes = tuple((a - 2) % L for a in range(L))
        idx = np.arange(self.frame.dim).reshape((d,) * L).transpose(axes)
        object.__setattr__(self, "shift", np.ascontiguousarray(idx).ravel())

    @property
    def shift_matrix(self) -> np.ndarray:
        return np.eye(self.frame.dim)[self.shift]

    def power(self, k: int) -> np.ndarray:
        """Index array of ``U^k`` (any integer ``k``)."""
        k %= self.frame.n_half
        idx = np.arange(self.frame.dim)
        for _ in range(k):
            idx = idx[self.shift]
        return idx


def _vector_data(v) -> np.ndarray:
    return v.data if isinstance(v, QuantumState) else np.asarray(v, dtype=complex)


def apply_J(v, rf: ReflectionFrame) -> np.ndarray:
    """``J v``: reverse the site order and conjugate the amplitudes."""
    data = _vector_data(v)
    if data.shape != (rf.frame.dim,):
        raise DimensionError(f"expected a full-chain vector of length {rf.frame.dim}")
    return data[rf.perm].conj()


def j_conjugate(matrix: np.ndarray, rf: ReflectionFrame) -> np.ndarray:
    """``J A J`` for a full-chain matrix ``A``."""
    p = rf.perm
    if matrix.shape != (rf.frame.dim, rf.frame.dim):
        raise DimensionError("j_conjugate expects a full-chain matrix")
    return matrix[np.ix_(p, p)].conj()


def conjugate_by_J(x: DenseOperator, rf: ReflectionFrame) -> DenseOperator:
    """Map a left operator ``x`` to the right operator ``J x J``.

    Entrywise ``(JxJ)_{rs} = conj(x_{rev(r), rev(s)})``.
    """
    if x.subsystem != "left":
        raise DimensionError(f"conjugate_by_J expects a left operator, got {x.subsystem!r}")
    if x.frame != rf.frame:
        raise DimensionError("operator and reflection frames differ")
    p = rf.frame.half_reversal
    return DenseOperator(x.matrix[np.ix_(p, p)].conj(), "right", x.frame)


def rotate(v, rot: RotationFrame, k: int = 1) -> np.ndarray:
    """``U^k v`` where ``U`` moves sites ``2N-1, 2N`` to positions ``1, 2``."""
    data = _vector_data(v)
    if data.shape != (rot.frame.dim,):
        raise DimensionError(f"expected a full-chain vector of length {rot.frame.dim}")
    return data[rot.power(k)]


def rotate_operator(matrix: np.ndarray, rot: RotationFrame) -> np.ndarray:
    """``U A U^{-1}``."""
    s = rot.shift
    return matrix[np.ix_(s, s)]


def cone_matrix(v, frame: ChainFrame) -> np.ndarray:
    """Reshape a full-chain vector to ``M[i, m] = psi[i, rev(m)]``.

    ``J psi`` has cone matrix ``M^dagger``; the natural positive cone is the set
    of vectors with ``M`` positive semidefinite.
    """
    data = _vector_data(v)
    n = frame.half_dim
    if data.shape != (frame.dim,):
        raise DimensionError(f"expected a full-chain vector of length {frame.dim}")
    return data.reshape(n, n)[:, frame.half_reversal]


def vector_from_cone_matrix(m: np.ndarray, frame: ChainFrame) -> np.ndarray:
    """Inverse of :func:`cone_matrix`."""
    n = frame.half_dim
    if m.shape != (n, n):
        raise DimensionError(f"cone matrix must be {n}x{n}")
    return np.ascontiguousarray(m[:, frame.half_reversal]).ravel()


def j_overlap(v, rf: ReflectionFrame) -> complex:
    """``<J v, v>``; has modulus one exactly when ``J`` fixes the ray of a unit ``v``."""
    data = _vector_data(v)
    return complex(np.vdot(apply_J(data, rf), data))


def align_to_cone(v, rf: ReflectionFrame, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Rephase a vector whose ray is ``J``-invariant so that ``J v = v``.

    Of the two fixed phases the one whose cone matrix has a positive dominant
    eigenvalue is returned, so any reflection positive vector lands in the
    natural cone.  Raises :class:`PreconditionError` when the ray is not
    ``J``-invariant.
    """
    data = _vector_data(v)
    norm = np.linalg.norm(data)
    if norm == 0:
        raise PreconditionError("cannot align the zero vector")
    overlap = j_overlap(data, rf) / norm**2
    if abs(abs(overlap) - 1.0) > tol.j_invariance:
        raise PreconditionError(
            f"vector ray is not J-invariant (|<Jv, v>| = {abs(overlap):.12g})"
        )
    # J v = e^{i theta} v with e^{i theta} = conj(overlap)
    theta = -np.angle(overlap)
    out = data * np.exp(0.5j * theta)
    m = cone_matrix(out, rf.frame)
    m = 0.5 * (m + m.conj().T)
    w, _ = np.linalg.eigh(m)
    # sign choice: the dominant eigenvalue (by magnitude) is made positive
    if w[np.argmax(np.abs(w))] < 0:
        out = -out
    return out


def j_fixed_basis(w: np.ndarray, rf: ReflectionFrame, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal ``J``-fixed basis of the span of the orthonormal columns of ``w``.

    The span must be mapped into itself by ``J`` (e.g. an eigenspace of a
    ``J``-invariant Hamiltonian).  Fixed vectors ``w c`` solve ``C conj(c) = c``
    with ``C = w^dagger J w``, a real-linear system in ``(Re c, Im c)``; an
    orthonormal real null basis gives an orthonormal complex basis because
    inner products of ``J``-fixed vectors are real.
    """
    w = np.asarray(w, dtype=complex)
    if w.ndim == 1:
        w = w[:, None]
    k = w.shape[1]
    jw = w[rf.perm].conj()
    c = w.conj().T @ jw
    leak = np.linalg.norm(jw - w @ c)
    if leak > tol:
        raise PreconditionError(f"subspace is not J-invariant (leak {leak:.3g})")
    eye = np.eye(k)
    real_form = np.block([[c.real - eye, c.imag], [c.imag, -c.real - eye]])
    _, s, vh = np.linalg.svd(real_form)
    null = vh[s.size - np.sum(s <= tol):] if np.any(s <= tol) else vh[:0]
    if null.shape[0] != k:
        raise PreconditionError(f"found {null.shape[0]} J-fixed directions, expected {k}")
    coeffs = null[:, :k] + 1j * null[:, k:]
    return w @ coeffs.T
