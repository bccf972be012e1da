"""Dense bipartite state primitives.

Subsystem X is always the left (most significant) tensor factor. Matrices are
plain complex ``numpy`` arrays; pure states and density matrices carry their
bipartition ``(d_X, d_Y)`` so partial traces know how to reshape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

ATOL = 1e-10

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

JACOBI_RTOL = 1e-13
JACOBI_MAX_SWEEPS = 100


class DimensionError(ValueError):
    """Operands have incompatible shapes or bipartitions."""


class NotHermitianError(ValueError):
    pass


class InvalidStateError(ValueError):
    """Vector or matrix fails the pure-state / density-matrix invariants."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.flags.writeable = False
    return a


def _check_dims(dims: Sequence[int], size: int) -> tuple[int, int]:
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2 or min(dims) < 1 or dims[0] * dims[1] != size:
        raise DimensionError(f"bipartition {dims} does not match dimension {size}")
    return dims


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector on a (possibly trivial) bipartite space."""

    amplitudes: np.ndarray
    dims: tuple[int, int]

    def __init__(self, amplitudes, dims: Sequence[int] | None = None):
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(vec)):
            raise InvalidStateError("amplitudes must be finite")
        dims = (vec.size, 1) if dims is None else dims
        object.__setattr__(self, "dims", _check_dims(dims, vec.size))
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidStateError(f"state norm is {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(vec))

    @classmethod
    def normalized(cls, amplitudes, dims: Sequence[int] | None = None) -> "PureState":
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise InvalidStateError("cannot normalize the zero vector")
        return cls(vec / norm, dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> "DensityMatrix":
        v = self.amplitudes
        # rank-one projector of a unit vector: valid by construction
        return DensityMatrix(np.outer(v, v.conj()), self.dims, validate=False)

    def __repr__(self) -> str:
        return f"PureState({np.round(self.amplitudes, 6).tolist()}, dims={self.dims})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix with a bipartition."""

    matrix: np.ndarray
    dims: tuple[int, int]

    def __init__(self, matrix, dims: Sequence[int] | None = None, validate: bool = True):
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got shape {m.shape}")
        dims = (m.shape[0], 1) if dims is None else dims
        object.__setattr__(self, "dims", _check_dims(dims, m.shape[0]))
        if validate:
            _validate_density(m)
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.dims},\n{np.round(self.matrix, 6)})"


def _validate_density(m: np.ndarray) -> None:
    if not np.all(np.isfinite(m)):
        raise InvalidStateError("density matrix entries must be finite")
    herm_err = np.max(np.abs(m - m.conj().T))
    if herm_err > HERMITIAN_TOL:
        raise InvalidStateError(f"density matrix not Hermitian (error {herm_err:.3g})")
    tr = np.trace(m)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"density matrix trace is {tr!r}, expected 1")
    lam_min = hermitian_eigvals(m)[0]
    if lam_min < -PSD_TOL:
        raise InvalidStateError(f"density matrix has eigenvalue {lam_min:.3g} < 0")


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Ascending eigenvalues with eigenvectors stored as orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __iter__(self):
        yield self.eigenvalues
        yield self.eigenvectors


# ---------------------------------------------------------------------------
# Jacobi eigensolver


def _as_hermitian(m) -> np.ndarray:
    if isinstance(m, DensityMatrix):
        m = m.matrix
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NotHermitianError("matrix entries must be finite")
    if m.size and np.max(np.abs(m - m.conj().T)) > ATOL:
        raise NotHermitianError("matrix is not Hermitian")
    return m


def _jacobi(m: np.ndarray, want_vectors: bool):
    # Cyclic complex Jacobi on Python lists; n <= ~32, so list arithmetic
    # beats numpy's per-call overhead.
    n = m.shape[0]
    h = 0.5 * (m + m.conj().T)
    a = h.tolist()
    v = np.eye(n, dtype=complex).tolist() if want_vectors else None
    scale = float(np.linalg.norm(h))
    target = JACOBI_RTOL * scale

    def off_norm() -> float:
        return math.sqrt(sum(abs(a[i][j]) ** 2 for i in range(n) for j in range(n) if i != j))

    for _ in range(JACOBI_MAX_SWEEPS):
        if off_norm() <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p][q]
                mag = abs(b)
                if mag == 0.0:
                    continue
                ph = b / mag  # e^{i gamma}
                app = a[p][p].real
                aqq = a[q][q].real
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ph_c = ph.conjugate()
                # A <- A R with R = [[c, s], [-s e^{-ig}, c e^{-ig}]] on (p, q)
                for k in range(n):
                    row = a[k]
                    akp, akq = row[p], row[q]
                    row[p] = c * akp - s * ph_c * akq
                    row[q] = s * akp + c * ph_c * akq
                # A <- R^H A
                rp, rq = a[p], a[q]
                for k in range(n):
                    apk, aqk = rp[k], rq[k]
                    rp[k] = c * apk - s * ph * aqk
                    rq[k] = s * apk + c * ph * aqk
                rp[p] = complex(app - t * mag)
                rq[q] = complex(aqq + t * mag)
                rp[q] = 0j
                rq[p] = 0j
                if v is not None:
                    for k in range(n):
                        row = v[k]
                        vkp, vkq = row[p], row[q]
                        row[p] = c * vkp - s * ph_c * vkq
                        row[q] = s * vkp + c * ph_c * vkq
    else:
        if off_norm() > target:
            raise RuntimeError("Jacobi iteration did not converge")

    lam = np.array([a[i][i].real for i in range(n)])
    order = np.argsort(lam, kind="stable")
    vecs = np.array(v, dtype=complex)[:, order] if v is not None else None
    return lam[order], vecs


def hermitian_eig(m) -> EigenSystem:
    """Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi rotations.

    Sweeps run until the off-diagonal Frobenius mass falls below
    ``1e-13 * ||m||_F``. Eigenvalues are returned in ascending order.

    Raises
    ------
    NotHermitianError
        If ``m`` deviates from its adjoint by more than 1e-10.
    """
    m = _as_hermitian(m)
    lam, vecs = _jacobi(m, want_vectors=True)
    lam.flags.writeable = False
    vecs.flags.writeable = False
    return EigenSystem(lam, vecs)


def hermitian_eigvals(m) -> np.ndarray:
    """Ascending eigenvalues only; skips the eigenvector accumulation."""
    return _jacobi(_as_hermitian(m), want_vectors=False)[0]


# ---------------------------------------------------------------------------
# Products, traces, norms

Tensorable = Union[np.ndarray, PureState, DensityMatrix]


def tensor(a: Tensorable, b: Tensorable) -> Tensorable:
    """Kronecker product ``a ⊗ b``; ``a`` becomes the X factor.

    Two pure states give a :class:`PureState` with dims ``(dim a, dim b)``,
    two density matrices a :class:`DensityMatrix`, and arrays an array.
    """
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(np.kron(a.amplitudes, b.amplitudes), (a.dim, b.dim))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.matrix, b.matrix), (a.dim, b.dim), validate=False)
    if isinstance(a, (PureState, DensityMatrix)) or isinstance(b, (PureState, DensityMatrix)):
        raise TypeError("tensor operands must be of the same kind")
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(rho: DensityMatrix, keep: str) -> DensityMatrix:
    """Reduced state of subsystem ``keep`` ("X" or "Y")."""
    if not isinstance(rho, DensityMatrix):
        raise TypeError("partial_trace expects a DensityMatrix")
    dx, dy = rho.dims
    r = rho.matrix.reshape(dx, dy, dx, dy)
    key = keep.upper()
    if key == "X":
        out = np.einsum("ijkj->ik", r)
    elif key == "Y":
        out = np.einsum("ijil->jl", r)
    else:
        raise ValueError(f"keep must be 'X' or 'Y', got {keep!r}")
    return DensityMatrix(out, validate=False)


def trace_norm(m) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eigvals(m))))


def trace_distance(r0: DensityMatrix, r1: DensityMatrix) -> float:
    if r0.matrix.shape != r1.matrix.shape:
        raise DimensionError(f"shapes {r0.matrix.shape} and {r1.matrix.shape} differ")
    return 0.5 * trace_norm(r0.matrix - r1.matrix)


def overlap(p: PureState, q: PureState) -> complex:
    """Inner product ``<p|q>`` (antilinear in ``p``)."""
    if p.dim != q.dim:
        raise DimensionError(f"dimensions {p.dim} and {q.dim} differ")
    return complex(np.vdot(p.amplitudes, q.amplitudes))


def rotated_qubit_basis(theta: float, sign: int = 1) -> tuple[PureState, PureState]:
    """Orthonormal qubit basis rotated by ``theta`` from the computational one.

    ``sign=+1`` gives ``(cos t, sin t)``, ``(sin t, -cos t)``;
    ``sign=-1`` gives ``(cos t, -sin t)``, ``(sin t, cos t)``.
    """
    c, s = math.cos(theta), math.sin(theta)
    if sign == 1:
        return PureState([c, s]), PureState([s, -c])
    if sign == -1:
        return PureState([c, -s]), PureState([s, c])
    raise ValueError(f"sign must be +1 or -1, got {sign!r}")


# ---------------------------------------------------------------------------
# Convenience constructors

_SQRT_HALF = 1.0 / math.sqrt(2.0)
_KETS = {
    "0": (1.0, 0.0),
    "1": (0.0, 1.0),
    "+": (_SQRT_HALF, _SQRT_HALF),
    "-": (_SQRT_HALF, -_SQRT_HALF),
}


def ket(label: str) -> PureState:
    """Qubit product ket from a label such as ``"0"``, ``"01"`` or ``"++"``.

    Two-character labels are split as X|Y.
    """
    if not label or any(ch not in _KETS for ch in label):
        raise ValueError(f"unsupported ket label {label!r}")
    vec = np.array([1.0], dtype=complex)
    for ch in label:
        vec = np.kron(vec, _KETS[ch])
    dims = (2, 2 ** (len(label) - 1)) if len(label) > 1 else None
    return PureState(vec, dims)


def maximally_mixed(d: int, dims: Sequence[int] | None = None) -> DensityMatrix:
    return DensityMatrix(np.eye(d, dtype=complex) / d, dims, validate=False)
