"""Schmidt decomposition, partial transpose and the PPT test for two qubits."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import (
    DensityMatrix,
    DimensionError,
    InvalidStateError,
    PureState,
    hermitian_eig,
    hermitian_eigvals,
    partial_trace,
    tensor,
    trace_distance,
)

SEPARABLE_TOL = 1e-10
PRODUCT_TOL = 1e-9


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left_basis: tuple[PureState, ...]
    right_basis: tuple[PureState, ...]

    def reconstruct(self) -> np.ndarray:
        return sum(
            c * np.kron(l.amplitudes, r.amplitudes)
            for c, l, r in zip(self.coefficients, self.left_basis, self.right_basis)
        )


@dataclass(frozen=True)
class SeparabilityVerdict:
    separable: bool
    min_pt_eigenvalue: float
    negativity: float


def _require_two_qubits(dims) -> None:
    if tuple(dims) != (2, 2):
        raise DimensionError(f"only 2x2 bipartitions are supported, got {dims}")


def _orthogonal_complement(v: np.ndarray) -> np.ndarray:
    return np.array([-np.conj(v[1]), np.conj(v[0])])


def schmidt_decompose(psi: PureState) -> SchmidtDecomposition:
    """Schmidt form ``sum_k c_k |l_k>|r_k>`` of a two-qubit pure state.

    The left vectors diagonalize the X marginal; each right vector is
    ``(<l_k| ⊗ I)|psi> / c_k``. A vanishing second coefficient leaves the
    matching right vector undetermined, so it is completed orthogonally.
    """
    if not isinstance(psi, PureState):
        raise InvalidStateError("schmidt_decompose expects a PureState")
    _require_two_qubits(psi.dims)
    lam, vecs = hermitian_eig(partial_trace(psi.density(), "X").matrix)
    lam, vecs = lam[::-1], vecs[:, ::-1]
    coeffs = np.sqrt(np.clip(lam, 0.0, None))
    coeffs = coeffs / np.linalg.norm(coeffs)

    block = psi.amplitudes.reshape(2, 2)
    right = []
    for k in range(2):
        if coeffs[k] > 1e-8:
            r = vecs[:, k].conj() @ block / coeffs[k]
            right.append(r / np.linalg.norm(r))
        else:
            right.append(_orthogonal_complement(right[0]))
    return SchmidtDecomposition(
        coefficients=coeffs,
        left_basis=tuple(PureState(vecs[:, k] / np.linalg.norm(vecs[:, k])) for k in range(2)),
        right_basis=tuple(PureState(r) for r in right),
    )


def partial_transpose(rho: DensityMatrix, subsystem: str = "Y") -> np.ndarray:
    """Transpose the indices of one tensor factor of a two-qubit state."""
    _require_two_qubits(rho.dims)
    r = rho.matrix.reshape(2, 2, 2, 2)
    key = subsystem.upper()
    if key == "X":
        r = r.transpose(2, 1, 0, 3)
    elif key == "Y":
        r = r.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem must be 'X' or 'Y', got {subsystem!r}")
    return r.reshape(4, 4).copy()


def ppt_verdict(rho: DensityMatrix) -> SeparabilityVerdict:
    """Peres-Horodecki test; exact for two qubits."""
    lam = hermitian_eigvals(partial_transpose(rho, "Y"))
    lam_min = float(lam[0])
    negativity = float(np.sum(np.abs(lam[lam < 0.0])))
    return SeparabilityVerdict(lam_min >= -SEPARABLE_TOL, lam_min, negativity)


def negativity(rho: DensityMatrix) -> float:
    return ppt_verdict(rho).negativity


def product_distance(rho: DensityMatrix) -> float:
    """Trace distance from ``rho`` to the product of its own marginals."""
    marginals = tensor(partial_trace(rho, "X"), partial_trace(rho, "Y"))
    return trace_distance(rho, DensityMatrix(marginals.matrix, rho.dims, validate=False))


def is_product(rho: DensityMatrix, tol: float = PRODUCT_TOL) -> bool:
    _require_two_qubits(rho.dims)
    return product_distance(rho) <= tol
