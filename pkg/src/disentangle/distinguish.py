"""Helstrom error probabilities for the rotated two-state family.

The family is

    |psi0> = cos(phi)|00>   + sin(phi)|11>
    |psi1> = cos(phi)|0'0'> + sin(phi)|1'1'>

with the unprimed and primed bases rotated by +theta and -theta from a
common reference basis. Replacing each state by the product of its
reduced states can make the pair *easier* to tell apart, which no
physical process may do.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .qstate import (
    DensityMatrix,
    DimensionError,
    PureState,
    overlap,
    partial_trace,
    rotated_qubit_basis,
    tensor,
    trace_norm,
)

VIOLATION_TOL = 1e-12


@dataclass(frozen=True)
class FamilyParams:
    theta: float
    phi: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("theta and phi must be finite")


@dataclass(frozen=True)
class DeltaEntries:
    a: float
    b: float
    prefactor: float


class ScanRow(NamedTuple):
    params: FamilyParams
    pe_ent: float
    pe_disent: float
    violation: bool


def helstrom_pe(r0: DensityMatrix, r1: DensityMatrix) -> float:
    """Minimum error probability for two equiprobable states."""
    if r0.matrix.shape != r1.matrix.shape:
        raise DimensionError(f"shapes {r0.matrix.shape} and {r1.matrix.shape} differ")
    return 0.5 - 0.25 * trace_norm(r0.matrix - r1.matrix)


def pure_pe(p: PureState, q: PureState) -> float:
    ov = abs(overlap(p, q))
    return 0.5 - 0.5 * math.sqrt(max(0.0, 1.0 - ov * ov))


def build_family(params: FamilyParams) -> tuple[PureState, PureState]:
    c, s = math.cos(params.phi), math.sin(params.phi)
    states = []
    for sign in (1, -1):
        e0, e1 = rotated_qubit_basis(params.theta, sign)
        amp = c * np.kron(e0.amplitudes, e0.amplitudes) + s * np.kron(e1.amplitudes, e1.amplitudes)
        states.append(PureState(amp, (2, 2)))
    return states[0], states[1]


def family_overlap(params: FamilyParams) -> float:
    """Closed-form ``<psi0|psi1> = cos^2(2 theta) + sin(2 phi) sin^2(2 theta)``."""
    return math.cos(2 * params.theta) ** 2 + math.sin(2 * params.phi) * math.sin(2 * params.theta) ** 2


def reduced_pair(params: FamilyParams) -> tuple[DensityMatrix, DensityMatrix]:
    """Single-qubit reduced states of the two family members, entry by entry."""
    ct, st = math.cos(params.theta), math.sin(params.theta)
    cp2, sp2 = math.cos(params.phi) ** 2, math.sin(params.phi) ** 2
    out = []
    for sign in (1, -1):
        out.append(
            DensityMatrix(
                cp2 * np.array([[ct * ct, sign * ct * st], [sign * ct * st, st * st]])
                + sp2 * np.array([[st * st, -sign * ct * st], [-sign * ct * st, ct * ct]])
            )
        )
    return out[0], out[1]


def delta_pattern(a: float, b: float) -> np.ndarray:
    return np.array(
        [
            [0, a, a, 0],
            [a, 0, 0, b],
            [a, 0, 0, b],
            [0, b, b, 0],
        ],
        dtype=float,
    )


def delta_entries(params: FamilyParams) -> DeltaEntries:
    ct2, st2 = math.cos(params.theta) ** 2, math.sin(params.theta) ** 2
    cp2, sp2 = math.cos(params.phi) ** 2, math.sin(params.phi) ** 2
    return DeltaEntries(
        a=cp2 * ct2 + sp2 * st2,
        b=cp2 * st2 + sp2 * ct2,
        prefactor=math.cos(2 * params.phi) * math.sin(2 * params.theta),
    )


def delta_disent(params: FamilyParams) -> tuple[np.ndarray, DeltaEntries]:
    """Difference of the two product-of-marginals states, plus its entry pattern.

    The matrix is built by direct tensor subtraction; the returned entries
    describe the same matrix as ``prefactor * delta_pattern(a, b)``.
    """
    r0, r1 = reduced_pair(params)
    diff = tensor(r0, r0).matrix - tensor(r1, r1).matrix
    return diff, delta_entries(params)


def pe_ent(params: FamilyParams) -> float:
    ov = family_overlap(params)
    # 1 - ov = sin^2(2 theta) (1 - sin 2phi) avoids cancellation near ov = 1
    one_minus = math.sin(2 * params.theta) ** 2 * (1.0 - math.sin(2 * params.phi))
    return 0.5 - 0.5 * math.sqrt(max(0.0, one_minus * (1.0 + ov)))


def pe_disent(params: FamilyParams) -> float:
    """Closed-form error probability after disentangling into products.

    The trace norm carries ``|sin 2theta cos 2phi|``; outside
    ``sin 2theta cos 2phi >= 0`` the sign must not flip the correction.
    """
    c2t = math.cos(2 * params.theta)
    c2p = math.cos(2 * params.phi)
    pref = abs(math.sin(2 * params.theta) * c2p)
    return 0.5 - 0.5 * pref * math.sqrt(1.0 + c2p * c2p * c2t * c2t)


def pe_ent_matrix(params: FamilyParams) -> float:
    """Matrix-level Helstrom value for the entangled pair."""
    p0, p1 = build_family(params)
    return helstrom_pe(p0.density(), p1.density())


def pe_disent_matrix(params: FamilyParams) -> float:
    """Matrix-level Helstrom value for the product-of-marginals pair."""
    p0, p1 = build_family(params)
    m0 = [partial_trace(p0.density(), k) for k in "XY"]
    m1 = [partial_trace(p1.density(), k) for k in "XY"]
    return helstrom_pe(tensor(*m0), tensor(*m1))


def is_violation(pe_ent_value: float, pe_disent_value: float) -> bool:
    return pe_disent_value < pe_ent_value - VIOLATION_TOL


def grid_centers(grid_n: int, upper: float = math.pi / 4) -> np.ndarray:
    """Centers of ``grid_n`` equal cells covering ``(0, upper)``."""
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    return (np.arange(grid_n) + 0.5) * (upper / grid_n)


def violation_scan(grid_n: int) -> list[ScanRow]:
    """Closed-form scan of the (theta, phi) square, theta-major order."""
    rows = []
    centers = grid_centers(grid_n)
    for theta in centers:
        for phi in centers:
            p = FamilyParams(float(theta), float(phi))
            e, d = pe_ent(p), pe_disent(p)
            rows.append(ScanRow(p, e, d, is_violation(e, d)))
    return rows
