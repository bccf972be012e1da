"""Kraus-form quantum channels and their Stinespring construction.

The dilated space is ordered ancilla ⊗ system, with the ancilla on the left.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .qstate import ATOL, DensityMatrix, DimensionError, PureState

PRUNE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """Channel ``rho -> sum_k K_k rho K_k^H``.

    Construction only checks shapes; use :func:`validate` for completeness.
    """

    kraus: tuple[np.ndarray, ...]
    in_dims: tuple[int, int]
    out_dims: tuple[int, int]

    def __init__(self, kraus: Sequence[np.ndarray], in_dims=(2, 2), out_dims=None):
        ops = []
        in_dims = tuple(in_dims)
        out_dims = in_dims if out_dims is None else tuple(out_dims)
        for k in kraus:
            k = np.array(k, dtype=complex)
            if k.shape != (math.prod(out_dims), math.prod(in_dims)):
                raise DimensionError(
                    f"Kraus operator shape {k.shape} incompatible with {in_dims} -> {out_dims}"
                )
            k.flags.writeable = False
            ops.append(k)
        object.__setattr__(self, "kraus", tuple(ops))
        object.__setattr__(self, "in_dims", in_dims)
        object.__setattr__(self, "out_dims", out_dims)

    @property
    def d_in(self) -> int:
        return math.prod(self.in_dims)

    @property
    def d_out(self) -> int:
        return math.prod(self.out_dims)


@dataclass(frozen=True, eq=False)
class StinespringData:
    """Ancilla state ``|E>``, global unitary on ancilla ⊗ system, and the system bipartition."""

    ancilla_state: PureState
    unitary: np.ndarray
    system_dims: tuple[int, int] = (2, 2)

    def __post_init__(self):
        u = np.asarray(self.unitary, dtype=complex)
        n = self.ancilla_state.dim * math.prod(self.system_dims)
        if u.shape != (n, n):
            raise DimensionError(f"unitary shape {u.shape}, expected {(n, n)}")
        if np.max(np.abs(u.conj().T @ u - np.eye(n))) > ATOL:
            raise ValueError("global transformation is not unitary")
        object.__setattr__(self, "unitary", u)


@dataclass(frozen=True)
class ChannelDiagnostics:
    completeness_residual: float
    trace_error: float
    ok: bool
    message: str = field(default="")


def channel_from_stinespring(s: StinespringData) -> QuantumChannel:
    """Kraus operators ``K_j = (<j| ⊗ I) U (|E> ⊗ I)``, dropping those with norm < 1e-12."""
    da = s.ancilla_state.dim
    ds = math.prod(s.system_dims)
    embed = np.kron(s.ancilla_state.amplitudes.reshape(da, 1), np.eye(ds))
    isometry = (s.unitary @ embed).reshape(da, ds, ds)
    kraus = [k for k in isometry if np.linalg.norm(k) >= PRUNE_TOL]
    return QuantumChannel(kraus, s.system_dims, s.system_dims)


def apply(c: QuantumChannel, rho: DensityMatrix) -> DensityMatrix:
    if rho.dim != c.d_in:
        raise DimensionError(f"channel acts on dimension {c.d_in}, state has {rho.dim}")
    r = rho.matrix
    out = sum(k @ r @ k.conj().T for k in c.kraus)
    return DensityMatrix(out, c.out_dims)


def compose(second: QuantumChannel, first: QuantumChannel) -> QuantumChannel:
    """Channel applying ``first`` then ``second``."""
    if first.d_out != second.d_in:
        raise DimensionError("channels cannot be composed: dimension mismatch")
    kraus = [b @ a for b in second.kraus for a in first.kraus]
    kraus = [k for k in kraus if np.linalg.norm(k) >= PRUNE_TOL]
    return QuantumChannel(kraus, first.in_dims, second.out_dims)


def validate(c: QuantumChannel) -> ChannelDiagnostics:
    """Completeness residual ``max|sum K^H K - I|`` and trace loss on matrix units."""
    if not c.kraus:
        return ChannelDiagnostics(math.inf, math.inf, False, "empty Kraus list")
    gram = sum(k.conj().T @ k for k in c.kraus)
    residual = float(np.max(np.abs(gram - np.eye(c.d_in))))
    # Tr(E(|i><j|)) should equal delta_ij for every matrix unit.
    trace_error = 0.0
    for i in range(c.d_in):
        for j in range(c.d_in):
            unit = np.zeros((c.d_in, c.d_in), dtype=complex)
            unit[i, j] = 1.0
            tr = sum(np.trace(k @ unit @ k.conj().T) for k in c.kraus)
            trace_error = max(trace_error, abs(tr - (1.0 if i == j else 0.0)))
    ok = residual <= ATOL and trace_error <= ATOL
    msg = "" if ok else f"completeness residual {residual:.3g}"
    return ChannelDiagnostics(residual, float(trace_error), ok, msg)


def identity_channel(dims=(2, 2)) -> QuantumChannel:
    return QuantumChannel([np.eye(math.prod(dims))], dims)


def swap_matrix(d_left: int, d_right: int) -> np.ndarray:
    """Permutation ``|a>|b> -> |b>|a>`` from (d_left ⊗ d_right) to (d_right ⊗ d_left)."""
    n = d_left * d_right
    p = np.zeros((n, n))
    for a in range(d_left):
        for b in range(d_right):
            p[b * d_left + a, a * d_right + b] = 1.0
    return p


def singlet() -> PureState:
    return PureState(np.array([0, 1, -1, 0]) / math.sqrt(2), (2, 2))


def swap_disentangler(side: str = "Y", ancilla_pair: PureState | None = None) -> QuantumChannel:
    """Swap one qubit of the input with half of a fresh entangled pair.

    The pair (ancilla qubits A1 A2, default singlet) is prepended to the
    input, qubit ``side`` is exchanged with A1, and both ancilla qubits are
    traced out. With a maximally entangled pair the channel is
    ``rho -> rho_X ⊗ I/2`` for ``side="Y"`` and ``I/2 ⊗ rho_Y`` for ``side="X"``.
    """
    pair = singlet() if ancilla_pair is None else ancilla_pair
    if pair.dim != 4:
        raise DimensionError("ancilla pair must be two qubits")
    # Qubit order on the dilated space: A1 A2 X Y.
    orders = {"Y": (3, 1, 2, 0), "X": (2, 1, 0, 3)}
    try:
        u = _qubit_permutation(orders[side.upper()])
    except KeyError:
        raise ValueError(f"side must be 'X' or 'Y', got {side!r}") from None
    return channel_from_stinespring(StinespringData(pair, u, (2, 2)))


def _qubit_permutation(order: Sequence[int]) -> np.ndarray:
    # output qubit k carries input qubit order[k]
    n = len(order)
    dim = 2 ** n
    u = np.zeros((dim, dim))
    for idx in range(dim):
        bits = [(idx >> (n - 1 - k)) & 1 for k in range(n)]
        out_bits = [bits[order[k]] for k in range(n)]
        out = int("".join(map(str, out_bits)), 2)
        u[out, idx] = 1.0
    return u


def dephasing_witness() -> QuantumChannel:
    """CNOT from X onto a |0> ancilla, ancilla traced: the alpha = 0 channel.

    Leaves |00> and |11> fixed and sends (|00> + |11>)/sqrt2 to
    (|00><00| + |11><11|)/2.
    """
    anc = PureState([1.0, 0.0])
    # Order A X Y; flip A when X = 1.
    u = np.zeros((8, 8))
    for idx in range(8):
        a, x, y = (idx >> 2) & 1, (idx >> 1) & 1, idx & 1
        u[((a ^ x) << 2) | (x << 1) | y, idx] = 1.0
    return channel_from_stinespring(StinespringData(anc, u, (2, 2)))
