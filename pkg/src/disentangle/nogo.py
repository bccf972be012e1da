"""State sets that can and cannot be disentangled, and the constraint algebra behind them.

Any candidate machine is an ancilla ``|E>`` plus a global unitary. It must
leave pure product inputs untouched, so

    |E>|00> -> |E0>|00>,   |E>|11> -> |E1>|11>,   |E>|++> -> |E+>|++>.

Linearity then fixes what happens to ``(|00> + |11>)/sqrt2`` and unitarity
fixes the overlaps ``<E0|E+>`` and ``<E1|E+>``.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .channels import QuantumChannel, apply
from .entanglement import SeparabilityVerdict, ppt_verdict, product_distance
from .qstate import (
    DensityMatrix,
    DimensionError,
    PureState,
    ket,
    maximally_mixed,
    overlap,
    partial_trace,
    trace_distance,
)

MARGINAL_TOL = 1e-9
NEGATIVITY_TOL = 1e-9
PRODUCT_TOL = 1e-9

# Residual floor when <E0|E1> = 0 is imposed exactly: ep = (e0 + e1)/sqrt2.
ORTHOGONAL_RESIDUAL_BOUND = 3.0 - 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class StateSet:
    name: str
    states: tuple[PureState, ...]

    def __post_init__(self):
        for psi in self.states:
            if psi.dims != (2, 2):
                raise DimensionError(f"set {self.name!r} contains a non two-qubit state")

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)


class Verdict(str, enum.Enum):
    DISENTANGLES_SEPARABLE = "disentangles_separable"
    DISENTANGLES_PRODUCT = "disentangles_product"
    FAILS = "fails"


@dataclass(frozen=True)
class StateDiagnostics:
    marginal_deviation_x: float
    marginal_deviation_y: float
    negativity: float
    product_distance: float


@dataclass(frozen=True)
class DisentanglementReport:
    set_name: str
    mode: str
    states: tuple[StateDiagnostics, ...]
    verdict: Verdict

    @property
    def objective(self) -> float:
        """The feasibility objective evaluated on this report."""
        total = 0.0
        for d in self.states:
            total += d.marginal_deviation_x + d.marginal_deviation_y + d.negativity
            if self.mode == "product":
                total += d.product_distance
        return total


# ---------------------------------------------------------------------------
# State sets

_SQRT_HALF = 1.0 / math.sqrt(2.0)


def _bell(sign: int, basis: tuple[PureState, PureState] | None = None) -> PureState:
    if basis is None:
        basis = ket("0"), ket("1")
    e0, e1 = (b.amplitudes for b in basis)
    return PureState(_SQRT_HALF * (np.kron(e0, e0) + sign * np.kron(e1, e1)), (2, 2))


def primed_basis(theta: float = math.pi / 4, chi: float = math.pi / 4) -> tuple[PureState, PureState]:
    """Qubit basis ``U|0>, U|1>`` with ``U = [[c, -e^{-i chi} s], [e^{i chi} s, c]]``.

    A real rotation maps ``(|00> - |11>)/sqrt2`` to another state orthogonal to
    ``(|00> + |11>)/sqrt2``; the complex phase ``chi`` is what makes the
    rotated Bell state overlap the unrotated one (``|overlap| = sin^2 theta |sin 2chi|``).
    """
    c, s = math.cos(theta), math.sin(theta)
    w = cmath.exp(1j * chi)
    return PureState([c, w * s]), PureState([-s / w, c])


def bell_set(rotated: bool = False) -> StateSet:
    """``{(|00> + |11>)/sqrt2, (|00> - |11>)/sqrt2}``, the second optionally in the primed basis."""
    psi1 = _bell(-1, primed_basis()) if rotated else _bell(-1)
    return StateSet("bell-rotated" if rotated else "bell", (_bell(+1), psi1))


def bell_variants() -> tuple[PureState, ...]:
    """Both Bell states in the computational and in the primed basis."""
    pb = primed_basis()
    return (_bell(+1), _bell(-1), _bell(+1, pb), _bell(-1, pb))


def three_state_set() -> StateSet:
    return StateSet("three-state", (ket("00"), ket("11"), _bell(+1)))


def four_state_set() -> StateSet:
    return StateSet("four-state", (ket("00"), ket("11"), _bell(+1), ket("++")))


STATE_SETS = {
    "bell": lambda: bell_set(False),
    "bell-rotated": lambda: bell_set(True),
    "three-state": three_state_set,
    "four-state": four_state_set,
}


# ---------------------------------------------------------------------------
# Linearity and unitarity constraints


def _ancilla(v) -> PureState:
    if isinstance(v, PureState):
        return v
    return PureState(v)


def linearity_output(e0, e1) -> DensityMatrix:
    """System state left by ``(|E0>|00> + |E1>|11>)/sqrt2`` once the ancilla is traced out.

    With ``alpha = <E0|E1>`` this is ``[[1/2, 0, 0, alpha*/2], 0, 0, [alpha/2, 0, 0, 1/2]]``.
    """
    e0, e1 = _ancilla(e0), _ancilla(e1)
    if e0.dim != e1.dim:
        raise DimensionError(f"ancilla dimensions {e0.dim} and {e1.dim} differ")
    joint = _SQRT_HALF * (
        np.outer(e0.amplitudes, ket("00").amplitudes) + np.outer(e1.amplitudes, ket("11").amplitudes)
    )
    return DensityMatrix(joint.T @ joint.conj(), (2, 2))


def alpha_output(alpha: complex) -> DensityMatrix:
    """``linearity_output`` for ``|E0> = |0>`` and ``|E1> = alpha|0> + beta|1>``."""
    alpha = complex(alpha)
    if abs(alpha) > 1.0 + 1e-12:
        raise ValueError(f"|alpha| must be <= 1, got {abs(alpha)!r}")
    beta = math.sqrt(max(0.0, 1.0 - abs(alpha) ** 2))
    return linearity_output(PureState([1.0, 0.0]), PureState.normalized([alpha, beta]))


def alpha_entanglement(alpha: complex) -> SeparabilityVerdict:
    """PPT verdict on the linearity-forced output; entangled exactly when ``alpha != 0``.

    The partial transpose has spectrum ``{1/2, 1/2, |alpha|/2, -|alpha|/2}``.
    """
    return ppt_verdict(alpha_output(alpha))


def product_impossibility_gap(e0, e1) -> float:
    """Trace distance between the linearity-forced output and the product target ``I/4``.

    Closed form: 1/2 for ``|alpha| <= 1/2``, ``1/4 + |alpha|/2`` beyond, so it never
    drops below 1/2.
    """
    return trace_distance(linearity_output(e0, e1), maximally_mixed(4, (2, 2)))


def unitarity_residual(e0, e1, ep) -> float:
    """Squared violation of ``<E0|E+> = 1``, ``<E1|E+> = 1`` and ``<E0|E1> = 0``."""
    e0, e1, ep = _ancilla(e0), _ancilla(e1), _ancilla(ep)
    if not e0.dim == e1.dim == ep.dim:
        raise DimensionError("ancilla vectors must share a dimension")
    return (
        abs(1.0 - overlap(e0, ep)) ** 2
        + abs(1.0 - overlap(e1, ep)) ** 2
        + abs(overlap(e0, e1)) ** 2
    )


def residual_profile(g: float) -> float:
    """Smallest ``unitarity_residual`` over all triples with ``|<E0|E1>| = g``.

    The best ``|E+>`` is ``(|E0> + |E1>)/|...|`` (phases aligned), giving both
    unitarity overlaps ``sqrt((1 + g)/2)``.
    """
    t = math.sqrt((1.0 + g) / 2.0)
    return 2.0 * (1.0 - t) ** 2 + g * g


def unitarity_residual_infimum() -> tuple[float, float]:
    """``(infimum, argmin |<E0|E1>|)`` of the residual over all unit triples."""
    res = minimize_scalar(residual_profile, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-12})
    return float(res.fun), float(res.x)


def minimize_unitarity_residual(dim: int = 3, restarts: int = 20, seed: int = 0) -> tuple[float, np.ndarray]:
    """Direct numerical minimization of :func:`unitarity_residual` over explicit vectors.

    Independent of :func:`residual_profile`; returns the best value and the
    ``(3, dim)`` array of optimal vectors.
    """
    if dim < 2:
        raise ValueError("ancilla dimension must be at least 2")

    def unpack(x):
        v = (x[: 3 * dim] + 1j * x[3 * dim :]).reshape(3, dim)
        return v / np.linalg.norm(v, axis=1, keepdims=True)

    def f(x):
        v = unpack(x)
        return float(unitarity_residuals(v[:1], v[1:2], v[2:])[0])

    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        res = minimize(f, rng.normal(size=6 * dim), method="BFGS", options={"gtol": 1e-12})
        if best is None or res.fun < best.fun:
            best = res
    return float(best.fun), unpack(best.x)


# ---------------------------------------------------------------------------
# Checking a concrete channel


def _state_diagnostics(channel: QuantumChannel, psi: PureState) -> StateDiagnostics:
    rho = psi.density()
    out = apply(channel, rho)
    return StateDiagnostics(
        marginal_deviation_x=trace_distance(partial_trace(out, "X"), partial_trace(rho, "X")),
        marginal_deviation_y=trace_distance(partial_trace(out, "Y"), partial_trace(rho, "Y")),
        negativity=ppt_verdict(out).negativity,
        product_distance=product_distance(out),
    )


def check_disentanglement(c: QuantumChannel, s: StateSet, mode: str = "separable") -> DisentanglementReport:
    """Does ``c`` disentangle every state of ``s`` without disturbing its marginals?

    ``mode="separable"`` asks for unentangled outputs; ``mode="product"`` further
    requires each output to equal the product of its marginals.
    """
    if mode not in ("separable", "product"):
        raise ValueError(f"mode must be 'separable' or 'product', got {mode!r}")
    diags = tuple(_state_diagnostics(c, psi) for psi in s.states)
    ok = all(
        d.marginal_deviation_x <= MARGINAL_TOL
        and d.marginal_deviation_y <= MARGINAL_TOL
        and d.negativity <= NEGATIVITY_TOL
        for d in diags
    )
    if not ok:
        verdict = Verdict.FAILS
    elif mode == "separable":
        verdict = Verdict.DISENTANGLES_SEPARABLE
    elif all(d.product_distance <= PRODUCT_TOL for d in diags):
        verdict = Verdict.DISENTANGLES_PRODUCT
    else:
        verdict = Verdict.FAILS
    return DisentanglementReport(s.name, mode, diags, verdict)


def random_unit_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """``count`` Haar-random unit vectors in C^dim, one per row."""
    v = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def unitarity_residuals(e0: np.ndarray, e1: np.ndarray, ep: np.ndarray) -> np.ndarray:
    """Vectorized :func:`unitarity_residual` over rows of three ``(N, d)`` arrays."""
    o0p = np.einsum("nd,nd->n", e0.conj(), ep)
    o1p = np.einsum("nd,nd->n", e1.conj(), ep)
    o01 = np.einsum("nd,nd->n", e0.conj(), e1)
    return np.abs(1 - o0p) ** 2 + np.abs(1 - o1p) ** 2 + np.abs(o01) ** 2
