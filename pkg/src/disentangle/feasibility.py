"""Numerical search for a disentangling machine over Stinespring unitaries.

A candidate machine attaches an ancilla in ``|0>``, applies ``U = exp(iH)``
to ancilla ⊗ system, and discards the ancilla. Only the first four columns
of ``U`` matter, so ``H`` is restricted to the block form

    H = [[A, B^H],
         [B, 0  ]]        (A: 4x4 Hermitian, B: (4 d_anc - 4) x 4)

whose exponentials still reach every isometry. The objective is

    J = sum_i  T(sigma_i^X, rho_i^X) + T(sigma_i^Y, rho_i^Y) + N(sigma_i)  [+ T(sigma_i, sigma_i^X ⊗ sigma_i^Y)]

with ``T`` the trace distance and ``N`` the negativity; ``J = 0`` exactly when
the machine disentangles the whole set. ``J`` is not smooth at its zeros,
so each restart first drives a smooth surrogate with the same zero set
(squared Frobenius deviations plus squared negative partial-transpose
eigenvalues) to a minimum with L-BFGS, then polishes ``J`` itself with
Nelder-Mead.

A positive best objective is numerical evidence only; it does not prove
that no machine exists.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .channels import QuantumChannel, StinespringData, channel_from_stinespring
from .nogo import StateSet
from .qstate import PureState

EVIDENCE_NOTE = (
    "numerical evidence only: a positive best objective shows the local searches "
    "found no disentangling channel; the analytic no-go is the unitarity residual bound"
)

MAX_NM_EVALS = 20000
NM_XATOL = 1e-10
NM_FATOL = 1e-12
GRADIENT_ITERS = 10000

_I2 = np.eye(2)


@dataclass
class FeasibilityReport:
    set_name: str
    mode: str
    ancilla_dim: int
    seed: int
    restarts: int
    per_restart_objectives: list[float]
    best_objective: float
    best_restart: int
    best_params: np.ndarray
    best_channel: QuantumChannel
    evaluations: list[int] = field(default_factory=list)
    note: str = EVIDENCE_NOTE

    def to_dict(self) -> dict:
        return {
            "set": self.set_name,
            "mode": self.mode,
            "ancilla_dim": self.ancilla_dim,
            "seed": self.seed,
            "restarts": self.restarts,
            "per_restart_objectives": list(self.per_restart_objectives),
            "best_objective": self.best_objective,
            "best_restart": self.best_restart,
            "evaluations": list(self.evaluations),
            "kraus": [
                {"re": k.real.tolist(), "im": k.imag.tolist()} for k in self.best_channel.kraus
            ],
            "note": self.note,
        }


def _marginals(r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    r = r.reshape(-1, 2, 2, 2, 2)
    return np.einsum("nijkj->nik", r), np.einsum("nijil->njl", r)


def _pt(r: np.ndarray) -> np.ndarray:
    return r.reshape(-1, 2, 2, 2, 2).transpose(0, 1, 4, 3, 2).reshape(-1, 4, 4)


def _qubit_trace_distance(d: np.ndarray) -> np.ndarray:
    # d is a batch of traceless Hermitian 2x2 differences
    return np.sqrt(((d[:, 0, 0] - d[:, 1, 1]).real / 2) ** 2 + np.abs(d[:, 0, 1]) ** 2)


class DisentanglerProblem:
    """Objective and surrogate for one state set, ancilla size and mode."""

    def __init__(self, states: StateSet, ancilla_dim: int, mode: str = "separable"):
        if not 2 <= ancilla_dim <= 8:
            raise ValueError(f"ancilla_dim must be in [2, 8], got {ancilla_dim}")
        if mode not in ("separable", "product"):
            raise ValueError(f"mode must be 'separable' or 'product', got {mode!r}")
        self.name = states.name
        self.mode = mode
        self.da = ancilla_dim
        self.n = 4 * ancilla_dim
        self.psi = np.array([s.amplitudes for s in states.states])
        rho = np.einsum("ni,nj->nij", self.psi, self.psi.conj())
        self.rho_x, self.rho_y = _marginals(rho)
        self._iu = np.triu_indices(4, 1)
        self._nb = 4 * (self.n - 4)
        rows, cols = np.divmod(np.arange(self._nb), 4)
        self._brows, self._bcols = rows + 4, cols

    @property
    def n_params(self) -> int:
        return 16 + 2 * self._nb

    def generator(self, x: np.ndarray) -> np.ndarray:
        n, nb = self.n, self._nb
        h = np.zeros((n, n), dtype=complex)
        a = np.diag(x[:4]).astype(complex)
        a[self._iu] = x[4:10] + 1j * x[10:16]
        a = a + np.triu(a, 1).conj().T
        b = (x[16 : 16 + nb] + 1j * x[16 + nb :]).reshape(n - 4, 4)
        h[:4, :4] = a
        h[4:, :4] = b
        h[:4, 4:] = b.conj().T
        return h

    def unitary(self, x: np.ndarray) -> np.ndarray:
        lam, v = np.linalg.eigh(self.generator(x))
        return (v * np.exp(1j * lam)) @ v.conj().T

    def channel(self, x: np.ndarray) -> QuantumChannel:
        anc = PureState(np.eye(self.da)[0])
        return channel_from_stinespring(StinespringData(anc, self.unitary(x), (2, 2)))

    def _outputs(self, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        m = len(self.psi)
        phi = (w @ self.psi.T).T.reshape(m, self.da, 4)
        return phi, np.einsum("nas,nat->nst", phi, phi.conj())

    def objective(self, x: np.ndarray) -> float:
        _, sig = self._outputs(self.unitary(x)[:, :4])
        sx, sy = _marginals(sig)
        total = _qubit_trace_distance(sx - self.rho_x).sum() + _qubit_trace_distance(sy - self.rho_y).sum()
        ev = np.linalg.eigvalsh(_pt(sig))
        total += -ev[ev < 0].sum()
        if self.mode == "product":
            prod = np.einsum("nik,njl->nijkl", sx, sy).reshape(-1, 4, 4)
            total += 0.5 * np.abs(np.linalg.eigvalsh(sig - prod)).sum()
        return float(total)

    def surrogate(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        """Smooth stand-in for the objective, with its exact gradient."""
        n, m = self.n, len(self.psi)
        lam, v = np.linalg.eigh(self.generator(x))
        el = np.exp(1j * lam)
        u = (v * el) @ v.conj().T
        phi, sig = self._outputs(u[:, :4])
        sx, sy = _marginals(sig)
        dx, dy = sx - self.rho_x, sy - self.rho_y
        value = np.sum(np.abs(dx) ** 2) + np.sum(np.abs(dy) ** 2)
        # g_sig: Hermitian matrices with d(value) = tr(g_sig d(sigma))
        g_sig = 2 * np.einsum("nik,jl->nijkl", dx, _I2).reshape(m, 4, 4)
        g_sig += 2 * np.einsum("ik,njl->nijkl", _I2, dy).reshape(m, 4, 4)

        ev, evec = np.linalg.eigh(_pt(sig))
        neg = np.minimum(ev, 0.0)
        value += np.sum(neg**2)
        g_sig += _pt(np.einsum("nik,nk,njk->nij", evec, 2 * neg, evec.conj()))

        if self.mode == "product":
            e = sig - np.einsum("nik,njl->nijkl", sx, sy).reshape(m, 4, 4)
            value += np.sum(np.abs(e) ** 2)
            e5 = e.reshape(m, 2, 2, 2, 2)
            px = np.einsum("nijkl,nlj->nik", e5, sy)
            py = np.einsum("nijkl,nki->njl", e5, sx)
            g_sig += 2 * e
            g_sig -= 2 * np.einsum("nik,jl->nijkl", px, _I2).reshape(m, 4, 4)
            g_sig -= 2 * np.einsum("ik,njl->nijkl", _I2, py).reshape(m, 4, 4)

        # Back through sigma = Phi^T conj(Phi), phi = W psi, W = U[:, :4].
        g_phi = 2 * np.einsum("nas,nts->nat", phi, g_sig).reshape(m, n)
        g_u = np.zeros((n, n), dtype=complex)
        g_u[:, :4] = np.einsum("nk,nj->kj", g_phi, self.psi.conj())
        # Daleckii-Krein: dU = V (F o (V^H dH V)) V^H.
        half = 0.5 * (lam[:, None] - lam[None, :])
        f = 1j * np.exp(0.5j * (lam[:, None] + lam[None, :])) * np.sinc(half / np.pi)
        g_h = (v @ (np.conj(f) * (v.conj().T @ g_u @ v)) @ v.conj().T).conj()

        grad = np.empty(self.n_params)
        grad[:4] = np.diag(g_h)[:4].real
        r, c = self._iu
        grad[4:10] = (g_h[r, c] + g_h[c, r]).real
        grad[10:16] = (1j * (g_h[r, c] - g_h[c, r])).real
        r, c = self._brows, self._bcols
        grad[16 : 16 + self._nb] = (g_h[r, c] + g_h[c, r]).real
        grad[16 + self._nb :] = (1j * (g_h[r, c] - g_h[c, r])).real
        return float(value), grad


def local_search(
    problem: DisentanglerProblem,
    x0: np.ndarray,
    gradient_iters: int = GRADIENT_ITERS,
    max_evals: int = MAX_NM_EVALS,
) -> tuple[float, np.ndarray, int]:
    """Surrogate descent followed by a Nelder-Mead polish of the true objective."""
    smooth = minimize(
        problem.surrogate,
        x0,
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": gradient_iters, "ftol": 1e-30, "gtol": 1e-14, "maxcor": 30},
    )
    start = smooth.x
    j_start = problem.objective(start)
    if j_start <= NM_FATOL:
        return j_start, start, int(smooth.nfev)
    polish = minimize(
        problem.objective,
        start,
        method="Nelder-Mead",
        options={"maxfev": max_evals, "xatol": NM_XATOL, "fatol": NM_FATOL, "adaptive": True},
    )
    x = polish.x if polish.fun <= j_start else start
    return problem.objective(x), x, int(smooth.nfev + polish.nfev)


def _restart(args):
    problem, seed_seq, gradient_iters, max_evals = args
    rng = np.random.default_rng(seed_seq)
    x0 = rng.normal(0.0, 1.0, problem.n_params)
    return local_search(problem, x0, gradient_iters, max_evals)


def feasibility_search(
    s: StateSet,
    mode: str = "separable",
    ancilla_dim: int = 4,
    restarts: int = 20,
    seed: int = 0,
    workers: int = 1,
    gradient_iters: int = GRADIENT_ITERS,
    max_evals: int = MAX_NM_EVALS,
) -> FeasibilityReport:
    """Best objective over ``restarts`` seeded local searches.

    Restart ``k`` draws its start point from the ``k``-th child of
    ``numpy.random.SeedSequence(seed)``, so results do not depend on
    ``workers``.
    """
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    problem = DisentanglerProblem(s, ancilla_dim, mode)
    children = np.random.SeedSequence(seed).spawn(restarts)
    jobs = [(problem, child, gradient_iters, max_evals) for child in children]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_restart, jobs))
    else:
        results = [_restart(job) for job in jobs]

    objectives = [r[0] for r in results]
    best = int(np.argmin(objectives))
    x_best = results[best][1]
    return FeasibilityReport(
        set_name=s.name,
        mode=mode,
        ancilla_dim=ancilla_dim,
        seed=seed,
        restarts=restarts,
        per_restart_objectives=objectives,
        best_objective=objectives[best],
        best_restart=best,
        best_params=x_best,
        best_channel=problem.channel(x_best),
        evaluations=[r[2] for r in results],
    )

