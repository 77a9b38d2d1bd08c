"""State propagation: exact, time-dependent stepping, Lindblad and closed form."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch
from .hilbert import PAIR_LABELS
from .linalg import coupling_blocks, eigh, matexp_hermitian, ordered_product

_CHUNK = 2048
_PAIR = {label: i for i, label in enumerate(PAIR_LABELS)}


@dataclass(frozen=True)
class StepControl:
    """Step budget and convergence tolerance for the stepping integrators.

    ``steps_per_pi`` counts steps per π of dimensionless time ``rate * t``
    (λ for Lindblad runs, ‖H‖ for time-dependent ones). A result is
    accepted once doubling the step count changes it by less than
    ``tolerance`` in max-norm; at most ``max_doublings`` doublings are tried.
    """

    steps_per_pi: int = 500
    tolerance: float = 1e-8
    max_doublings: int = 2

    def __post_init__(self):
        if self.steps_per_pi < 1:
            raise ValueError("steps_per_pi must be positive")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")

    def n_steps(self, phase: float) -> int:
        return max(16, math.ceil(self.steps_per_pi * abs(phase) / math.pi))


def _check_state(h: np.ndarray, state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.shape[0] != h.shape[0] or (state.ndim == 2 and state.shape[1] != h.shape[0]):
        raise DimensionMismatch(f"state shape {state.shape} does not match operator {h.shape}")
    return state


def apply_unitary(u: np.ndarray, state: np.ndarray) -> np.ndarray:
    """``u @ psi`` for vectors, ``u @ rho @ u†`` for density matrices."""
    if state.ndim == 1:
        return u @ state
    return u @ state @ u.conj().T


def evolve_exact(h: np.ndarray, t: float, psi: np.ndarray) -> np.ndarray:
    """Apply ``exp(-i h t)`` to a state vector or density matrix."""
    psi = _check_state(h, psi)
    return apply_unitary(matexp_hermitian(h, t), psi)


def _converge(run: Callable[[int], np.ndarray], n: int, ctrl: StepControl) -> tuple[np.ndarray, int]:
    prev = run(n)
    diff = math.inf
    for _ in range(ctrl.max_doublings):
        n *= 2
        cur = run(n)
        diff = float(np.max(np.abs(cur - prev)))
        if diff < ctrl.tolerance:
            return cur, n
        prev = cur
    raise ConvergenceFailure(
        f"step doubling to n={n} still changes the result by {diff:.3e} "
        f"(tolerance {ctrl.tolerance:.1e})"
    )


# -- time-dependent stepping -------------------------------------------------

def _stepped_unitary(h_fn, t0: float, t1: float, n: int, blocks, dim: int) -> np.ndarray:
    """Product of ``n`` fourth-order Magnus steps ``exp(-i K)``.

    ``K = dt/2 (H1 + H2) - i √3/12 dt² [H2, H1]`` with ``H1, H2`` sampled at
    the two Gauss points of each step. ``K`` is Hermitian, so every step is
    unitary to rounding. The product is computed block by block (the
    pattern blocks are exactly invariant) and reduced pairwise per chunk.
    """
    dt = (t1 - t0) / n
    offset = math.sqrt(3) / 6 * dt
    by_size: dict[int, list[np.ndarray]] = {}
    for b in blocks:
        by_size.setdefault(len(b), []).append(b)
    groups = [np.array(bs) for bs in by_size.values()]
    totals = [np.tile(np.eye(idx.shape[1], dtype=complex), (idx.shape[0], 1, 1)) for idx in groups]

    for start in range(0, n, _CHUNK):
        mids = t0 + (np.arange(start, min(start + _CHUNK, n)) + 0.5) * dt
        h1 = np.stack([h_fn(t) for t in mids - offset])
        h2 = np.stack([h_fn(t) for t in mids + offset])
        for g, idx in enumerate(groups):
            sel = (slice(None), idx[:, :, None], idx[:, None, :])
            a, b = h1[sel], h2[sel]
            k = 0.5 * dt * (a + b) - 1j * (math.sqrt(3) / 12) * dt ** 2 * (b @ a - a @ b)
            k = 0.5 * (k + np.swapaxes(k.conj(), -1, -2))
            w, v = np.linalg.eigh(k)
            steps = (v * np.exp(-1j * w)[..., None, :]) @ np.swapaxes(v.conj(), -1, -2)
            totals[g] = ordered_product(steps) @ totals[g]

    u = np.zeros((dim, dim), dtype=complex)
    for idx, tot in zip(groups, totals):
        for b, ub in zip(idx, tot):
            u[np.ix_(b, b)] = ub
    return u


def evolve_timedep(
    h_fn: Callable[[float], np.ndarray],
    t0: float,
    t1: float,
    psi: np.ndarray,
    ctrl: StepControl = StepControl(),
    rate: float | None = None,
) -> np.ndarray:
    """Integrate ``i dψ/dt = H(t) ψ`` with fourth-order Magnus steps.

    Each step is an exact exponential, so the norm is kept to rounding. The
    step count starts at ``ctrl.n_steps(rate * (t1 - t0))`` and is doubled
    until two successive results agree within ``ctrl.tolerance``.

    ``h_fn`` must have a time-independent sparsity pattern; the pattern,
    sampled at a few times, is used to split the problem into invariant
    blocks. ``rate`` defaults to the spectral norm of ``H(t0)``.
    """
    if t1 < t0:
        raise ValueError(f"t1 ({t1}) must not precede t0 ({t0})")
    h0 = np.asarray(h_fn(t0), dtype=complex)
    psi = _check_state(h0, psi)
    if t1 == t0:
        return psi.copy()
    if rate is None:
        rate = float(np.linalg.norm(h0, 2)) or 1.0
    samples = [h_fn(t0 + f * (t1 - t0)) for f in (0.0, 0.3711, 0.7093, 1.0)]
    blocks = coupling_blocks(*samples)
    dim = h0.shape[0]

    def run(n: int) -> np.ndarray:
        return apply_unitary(_stepped_unitary(h_fn, t0, t1, n, blocks, dim), psi)

    result, _ = _converge(run, ctrl.n_steps(rate * (t1 - t0)), ctrl)
    return result


# -- Lindblad ----------------------------------------------------------------

def _reachable(support: np.ndarray, h: np.ndarray, ls: Sequence[np.ndarray]) -> np.ndarray:
    """Indices reachable from ``support`` under ``h``, each ``L`` and ``L†L``."""
    adj = h != 0
    adj = adj | adj.T
    for op in ls:
        adj = adj | (op != 0)
        m = (op.conj().T @ op) != 0
        adj = adj | m | m.T
    reach = support.copy()
    while True:
        nxt = reach | adj[:, reach].any(axis=1)
        if np.array_equal(nxt, reach):
            return np.flatnonzero(reach)
        reach = nxt


def _check_density(rho: np.ndarray) -> None:
    if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > 1e-10:
        raise ValueError(f"density matrix trace {np.trace(rho).real:.12g} != 1")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] < -1e-10:
        raise ValueError("density matrix is not positive semidefinite")


def evolve_lindblad(
    h: np.ndarray,
    ls: Sequence[np.ndarray],
    t: float,
    rho0: np.ndarray,
    ctrl: StepControl = StepControl(),
    rate: float | None = None,
) -> np.ndarray:
    """Solve ``dρ/dt = -i[H, ρ] + Σ (L ρ L† - ½{L†L, ρ})`` up to time ``t``.

    Classic fixed-step RK4, applied in the interaction picture of ``H``:
    the coherent part is carried exactly through the eigenbasis of ``H`` and
    RK4 integrates the dissipator with its oscillating phases. The problem
    is first restricted to the basis states reachable from the support of
    ``ρ0``, which is exact. Step doubling as in :func:`evolve_timedep`.

    ``rate`` sets the dimensionless time ``rate * t`` for the step budget;
    by default the largest Bohr frequency of ``H`` plus ``‖Σ L†L‖``.
    """
    h = np.asarray(h, dtype=complex)
    rho0 = _check_state(h, rho0)
    if rho0.ndim != 2:
        raise DimensionMismatch("rho0 must be a density matrix")
    _check_density(rho0)
    ls = [np.asarray(op, dtype=complex) for op in ls]
    for op in ls:
        if op.shape != h.shape:
            raise DimensionMismatch(f"collapse operator shape {op.shape} != {h.shape}")
    if not ls or t == 0:
        return evolve_exact(h, t, rho0)

    support = (np.abs(rho0) > 0).any(axis=1)
    idx = _reachable(support, h, ls)
    sub = np.ix_(idx, idx)
    w, v = eigh(h[sub])
    vh = v.conj().T
    lt = np.stack([vh @ op[sub] @ v for op in ls])
    mt = np.sum(np.conj(np.swapaxes(lt, -1, -2)) @ lt, axis=0)
    x0 = vh @ rho0[sub] @ v
    if rate is None:
        rate = float(w[-1] - w[0]) + float(np.linalg.norm(mt, 2))

    def phases(s: float) -> np.ndarray:
        e = np.exp(1j * w * s)
        return np.outer(e, e.conj())

    def rhs(x: np.ndarray, ph: np.ndarray) -> np.ndarray:
        lk = ph * lt
        mk = ph * mt
        out = np.sum(lk @ x @ np.conj(np.swapaxes(lk, -1, -2)), axis=0)
        return out - 0.5 * (mk @ x + x @ mk)

    def run(n: int) -> np.ndarray:
        dt = t / n
        x = x0.copy()
        ph0 = phases(0.0)
        for k in range(n):
            ph_mid = phases((k + 0.5) * dt)
            ph1 = phases((k + 1) * dt)
            k1 = rhs(x, ph0)
            k2 = rhs(x + 0.5 * dt * k1, ph_mid)
            k3 = rhs(x + 0.5 * dt * k2, ph_mid)
            k4 = rhs(x + dt * k3, ph1)
            x = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            ph0 = ph1
        # back to the Schrödinger picture
        return v @ (phases(t).conj() * x) @ vh

    rho_sub, _ = _converge(run, ctrl.n_steps(rate * t), ctrl)
    rho = np.zeros_like(rho0)
    rho[sub] = 0.5 * (rho_sub + rho_sub.conj().T)
    return rho


# -- closed-form effective evolution ----------------------------------------

def eff_analytic_unitary(lam: float, t: float) -> np.ndarray:
    """Closed-form ``exp(-i H_vac t)`` for the 9-dim two-atom Hamiltonian.

    ``|ff>, |fg>, |gf>, |gg>`` are stationary, ``|fe>, |ef>`` pick up
    ``e^{-iλt}``, ``|ee>`` picks up ``e^{-2iλt}``, and ``{|ge>, |eg>}``
    rotates as ``e^{-iλt}[cos λt · 1 - i sin λt · swap]``.
    """
    phase = np.exp(-1j * lam * t)
    u = np.zeros((9, 9), dtype=complex)
    for label in ("ff", "fg", "gf", "gg"):
        u[_PAIR[label], _PAIR[label]] = 1.0
    for label in ("fe", "ef"):
        u[_PAIR[label], _PAIR[label]] = phase
    u[_PAIR["ee"], _PAIR["ee"]] = phase ** 2
    ge, eg = _PAIR["ge"], _PAIR["eg"]
    c, s = math.cos(lam * t), math.sin(lam * t)
    u[ge, ge] = u[eg, eg] = phase * c
    u[ge, eg] = u[eg, ge] = -1j * phase * s
    return u


def evolve_eff_analytic(state9: np.ndarray, lam: float, t: float) -> np.ndarray:
    state9 = np.asarray(state9, dtype=complex)
    if state9.shape[0] != 9 or (state9.ndim == 2 and state9.shape[1] != 9):
        raise DimensionMismatch(f"expected a 9-dim two-atom state, got shape {state9.shape}")
    return apply_unitary(eff_analytic_unitary(lam, t), state9)
