"""Fidelities and bipartite entanglement measures for two-qutrit states."""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch
from .hilbert import PAIR_LABELS
from .linalg import partial_trace

LN3 = math.log(3.0)


def _as_state(x, dim: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if dim is not None and x.shape[0] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got shape {x.shape}")
    return x


def fidelity(psi, phi) -> float:
    """``|<phi|psi>|²`` for normalized pure states."""
    psi = _as_state(psi)
    phi = _as_state(phi, psi.shape[0])
    if psi.ndim != 1 or phi.ndim != 1:
        raise DimensionMismatch("fidelity expects two state vectors")
    return float(min(1.0, abs(np.vdot(phi, psi)) ** 2))


def fidelity_mixed(rho, phi) -> float:
    """``<phi|rho|phi>`` against a pure target."""
    rho = _as_state(rho)
    phi = _as_state(phi, rho.shape[0])
    if rho.ndim != 2 or rho.shape[1] != rho.shape[0]:
        raise DimensionMismatch(f"expected a square density matrix, got shape {rho.shape}")
    return float(np.clip(np.vdot(phi, rho @ phi).real, 0.0, 1.0))


def state_fidelity(state, target) -> float:
    """Dispatch on whether ``state`` is a vector or a density matrix."""
    state = np.asarray(state)
    return fidelity(state, target) if state.ndim == 1 else fidelity_mixed(state, target)


def eq11_fidelity(delta) -> float:
    """Fidelity ``(5 + 4 cos 2πΔ) / 9`` of the timing-error state to the target."""
    return (5.0 + 4.0 * np.cos(2.0 * np.pi * delta)) / 9.0


def schmidt_coefficients(psi) -> np.ndarray:
    """Schmidt coefficients of a two-qutrit pure state, descending.

    Taken as square roots of the eigenvalues of atom 1's reduced density
    matrix.
    """
    psi = _as_state(psi, 9)
    rho1 = partial_trace(psi, (3, 3), keep=[0])
    p = np.clip(np.linalg.eigvalsh(rho1), 0.0, None)
    return np.sqrt(p)[::-1]


def entanglement_entropy(psi, base: float = math.e) -> float:
    """Von Neumann entropy of one atom's reduced state (natural log by default)."""
    p = schmidt_coefficients(psi) ** 2
    p = p[p > 1e-300]
    return float(-np.sum(p * np.log(p)) / math.log(base))


def principal_state(rho) -> np.ndarray:
    """Eigenvector of the largest eigenvalue of ``rho``."""
    w, v = np.linalg.eigh(np.asarray(rho, dtype=complex))
    return v[:, -1]


def populations(state) -> dict[str, float]:
    """Two-atom level populations keyed ``"ff"``, ``"fg"``, ..., ``"ee"``."""
    state = _as_state(state, 9)
    p = np.abs(state) ** 2 if state.ndim == 1 else np.real(np.diag(state))
    return {label: float(v) for label, v in zip(PAIR_LABELS, p)}
