"""Hamiltonians and collapse operators for the two-atom cavity system.

All frequencies are angular (rad/s) and all times are in seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .hilbert import SpaceSpec, atom_ket_bra, embed_atom, field_op, sigma

TWO_PI = 2.0 * math.pi

#: Minimum detuning-to-coupling ratio treated as dispersive.
DISPERSIVE_RATIO = 5.0


@dataclass(frozen=True)
class PhysParams:
    """Physical parameters, angular frequencies in rad/s.

    ``delta_gf_sign`` selects ``δ_gf = δ_eg + sign * δ_det`` for the optional
    f-g leakage coupling; it has no effect while ``g_f == 0``.
    """

    g: float
    delta_eg: float
    delta_det: float = TWO_PI * 3.2e9
    kappa: float = 0.0
    g_f: float = 0.0
    fock_dim: int = 5
    delta_gf_sign: int = 1

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError(f"g must be positive, got {self.g}")
        if not self.delta_eg > 0:
            raise ValueError(f"delta_eg must be positive, got {self.delta_eg}")
        if self.kappa < 0 or self.g_f < 0:
            raise ValueError("kappa and g_f must be non-negative")
        if int(self.fock_dim) < 2:
            raise ValueError(f"fock_dim must be >= 2, got {self.fock_dim}")
        if self.delta_gf_sign not in (1, -1):
            raise ValueError("delta_gf_sign must be +1 or -1")

    @classmethod
    def from_ratio(cls, g_over_2pi_hz: float = 25e3, delta_ratio: float = 10.0, **kw) -> "PhysParams":
        """Build from ``g/2π`` in Hz and ``δ_eg = delta_ratio * g``."""
        g = TWO_PI * g_over_2pi_hz
        return cls(g=g, delta_eg=delta_ratio * g, **kw)

    @property
    def lam(self) -> float:
        """Effective exchange coupling ``λ = g²/δ_eg``."""
        return self.g ** 2 / self.delta_eg

    @property
    def delta_gf(self) -> float:
        return self.delta_eg + self.delta_gf_sign * self.delta_det

    @property
    def delta_ratio(self) -> float:
        return self.delta_eg / self.g

    @property
    def is_dispersive(self) -> bool:
        return self.delta_eg >= DISPERSIVE_RATIO * self.g

    @property
    def space(self) -> SpaceSpec:
        return SpaceSpec(self.fock_dim)

    def with_(self, **changes) -> "PhysParams":
        return replace(self, **changes)


def _ladder_terms(space: SpaceSpec) -> tuple[np.ndarray, np.ndarray]:
    """Return ``a† (σ1- + σ2-)`` and ``a† (|f1><g1| + |f2><g2|)``."""
    adag = field_op(space, "create")
    s_minus = sigma(space, 1, "minus") + sigma(space, 2, "minus")
    fg = atom_ket_bra("f", "g")
    f_minus = embed_atom(fg, 1, space) + embed_atom(fg, 2, space)
    return adag @ s_minus, adag @ f_minus


def interaction_picture_fn(space: SpaceSpec, params: PhysParams) -> Callable[[float], np.ndarray]:
    """Return ``t -> H(t)`` for the interaction-picture coupling.

    ``H(t) = g [e^{-iδ_eg t} a†(σ1- + σ2-) + h.c.]``, plus
    ``g_f [e^{-iδ_gf t} a†(|f1><g1| + |f2><g2|) + h.c.]`` when ``g_f > 0``.
    """
    down_e, down_f = _ladder_terms(space)
    g, g_f = params.g, params.g_f
    d_eg, d_gf = params.delta_eg, params.delta_gf

    def hamiltonian(t: float) -> np.ndarray:
        term = g * np.exp(-1j * d_eg * t) * down_e
        if g_f:
            term = term + g_f * np.exp(-1j * d_gf * t) * down_f
        # adding the exact adjoint keeps H Hermitian to the last bit
        return term + term.conj().T

    return hamiltonian


def h_interaction_picture(space: SpaceSpec, params: PhysParams, t: float) -> np.ndarray:
    return interaction_picture_fn(space, params)(t)


def frame_diagonal(space: SpaceSpec, params: PhysParams) -> np.ndarray:
    """Diagonal generator ``D`` of the rotating frame ``R(t) = exp(-i D t)``.

    With ``g_f == 0`` this is ``-δ_eg a†a``. Leakage adds a shift
    ``δ_eg - δ_gf`` on each atom's f level so that one frame removes both
    time dependences.
    """
    d = -params.delta_eg * np.real(np.diag(field_op(space, "number")))
    if params.g_f:
        f_proj = atom_ket_bra("f", "f")
        shift = params.delta_eg - params.delta_gf
        for atom in (1, 2):
            d = d + shift * np.real(np.diag(embed_atom(f_proj, atom, space)))
    return d


def h_static_frame(space: SpaceSpec, params: PhysParams) -> np.ndarray:
    """Time-independent Hamiltonian equivalent to the interaction picture.

    For states evolved from ``t_a`` to ``t_b``,
    ``U_int(t_b, t_a) = R(t_b)† exp(-i H_s (t_b - t_a)) R(t_a)``.
    """
    down_e, down_f = _ladder_terms(space)
    coupling = params.g * down_e
    if params.g_f:
        coupling = coupling + params.g_f * down_f
    return np.diag(frame_diagonal(space, params)).astype(complex) + coupling + coupling.conj().T


def h_eff_field(space: SpaceSpec, params: PhysParams) -> np.ndarray:
    """Dispersive Hamiltonian ``λ Σ_ij (σi+ σj- a a† - σi- σj+ a† a)`` on the full space.

    Operator ordering is kept literally, ``a a†`` on the raising term.
    """
    a = field_op(space, "annihilate")
    adag = field_op(space, "create")
    aad = a @ adag
    ada = adag @ a
    h = np.zeros((space.dim, space.dim), dtype=complex)
    for i in (1, 2):
        for j in (1, 2):
            h += sigma(space, i, "plus") @ sigma(space, j, "minus") @ aad
            h -= sigma(space, i, "minus") @ sigma(space, j, "plus") @ ada
    return params.lam * h


def h_eff_vac(lam: float) -> np.ndarray:
    """Two-atom 9x9 Hamiltonian ``λ(σ1+σ1- + σ2+σ2- + σ1+σ2- + σ2+σ1-)``."""
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    sp = {j: sigma(None, j, "plus") for j in (1, 2)}
    sm = {j: sigma(None, j, "minus") for j in (1, 2)}
    return lam * (sp[1] @ sm[1] + sp[2] @ sm[2] + sp[1] @ sm[2] + sp[2] @ sm[1])


def h_stark_single(lam: float, atom: int = 2, space: SpaceSpec | None = None) -> np.ndarray:
    """Vacuum Stark shift ``λ σj+ σj-`` of a lone atom in the cavity."""
    return lam * embed_atom(atom_ket_bra("e", "e"), atom, space)


def collapse_ops(space: SpaceSpec, params: PhysParams) -> list[np.ndarray]:
    """Cavity decay ``[√κ a]``, or no operators when ``κ == 0``."""
    if params.kappa <= 0:
        return []
    return [math.sqrt(params.kappa) * field_op(space, "annihilate")]
