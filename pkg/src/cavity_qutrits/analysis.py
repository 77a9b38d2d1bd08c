"""Parameter sweeps and physical-units reporting.

Point-wise measures (fidelities, Schmidt data, the timing-error law) live in
:mod:`cavity_qutrits.measures` and are re-exported here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .hamiltonians import PhysParams
from .measures import (  # noqa: F401
    LN3,
    entanglement_entropy,
    eq11_fidelity,
    fidelity,
    fidelity_mixed,
    populations,
    schmidt_coefficients,
    state_fidelity,
)
from .protocol import ProtocolConfig, run_protocol

#: Rydberg radiative lifetime for principal quantum numbers around 50 (s).
RADIATIVE_TIME_S = 3e-2
#: Photon storage time of the reference cavity (s).
PHOTON_LIFETIME_S = 1e-3


@dataclass(frozen=True)
class SweepRow:
    value: float
    fidelity_sim: float
    fidelity_raw: float
    fidelity_analytic: float | None = None
    photon_population: float | None = None
    entropy_log3: float | None = None


def physical_report(params: PhysParams, cavity_length: float, lambda_t1: float = math.pi / 2,
                    lambda_t2: float = math.pi / 4) -> dict:
    """Timings and atom velocity implied by the couplings and cavity length.

    Total interaction time is ``(λt1 + λt2)/λ``; with the default phases
    that is ``3π/(4λ) = 3π δ_eg / (4 g²)``. The atoms must cross a cavity of
    length ``L`` in that time.
    """
    if not cavity_length > 0:
        raise ValueError(f"cavity length must be positive, got {cavity_length}")
    lam = params.lam
    t1 = lambda_t1 / lam
    t2 = lambda_t2 / lam
    total = t1 + t2
    lifetime = 1.0 / params.kappa if params.kappa > 0 else PHOTON_LIFETIME_S
    return {
        "g_rad_s": params.g,
        "g_over_2pi_hz": params.g / (2 * math.pi),
        "delta_eg_rad_s": params.delta_eg,
        "delta_ratio": params.delta_ratio,
        "dispersive": params.is_dispersive,
        "lambda_rad_s": lam,
        "rabi_period_s": math.pi / lam,
        "t1_s": t1,
        "t2_s": t2,
        "t_total_s": total,
        "cavity_length_m": cavity_length,
        "velocity_per_length_1_s": 1.0 / total,
        "velocity_m_s": cavity_length / total,
        "radiative_time_s": RADIATIVE_TIME_S,
        "photon_lifetime_s": lifetime,
        "t_total_over_radiative_time": total / RADIATIVE_TIME_S,
        "t_total_over_photon_lifetime": total / lifetime,
    }


def _require(grid) -> list[float]:
    grid = list(grid)
    if not grid:
        raise ValueError("sweep grid must not be empty")
    return grid


def _row(value: float, res, analytic: float | None = None) -> SweepRow:
    sim = res.fidelity_calibrated if res.fidelity_calibrated is not None else res.fidelity_raw
    return SweepRow(value, sim, res.fidelity_raw, analytic, res.photon_population, res.entropy_log3)


def timing_sweep(deltas: Iterable[float], cfg: ProtocolConfig | None = None,
                 model: str = "paper_faithful") -> list[SweepRow]:
    """Raw fidelity versus early-entry fraction ``Δ``, next to the closed-form law."""
    cfg = cfg or ProtocolConfig()
    rows = []
    for d in _require(deltas):
        res = run_protocol(cfg.with_(timing_delta=float(d), timing_model=model, calibrate=False))
        rows.append(SweepRow(float(d), res.fidelity_raw, res.fidelity_raw, float(eq11_fidelity(d)),
                             res.photon_population, res.entropy_log3))
    return rows


def detuning_sweep(ratios: Iterable[float], cfg: ProtocolConfig | None = None,
                   backend: str = "full_unitary") -> list[SweepRow]:
    """Calibrated fidelity versus ``δ_eg/g`` at fixed ``g``."""
    cfg = (cfg or ProtocolConfig()).with_(backend=backend)
    rows = []
    for r in _require(ratios):
        params = cfg.params.with_(delta_eg=float(r) * cfg.params.g)
        rows.append(_row(float(r), run_protocol(cfg.with_(params=params))))
    return rows


def kappa_sweep(kappas: Iterable[float], cfg: ProtocolConfig | None = None) -> list[SweepRow]:
    """Calibrated fidelity versus cavity decay rate (s⁻¹) with the Lindblad backend."""
    cfg = (cfg or ProtocolConfig()).with_(backend="full_lindblad")
    rows = []
    for k in _require(kappas):
        params = cfg.params.with_(kappa=float(k))
        rows.append(_row(float(k), run_protocol(cfg.with_(params=params))))
    return rows


def fock_convergence(n_maxes: Iterable[int], cfg: ProtocolConfig | None = None,
                     backend: str = "full_unitary") -> list[SweepRow]:
    """Protocol outcome versus Fock truncation ``n_max``."""
    cfg = (cfg or ProtocolConfig()).with_(backend=backend)
    rows = []
    for n in _require(n_maxes):
        params = cfg.params.with_(fock_dim=int(n) + 1)
        rows.append(_row(int(n), run_protocol(cfg.with_(params=params))))
    return rows
