"""Entanglement-generation sequence for two qutrits via a dispersive cavity.

The sequence is: prepare atom 1 with two classical pulses, let both atoms
interact in the cavity for ``λt1``, flip atom 2 on f<->e, interact again for
``λt2``, and finish with a g<->e pulse on atom 2. Five dynamics backends are
available:

``paper_algebra``
    the ideal reference algebra: the collision rotates the {ge, eg} pair and
    leaves every other two-atom state untouched.
``eff_analytic`` / ``eff_numeric``
    the 9-dim vacuum effective Hamiltonian, in closed form or by exact
    exponentiation. Unlike ``paper_algebra`` these include the vacuum Stark
    phase on ``|fe>``.
``full_unitary`` / ``full_lindblad``
    the full atom-atom-cavity coupling, closed or with cavity decay; the
    cavity is traced out at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .dynamics import (
    StepControl,
    apply_unitary,
    eff_analytic_unitary,
    evolve_exact,
    evolve_lindblad,
    evolve_timedep,
)
from .errors import DegenerateInput, InvalidConfig, InvalidStage
from .hamiltonians import (
    PhysParams,
    collapse_ops,
    frame_diagonal,
    h_eff_vac,
    h_stark_single,
    h_static_frame,
    interaction_picture_fn,
)
from .hilbert import LEVEL_INDEX, LEVELS, PAIR_LABELS, basis_state, embed_atom, field_op, pair_state
from .linalg import kron, matexp_hermitian, partial_trace
from .measures import (
    LN3,
    entanglement_entropy,
    populations,
    principal_state,
    schmidt_coefficients,
    state_fidelity,
)

BACKENDS = ("paper_algebra", "eff_analytic", "eff_numeric", "full_unitary", "full_lindblad")
TIMING_MODELS = ("paper_faithful", "physical")
PROPAGATORS = ("static_frame", "timedep")
TRANSITIONS = (("f", "g"), ("g", "e"), ("f", "e"))

_PAIR = {label: i for i, label in enumerate(PAIR_LABELS)}
_DIAG = [_PAIR[k + k] for k in LEVELS]


# -- pulses ------------------------------------------------------------------

@dataclass(frozen=True)
class PulseSpec:
    """Instantaneous classical pulse on one atom.

    On the ordered pair ``(lower, upper)``::

        |lower> -> cos(θ/2)|lower> - i e^{iφ} sin(θ/2)|upper>
        |upper> -> -i e^{-iφ} sin(θ/2)|lower> + cos(θ/2)|upper>

    and the third level is left alone.
    """

    atom: int
    transition: tuple[str, str]
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if self.atom not in (1, 2):
            raise ValueError(f"atom must be 1 or 2, got {self.atom}")
        if tuple(self.transition) not in TRANSITIONS:
            raise ValueError(f"transition must be one of {TRANSITIONS}, got {self.transition!r}")


def rotation_unitary(p: PulseSpec) -> np.ndarray:
    lo, up = (LEVEL_INDEX[x] for x in p.transition)
    c, s = math.cos(p.theta / 2), math.sin(p.theta / 2)
    u = np.eye(3, dtype=complex)
    u[lo, lo] = c
    u[up, up] = c
    u[up, lo] = -1j * np.exp(1j * p.phi) * s
    u[lo, up] = -1j * np.exp(-1j * p.phi) * s
    return u


def compose_pulses(pulses) -> np.ndarray:
    """Single-atom unitary of a pulse train applied first to last."""
    u = np.eye(3, dtype=complex)
    for p in pulses:
        u = rotation_unitary(p) @ u
    return u


def preset_prep_atom1() -> list[PulseSpec]:
    """Two pulses taking atom 1 from ``|e>`` to ``√(1/3)|f> - √(2/3)|g>``."""
    return [
        PulseSpec(1, ("g", "e"), math.pi, math.pi / 2),
        PulseSpec(1, ("f", "g"), 2 * math.asin(math.sqrt(1 / 3)), math.pi / 2),
    ]


def preset_mid_pulse() -> PulseSpec:
    """Atom 2: ``|e> -> |f>``, ``|f> -> -|e>``."""
    return PulseSpec(2, ("f", "e"), math.pi, -math.pi / 2)


def preset_final_pulse() -> PulseSpec:
    """Atom 2: ``|e> -> -e^{-iπ/4}|g>``, ``|g> -> e^{iπ/4}|e>``."""
    return PulseSpec(2, ("g", "e"), math.pi, 3 * math.pi / 4)


# -- reference states ---------------------------------------------------------

def _pair(**amps) -> np.ndarray:
    psi = np.zeros(9, dtype=complex)
    for label, a in amps.items():
        psi[_PAIR[label]] = a
    return psi


def bell_state() -> np.ndarray:
    """``(|ff> + |gg> + |ee>)/√3``."""
    return _pair(ff=1, gg=1, ee=1) / math.sqrt(3)


def paper_state(stage: int, param: float | None = None) -> np.ndarray:
    """Two-atom state at a numbered stage of the ideal derivation.

    ``param`` is ``λt1`` for stage 4, ``λt2`` for stage 7 and the timing
    fraction ``Δ`` for stage 10; other stages take no parameter.
    """
    r1, r2 = math.sqrt(1 / 3), math.sqrt(2 / 3)
    if stage == 4:
        x = math.pi / 2 if param is None else param
        ph = np.exp(-1j * x)
        return _pair(fe=r1, ge=-r2 * ph * math.cos(x), eg=1j * r2 * ph * math.sin(x))
    if stage == 5:
        return _pair(fe=r1, eg=r2)
    if stage == 6:
        return _pair(ff=r1, eg=r2)
    if stage == 7:
        x = math.pi / 4 if param is None else param
        ph = np.exp(-1j * x)
        return _pair(ff=r1, eg=r2 * ph * math.cos(x), ge=-1j * r2 * ph * math.sin(x))
    if stage == 8:
        ph = np.exp(-1j * math.pi / 4)
        return _pair(ff=r1, eg=r1 * ph, ge=-1j * r1 * ph)
    if stage == 9:
        return bell_state()
    if stage == 10:
        d = 0.0 if param is None else param
        x = math.pi / 4 - math.pi * d
        ph = np.exp(1j * math.pi * d)
        return _pair(ff=r1, ee=r2 * ph * math.cos(x), gg=r2 * ph * math.sin(x))
    raise InvalidStage(f"stage must be one of 4..10, got {stage!r}")


def paper_collision_unitary(phase: float) -> np.ndarray:
    """Collision map of the reference algebra: only the {ge, eg} pair evolves."""
    u = np.eye(9, dtype=complex)
    ge, eg = _PAIR["ge"], _PAIR["eg"]
    ph = np.exp(-1j * phase)
    u[ge, ge] = u[eg, eg] = ph * math.cos(phase)
    u[ge, eg] = u[eg, ge] = -1j * ph * math.sin(phase)
    return u


# -- local phase calibration -------------------------------------------------

class Calibration(NamedTuple):
    phases: np.ndarray  # shape (2, 3): atom, level (f, g, e)
    fidelity: float
    exact: bool
    state: np.ndarray


def local_phase_unitary(phases) -> np.ndarray:
    phases = np.asarray(phases, dtype=float)
    return kron(np.diag(np.exp(1j * phases[0])), np.diag(np.exp(1j * phases[1])))


def apply_local_phases(state, phases) -> np.ndarray:
    return apply_unitary(local_phase_unitary(phases), np.asarray(state, dtype=complex))


def calibrate_local_phases(state, target=None, max_iter: int = 200) -> Calibration:
    """Best overlap with ``target`` over diagonal phase unitaries on each atom.

    ``target`` must be supported on ``|ff>, |gg>, |ee>`` only (the default
    is the maximally entangled state). For a pure ``state`` the optimum is
    closed form, ``(Σ_k |t_kk| |c_kk|)²``, and is exact. For a density
    matrix the phases are found by coordinate ascent from the principal
    eigenvector and the result is flagged as a lower bound.

    All phase freedom is put on atom 1 and normalized so that the first
    level with weight has phase zero.
    """
    target = bell_state() if target is None else np.asarray(target, dtype=complex)
    off = np.delete(target, _DIAG)
    if np.max(np.abs(off)) > 1e-12:
        raise ValueError("target must be supported on |ff>, |gg>, |ee> only")
    t = target[_DIAG]
    state = np.asarray(state, dtype=complex)

    if state.ndim == 1:
        c = state[_DIAG]
        weight = np.abs(t) * np.abs(c)
        if not np.any(weight > 0):
            raise DegenerateInput("state has no weight on the target's diagonal components")
        theta = np.where(weight > 0, np.angle(t) - np.angle(c), 0.0)
        exact = True
    else:
        cmat = state[np.ix_(_DIAG, _DIAG)]
        if not np.any(np.abs(np.diag(cmat)) * np.abs(t) > 0):
            raise DegenerateInput("state has no weight on the target's diagonal components")
        mod = np.abs(t)
        u = mod * np.exp(1j * np.angle(principal_state(cmat)))
        for _ in range(max_iter):
            prev = u.copy()
            for k in range(3):
                if mod[k] == 0:
                    continue
                z = cmat[k] @ u - cmat[k, k] * u[k]
                if abs(z) > 0:
                    u[k] = mod[k] * z / abs(z)
            if np.max(np.abs(u - prev)) < 1e-15:
                break
        weight = mod * np.abs(np.diag(cmat))
        theta = np.where(mod > 0, np.angle(t) - np.angle(u), 0.0)
        exact = False

    ref = theta[int(np.flatnonzero(weight > 0)[0])]
    theta = np.angle(np.exp(1j * (theta - ref)))
    theta[(weight == 0) | (np.abs(theta) < 1e-12)] = 0.0
    phases = np.vstack([theta, np.zeros(3)])
    calibrated = apply_local_phases(state, phases)
    fid = float(min(1.0, abs(np.vdot(target, calibrated)) ** 2) if state.ndim == 1
                else np.clip(np.vdot(target, calibrated @ target).real, 0.0, 1.0))
    return Calibration(phases, fid, exact, calibrated)


# -- configuration and results -----------------------------------------------

def default_params() -> PhysParams:
    return PhysParams.from_ratio(25e3, 10.0)


@dataclass(frozen=True)
class ProtocolConfig:
    backend: str = "paper_algebra"
    lambda_t1: float = math.pi / 2
    lambda_t2: float = math.pi / 4
    timing_delta: float = 0.0
    timing_model: str = "paper_faithful"
    calibrate: bool = True
    params: PhysParams = field(default_factory=default_params)
    step_control: StepControl = StepControl()
    propagator: str = "static_frame"

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise InvalidConfig(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        if self.timing_model not in TIMING_MODELS:
            raise InvalidConfig(f"timing_model must be one of {TIMING_MODELS}, got {self.timing_model!r}")
        if self.propagator not in PROPAGATORS:
            raise InvalidConfig(f"propagator must be one of {PROPAGATORS}, got {self.propagator!r}")
        for name in ("lambda_t1", "lambda_t2"):
            v = getattr(self, name)
            if not 0 <= v <= 2 * math.pi:
                raise InvalidConfig(f"{name} must lie in [0, 2π], got {v}")
        if not 0 <= self.timing_delta <= 0.5:
            raise InvalidConfig(f"timing_delta must lie in [0, 0.5], got {self.timing_delta}")
        if self.backend == "full_lindblad" and self.propagator != "static_frame":
            raise InvalidConfig("full_lindblad only supports the static_frame propagator")

    def with_(self, **changes) -> "ProtocolConfig":
        from dataclasses import replace
        return replace(self, **changes)


@dataclass
class ProtocolResult:
    backend: str
    final_atom_state: np.ndarray
    fidelity_raw: float
    fidelity_calibrated: float | None
    calibration_phases: np.ndarray
    calibration_exact: bool | None
    calibrated_state: np.ndarray | None
    schmidt: np.ndarray
    entropy: float
    entropy_log3: float
    populations: dict[str, float]
    purity: float
    photon_population: float | None = None
    stages: dict[str, np.ndarray] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @property
    def is_pure(self) -> bool:
        return self.final_atom_state.ndim == 1


# -- backends ----------------------------------------------------------------

class _PairBackend:
    """Pure two-atom state, no cavity."""

    def __init__(self, lam: float, collision):
        self.lam = lam
        self._collision = collision
        self.state = pair_state("ee")

    def pulse(self, p: PulseSpec) -> None:
        self.state = embed_atom(rotation_unitary(p), p.atom) @ self.state

    def collide(self, phase: float) -> None:
        self.state = self._collision(self.state, phase)

    def stark_alone(self, phase: float) -> None:
        self.state = evolve_exact(h_stark_single(self.lam), phase / self.lam, self.state)

    def atom_state(self) -> np.ndarray:
        return self.state.copy()

    def photon_population(self) -> None:
        return None


class _FieldBackend:
    """Atoms plus cavity in the interaction picture; clock in seconds."""

    def __init__(self, cfg: ProtocolConfig, lindblad: bool):
        self.params = p = cfg.params
        self.space = s = p.space
        self.lam = p.lam
        self.ctrl = cfg.step_control
        self.propagator = cfg.propagator
        self.lindblad = lindblad
        self.clock = 0.0
        self.h_static = h_static_frame(s, p)
        self.frame = frame_diagonal(s, p)
        self.ls = collapse_ops(s, p)
        psi = basis_state(s, ("e", "e", 0))
        self.state = np.outer(psi, psi.conj()) if lindblad else psi

    def _frame(self, t: float) -> np.ndarray:
        return np.exp(-1j * self.frame * t)

    def pulse(self, p: PulseSpec) -> None:
        u = embed_atom(rotation_unitary(p), p.atom, self.space)
        self.state = apply_unitary(u, self.state)

    def collide(self, phase: float) -> None:
        dt = phase / self.lam
        t_a, t_b = self.clock, self.clock + dt
        if self.propagator == "timedep":
            h_fn = interaction_picture_fn(self.space, self.params)
            self.state = evolve_timedep(h_fn, t_a, t_b, self.state, self.ctrl)
        else:
            r_a, r_b = self._frame(t_a), self._frame(t_b)
            if self.lindblad:
                rho = r_a[:, None] * self.state * r_a.conj()[None, :]
                rho = evolve_lindblad(self.h_static, self.ls, dt, rho, self.ctrl, rate=self.lam)
                self.state = r_b.conj()[:, None] * rho * r_b[None, :]
            else:
                u = matexp_hermitian(self.h_static, dt)
                self.state = r_b.conj() * (u @ (r_a * self.state))
        self.clock = t_b

    def stark_alone(self, phase: float) -> None:
        h = h_stark_single(self.lam, 2, self.space)
        self.state = apply_unitary(matexp_hermitian(h, phase / self.lam), self.state)

    def atom_state(self) -> np.ndarray:
        return partial_trace(self.state, self.space, keep=[0, 1])

    def photon_population(self) -> float:
        n = field_op(self.space, "number")
        if self.state.ndim == 1:
            return float(np.vdot(self.state, n @ self.state).real)
        return float(np.trace(n @ self.state).real)


def _make_backend(cfg: ProtocolConfig):
    lam = cfg.params.lam
    if cfg.backend == "paper_algebra":
        return _PairBackend(lam, lambda s, ph: paper_collision_unitary(ph) @ s)
    if cfg.backend == "eff_analytic":
        return _PairBackend(lam, lambda s, ph: eff_analytic_unitary(lam, ph / lam) @ s)
    if cfg.backend == "eff_numeric":
        h = h_eff_vac(lam)
        return _PairBackend(lam, lambda s, ph: evolve_exact(h, ph / lam, s))
    return _FieldBackend(cfg, lindblad=cfg.backend == "full_lindblad")


REFERENCE_STAGES = {"collision_1": 4, "pulse_S": 6, "collision_2": 7, "final": 9}


def inject_timing_error(cfg: ProtocolConfig, delta: float, model: str | None = None) -> ProtocolConfig:
    """Return ``cfg`` with atom 2 entering ``Δ·τ`` early (``τ = π/λ``).

    ``paper_faithful`` replaces the outcome with the reference timing-error
    state; ``physical`` lets atom 2 acquire its lone vacuum Stark shift for
    ``Δ·τ`` before the first joint collision and leaves the rest unchanged.
    """
    return cfg.with_(timing_delta=delta, timing_model=model or cfg.timing_model)


def run_protocol(cfg: ProtocolConfig) -> ProtocolResult:
    """Execute the full sequence under ``cfg.backend`` and analyse the outcome."""
    meta = {
        "backend": cfg.backend,
        "timing_model": cfg.timing_model,
        "timing_delta": cfg.timing_delta,
        "lambda_t1": cfg.lambda_t1,
        "lambda_t2": cfg.lambda_t2,
    }
    stages: dict[str, np.ndarray] = {}
    photons = None
    if cfg.timing_delta > 0 and cfg.timing_model == "paper_faithful":
        final = paper_state(10, cfg.timing_delta)
        meta["timing_note"] = "final state is the reference timing-error state; backend dynamics not run"
    else:
        run = _make_backend(cfg)
        for p in preset_prep_atom1():
            run.pulse(p)
        stages["prepared"] = run.atom_state()
        if cfg.timing_delta > 0:
            run.stark_alone(math.pi * cfg.timing_delta)
            meta["timing_note"] = "atom 2 alone in the cavity for delta*tau before the first collision"
        run.collide(cfg.lambda_t1)
        stages["collision_1"] = run.atom_state()
        run.pulse(preset_mid_pulse())
        stages["pulse_S"] = run.atom_state()
        run.collide(cfg.lambda_t2)
        stages["collision_2"] = run.atom_state()
        run.pulse(preset_final_pulse())
        final = stages["final"] = run.atom_state()
        photons = run.photon_population()
        if isinstance(run, _FieldBackend):
            meta["propagator"] = cfg.propagator
            meta["fock_dim"] = run.space.fock_dim

    target = bell_state()
    fid_raw = state_fidelity(final, target)
    if final.ndim == 1:
        pure = final
        purity = 1.0
        meta["schmidt_source"] = "pure_state"
    else:
        pure = principal_state(final)
        purity = float(np.trace(final @ final).real)
        meta["schmidt_source"] = "principal_eigenvector"

    if cfg.calibrate:
        cal = calibrate_local_phases(final, target)
        fid_cal, phases, exact, cal_state = cal.fidelity, cal.phases, cal.exact, cal.state
        meta["calibration"] = "exact" if exact else "lower_bound"
    else:
        fid_cal, phases, exact, cal_state = None, np.zeros((2, 3)), None, None

    schmidt = schmidt_coefficients(pure)
    entropy = entanglement_entropy(pure)
    return ProtocolResult(
        backend=cfg.backend,
        final_atom_state=final,
        fidelity_raw=fid_raw,
        fidelity_calibrated=fid_cal,
        calibration_phases=phases,
        calibration_exact=exact,
        calibrated_state=cal_state,
        schmidt=schmidt,
        entropy=entropy,
        entropy_log3=entropy / LN3,
        populations=populations(final),
        purity=purity,
        photon_population=photons,
        stages=stages,
        metadata=meta,
    )
