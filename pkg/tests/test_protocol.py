import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavity_qutrits.errors import DegenerateInput, InvalidConfig, InvalidStage
from cavity_qutrits.hilbert import pair_state
from cavity_qutrits.measures import fidelity, fidelity_mixed
from cavity_qutrits.protocol import (
    REFERENCE_STAGES,
    ProtocolConfig,
    PulseSpec,
    apply_local_phases,
    bell_state,
    calibrate_local_phases,
    compose_pulses,
    default_params,
    inject_timing_error,
    paper_collision_unitary,
    paper_state,
    preset_final_pulse,
    preset_mid_pulse,
    preset_prep_atom1,
    rotation_unitary,
    run_protocol,
)

from conftest import random_density, random_state

F, G, E = np.eye(3, dtype=complex)
R1, R2 = math.sqrt(1 / 3), math.sqrt(2 / 3)

# frozen outputs of the reference run (g/2π = 25 kHz, δ_eg = 10 g, n_max = 4)
FULL_UNITARY_CALIBRATED = 0.9861976277962305
FULL_UNITARY_COLLISION_OVERLAP = 0.9864103583703214


# -- pulses ------------------------------------------------------------------

@settings(max_examples=50, deadline=None)
@given(st.sampled_from([("f", "g"), ("g", "e"), ("f", "e")]),
       st.floats(-7, 7), st.floats(-7, 7))
def test_rotation_is_unitary(transition, theta, phi):
    u = rotation_unitary(PulseSpec(1, transition, theta, phi))
    assert np.max(np.abs(u.conj().T @ u - np.eye(3))) < 1e-14


def test_rotation_convention():
    u = rotation_unitary(PulseSpec(1, ("g", "e"), math.pi / 2, 0.3))
    assert np.allclose(u @ G, (G - 1j * np.exp(0.3j) * E) / math.sqrt(2))
    assert np.allclose(u @ E, (-1j * np.exp(-0.3j) * G + E) / math.sqrt(2))
    assert np.array_equal(u @ F, F)


def test_pulse_validation():
    with pytest.raises(ValueError):
        PulseSpec(3, ("g", "e"), 1.0)
    with pytest.raises(ValueError):
        PulseSpec(1, ("e", "g"), 1.0)


def test_presets():
    prep = compose_pulses(preset_prep_atom1())
    assert np.allclose(prep @ E, R1 * F - R2 * G, atol=1e-15)
    mid = rotation_unitary(preset_mid_pulse())
    assert np.allclose(mid @ E, F, atol=1e-15)
    assert np.allclose(mid @ F, -E, atol=1e-15)
    fin = rotation_unitary(preset_final_pulse())
    w = np.exp(1j * math.pi / 4)
    assert np.allclose(fin @ E, -w.conjugate() * G, atol=1e-15)
    assert np.allclose(fin @ G, w * E, atol=1e-15)


# -- reference algebra --------------------------------------------------------

@pytest.mark.parametrize("stage", [4, 5, 6, 7, 8, 9, 10])
def test_reference_states_normalized(stage):
    assert np.linalg.norm(paper_state(stage)) == pytest.approx(1.0, abs=1e-15)


def test_reference_state_identities():
    assert np.allclose(paper_state(8), paper_state(7, math.pi / 4), atol=1e-16)
    assert np.allclose(paper_state(10, 0.0), bell_state(), atol=1e-16)
    with pytest.raises(InvalidStage):
        paper_state(3)


def test_reference_collision_reaches_stage_five():
    prepared = np.kron(R1 * F - R2 * G, E)
    out = paper_collision_unitary(math.pi / 2) @ prepared
    assert np.allclose(out, paper_state(4), atol=1e-15)
    assert fidelity(out, paper_state(5)) == pytest.approx(1.0, abs=1e-15)


def test_reference_algebra_stages_match_exactly():
    res = run_protocol(ProtocolConfig())
    for key, stage in REFERENCE_STAGES.items():
        assert np.max(np.abs(res.stages[key] - paper_state(stage))) < 1e-12, key
    assert res.fidelity_raw == pytest.approx(1.0, abs=1e-12)
    assert res.is_pure and res.photon_population is None


@pytest.mark.parametrize("delta", [0.0, 0.01, 0.13, 0.25, 0.5])
def test_timing_error_fidelity(delta):
    res = run_protocol(inject_timing_error(ProtocolConfig(calibrate=False), delta))
    assert res.fidelity_raw == pytest.approx((5 + 4 * math.cos(2 * math.pi * delta)) / 9, abs=1e-12)
    assert res.fidelity_calibrated is None


# -- effective backends --------------------------------------------------------

@pytest.mark.parametrize("backend", ["eff_analytic", "eff_numeric"])
def test_effective_backends(backend):
    res = run_protocol(ProtocolConfig(backend=backend))
    assert res.fidelity_raw == pytest.approx(5 / 9, abs=1e-12)
    assert res.fidelity_calibrated == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(res.schmidt, 1 / math.sqrt(3), atol=1e-9)
    assert res.entropy_log3 == pytest.approx(1.0, abs=1e-12)
    # ff, gg, ee only
    assert sum(res.populations[k] for k in ("ff", "gg", "ee")) == pytest.approx(1.0, abs=1e-12)
    assert res.calibration_exact is True


def test_physical_timing_model_is_global_phase():
    base = run_protocol(ProtocolConfig(backend="eff_analytic"))
    late = run_protocol(inject_timing_error(ProtocolConfig(backend="eff_analytic"), 0.1, "physical"))
    assert fidelity(late.final_atom_state, base.final_atom_state) == pytest.approx(1.0, abs=1e-12)


# -- calibration ---------------------------------------------------------------

def test_calibration_recovers_known_phases():
    phases = np.array([[0.0, 0.7, -2.1], [0.4, -0.3, 1.0]])
    state = apply_local_phases(bell_state(), phases)
    cal = calibrate_local_phases(state)
    assert cal.fidelity == pytest.approx(1.0, abs=1e-14)
    assert fidelity(cal.state, bell_state()) == pytest.approx(1.0, abs=1e-14)
    assert cal.phases[0, 0] == 0.0
    assert not np.any(cal.phases[1])


def test_calibration_closed_form_beats_random_phases(rng):
    for _ in range(20):
        psi = random_state(rng, 9)
        cal = calibrate_local_phases(psi)
        bound = (np.sum(np.abs(psi[[0, 4, 8]])) / math.sqrt(3)) ** 2
        assert cal.fidelity == pytest.approx(bound, abs=1e-12)
        for _ in range(20):
            ph = rng.uniform(-math.pi, math.pi, size=(2, 3))
            assert fidelity(apply_local_phases(psi, ph), bell_state()) <= cal.fidelity + 1e-12


def test_calibration_mixed_lower_bound(rng):
    phases = np.array([[0.0, 1.1, -0.5], [0.0, 0.0, 0.2]])
    psi = apply_local_phases(bell_state(), phases)
    rho = 0.9 * np.outer(psi, psi.conj()) + 0.1 * random_density(rng, 9)
    cal = calibrate_local_phases(rho)
    assert not cal.exact
    raw = fidelity_mixed(rho, bell_state())
    assert cal.fidelity >= raw - 1e-12
    assert cal.fidelity >= 0.9 - 1e-12
    for _ in range(50):
        ph = rng.uniform(-math.pi, math.pi, size=(2, 3))
        assert fidelity_mixed(apply_local_phases(rho, ph), bell_state()) <= cal.fidelity + 1e-9


def test_calibration_errors():
    with pytest.raises(DegenerateInput):
        calibrate_local_phases(pair_state("fg"))
    with pytest.raises(ValueError):
        calibrate_local_phases(bell_state(), target=pair_state("fe"))


# -- configuration -------------------------------------------------------------

@pytest.mark.parametrize("bad", [dict(backend="nope"), dict(timing_model="x"), dict(propagator="rk"),
                                 dict(lambda_t1=-0.1), dict(timing_delta=0.6),
                                 dict(backend="full_lindblad", propagator="timedep")])
def test_invalid_protocol_config(bad):
    with pytest.raises(InvalidConfig):
        ProtocolConfig(**bad)


# -- full cavity backends -------------------------------------------------------

def test_full_unitary_reference_run():
    res = run_protocol(ProtocolConfig(backend="full_unitary"))
    assert res.fidelity_calibrated == pytest.approx(FULL_UNITARY_CALIBRATED, rel=1e-9)
    assert res.fidelity_calibrated >= 0.95
    assert 0 < res.photon_population < 0.05
    assert res.purity < 1
    assert res.metadata["calibration"] == "lower_bound"


def test_collision_against_effective_model():
    full = run_protocol(ProtocolConfig(backend="full_unitary"))
    eff = run_protocol(ProtocolConfig(backend="eff_analytic"))
    overlap = fidelity_mixed(full.stages["collision_1"], eff.stages["collision_1"])
    assert overlap >= 0.95
    assert overlap == pytest.approx(FULL_UNITARY_COLLISION_OVERLAP, rel=1e-9)


def test_full_unitary_approaches_effective_model_deep_dispersive():
    cfg = ProtocolConfig(backend="full_unitary", params=default_params().with_(delta_eg=80 * default_params().g))
    res = run_protocol(cfg)
    assert res.fidelity_calibrated > 0.999


def test_timedep_propagator_agrees_with_static_frame():
    p = default_params().with_(fock_dim=3)
    a = run_protocol(ProtocolConfig(backend="full_unitary", params=p))
    b = run_protocol(ProtocolConfig(backend="full_unitary", params=p, propagator="timedep"))
    assert np.max(np.abs(a.final_atom_state - b.final_atom_state)) < 1e-6
    assert b.metadata["propagator"] == "timedep"


def test_lindblad_zero_kappa_matches_unitary():
    a = run_protocol(ProtocolConfig(backend="full_unitary"))
    b = run_protocol(ProtocolConfig(backend="full_lindblad"))
    assert np.max(np.abs(a.final_atom_state - b.final_atom_state)) < 1e-8
