"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v``.
"""

import math
import time

import numpy as np
import pytest

from cavity_qutrits import analysis
from cavity_qutrits.dynamics import StepControl, evolve_eff_analytic, evolve_exact, evolve_timedep
from cavity_qutrits.hamiltonians import (
    PhysParams,
    frame_diagonal,
    h_eff_field,
    h_eff_vac,
    h_static_frame,
    interaction_picture_fn,
)
from cavity_qutrits.hilbert import excitation_operator
from cavity_qutrits.linalg import kron
from cavity_qutrits.measures import eq11_fidelity, fidelity
from cavity_qutrits.protocol import (
    ProtocolConfig,
    bell_state,
    default_params,
    paper_state,
    run_protocol,
)

from conftest import random_density, random_state

# calibrated fidelity of the full cavity model at δ_eg = 10 g, n_max = 4
REGRESSION_FULL_UNITARY = 0.9861976277962305


@pytest.fixture
def report(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        assert ok, detail
    return emit


def test_criterion_1_bell_state_from_reference_algebra(report):
    res = run_protocol(ProtocolConfig(backend="paper_algebra"))
    fid_err = abs(fidelity(res.final_atom_state, bell_state()) - 1.0)
    expected = {
        "collision_1": [paper_state(4), paper_state(5)],
        "pulse_S": [paper_state(6)],
        "collision_2": [paper_state(7), paper_state(8)],
        "final": [paper_state(9)],
    }
    stage_err = max(np.max(np.abs(res.stages[k] - ref)) for k, refs in expected.items() for ref in refs)
    ok = fid_err < 1e-12 and stage_err < 1e-12
    report(1, ok, f"|F-1| = {fid_err:.2e}, worst stage deviation {stage_err:.2e} (tol 1e-12)")


def test_criterion_2_effective_evolution(report):
    res = run_protocol(ProtocolConfig(backend="eff_analytic"))
    raw_err = abs(res.fidelity_raw - 5 / 9)
    cal_err = abs(res.fidelity_calibrated - 1.0)
    schmidt_err = float(np.max(np.abs(res.schmidt - 1 / math.sqrt(3))))
    ok = raw_err < 1e-12 and cal_err < 1e-12 and schmidt_err < 1e-9
    report(2, ok, f"F_raw = {res.fidelity_raw:.15f}, F_cal = {res.fidelity_calibrated:.15f}, "
                  f"Schmidt deviation {schmidt_err:.1e}")


def test_criterion_3_timing_error_law(report):
    deltas = np.linspace(0.0, 0.5, 51)
    rows = analysis.timing_sweep(deltas, ProtocolConfig(), model="paper_faithful")
    worst = max(abs(r.fidelity_sim - (5 + 4 * math.cos(2 * math.pi * r.value)) / 9) for r in rows)
    f001 = run_protocol(ProtocolConfig(timing_delta=0.01, calibrate=False)).fidelity_raw
    f0 = run_protocol(ProtocolConfig(calibrate=False)).fidelity_raw
    ok = worst < 1e-12 and round(f001, 3) == 0.999 and abs(f0 - 1) < 1e-12
    ok = ok and abs(eq11_fidelity(0.01) - f001) < 1e-12
    report(3, ok, f"max law deviation {worst:.1e} on 51 points, F(0.01) = {f001:.6f}, F(0) = {f0:.15f}")


def test_criterion_4_dispersive_validity(report):
    res = run_protocol(ProtocolConfig(backend="full_unitary"))
    rows = analysis.detuning_sweep([5, 10, 20, 40], ProtocolConfig(), backend="full_unitary")
    fids = [r.fidelity_sim for r in rows]
    monotone = all(b >= a for a, b in zip(fids, fids[1:]))
    ok = (res.fidelity_calibrated >= 0.95 and monotone
          and abs(res.fidelity_calibrated - REGRESSION_FULL_UNITARY) < 1e-9)
    report(4, ok, f"F_cal(δ=10g) = {res.fidelity_calibrated:.12f} (regression {REGRESSION_FULL_UNITARY:.12f}); "
                  f"sweep 5/10/20/40: {', '.join(f'{f:.6f}' for f in fids)}")


def test_criterion_5_loss_robustness(report):
    kappas = [0.0, 1e2, 1e3, 1e4]
    rows = analysis.kappa_sweep(kappas, ProtocolConfig())
    fids = [r.fidelity_sim for r in rows]
    drop = fids[0] - fids[kappas.index(1e3)]
    monotone = all(b <= a for a, b in zip(fids, fids[1:]))
    ok = drop < 0.05 and monotone
    report(5, ok, f"drop at κ=1e3/s: {drop:.2e}; F_cal over κ: {', '.join(f'{f:.6f}' for f in fids)}")


def test_criterion_6_parameter_arithmetic(report):
    r = analysis.physical_report(PhysParams.from_ratio(25e3, 10.0), 0.0275)
    t_rel = abs(r["t_total_s"] - 1.5e-4) / 1.5e-4
    v_rel = abs(r["velocity_m_s"] - 192.0) / 192.0
    ok = t_rel < 0.01 and v_rel < 0.06
    report(6, ok, f"t_total = {r['t_total_s']:.4e} s ({t_rel:.1e} off), "
                  f"v = {r['velocity_m_s']:.1f} m/s ({100 * v_rel:.1f}% from 192)")


def test_criterion_7_numerical_invariants(report, rng):
    t_start = time.perf_counter()
    checks = {}

    # unitarity, norm and trace
    p = PhysParams(g=1.0, delta_eg=10.0, fock_dim=3)
    s = p.space
    psi = random_state(rng, s.dim)
    out = evolve_exact(h_static_frame(s, p), 3.0, psi)
    rho = evolve_exact(h_static_frame(s, p), 3.0, random_density(rng, s.dim))
    checks["norm/trace"] = max(abs(np.linalg.norm(out) - 1), abs(np.trace(rho) - 1)) < 1e-12
    lind = run_protocol(ProtocolConfig(backend="full_lindblad", params=default_params().with_(kappa=1e3)))
    checks["lindblad trace"] = abs(np.trace(lind.final_atom_state) - 1) < 1e-10

    # vacuum projection of the field-dressed effective Hamiltonian
    vac = np.zeros((s.fock_dim, s.fock_dim))
    vac[0, 0] = 1
    proj = kron(np.eye(9), vac)
    err = np.max(np.abs(proj @ h_eff_field(s, p) @ proj - kron(h_eff_vac(p.lam), vac)))
    checks["vacuum projection"] = err < 1e-14

    # closed form against exact exponentiation
    worst = 0.0
    for _ in range(200):
        lam, t = rng.uniform(0.05, 5.0), rng.uniform(0.0, 20.0)
        phi = random_state(rng, 9)
        worst = max(worst, np.max(np.abs(evolve_eff_analytic(phi, lam, t) - evolve_exact(h_eff_vac(lam), t, phi))))
    checks["analytic vs exact"] = worst < 1e-12

    # interaction picture against the static frame
    p5 = PhysParams(g=1.0, delta_eg=5.0, fock_dim=3)
    psi5 = random_state(rng, p5.space.dim)
    t1 = 0.3 / p5.lam
    a = evolve_timedep(interaction_picture_fn(p5.space, p5), 0.0, t1, psi5, StepControl(steps_per_pi=4000),
                       rate=p5.lam)
    d = frame_diagonal(p5.space, p5)
    b = np.exp(1j * d * t1) * evolve_exact(h_static_frame(p5.space, p5), t1, psi5)
    frame_err = np.max(np.abs(a - b))
    checks["frame equivalence"] = frame_err < 1e-8

    # Fock truncation
    rows = analysis.fock_convergence([2, 4], ProtocolConfig())
    fock_err = abs(rows[0].fidelity_sim - rows[1].fidelity_sim)
    checks["fock convergence"] = fock_err < 1e-6

    # excitation number conservation
    n_exc = excitation_operator(s)
    hs = h_static_frame(s, p)
    checks["[H_s, N_exc] = 0"] = not np.any(hs @ n_exc - n_exc @ hs)

    failed = [k for k, v in checks.items() if not v]
    detail = (f"{len(checks) - len(failed)}/{len(checks)} invariants hold "
              f"(analytic {worst:.1e}, frame {frame_err:.1e}, Fock {fock_err:.1e}; "
              f"{time.perf_counter() - t_start:.1f} s)")
    if failed:
        detail += f"; failed: {', '.join(failed)}"
    report(7, not failed, detail)
