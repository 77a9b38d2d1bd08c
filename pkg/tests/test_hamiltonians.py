import math

import numpy as np
import pytest

from cavity_qutrits.hamiltonians import (
    PhysParams,
    collapse_ops,
    frame_diagonal,
    h_eff_field,
    h_eff_vac,
    h_interaction_picture,
    h_stark_single,
    h_static_frame,
)
from cavity_qutrits.hilbert import SpaceSpec, atom_ket_bra, basis_state, excitation_operator, pair_state
from cavity_qutrits.linalg import is_hermitian, kron


def unit_params(**kw):
    kw.setdefault("fock_dim", 3)
    return PhysParams(g=1.0, delta_eg=10.0, **kw)


def test_reference_parameters(params):
    assert params.g == pytest.approx(2 * math.pi * 25e3)
    assert params.delta_ratio == pytest.approx(10.0)
    assert params.lam == pytest.approx(params.g / 10)
    assert params.is_dispersive
    assert not params.with_(delta_eg=3 * params.g).is_dispersive


@pytest.mark.parametrize("bad", [dict(g=0.0), dict(delta_eg=-1.0), dict(kappa=-1.0), dict(fock_dim=1),
                                 dict(delta_gf_sign=0)])
def test_invalid_parameters(bad):
    kw = dict(g=1.0, delta_eg=10.0)
    kw.update(bad)
    with pytest.raises(ValueError):
        PhysParams(**kw)


@pytest.mark.parametrize("t", [0.0, 0.37, 2.9, 41.0])
def test_interaction_picture_hermitian_with_constant_norm(t):
    p = unit_params(g_f=0.4, delta_det=3.0)
    s = p.space
    h = h_interaction_picture(s, p, t)
    assert is_hermitian(h)
    h0 = h_interaction_picture(s, p, 0.0)
    # only phases rotate, so every spectral quantity is t-independent
    assert np.linalg.norm(h, 2) == pytest.approx(np.linalg.norm(h0, 2), rel=1e-12)
    assert np.allclose(np.linalg.eigvalsh(h), np.linalg.eigvalsh(h0), atol=1e-12)


def test_f_level_is_spectator_without_leakage():
    p = unit_params()
    s = p.space
    for t in (0.0, 1.3):
        h = h_interaction_picture(s, p, t)
        for lab in [("f", "f", 0), ("f", "f", 1), ("f", "g", 2), ("g", "f", 0)]:
            if lab[0] == "f" and lab[1] == "f":
                assert not np.any(h @ basis_state(s, lab))
        # atom 1 in f: H never changes atom 1
        f1 = kron(kron(atom_ket_bra("f", "f"), np.eye(3)), np.eye(s.fock_dim))
        assert np.allclose(h @ f1, f1 @ h @ f1)


def test_coupling_matrix_elements():
    p = unit_params()
    s = p.space
    t = 0.7
    h = h_interaction_picture(s, p, t)
    up = basis_state(s, ("e", "g", 0))
    down = basis_state(s, ("g", "g", 1))
    assert np.vdot(down, h @ up) == pytest.approx(p.g * np.exp(-1j * p.delta_eg * t), abs=1e-14)
    # √n enhancement from the ladder
    up2 = basis_state(s, ("e", "g", 1))
    down2 = basis_state(s, ("g", "g", 2))
    assert np.vdot(down2, h @ up2) == pytest.approx(math.sqrt(2) * p.g * np.exp(-1j * p.delta_eg * t), abs=1e-14)


def test_static_frame_conserves_excitations_exactly():
    for fock_dim in (2, 3, 5):
        p = unit_params(fock_dim=fock_dim)
        s = p.space
        h = h_static_frame(s, p)
        n_exc = excitation_operator(s)
        assert not np.any(h @ n_exc - n_exc @ h)


def test_frame_diagonal_with_leakage():
    p = unit_params(g_f=0.3, delta_det=4.0, delta_gf_sign=-1)
    s = p.space
    d = frame_diagonal(s, p)
    lab = s.index(("f", "g", 2))
    assert d[lab] == pytest.approx(-2 * p.delta_eg + (p.delta_eg - p.delta_gf))
    assert p.delta_gf == pytest.approx(6.0)


def test_eff_vac_spectrum():
    lam = 0.8
    w = np.linalg.eigvalsh(h_eff_vac(lam))
    assert np.allclose(w, [0] * 5 + [lam] * 2 + [2 * lam] * 2, atol=1e-14)


def test_eff_vac_exchange_block():
    lam = 1.3
    h = h_eff_vac(lam)
    ge, eg = pair_state("ge"), pair_state("eg")
    assert np.vdot(eg, h @ ge) == lam
    assert np.vdot(ge, h @ ge) == lam
    assert np.vdot(pair_state("ee"), h @ pair_state("ee")) == 2 * lam
    for lab in ("ff", "fg", "gf", "gg"):
        assert not np.any(h @ pair_state(lab))
    with pytest.raises(ValueError):
        h_eff_vac(0.0)


def test_eff_field_vacuum_projection_is_eff_vac():
    p = unit_params(fock_dim=4)
    s = p.space
    vac = np.zeros((s.fock_dim, s.fock_dim))
    vac[0, 0] = 1
    proj = kron(np.eye(9), vac)
    h = h_eff_field(s, p)
    assert is_hermitian(h)
    assert np.allclose(proj @ h @ proj, kron(h_eff_vac(p.lam), vac), atol=1e-15)


def test_stark_single():
    h = h_stark_single(0.5, atom=2)
    assert np.vdot(pair_state("ge"), h @ pair_state("ge")) == 0.5
    assert np.vdot(pair_state("eg"), h @ pair_state("eg")) == 0
    s = SpaceSpec(3)
    assert h_stark_single(0.5, 1, s).shape == (s.dim, s.dim)


def test_collapse_ops():
    assert collapse_ops(SpaceSpec(3), unit_params()) == []
    (op,) = collapse_ops(SpaceSpec(3), unit_params(kappa=4.0))
    psi = basis_state(SpaceSpec(3), ("g", "g", 1))
    assert np.allclose(op @ psi, 2 * basis_state(SpaceSpec(3), ("g", "g", 0)))
