"""Dense complex linear-algebra kernels.

Operators and states are plain ``numpy`` arrays of dtype ``complex128``.
Everything here is a pure function of its inputs.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import DimensionMismatch, NonHermitianInput

HERMITIAN_TOL = 1e-12


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, ``(a⊗b)[i*rb + k, j*cb + l] = a[i, j] * b[k, l]``."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*ops: np.ndarray) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = kron(out, op)
    return out


def hermiticity_error(h: np.ndarray) -> float:
    """Max-norm distance of ``h`` from its adjoint, relative to its scale."""
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {h.shape}")
    if h.size == 0:
        return 0.0
    scale = max(1.0, float(np.max(np.abs(h))))
    return float(np.max(np.abs(h - h.conj().T))) / scale


def is_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_error(h) < tol


def _require_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    err = hermiticity_error(h)
    if err >= HERMITIAN_TOL:
        raise NonHermitianInput(f"matrix deviates from Hermitian by {err:.3e} (relative max-norm)")
    return h


def eigh(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns
    -------
    w : ndarray
        Real eigenvalues in ascending order.
    v : ndarray
        Unitary matrix whose columns are the eigenvectors, ``h @ v == v * w``.
        No phase convention is imposed, and any orthonormal basis of a
        degenerate eigenspace may be returned.

    Raises
    ------
    NonHermitianInput
        If ``h`` is not Hermitian within ``1e-12`` (relative max-norm).
    """
    h = _require_hermitian(h)
    # symmetrize so that rounding in the lower triangle cannot leak in
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return w, v


def matexp_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """Return ``exp(-i h t)`` via spectral decomposition."""
    w, v = eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def _factor_dims(space) -> tuple[int, ...]:
    dims = getattr(space, "dims", space)
    return tuple(int(d) for d in dims)


def partial_trace(rho: np.ndarray, space, keep: Sequence[int]) -> np.ndarray:
    """Trace out every tensor factor not listed in ``keep``.

    Parameters
    ----------
    rho : ndarray
        Density matrix on the product space, or a pure state vector (which
        is promoted to its projector).
    space : SpaceSpec or sequence of int
        Factor dimensions, in tensor order.
    keep : sequence of int
        Factor indices to keep. They are returned in ascending order.
    """
    dims = _factor_dims(space)
    rho = np.asarray(rho, dtype=complex)
    total = int(np.prod(dims))
    if rho.ndim == 1:
        if rho.shape[0] != total:
            raise DimensionMismatch(f"state of length {rho.shape[0]} does not match dims {dims}")
        rho = np.outer(rho, rho.conj())
    if rho.shape != (total, total):
        raise DimensionMismatch(f"matrix of shape {rho.shape} does not match dims {dims}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionMismatch(f"keep={keep} out of range for {len(dims)} factors")

    n = len(dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    for k in range(n):
        if k not in keep:
            col[k] = row[k]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, rho.reshape(dims + dims))
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return reduced.reshape(d_keep, d_keep)


def coupling_blocks(*patterns: np.ndarray) -> list[np.ndarray]:
    """Connected components of the graph whose edges are nonzero entries.

    Every pattern is a square matrix on the same index set; an entry that is
    exactly nonzero in any of them links its row and column. A matrix whose
    combined pattern splits into several components is block diagonal after
    a permutation, and each returned index array is one such block.
    """
    mask = np.zeros(np.shape(patterns[0]), dtype=bool)
    for p in patterns:
        mask |= np.asarray(p) != 0
    mask |= mask.T
    n_comp, labels = connected_components(mask, directed=False)
    return [np.flatnonzero(labels == c) for c in range(n_comp)]


def ordered_product(mats: np.ndarray) -> np.ndarray:
    """Return ``mats[-1] @ ... @ mats[1] @ mats[0]`` along the leading axis.

    Works on stacks of shape ``(m, ..., k, k)`` by pairwise reduction, so the
    number of Python-level matmul calls grows only like ``log2(m)``.
    """
    mats = np.asarray(mats)
    while mats.shape[0] > 1:
        if mats.shape[0] % 2:
            eye = np.broadcast_to(np.eye(mats.shape[-1], dtype=mats.dtype), mats.shape[1:])
            mats = np.concatenate([mats, eye[None]], axis=0)
        mats = mats[1::2] @ mats[0::2]
    return mats[0]
