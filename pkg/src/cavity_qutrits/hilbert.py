"""Composite Hilbert space of two three-level atoms and one cavity mode.

Tensor order is ``atom1 ⊗ atom2 ⊗ field``. Atomic levels are ordered by
energy, ``f=0 < g=1 < e=2``; the field is truncated at ``n_max`` photons.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, PhotonOutOfRange
from .linalg import kron_all

LEVELS = ("f", "g", "e")
LEVEL_INDEX = {name: i for i, name in enumerate(LEVELS)}
ATOM_DIM = 3

#: Labels of the nine two-atom basis states in index order.
PAIR_LABELS = tuple(a + b for a in LEVELS for b in LEVELS)


class BasisLabel(NamedTuple):
    a1: str
    a2: str
    n: int = 0

    def __str__(self) -> str:
        return f"|{self.a1},{self.a2},{self.n}>"


@dataclass(frozen=True)
class SpaceSpec:
    """Factor structure ``[3, 3, fock_dim]``; ``fock_dim = n_max + 1``."""

    fock_dim: int = 5

    def __post_init__(self):
        if int(self.fock_dim) < 2:
            raise ValueError(f"fock_dim must be >= 2 (n_max >= 1), got {self.fock_dim}")

    @classmethod
    def from_n_max(cls, n_max: int) -> "SpaceSpec":
        return cls(fock_dim=n_max + 1)

    @property
    def n_max(self) -> int:
        return self.fock_dim - 1

    @property
    def atom_dims(self) -> tuple[int, int]:
        return (ATOM_DIM, ATOM_DIM)

    @property
    def dims(self) -> tuple[int, int, int]:
        return (ATOM_DIM, ATOM_DIM, self.fock_dim)

    @property
    def dim(self) -> int:
        return ATOM_DIM * ATOM_DIM * self.fock_dim

    def index(self, label) -> int:
        a1, a2, n = _normalize_label(label)
        if not 0 <= n <= self.n_max:
            raise PhotonOutOfRange(f"photon number {n} outside 0..{self.n_max}")
        return LEVEL_INDEX[a1] * ATOM_DIM * self.fock_dim + LEVEL_INDEX[a2] * self.fock_dim + n

    def label(self, index: int) -> BasisLabel:
        if not 0 <= index < self.dim:
            raise DimensionMismatch(f"index {index} outside 0..{self.dim - 1}")
        i1, rest = divmod(index, ATOM_DIM * self.fock_dim)
        i2, n = divmod(rest, self.fock_dim)
        return BasisLabel(LEVELS[i1], LEVELS[i2], n)

    def labels(self) -> list[BasisLabel]:
        return [self.label(i) for i in range(self.dim)]


def _normalize_label(label) -> tuple[str, str, int]:
    if isinstance(label, str):
        label = tuple(label)
    if len(label) == 2:
        a1, a2 = label
        n = 0
    else:
        a1, a2, n = label
    if a1 not in LEVEL_INDEX or a2 not in LEVEL_INDEX:
        raise ValueError(f"atomic levels must be one of {LEVELS}, got {label!r}")
    return a1, a2, int(n)


def basis_state(space: SpaceSpec, label) -> np.ndarray:
    """Unit vector for ``(a1, a2, n)``, e.g. ``basis_state(s, ("e", "e", 0))``."""
    psi = np.zeros(space.dim, dtype=complex)
    psi[space.index(label)] = 1.0
    return psi


def pair_state(label: str) -> np.ndarray:
    """Unit vector on the 9-dim two-atom space, e.g. ``pair_state("fe")``."""
    a1, a2, _ = _normalize_label(label)
    psi = np.zeros(ATOM_DIM * ATOM_DIM, dtype=complex)
    psi[LEVEL_INDEX[a1] * ATOM_DIM + LEVEL_INDEX[a2]] = 1.0
    return psi


def atom_ket_bra(upper: str, lower: str) -> np.ndarray:
    """Single-atom ``|upper><lower|`` as a 3x3 matrix."""
    op = np.zeros((ATOM_DIM, ATOM_DIM), dtype=complex)
    op[LEVEL_INDEX[upper], LEVEL_INDEX[lower]] = 1.0
    return op


def embed_atom(op3: np.ndarray, atom: int, space: SpaceSpec | None = None) -> np.ndarray:
    """Lift a 3x3 operator on atom 1 or 2 to the full space.

    With ``space=None`` the result lives on the 9-dim two-atom space.
    """
    eye3 = np.eye(ATOM_DIM, dtype=complex)
    if atom == 1:
        factors = [op3, eye3]
    elif atom == 2:
        factors = [eye3, op3]
    else:
        raise ValueError(f"atom must be 1 or 2, got {atom}")
    if space is not None:
        factors.append(np.eye(space.fock_dim, dtype=complex))
    return kron_all(*factors)


def sigma(space: SpaceSpec | None, atom: int, kind: str) -> np.ndarray:
    """Atomic ladder operator ``σ_{j-} = |g_j><e_j|`` or ``σ_{j+} = |e_j><g_j|``."""
    if kind == "minus":
        op = atom_ket_bra("g", "e")
    elif kind == "plus":
        op = atom_ket_bra("e", "g")
    else:
        raise ValueError(f"kind must be 'minus' or 'plus', got {kind!r}")
    return embed_atom(op, atom, space)


def annihilation(fock_dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, fock_dim)), k=1).astype(complex)


def field_op(space: SpaceSpec, kind: str) -> np.ndarray:
    """Truncated cavity operator: ``annihilate``, ``create`` or ``number``.

    The cutoff is hard: ``a†`` sends the top Fock state to zero, and the
    number operator equals ``a†a`` on the truncated space.
    """
    a = annihilation(space.fock_dim)
    if kind == "annihilate":
        op = a
    elif kind == "create":
        op = a.conj().T
    elif kind == "number":
        # exact integers rather than sqrt(n)*sqrt(n)
        op = np.diag(np.arange(space.fock_dim)).astype(complex)
    else:
        raise ValueError(f"kind must be 'annihilate', 'create' or 'number', got {kind!r}")
    eye3 = np.eye(ATOM_DIM, dtype=complex)
    return kron_all(eye3, eye3, op)


def excitation_operator(space: SpaceSpec) -> np.ndarray:
    """``N_exc = a†a + σ1+σ1- + σ2+σ2-``."""
    n_exc = field_op(space, "number")
    for j in (1, 2):
        n_exc = n_exc + sigma(space, j, "plus") @ sigma(space, j, "minus")
    return n_exc
