"""Angular-momentum matrices and the small dense linear algebra built on them.

All operators live in the ``|I, m>`` basis ordered by *descending* ``m``, so
for ``I = 3/2`` the basis is ``|3/2>, |1/2>, |-1/2>, |-3/2>`` indexed 0..3.

Functions that act on matrices accept either a single ``(d, d)`` array or a
stack ``(..., d, d)``; the leading axes are treated as a batch.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

import numpy as np

from .errors import BadDimension, NotHermitian

#: Absolute, elementwise tolerance used for every Hermiticity check.
HERMITIAN_TOL = 1e-10

#: Largest matrix dimension the dense routines are meant for.
MAX_DIM = 16

Subsystem = Literal["A", "B"]


@dataclass(frozen=True)
class SpinSystem:
    """A single spin ``I = two_i / 2`` with Hilbert-space dimension ``2I + 1``."""

    two_i: int

    def __post_init__(self):
        if int(self.two_i) != self.two_i or self.two_i < 1:
            raise ValueError(f"two_i must be a positive integer, got {self.two_i!r}")

    @classmethod
    def from_spin(cls, spin) -> "SpinSystem":
        twice = Fraction(spin) * 2
        if twice.denominator != 1:
            raise ValueError(f"spin must be a multiple of 1/2, got {spin!r}")
        return cls(int(twice))

    @property
    def spin(self) -> float:
        return self.two_i / 2

    @property
    def dim(self) -> int:
        return self.two_i + 1

    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers in basis order (descending)."""
        return self.spin - np.arange(self.dim)


SPIN_HALF = SpinSystem(1)
SPIN_3_2 = SpinSystem(3)


@dataclass(frozen=True)
class SpinOperators:
    ix: np.ndarray
    iy: np.ndarray
    iz: np.ndarray
    i_plus: np.ndarray
    i_minus: np.ndarray
    i_squared: np.ndarray


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@lru_cache(maxsize=None)
def spin_operators(spin: SpinSystem) -> SpinOperators:
    """Return the spin matrices (in units of hbar) for ``spin``.

    The raising operator has ``<m+1|I+|m> = sqrt(I(I+1) - m(m+1))``.
    Returned arrays are read-only because they are cached.
    """
    j = spin.spin
    m = spin.m_values()
    d = spin.dim
    i_plus = np.zeros((d, d), dtype=complex)
    # column k holds |m_k>; I+ moves it to row k-1 (one step up in m)
    for k in range(1, d):
        i_plus[k - 1, k] = np.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    i_minus = i_plus.conj().T.copy()
    ix = (i_plus + i_minus) / 2
    iy = (i_plus - i_minus) / 2j
    iz = np.diag(m).astype(complex)
    i_squared = ix @ ix + iy @ iy + iz @ iz
    return SpinOperators(*(_frozen(a) for a in (ix, iy, iz, i_plus, i_minus, i_squared)))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.swapaxes(np.conj(m), -1, -2)


def _check_square(m: np.ndarray) -> None:
    if m.ndim < 2 or m.shape[-1] != m.shape[-2] or m.shape[-1] < 1:
        raise BadDimension(f"expected square matrices, got shape {m.shape}")


def hermiticity_error(m) -> float:
    """Largest elementwise deviation ``|m - m^dagger|`` over the whole batch."""
    m = np.asarray(m)
    _check_square(m)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - dagger(m))))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_error(m) <= tol


def is_unitary(m, tol: float = 1e-11) -> bool:
    m = np.asarray(m)
    _check_square(m)
    eye = np.eye(m.shape[-1])
    return bool(np.max(np.abs(dagger(m) @ m - eye)) <= tol)


def _require_hermitian(m: np.ndarray) -> None:
    _check_square(m)
    if m.shape[-1] > MAX_DIM:
        raise BadDimension(f"dimension {m.shape[-1]} exceeds {MAX_DIM}")
    err = hermiticity_error(m)
    if not err <= HERMITIAN_TOL:
        raise NotHermitian(f"matrix deviates from its adjoint by {err:.3g}")


def hermitian_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix (or stack of them).

    Returns
    -------
    eigenvalues : ndarray, shape (..., d)
        Real, ascending.
    eigenvectors : ndarray, shape (..., d, d)
        Orthonormal eigenvectors stored as columns, so ``m = V diag(w) V^dagger``.

    Raises
    ------
    NotHermitian
        If ``m`` deviates from its adjoint by more than ``HERMITIAN_TOL``.
    """
    m = np.asarray(m, dtype=complex)
    _require_hermitian(m)
    return np.linalg.eigh(m)


def matrix_exp_hermitian(m, scale=1.0) -> np.ndarray:
    """``exp(scale * m)`` for Hermitian ``m`` via its eigen-decomposition.

    ``scale`` may be complex; a purely imaginary scale gives a unitary
    (e.g. ``scale=-1j * theta`` for a rotation generated by ``m``). An array
    of scales broadcasts against the batch axes of ``m``.
    """
    w, v = hermitian_eig(m)
    factors = np.exp(np.asarray(scale)[..., None] * w)
    return (v * factors[..., None, :]) @ dagger(v)


def partial_trace(rho, keep: Subsystem = "A") -> np.ndarray:
    """Reduce a two-qubit state to one qubit.

    The row index of ``rho`` is ``r = 2*a + b`` with ``a`` the A-qubit bit, so
    ``keep="A"`` traces out ``b`` and ``keep="B"`` traces out ``a``.
    """
    rho = np.asarray(rho)
    if rho.ndim < 2 or rho.shape[-2:] != (4, 4):
        raise BadDimension(f"partial_trace needs 4x4 matrices, got shape {rho.shape}")
    tr = np.trace(rho, axis1=-2, axis2=-1)
    if np.any(np.abs(tr - 1) > HERMITIAN_TOL):
        raise BadDimension("partial_trace input must have unit trace")
    r = rho.reshape(rho.shape[:-2] + (2, 2, 2, 2))
    if keep == "A":
        return np.einsum("...abcb->...ac", r)
    if keep == "B":
        return np.einsum("...abad->...bd", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
