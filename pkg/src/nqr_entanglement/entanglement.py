"""Two-qubit entanglement measures for a four-level system.

A spin-3/2 state is read as a two-qubit state through a :class:`QubitMapping`
that assigns each ``|m>`` level to one of ``|00>, |01>, |10>, |11>``. The row
index of a mapped matrix is ``2*a + b`` with ``a`` the A-qubit bit.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import entr

from .errors import BadDimension, InvalidDensityMatrix, NonphysicalSpectrum, OutOfRange
from .spin_algebra import HERMITIAN_TOL, Subsystem, dagger, hermiticity_error, partial_trace

#: Eigenvalues of rho*rho_tilde below ``-SPECTRUM_TOL`` (or with larger
#: imaginary parts) mean the input was not a density matrix.
SPECTRUM_TOL = 1e-8

#: Concurrence values below this are roundoff and reported as exactly zero.
CLAMP_TOL = 1e-10

#: ``sigma_y (x) sigma_y``: anti-diagonal (-1, 1, 1, -1) read top-right to bottom-left.
SPIN_FLIP = np.array([
    [0, 0, 0, -1],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [-1, 0, 0, 0],
], dtype=complex)
SPIN_FLIP.setflags(write=False)

_LN2 = np.log(2.0)


@dataclass(frozen=True)
class QubitMapping:
    """``permutation[k]`` is the two-qubit basis index assigned to spin level ``k``."""

    permutation: tuple = (0, 1, 2, 3)

    def __post_init__(self):
        perm = tuple(int(i) for i in self.permutation)
        if sorted(perm) != [0, 1, 2, 3]:
            raise ValueError(f"not a permutation of 0..3: {self.permutation!r}")
        object.__setattr__(self, "permutation", perm)

    @property
    def is_identity(self) -> bool:
        return self.permutation == (0, 1, 2, 3)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Re-express ``rho`` (spin basis) in the two-qubit basis."""
        if self.is_identity:
            return rho
        inv = np.argsort(self.permutation)
        return rho[..., inv, :][..., :, inv]

    def swapped(self) -> "QubitMapping":
        """The same mapping with the roles of qubits A and B exchanged."""
        swap = (0, 2, 1, 3)
        return QubitMapping(tuple(swap[p] for p in self.permutation))


IDENTITY_MAPPING = QubitMapping()


@dataclass(frozen=True)
class EntanglementReport:
    concurrence: float
    eof: float
    entropy_a: float
    entropy_b: float
    nu: tuple
    mapping: QubitMapping = field(default=IDENTITY_MAPPING)

    def to_dict(self) -> dict:
        return {
            "concurrence": self.concurrence,
            "eof": self.eof,
            "entropy_a": self.entropy_a,
            "entropy_b": self.entropy_b,
            "nu": list(self.nu),
        }


def _require_4x4(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim < 2 or rho.shape[-2:] != (4, 4):
        raise BadDimension(f"expected 4x4 matrices, got shape {rho.shape}")
    return rho


def validate_density_matrix(rho, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return ``rho`` as complex."""
    rho = _require_4x4(rho)
    if hermiticity_error(rho) > tol:
        raise InvalidDensityMatrix("density matrix is not Hermitian")
    if np.any(np.abs(np.trace(rho, axis1=-2, axis2=-1) - 1) > tol):
        raise InvalidDensityMatrix("density matrix does not have unit trace")
    if np.any(np.linalg.eigvalsh(rho)[..., 0] < -tol):
        raise InvalidDensityMatrix("density matrix has negative eigenvalues")
    return rho


def spin_flip(rho) -> np.ndarray:
    """``G rho* G`` with ``G = sigma_y (x) sigma_y``."""
    rho = _require_4x4(rho)
    return SPIN_FLIP @ np.conj(rho) @ SPIN_FLIP


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    return (v * np.sqrt(np.clip(w, 0.0, None))[..., None, :]) @ dagger(v)


def _check_flip_spectrum(rho: np.ndarray) -> None:
    lam = np.linalg.eigvals(rho @ spin_flip(rho))
    if np.any(lam.real < -SPECTRUM_TOL) or np.any(np.abs(lam.imag) > SPECTRUM_TOL):
        raise NonphysicalSpectrum(
            f"rho*rho_tilde has eigenvalues outside the physical range: {lam}")


def _concurrence_mapped(rho: np.ndarray):
    _check_flip_spectrum(rho)
    # nu_i = sqrt(eig(rho rho~)) = singular values of sqrt(rho) sqrt(rho~).
    # The SVD form stays accurate when rho is numerically rank deficient.
    s = _psd_sqrt(rho)
    nu = np.linalg.svd(s @ spin_flip(s), compute_uv=False)
    c = nu[..., 0] - nu[..., 1] - nu[..., 2] - nu[..., 3]
    c = np.where(c < CLAMP_TOL, 0.0, c)
    return np.clip(c, 0.0, 1.0), nu


def concurrence(rho, mapping: QubitMapping = IDENTITY_MAPPING):
    """Wootters concurrence of a 4x4 density matrix.

    Parameters
    ----------
    rho : array_like, shape (..., 4, 4)
        Density matrix in the spin basis (descending ``m``).
    mapping : QubitMapping
        How the spin levels are read as two qubits.

    Returns
    -------
    c : float or ndarray
        ``max(0, nu_1 - nu_2 - nu_3 - nu_4)``.
    nu : ndarray, shape (..., 4)
        Square roots of the eigenvalues of ``rho * rho_tilde``, descending.
    """
    rho = mapping.apply(validate_density_matrix(rho))
    c, nu = _concurrence_mapped(rho)
    return (float(c), nu) if np.ndim(c) == 0 else (c, nu)


def entanglement_of_formation(c):
    """Entanglement of formation (bits) from the concurrence.

    ``E = h((1 + sqrt(1 - c^2)) / 2)`` with ``h`` the binary entropy.

    >>> round(entanglement_of_formation(0.96), 4)
    0.9427
    """
    arr = np.asarray(c, dtype=float)
    if np.any(~((arr >= 0.0) & (arr <= 1.0))):
        raise OutOfRange(f"concurrence must lie in [0, 1], got {c!r}")
    root = np.sqrt(1.0 - arr * arr)
    # 1 - x written without cancellation for small c
    small = arr * arr / (2.0 * (1.0 + root))
    e = (entr(small) + entr(1.0 - small)) / _LN2
    e = np.clip(e, 0.0, 1.0)
    return float(e) if e.ndim == 0 else e


def _von_neumann_bits(rho2: np.ndarray) -> np.ndarray:
    w = np.clip(np.linalg.eigvalsh(rho2), 0.0, 1.0)
    return np.clip(entr(w).sum(axis=-1) / _LN2, 0.0, None)


def subsystem_entropy(rho, keep: Subsystem = "A", mapping: QubitMapping = IDENTITY_MAPPING):
    """Von Neumann entropy (bits) of one qubit after tracing out the other."""
    rho = mapping.apply(validate_density_matrix(rho))
    s = _von_neumann_bits(partial_trace(rho, keep))
    return float(s) if s.ndim == 0 else s


def measure_all(rho, mapping: QubitMapping = IDENTITY_MAPPING) -> EntanglementReport:
    """Concurrence, entanglement of formation and both subsystem entropies."""
    rho = validate_density_matrix(rho)
    if rho.ndim != 2:
        raise BadDimension("measure_all takes a single 4x4 matrix")
    mapped = mapping.apply(rho)
    c, nu = _concurrence_mapped(mapped)
    c = float(c)
    return EntanglementReport(
        concurrence=c,
        eof=entanglement_of_formation(c),
        entropy_a=float(_von_neumann_bits(partial_trace(mapped, "A"))),
        entropy_b=float(_von_neumann_bits(partial_trace(mapped, "B"))),
        nu=tuple(float(x) for x in nu),
        mapping=mapping,
    )
