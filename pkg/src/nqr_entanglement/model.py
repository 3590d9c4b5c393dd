"""Zeeman + quadrupole Hamiltonian of a single nucleus and its Gibbs state.

Energies are dimensionless: the Zeeman operator is returned in units of
``gamma*H0`` and the quadrupole operator in units of ``eQq_ZZ / (4I(2I-1))``.
Both prefactors, divided by ``k_B T``, are the ``alpha`` and ``beta`` of
:class:`ModelParams`.
"""
from __future__ import annotations

import enum
import json
import math
import os
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy import constants

from .errors import (
    EtaOutOfRange,
    ExponentOverflow,
    NonpositiveTemperature,
    OrientationOutOfRange,
    PresetNotFound,
)
from .spin_algebra import SPIN_3_2, SpinSystem, dagger, matrix_exp_hermitian, spin_operators

#: Largest allowed size of the Gibbs exponent (double precision exp range).
EXPONENT_LIMIT = 700.0


class ZeemanSign(str, enum.Enum):
    """Sign of the Zeeman term inside the Gibbs exponent.

    ``PAPER`` uses ``exp(-alpha*Iz - beta*HQ)``; ``PHYSICAL`` uses
    ``exp(+alpha*Iz - beta*HQ)``, which is what ``H_M = -gamma*H0*Iz``
    gives when substituted into ``exp(-H/kT)``.
    """

    PAPER = "paper"
    PHYSICAL = "physical"

    @property
    def factor(self) -> float:
        return -1.0 if self is ZeemanSign.PAPER else 1.0


class UnitConvention(str, enum.Enum):
    """Energy scale used for ``beta`` when converting from physical units.

    ``REDUCED``: ``beta = h * eQq / (4I(2I-1) k_B T)``.
    ``FULL``: ``beta = h * eQq / (k_B T)``.
    """

    REDUCED = "reduced"
    FULL = "full"


@dataclass(frozen=True)
class Orientation:
    """Polar and azimuthal angle (radians) of the field axis in the EFG frame."""

    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise OrientationOutOfRange(f"theta={self.theta!r} outside [0, pi]")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise OrientationOutOfRange(f"phi={self.phi!r} outside [0, 2*pi)")


def _check_eta(eta) -> None:
    if not np.all((np.asarray(eta) >= 0.0) & (np.asarray(eta) <= 1.0)):
        raise EtaOutOfRange(f"eta={eta!r} outside [0, 1]")


@dataclass(frozen=True)
class ModelParams:
    alpha: float
    beta: float
    eta: float = 0.0
    orientation: Orientation = field(default_factory=Orientation)
    zeeman_sign: ZeemanSign = ZeemanSign.PAPER

    def __post_init__(self):
        _check_eta(self.eta)
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError("alpha and beta must be finite")
        object.__setattr__(self, "zeeman_sign", ZeemanSign(self.zeeman_sign))

    @property
    def theta(self) -> float:
        return self.orientation.theta

    @property
    def phi(self) -> float:
        return self.orientation.phi


def _rotation(spin: SpinSystem, theta, phi) -> np.ndarray:
    ops = spin_operators(spin)
    m = spin.m_values()
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    ry = matrix_exp_hermitian(ops.iy, -1j * theta)
    # exp(-i phi Iz) is diagonal, so the outer factors are row/column phases
    left = np.exp(-1j * phi[..., None] * m)
    return left[..., :, None] * ry * np.conj(left)[..., None, :]


def rotation_operator(spin: SpinSystem, o: Orientation) -> np.ndarray:
    """``U = exp(-i phi Iz) exp(-i theta Iy) exp(i phi Iz)``."""
    return _rotation(spin, o.theta, o.phi)


def _quadrupole_shape(spin: SpinSystem, eta) -> np.ndarray:
    ops = spin_operators(spin)
    eta = np.asarray(eta, dtype=float)
    axial = 3 * ops.iz @ ops.iz - ops.i_squared
    rhombic = ops.i_plus @ ops.i_plus + ops.i_minus @ ops.i_minus
    return axial + (eta / 2)[..., None, None] * rhombic


def _quadrupole(spin: SpinSystem, eta, theta, phi) -> np.ndarray:
    u = _rotation(spin, theta, phi)
    return u @ _quadrupole_shape(spin, eta) @ dagger(u)


def quadrupole_hamiltonian(spin: SpinSystem, eta: float, o: Orientation) -> np.ndarray:
    """Quadrupole operator ``U [3Iz^2 - I^2 + eta/2 (I+^2 + I-^2)] U^dagger``.

    The ``eQq_ZZ / 4I(2I-1)`` prefactor is not included. The rhombic term
    uses ``I+^2 + I-^2`` so the result is Hermitian.
    """
    _check_eta(eta)
    return _quadrupole(spin, eta, o.theta, o.phi)


def zeeman_hamiltonian(spin: SpinSystem) -> np.ndarray:
    """``-Iz``: the Zeeman energy in units of ``gamma*H0``."""
    return -np.array(spin_operators(spin).iz)


def gibbs_exponent(spin: SpinSystem, alpha, beta, eta, theta, phi,
                   zeeman_sign=ZeemanSign.PAPER) -> np.ndarray:
    """The matrix ``X`` with ``rho = exp(X) / Tr exp(X)``; broadcasts over arrays."""
    _check_eta(eta)
    ops = spin_operators(spin)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    hq = _quadrupole(spin, eta, theta, phi)
    s = ZeemanSign(zeeman_sign).factor
    return (s * alpha)[..., None, None] * ops.iz - beta[..., None, None] * hq


def _gibbs(x: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(x)
    # shift by the top eigenvalue so the largest weight is exactly 1
    p = np.exp(w - w[..., -1:])
    rho = (v * p[..., None, :]) @ dagger(v)
    rho = rho / p.sum(axis=-1)[..., None, None]
    return (rho + dagger(rho)) / 2


def _guard_exponent(spin: SpinSystem, alpha, beta, eta) -> None:
    hq_norm = np.max(np.abs(np.linalg.eigvalsh(_quadrupole_shape(spin, eta))), axis=-1)
    size = np.abs(alpha) + np.abs(beta) * hq_norm
    if np.any(size > EXPONENT_LIMIT):
        raise ExponentOverflow(
            f"|alpha| + |beta|*||HQ|| = {np.max(size):.6g} exceeds {EXPONENT_LIMIT}")


def thermal_states(spin: SpinSystem, alpha, beta, eta, theta, phi,
                   zeeman_sign=ZeemanSign.PAPER) -> np.ndarray:
    """Vectorized :func:`thermal_state`; all parameters broadcast together."""
    _guard_exponent(spin, alpha, beta, eta)
    return _gibbs(gibbs_exponent(spin, alpha, beta, eta, theta, phi, zeeman_sign))


def thermal_state(spin: SpinSystem, p: ModelParams) -> np.ndarray:
    """Equilibrium density matrix ``exp(-/+ alpha Iz - beta HQ) / Z``.

    Examples
    --------
    >>> rho = thermal_state(SPIN_3_2, ModelParams(alpha=0.0, beta=0.0))
    >>> np.allclose(rho, np.eye(4) / 4)
    True
    """
    return thermal_states(spin, p.alpha, p.beta, p.eta, p.theta, p.phi, p.zeeman_sign)


# ---------------------------------------------------------------------------
# material data and unit conversion

@dataclass(frozen=True)
class MaterialPreset:
    label: str
    eqq_zz_mhz: float
    eta: float
    quadrupole_moment_cm2: float = float("nan")
    site: str = ""

    def __post_init__(self):
        if not self.eqq_zz_mhz > 0:
            raise ValueError(f"eqq_zz_mhz must be positive, got {self.eqq_zz_mhz!r}")
        _check_eta(self.eta)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "eqq_zz_mhz": self.eqq_zz_mhz,
            "eta": self.eta,
            "quadrupole_moment_cm2": self.quadrupole_moment_cm2,
            "site": self.site,
        }


Q_CU63_CM2 = -0.211e-24
Q_CU65_CM2 = -0.195e-24

# YBa2Cu3O7-d copper sites. The Cu-65 coupling constants are the Cu-63 values
# scaled by the quadrupole-moment ratio (same EFG at the site).
_BUILTIN = (
    MaterialPreset("cu63-4coord", 38.2, 0.92, Q_CU63_CM2, "YBa2Cu3O7 four-coordinated Cu (plane)"),
    MaterialPreset("cu63-5coord", 62.8, 0.14, Q_CU63_CM2, "YBa2Cu3O7 five-coordinated Cu (pyramid)"),
    MaterialPreset("cu65-4coord", 38.2 * Q_CU65_CM2 / Q_CU63_CM2, 0.92, Q_CU65_CM2,
                   "YBa2Cu3O7 four-coordinated Cu (plane)"),
    MaterialPreset("cu65-5coord", 62.8 * Q_CU65_CM2 / Q_CU63_CM2, 0.14, Q_CU65_CM2,
                   "YBa2Cu3O7 five-coordinated Cu (pyramid)"),
)


def builtin_presets() -> list[MaterialPreset]:
    return list(_BUILTIN)


def load_presets(path) -> list[MaterialPreset]:
    """Read a JSON array of preset objects (``label``, ``eqq_zz_mhz``, ``eta``,
    optional ``quadrupole_moment_cm2`` and ``site``)."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise ValueError(f"{path}: expected a JSON array of presets")
    out = []
    for entry in data:
        out.append(MaterialPreset(
            label=str(entry["label"]),
            eqq_zz_mhz=float(entry["eqq_zz_mhz"]),
            eta=float(entry["eta"]),
            quadrupole_moment_cm2=float(entry.get("quadrupole_moment_cm2", float("nan"))),
            site=str(entry.get("site", "")),
        ))
    return out


def all_presets(path=None) -> list[MaterialPreset]:
    """Built-in presets overlaid with a JSON file (``path`` or ``$NQR_PRESETS``)."""
    path = path or os.environ.get("NQR_PRESETS")
    table = {p.label: p for p in builtin_presets()}
    if path:
        table.update((p.label, p) for p in load_presets(path))
    return list(table.values())


def get_preset(label: str, presets: Iterable[MaterialPreset] | None = None) -> MaterialPreset:
    for p in (builtin_presets() if presets is None else presets):
        if p.label == label:
            return p
    raise PresetNotFound(label)


def quadrupole_frequency_hz(material: MaterialPreset, conv: UnitConvention,
                            spin: SpinSystem = SPIN_3_2) -> float:
    """Frequency whose ``h*nu`` is the ``beta`` energy scale under ``conv``."""
    nu = material.eqq_zz_mhz * 1e6
    if UnitConvention(conv) is UnitConvention.REDUCED:
        j = spin.spin
        nu /= 4 * j * (2 * j - 1)
    return nu


def physical_to_dimensionless(material: MaterialPreset, gamma_mhz_per_tesla: float,
                              field_tesla: float, temp_kelvin: float,
                              conv: UnitConvention,
                              orientation: Orientation | None = None,
                              spin: SpinSystem = SPIN_3_2,
                              zeeman_sign: ZeemanSign = ZeemanSign.PAPER) -> ModelParams:
    """Convert laboratory conditions into :class:`ModelParams`.

    ``gamma_mhz_per_tesla`` is ``gamma / 2pi`` in MHz/T (11.285 for Cu-63), so
    ``alpha = h * gamma * H0 / (k_B T)``.
    """
    if not temp_kelvin > 0:
        raise NonpositiveTemperature(f"temperature must be positive, got {temp_kelvin!r}")
    kt = constants.k * temp_kelvin
    alpha = constants.h * gamma_mhz_per_tesla * 1e6 * field_tesla / kt
    beta = constants.h * quadrupole_frequency_hz(material, conv, spin) / kt
    return ModelParams(alpha, beta, material.eta, orientation or Orientation(), zeeman_sign)


def temperature_for_beta(material: MaterialPreset, beta: float, conv: UnitConvention,
                         spin: SpinSystem = SPIN_3_2) -> float:
    """Lattice temperature (kelvin) at which the quadrupole term equals ``beta``."""
    if not beta > 0:
        raise NonpositiveTemperature(f"beta must be positive to map to a temperature, got {beta!r}")
    return constants.h * quadrupole_frequency_hz(material, conv, spin) / (constants.k * beta)
