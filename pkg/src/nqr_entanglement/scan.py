"""Parameter sweeps, the onset of entanglement, and orientation optimisation.

Every grid point is an independent evaluation ``thermal_state -> measure_all``.
Sweeps may fan points out to worker processes; rows are always returned in
lexicographic order of the axis indices, so the output does not depend on
the number of workers.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .conventions import run_metadata
from .entanglement import (
    IDENTITY_MAPPING,
    EntanglementReport,
    QubitMapping,
    concurrence,
    measure_all,
)
from .errors import InvalidSweep, NoTransition, SweepPointError
from .model import ModelParams, Orientation, ZeemanSign, thermal_state, thermal_states
from .spin_algebra import SPIN_3_2, SpinSystem

AXIS_NAMES = ("alpha", "beta", "theta", "phi", "eta", "T")
MEASURE_COLUMNS = ("concurrence", "eof", "entropy_a", "entropy_b")

#: Values closer than this to the best coarse-grid value count as ties.
TIE_TOL = 1e-12

_GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise InvalidSweep(f"unknown axis {self.name!r}; expected one of {AXIS_NAMES}")
        if int(self.count) != self.count or self.count < 2:
            raise InvalidSweep(f"axis {self.name}: count must be an integer >= 2")
        if not self.start < self.stop:
            raise InvalidSweep(f"axis {self.name}: need start < stop")
        if self.spacing not in ("linear", "log"):
            raise InvalidSweep(f"axis {self.name}: spacing must be 'linear' or 'log'")
        if self.spacing == "log" and self.start <= 0:
            raise InvalidSweep(f"axis {self.name}: log spacing needs a positive start")
        lo, hi = {
            "theta": (0.0, math.pi), "eta": (0.0, 1.0),
        }.get(self.name, (-math.inf, math.inf))
        if self.start < lo or self.stop > hi:
            raise InvalidSweep(f"axis {self.name}: range outside [{lo}, {hi}]")
        if self.name == "phi" and not (0.0 <= self.start and self.stop < 2 * math.pi):
            raise InvalidSweep("axis phi: range outside [0, 2*pi)")
        if self.name == "T" and self.start <= 0:
            raise InvalidSweep("axis T: temperatures must be positive")

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """Build an axis from ``name:min:max:count``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise InvalidSweep(f"grid spec {text!r} is not name:min:max:count")
        name, lo, hi, n = parts
        try:
            return cls(name, float(lo), float(hi), int(n))
        except ValueError as exc:
            if isinstance(exc, InvalidSweep):
                raise
            raise InvalidSweep(f"grid spec {text!r}: {exc}") from None

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """A one- or two-dimensional grid over model parameters.

    Unswept parameters come from ``fixed``. With ``ratio`` set, ``alpha`` is
    always ``ratio * beta``. Sweeping ``T`` rescales the fixed energies:
    ``beta = fixed.beta / T`` and ``alpha = fixed.alpha / T`` (or
    ``ratio * beta``), i.e. ``fixed`` describes the system at ``T = 1``.
    """

    axis1: Axis
    axis2: Optional[Axis] = None
    fixed: ModelParams = field(default_factory=lambda: ModelParams(0.0, 0.0))
    ratio: Optional[float] = None
    mapping: QubitMapping = IDENTITY_MAPPING
    spin: SpinSystem = SPIN_3_2

    def __post_init__(self):
        names = self.axis_names
        if len(set(names)) != len(names):
            raise InvalidSweep(f"the same axis appears twice: {names}")
        if "T" in names and "beta" in names:
            raise InvalidSweep("T and beta cannot both be swept")
        if self.ratio is not None:
            if not math.isfinite(self.ratio):
                raise InvalidSweep("ratio must be finite")
            if "alpha" in names:
                raise InvalidSweep("alpha is derived from beta in ratio mode and cannot be swept")

    @property
    def axes(self) -> tuple:
        return (self.axis1,) if self.axis2 is None else (self.axis1, self.axis2)

    @property
    def axis_names(self) -> tuple:
        return tuple(a.name for a in self.axes)

    def columns(self) -> tuple:
        extra = tuple(n for n in ("alpha", "beta") if n not in self.axis_names)
        return self.axis_names + extra + MEASURE_COLUMNS

    def points(self):
        """Yield ``(coords, params)`` in lexicographic axis-index order."""
        grids = [a.values() for a in self.axes]
        for combo in itertools.product(*grids):
            coords = {a.name: float(v) for a, v in zip(self.axes, combo)}
            yield coords, self.params_at(coords)

    def params_at(self, coords: dict) -> ModelParams:
        f = self.fixed
        alpha = coords.get("alpha", f.alpha)
        beta = coords.get("beta", f.beta)
        if "T" in coords:
            beta = f.beta / coords["T"]
            alpha = f.alpha / coords["T"]
        if self.ratio is not None:
            alpha = self.ratio * beta
        orientation = Orientation(coords.get("theta", f.theta), coords.get("phi", f.phi))
        return ModelParams(alpha, beta, coords.get("eta", f.eta), orientation, f.zeeman_sign)


@dataclass
class SweepResult:
    columns: tuple
    rows: list
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows])

    def records(self) -> list:
        return [dict(zip(self.columns, r)) for r in self.rows]


@dataclass(frozen=True)
class CriticalPoint:
    beta_star: float
    ratio: float
    bracket: tuple
    threshold: float

    def to_dict(self) -> dict:
        return {
            "beta_star": self.beta_star,
            "ratio": self.ratio,
            "bracket": list(self.bracket),
            "threshold": self.threshold,
        }


class AngleOptimum(NamedTuple):
    theta_star: float
    phi_star: float
    c_star: float


def evaluate_point(params: ModelParams, mapping: QubitMapping = IDENTITY_MAPPING,
                   spin: SpinSystem = SPIN_3_2) -> EntanglementReport:
    """The single-point evaluation every sweep row must reproduce."""
    return measure_all(thermal_state(spin, params), mapping)


def _sweep_row(task):
    coords, params, mapping, spin, extra = task
    try:
        rep = evaluate_point(params, mapping, spin)
    except Exception as exc:
        raise SweepPointError(coords, exc) from exc
    derived = {"alpha": params.alpha, "beta": params.beta}
    return (tuple(coords.values())
            + tuple(derived[n] for n in extra)
            + (rep.concurrence, rep.eof, rep.entropy_a, rep.entropy_b))


def _ordered_map(fn, tasks, workers: int):
    if workers <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves input order whatever the completion order
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Evaluate every grid point of ``spec``.

    Raises
    ------
    SweepPointError
        If any point fails; the message names its coordinates.
    """
    extra = tuple(n for n in ("alpha", "beta") if n not in spec.axis_names)
    tasks = [(c, p, spec.mapping, spec.spin, extra) for c, p in spec.points()]
    rows = _ordered_map(_sweep_row, tasks, workers)
    meta = run_metadata(
        spec.mapping, spec.fixed.zeeman_sign,
        axes=[{"name": a.name, "min": a.start, "max": a.stop, "count": a.count,
               "spacing": a.spacing} for a in spec.axes],
        fixed={"alpha": spec.fixed.alpha, "beta": spec.fixed.beta, "eta": spec.fixed.eta,
               "theta": spec.fixed.theta, "phi": spec.fixed.phi},
        ratio=spec.ratio,
    )
    return SweepResult(spec.columns(), rows, meta)


def temperature_scan(ratio: float, eta: float, o: Orientation, beta_range: tuple,
                     spacing: str = "log", mapping: QubitMapping = IDENTITY_MAPPING,
                     zeeman_sign: ZeemanSign = ZeemanSign.PAPER,
                     workers: int = 1) -> SweepResult:
    """Concurrence against reduced temperature ``T' = 1/beta`` at fixed ``alpha/beta``.

    ``beta_range`` is ``(min, max, count)``; rows run from high to low
    temperature (ascending ``beta``) and carry a ``T`` column.
    """
    if not ratio > 0:
        raise InvalidSweep("ratio must be positive")
    lo, hi, n = beta_range
    if not lo > 0:
        raise InvalidSweep("beta range must be positive")
    spec = SweepSpec(
        Axis("beta", lo, hi, n, spacing),
        fixed=ModelParams(0.0, 0.0, eta, o, zeeman_sign),
        ratio=ratio, mapping=mapping,
    )
    res = sweep(spec, workers)
    cols = ("T",) + res.columns
    rows = [(1.0 / r[0],) + tuple(r) for r in res.rows]
    res.meta["scan"] = "temperature"
    return SweepResult(cols, rows, res.meta)


def _onset_concurrence(beta, ratio, eta, o, mapping, zeeman_sign, spin=SPIN_3_2) -> float:
    p = ModelParams(ratio * beta, beta, eta, o, zeeman_sign)
    return concurrence(thermal_state(spin, p), mapping)[0]


def critical_beta(ratio: float, eta: float, o: Orientation, threshold: float = 1e-6,
                  tol: float = 1e-3, beta_lo: float = 1e-3, beta_hi: float = 50.0,
                  mapping: QubitMapping = IDENTITY_MAPPING,
                  zeeman_sign: ZeemanSign = ZeemanSign.PAPER) -> CriticalPoint:
    """Bisect for the ``beta`` (inverse temperature) at which entanglement appears.

    Along ``alpha = ratio * beta`` the concurrence is zero at high temperature
    and rises past ``threshold`` below a critical temperature; the returned
    ``beta_star`` is the midpoint of the final bracket, narrower than ``tol``.
    """
    if not ratio > 0:
        raise ValueError("ratio must be positive")
    if not (0 < beta_lo < beta_hi and tol > 0):
        raise ValueError("need 0 < beta_lo < beta_hi and tol > 0")

    def f(b):
        return _onset_concurrence(b, ratio, eta, o, mapping, zeeman_sign)

    if not f(beta_hi) > threshold:
        raise NoTransition(
            f"concurrence <= {threshold} at beta={beta_hi} (ratio={ratio}, eta={eta}, "
            f"theta={o.theta}, phi={o.phi}): no entanglement to bracket")
    if f(beta_lo) > threshold:
        raise NoTransition(f"concurrence already exceeds {threshold} at beta={beta_lo}")
    lo, hi = beta_lo, beta_hi
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > threshold:
            hi = mid
        else:
            lo = mid
    return CriticalPoint(0.5 * (lo + hi), ratio, (lo, hi), threshold)


def _golden_max(f, a: float, b: float, iters: int):
    """Golden-section search for a maximum of ``f`` on ``[a, b]``."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def coarse_angle_grid(grid_n: int):
    """``theta`` on ``[0, pi]`` (``grid_n`` points) and ``phi`` on ``[0, 2pi)``
    with the same spacing."""
    thetas = np.linspace(0.0, math.pi, grid_n)
    phis = np.linspace(0.0, 2 * math.pi, 2 * (grid_n - 1), endpoint=False)
    return thetas, phis


def concurrence_on_angle_grid(alpha, beta, eta, thetas, phis,
                              mapping: QubitMapping = IDENTITY_MAPPING,
                              zeeman_sign: ZeemanSign = ZeemanSign.PAPER,
                              spin: SpinSystem = SPIN_3_2) -> np.ndarray:
    """Concurrence for every ``(theta, phi)`` pair; shape ``(len(thetas), len(phis))``."""
    rho = thermal_states(spin, alpha, beta, eta,
                         np.asarray(thetas)[:, None], np.asarray(phis)[None, :], zeeman_sign)
    return concurrence(rho, mapping)[0]


def maximize_over_angles(alpha: float, beta: float, eta: float, grid_n: int = 181,
                         refine_iters: int = 40, mapping: QubitMapping = IDENTITY_MAPPING,
                         zeeman_sign: ZeemanSign = ZeemanSign.PAPER) -> AngleOptimum:
    """Orientation of the field that maximises the concurrence.

    A coarse ``theta x phi`` grid is followed by one golden-section pass on
    ``theta`` and one on ``phi``, each within a grid step of the coarse best.
    Ties (within ``TIE_TOL``) go to the smaller angle, and a refinement step is
    only taken if it beats the current value by more than ``TIE_TOL``.
    """
    if grid_n < 3:
        raise ValueError("grid_n must be at least 3")
    thetas, phis = coarse_angle_grid(grid_n)
    grid = concurrence_on_angle_grid(alpha, beta, eta, thetas, phis, mapping, zeeman_sign)
    flat = grid.ravel()
    first = int(np.flatnonzero(flat >= flat.max() - TIE_TOL)[0])
    i, j = divmod(first, len(phis))
    theta, phi = float(thetas[i]), float(phis[j])
    step = math.pi / (grid_n - 1)

    def c_at(t, p):
        o = Orientation(min(max(t, 0.0), math.pi), p % (2 * math.pi))
        params = ModelParams(alpha, beta, eta, o, zeeman_sign)
        return concurrence(thermal_state(SPIN_3_2, params), mapping)[0]

    best = c_at(theta, phi)
    if refine_iters > 0:
        t_new, c_new = _golden_max(lambda t: c_at(t, phi), max(0.0, theta - step),
                                   min(math.pi, theta + step), refine_iters)
        if c_new > best + TIE_TOL:
            theta, best = t_new, c_new
        p_new, c_new = _golden_max(lambda p: c_at(theta, p), phi - step, phi + step,
                                   refine_iters)
        if c_new > best + TIE_TOL:
            phi, best = p_new % (2 * math.pi), c_new
    return AngleOptimum(theta, phi, best)


def _surface_cell(task):
    alpha, beta, eta, grid_n, refine_iters, mapping, zeeman_sign = task
    try:
        opt = maximize_over_angles(alpha, beta, eta, grid_n, refine_iters, mapping, zeeman_sign)
    except Exception as exc:
        raise SweepPointError({"alpha": alpha, "beta": beta}, exc) from exc
    return (alpha, beta, opt.theta_star, opt.phi_star, opt.c_star)


def max_over_angles_surface(alpha_range: tuple, beta_range: tuple, eta: float,
                            grid_n: int = 181, refine_iters: int = 40,
                            mapping: QubitMapping = IDENTITY_MAPPING,
                            zeeman_sign: ZeemanSign = ZeemanSign.PAPER,
                            workers: int = 1) -> SweepResult:
    """Orientation-maximised concurrence over an ``(alpha, beta)`` grid."""
    a_axis = Axis("alpha", *alpha_range)
    b_axis = Axis("beta", *beta_range)
    tasks = [(float(a), float(b), eta, grid_n, refine_iters, mapping, zeeman_sign)
             for a, b in itertools.product(a_axis.values(), b_axis.values())]
    rows = _ordered_map(_surface_cell, tasks, workers)
    meta = run_metadata(mapping, zeeman_sign, scan="max_over_angles", eta=eta,
                        grid_n=grid_n, refine_iters=refine_iters,
                        axes=[{"name": ax.name, "min": ax.start, "max": ax.stop,
                               "count": ax.count, "spacing": ax.spacing}
                              for ax in (a_axis, b_axis)])
    return SweepResult(("alpha", "beta", "theta_star", "phi_star", "concurrence"), rows, meta)


def ridge_maximum(surface: SweepResult) -> dict:
    """The cell of a :func:`max_over_angles_surface` result with the largest concurrence."""
    c = surface.column("concurrence")
    return surface.records()[int(np.argmax(c))]
