"""Gnomonic geometry of the circle and a finite-difference check of the spectrum.

The tangent-line Hamiltonian ``H = ((1 + lam x^2) p)^2 / 2 + x^2 / 2`` has a
position-dependent kinetic term.  With ``x = tan(sqrt(lam) s) / sqrt(lam)``
(``s`` is arc length measured from the pole) one gets
``(1 + lam x^2) d/dx = d/ds`` and ``dx / (1 + lam x^2) = ds``, so

    H = -1/2 d^2/ds^2 + tan^2(sqrt(lam) s) / (2 lam),   |s| < pi / (2 sqrt(lam))

with the flat inner product in ``s``.  The potential diverges at the ends of
the interval, which fixes Dirichlet boundary conditions.

Near a wall at distance ``d`` the potential behaves as ``1 / (2 lam^2 d^2)``,
so eigenfunctions vanish like ``d^a`` with ``a (a - 1) = 1 / lam^2``.  The
three-point scheme then carries an ``h^(2a - 1)`` error term next to the usual
``h^2`` one, and it dominates once ``lam`` exceeds about 1.26.  Both terms are
removed by extrapolating over three nested grids.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from ._errors import ConfigError, ConvergenceError, DomainError
from .algebra import CurvatureContext, energy_level

__all__ = [
    "CircleGeometry",
    "OracleSpectrumReport",
    "gnomonic_map",
    "tangent_coordinate",
    "arc_length",
    "metric_factor",
    "potential_tangent",
    "potential_tangent_intermediate",
    "fd_hamiltonian",
    "wall_exponent",
    "solve_spectrum_fd",
]

MAX_DOMAIN_LENGTH = 1.0e3
MIN_GRID_POINTS = 200


@dataclass(frozen=True)
class CircleGeometry:
    lam: float

    def __post_init__(self):
        lam = float(self.lam)
        if not math.isfinite(lam) or lam <= 0.0:
            raise DomainError(f"a circle needs curvature lam > 0, got {lam!r}")
        object.__setattr__(self, "lam", lam)

    @property
    def R(self) -> float:
        return 1.0 / math.sqrt(self.lam)

    @property
    def domain_length(self) -> float:
        """Length of the open half-circle covered by the tangent line, ``pi R``."""
        return math.pi * self.R


def gnomonic_map(geom: CircleGeometry, x):
    """Point ``(q1, q2)`` on the circle projecting to tangent coordinate ``x``."""
    x = np.asarray(x, dtype=float)
    big_lambda = np.sqrt(1.0 + geom.lam * x * x)
    q1 = x / big_lambda
    q2 = 1.0 / (math.sqrt(geom.lam) * big_lambda)
    if q1.ndim == 0:
        return float(q1), float(q2)
    return q1, q2


def tangent_coordinate(geom: CircleGeometry, q1, q2):
    """Inverse of :func:`gnomonic_map` on the upper half-circle (``q2 > 0``)."""
    return np.asarray(q1) / (math.sqrt(geom.lam) * np.asarray(q2))


def arc_length(geom: CircleGeometry, x):
    """Geodesic distance from the pole ``(0, R)`` to the image of ``x``."""
    r = math.sqrt(geom.lam)
    return np.arctan(r * np.asarray(x, dtype=float)) / r


def metric_factor(geom: CircleGeometry, x):
    """``ds^2 / dx^2 = 1 / (1 + lam x^2)^2``."""
    x = np.asarray(x, dtype=float)
    return 1.0 / (1.0 + geom.lam * x * x) ** 2


def potential_tangent_intermediate(geom: CircleGeometry, x):
    """The potential before cancellation, ``(1 + lam x^2)/2 * x^2 / (1 + lam x^2)``."""
    x = np.asarray(x, dtype=float)
    g = 1.0 + geom.lam * x * x
    return 0.5 * g * (x * x / g)


def potential_tangent(geom: CircleGeometry, x):
    """Oscillator potential on the tangent line, ``x^2 / 2``.

    The uncancelled form is evaluated alongside and must agree to 4 ulps.
    """
    x = np.asarray(x, dtype=float)
    v = 0.5 * x * x
    alt = potential_tangent_intermediate(geom, x)
    if np.any(np.abs(alt - v) > 4 * np.spacing(v)):
        raise ArithmeticError("tangent-line potential does not reduce to x^2/2")
    return float(v) if v.ndim == 0 else v


def fd_hamiltonian(geom: CircleGeometry, grid_points: int):
    """Interior nodes, diagonal and off-diagonal of the central-difference ``H``.

    ``grid_points`` interior nodes with spacing ``h = pi R / (grid_points + 1)``;
    the wavefunction vanishes at both ends.
    """
    if grid_points < 3:
        raise ConfigError("need at least 3 interior grid points")
    length = geom.domain_length
    h = length / (grid_points + 1)
    s = -0.5 * length + h * np.arange(1, grid_points + 1)
    r = math.sqrt(geom.lam)
    potential = np.tan(r * s) ** 2 / (2.0 * geom.lam)
    diag = 1.0 / (h * h) + potential
    off = np.full(grid_points - 1, -0.5 / (h * h))
    return s, diag, off


def wall_exponent(lam: float) -> float:
    """Indicial exponent ``a`` of the eigenfunctions at the walls, ``a(a-1) = 1/lam^2``."""
    return 0.5 * (1.0 + math.sqrt(1.0 + 4.0 / (lam * lam)))


def _extrapolate(coarse, fine, order):
    return (2.0 ** order * fine - coarse) / (2.0 ** order - 1.0)


@dataclass
class OracleSpectrumReport:
    lam: float
    grid_points: int
    levels: np.ndarray               # eigenvalues on the base grid
    levels_fine: np.ndarray          # spacing halved
    levels_finest: np.ndarray        # spacing quartered
    richardson_h2: np.ndarray        # (4 E_fine - E_base) / 3
    richardson_estimate: np.ndarray  # h^2 and wall terms removed
    analytic: np.ndarray
    rel_errors: np.ndarray           # richardson_estimate against the closed form
    raw_rel_errors: np.ndarray       # base grid against the closed form
    convergence_ratios: np.ndarray   # base-grid error / fine-grid error
    wall_order: float                # 2a - 1
    node_counts: list[int] = field(default_factory=list)
    parities: list[int] = field(default_factory=list)

    @property
    def max_rel_error(self) -> float:
        return float(np.max(self.rel_errors))

    def as_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "grid_points": self.grid_points,
            "levels": [float(v) for v in self.levels],
            "levels_fine": [float(v) for v in self.levels_fine],
            "levels_finest": [float(v) for v in self.levels_finest],
            "richardson_h2": [float(v) for v in self.richardson_h2],
            "richardson_estimate": [float(v) for v in self.richardson_estimate],
            "analytic": [float(v) for v in self.analytic],
            "rel_errors": [float(v) for v in self.rel_errors],
            "convergence_ratios": [float(v) for v in self.convergence_ratios],
            "wall_order": self.wall_order,
            "node_counts": list(self.node_counts),
            "parities": list(self.parities),
        }


def _lowest(geom, grid_points, n_levels, vectors=False):
    s, d, e = fd_hamiltonian(geom, grid_points)
    try:
        out = eigh_tridiagonal(d, e, eigvals_only=not vectors, select="i",
                               select_range=(0, n_levels - 1))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"tridiagonal eigensolve failed at {grid_points} points: {exc}") from exc
    if vectors:
        return out[0], out[1]
    return out, None


def _sign_changes(v: np.ndarray, floor: float) -> int:
    w = v[np.abs(v) > floor]
    return int(np.count_nonzero(np.signbit(w[1:]) != np.signbit(w[:-1])))


def solve_spectrum_fd(geom: CircleGeometry, n_levels: int = 9, grid_points: int = 4000) -> OracleSpectrumReport:
    """Lowest ``n_levels`` eigenvalues by finite differences plus extrapolation.

    Solves on ``grid_points`` interior nodes and on ``2*grid_points + 1`` and
    ``4*grid_points + 3`` (spacing halved twice).  The ``h^2`` term is removed
    from each consecutive pair; when the wall order ``2a - 1`` is below 4 its
    term is then removed from the two results as well.  The estimate is
    compared with :func:`algebra.energy_level`.
    """
    if grid_points < MIN_GRID_POINTS:
        raise ConfigError(f"grid_points must be >= {MIN_GRID_POINTS}")
    if not 1 <= n_levels <= grid_points // 10:
        raise ConfigError("n_levels must be between 1 and grid_points/10")
    if geom.domain_length > MAX_DOMAIN_LENGTH:
        raise DomainError(
            f"domain length pi/sqrt(lam) = {geom.domain_length:.3g} exceeds {MAX_DOMAIN_LENGTH:g}; "
            "curvature too small for the arc-length grid"
        )
    base, vecs = _lowest(geom, grid_points, n_levels, vectors=True)
    fine, _ = _lowest(geom, 2 * grid_points + 1, n_levels)
    finest, _ = _lowest(geom, 4 * grid_points + 3, n_levels)
    if not base.size == fine.size == finest.size == n_levels:
        raise ConvergenceError("eigensolver returned fewer levels than requested")
    step1, step2 = fine - base, finest - fine
    if not (np.all(step1 > 0) or np.all(step1 < 0)) or np.any(np.sign(step1) != np.sign(step2)):
        raise ConvergenceError("grid refinement moved the levels in inconsistent directions")

    wall_order = 2.0 * wall_exponent(geom.lam) - 1.0
    h2_a = _extrapolate(base, fine, 2.0)
    h2_b = _extrapolate(fine, finest, 2.0)
    estimate = _extrapolate(h2_a, h2_b, wall_order) if wall_order < 4.0 else h2_b

    exact = energy_level(CurvatureContext(geom.lam), np.arange(n_levels))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.abs(base - exact) / np.abs(fine - exact)
    floor = 1e-8 * np.max(np.abs(vecs))
    nodes = [_sign_changes(vecs[:, k], floor) for k in range(n_levels)]
    parities = []
    for k in range(n_levels):
        v = vecs[:, k]
        parities.append(1 if np.linalg.norm(v - v[::-1]) < np.linalg.norm(v + v[::-1]) else -1)
    return OracleSpectrumReport(
        lam=geom.lam,
        grid_points=grid_points,
        levels=base,
        levels_fine=fine,
        levels_finest=finest,
        richardson_h2=h2_a,
        richardson_estimate=estimate,
        analytic=exact,
        rel_errors=np.abs(estimate - exact) / exact,
        raw_rel_errors=np.abs(base - exact) / exact,
        convergence_ratios=ratios,
        wall_order=wall_order,
        node_counts=nodes,
        parities=parities,
    )
