"""Photon statistics and quadrature squeezing of the circle coherent states.

Quadratures are built from the ordinary bosonic ``a``, ``a+``:
``X1 = (a e^{i phi} + a+ e^{-i phi}) / 2`` and ``X2 = X1(phi + pi/2)``, and
``S_i = 4 Var(X_i) - 1`` (negative means squeezed).
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from ._errors import ConfigError
from .algebra import CurvatureContext, RhoMode, log_rho_table
from .states import DEFAULT_EPSILON, StateVector, build_state

__all__ = [
    "PhotonStatistics",
    "SqueezingResult",
    "LadderMoments",
    "photon_statistics",
    "ladder_moments",
    "squeezing",
    "squeezing_series",
    "scan",
    "iter_scan",
    "record_fields",
]


@dataclass(frozen=True)
class PhotonStatistics:
    pn: np.ndarray
    mean_n: float
    var_n: float
    mandel_q: float


@dataclass(frozen=True)
class SqueezingResult:
    phi: float
    s1: float
    s2: float
    mean_a: float
    mean_a2: float
    mean_n: float
    s1_series: float  # same quantity through the explicit rho-series route


class LadderMoments(NamedTuple):
    mean_a: float
    mean_a2: float
    mean_n: float


def photon_statistics(state: StateVector) -> PhotonStatistics:
    """Photon-number distribution, mean, variance and Mandel ``Q``.

    ``Q`` is ``0/0`` for the vacuum; it is set to 0, its ``z -> 0`` limit.
    """
    p = state.coeffs * state.coeffs
    n = np.arange(p.size)
    mean = math.fsum(n * p)
    var = math.fsum((n - mean) ** 2 * p)
    q = var / mean - 1.0 if mean > 0.0 else 0.0
    return PhotonStatistics(p, mean, var, q)


def ladder_moments(state: StateVector) -> LadderMoments:
    """``<a>``, ``<a^2>`` and ``<n>`` with the undeformed ladder operators."""
    c = state.coeffs
    n = np.arange(c.size)
    mean_a = math.fsum(c[:-1] * c[1:] * np.sqrt(n[1:]))
    mean_a2 = math.fsum(c[:-2] * c[2:] * np.sqrt(n[1:-1] * n[2:]))
    mean_n = math.fsum(n * c * c)
    return LadderMoments(mean_a, mean_a2, mean_n)


def _s1_from_moments(m: LadderMoments, phi: float) -> float:
    return 2.0 * math.cos(2.0 * phi) * m.mean_a2 + 2.0 * m.mean_n - 4.0 * math.cos(phi) ** 2 * m.mean_a ** 2


def squeezing_series(state: StateVector, phi: float) -> float:
    """``S1`` assembled directly from ``z``, ``rho(n)`` and ``N(z^2)``.

    Independent of the stored amplitudes apart from ``<n>``: the two cross
    sums are rebuilt term by term from the weight table.
    """
    z = state.z
    if z == 0.0:
        return 0.0
    N = state.n_max
    lr = log_rho_table(CurvatureContext(state.lam), N, state.mode)
    n = np.arange(N + 1)
    lz = math.log(z)
    log_norm = state.log_norm
    # sum_{n>=2} z^{2n} sqrt(n(n-1)) / sqrt(rho(n-2) rho(n)), divided by z^2 N
    k = n[2:]
    sum2 = math.fsum(np.exp(2 * k * lz + 0.5 * np.log(k * (k - 1.0)) - 0.5 * (lr[:-2] + lr[2:])
                            - 2 * lz - log_norm))
    # sum_{n>=1} z^{2n} sqrt(n) / sqrt(rho(n-1) rho(n)), divided by z N
    k = n[1:]
    sum1 = math.fsum(np.exp(2 * k * lz + 0.5 * np.log(k) - 0.5 * (lr[:-1] + lr[1:]) - lz - log_norm))
    mean_n = math.fsum(n * np.exp(2 * n * lz - lr - log_norm))
    return 2.0 * math.cos(2.0 * phi) * sum2 - (2.0 * math.cos(phi) * sum1) ** 2 + 2.0 * mean_n


def squeezing(state: StateVector, phi: float) -> SqueezingResult:
    phi = float(phi)
    if not math.isfinite(phi):
        raise ConfigError(f"phi must be finite, got {phi!r}")
    m = ladder_moments(state)
    s1 = _s1_from_moments(m, phi)
    s2 = _s1_from_moments(m, phi + 0.5 * math.pi)
    return SqueezingResult(phi, s1, s2, m.mean_a, m.mean_a2, m.mean_n, squeezing_series(state, phi))


def record_fields(n_probs: int) -> list[str]:
    """Column order of a scan record carrying ``p0 .. p{n_probs-1}``."""
    base = ["lambda", "z", "phi", "n_max", "mean_n", "var_n", "mandel_q", "s1", "s2"]
    return base + [f"p{k}" for k in range(n_probs)]


def _records_for_state(lam, z, phis, mode, epsilon, n_probs):
    state = build_state(CurvatureContext(lam), z, mode, epsilon)
    stats = photon_statistics(state)
    probs = [float(stats.pn[k]) if k < stats.pn.size else 0.0 for k in range(n_probs)]
    rows = []
    for phi in phis:
        sq = squeezing(state, phi)
        row = {
            "lambda": float(lam), "z": float(z), "phi": float(phi), "n_max": state.n_max,
            "mean_n": stats.mean_n, "var_n": stats.var_n, "mandel_q": stats.mandel_q,
            "s1": sq.s1, "s2": sq.s2,
        }
        row.update({f"p{k}": probs[k] for k in range(n_probs)})
        rows.append(row)
    return rows


def _as_axis(values, name) -> list[float]:
    arr = [float(v) for v in np.atleast_1d(np.asarray(values, dtype=float))]
    if not arr:
        raise ConfigError(f"empty {name} axis")
    if not all(math.isfinite(v) for v in arr):
        raise ConfigError(f"non-finite value on the {name} axis")
    return arr


def iter_scan(lambdas: Iterable[float], zs: Iterable[float], phis: Iterable[float] = (0.0,),
              mode: RhoMode | str = RhoMode.CANONICAL, epsilon: float = DEFAULT_EPSILON,
              n_probs: int = 6, workers: int | None = None) -> Iterator[dict]:
    """Generator form of :func:`scan`; records are yielded in grid order."""
    lambdas = _as_axis(lambdas, "lambda")
    zs = _as_axis(zs, "z")
    phis = _as_axis(phis, "phi")
    if min(lambdas) < 0 or min(zs) < 0:
        raise ConfigError("lambda and z must be >= 0")
    if n_probs < 0:
        raise ConfigError("n_probs must be >= 0")
    mode = RhoMode.parse(mode)
    if workers is None:
        workers = int(os.environ.get("OSC_CIRCLE_THREADS", "1") or 1)
    cells = [(lam, z) for lam in lambdas for z in zs]

    def run(cell):
        return _records_for_state(cell[0], cell[1], phis, mode, epsilon, n_probs)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(run, cells):
                yield from chunk
    else:
        for cell in cells:
            yield from run(cell)


def scan(lambdas: Iterable[float], zs: Iterable[float], phis: Iterable[float] = (0.0,),
         mode: RhoMode | str = RhoMode.CANONICAL, epsilon: float = DEFAULT_EPSILON,
         n_probs: int = 6, workers: int | None = None) -> list[dict]:
    """Evaluate the statistics on the grid ``lambdas x zs x phis``.

    One record per grid point with the keys of :func:`record_fields`, ordered
    row-major over (lambda, z, phi) whatever the number of worker threads.
    ``workers=None`` reads ``OSC_CIRCLE_THREADS`` (default 1).
    """
    return list(iter_scan(lambdas, zs, phis, mode, epsilon, n_probs, workers))
