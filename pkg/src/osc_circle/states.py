"""Nonlinear coherent states on the circle in a truncated Fock basis.

Amplitudes are ``c_n ∝ z**n / sqrt(rho(n))`` with real ``z >= 0``.  The
truncation index is chosen adaptively and the discarded probability mass is
bounded by a geometric series, which is valid because the term ratio
``z**2 * rho(n) / rho(n+1)`` is strictly decreasing in ``n`` for both weight
modes.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from ._errors import ConfigError, DomainError
from .algebra import CurvatureContext, RhoMode, ladder_lower, log_rho_table

__all__ = [
    "StateVector",
    "NormalizationSum",
    "EigenResidual",
    "normalization",
    "build_state",
    "standard_coherent_state",
    "eigen_residual",
]

DEFAULT_EPSILON = 1e-14


def _check_z(z: float) -> float:
    z = float(z)
    if not math.isfinite(z) or z < 0.0:
        raise DomainError(f"z must be real, finite and >= 0, got {z!r}")
    return z


def _log_terms(ctx: CurvatureContext, z: float, mode: RhoMode, n_max: int) -> np.ndarray:
    """``log(z**(2n) / rho(n))`` for ``n = 0..n_max``; ``-inf`` past n=0 when z = 0."""
    lr = log_rho_table(ctx, n_max, mode)
    n = np.arange(n_max + 1)
    if z == 0.0:
        out = np.full(n_max + 1, -np.inf)
        out[0] = 0.0
        return out
    return 2.0 * n * math.log(z) - lr


@dataclass(frozen=True)
class StateVector:
    """Normalized, truncated coefficient vector of ``|z>_lam``.

    ``tail_mass`` bounds the discarded probability relative to the retained
    normalization sum; ``log_norm`` is ``log N(z**2)`` over the retained terms.
    """

    coeffs: np.ndarray
    n_max: int
    tail_mass: float
    lam: float
    z: float
    mode: RhoMode
    epsilon: float
    log_norm: float

    @property
    def ctx(self) -> CurvatureContext:
        return CurvatureContext(self.lam)

    @property
    def probabilities(self) -> np.ndarray:
        return self.coeffs * self.coeffs

    def as_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "z": self.z,
            "mode": self.mode.value,
            "epsilon": self.epsilon,
            "n_max": self.n_max,
            "tail_mass": self.tail_mass,
            "log_norm": self.log_norm,
            "coeffs": [float(c) for c in self.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())

    @classmethod
    def from_json(cls, text: str) -> "StateVector":
        d = json.loads(text)
        return cls(np.asarray(d["coeffs"], dtype=float), int(d["n_max"]), float(d["tail_mass"]),
                   float(d["lambda"]), float(d["z"]), RhoMode.parse(d["mode"]),
                   float(d["epsilon"]), float(d["log_norm"]))


class NormalizationSum(NamedTuple):
    value: float
    next_term: float


def normalization(ctx: CurvatureContext, z: float, mode: RhoMode | str = RhoMode.CANONICAL,
                  n_max: int = 200) -> NormalizationSum:
    """Partial sum ``sum_{n<=n_max} z**(2n)/rho(n)`` and the first omitted term."""
    z = _check_z(z)
    mode = RhoMode.parse(mode)
    if n_max < 0:
        raise ConfigError("n_max must be >= 0")
    terms = np.exp(_log_terms(ctx, z, mode, n_max + 1))
    return NormalizationSum(math.fsum(terms[:-1]), float(terms[-1]))


def _choose_cutoff(lt: np.ndarray, epsilon: float):
    """First ``N`` whose geometric tail bound is below ``epsilon * S_N``.

    Returns ``(N, tail_bound / S_N)`` or ``None`` if the table is too short.
    """
    t = np.exp(lt - lt.max())
    partial = np.cumsum(t)
    for n in range(t.size - 2):
        nxt, after = t[n + 1], t[n + 2]
        if nxt == 0.0:
            return n, 0.0
        if not nxt < t[n]:
            continue
        ratio = after / nxt
        if ratio >= 1.0:
            continue
        bound = nxt / (1.0 - ratio)
        if bound < epsilon * partial[n]:
            return n, bound / partial[n]
    return None


def build_state(ctx: CurvatureContext, z: float, mode: RhoMode | str = RhoMode.CANONICAL,
                epsilon: float = DEFAULT_EPSILON) -> StateVector:
    """Construct the normalized nonlinear coherent state with certified truncation."""
    z = _check_z(z)
    mode = RhoMode.parse(mode)
    epsilon = float(epsilon)
    if not 0.0 < epsilon < 1.0:
        raise ConfigError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if mode is RhoMode.PAPER and ctx.is_flat:
        raise DomainError("rho mode 'paper' needs lam > 0; use RhoMode.CANONICAL at lam = 0")
    if z == 0.0:
        return StateVector(np.ones(1), 0, 0.0, ctx.lam, z, mode, epsilon, 0.0)

    size = max(64, int(2 * z * z) + 64)
    while True:
        lt = _log_terms(ctx, z, mode, size)
        found = _choose_cutoff(lt, epsilon)
        if found is not None:
            break
        if size > 1_000_000:
            raise ConfigError(f"no truncation index found for z={z} (numerically out of range)")
        size *= 2
    n_max, tail = found
    lt = lt[: n_max + 1]
    peak = lt.max()
    log_norm = peak + math.log(math.fsum(np.exp(lt - peak)))
    coeffs = np.exp(0.5 * (lt - log_norm))
    return StateVector(coeffs, n_max, float(tail), ctx.lam, z, mode, epsilon, float(log_norm))


def standard_coherent_state(z: float, n_max: int) -> np.ndarray:
    """Glauber amplitudes ``exp(-z**2/2) z**n / sqrt(n!)`` for ``n = 0..n_max``."""
    z = _check_z(z)
    n = np.arange(n_max + 1)
    if z == 0.0:
        out = np.zeros(n_max + 1)
        out[0] = 1.0
        return out
    return np.exp(-0.5 * z * z + n * math.log(z) - 0.5 * gammaln(n + 1.0))


class EigenResidual(NamedTuple):
    residual: float       # ||A c - z c|| on the indices 0..n_max-1
    top_truncation: float  # z * c_{n_max}, the component lost by truncating A


def eigen_residual(state: StateVector) -> EigenResidual:
    """Check ``A|z> = z|z>`` on the retained Fock space.

    ``A`` maps the support ``0..n_max`` onto ``0..n_max-1``; the missing top
    component of ``z|z>`` is reported separately as ``top_truncation``.
    """
    c = state.coeffs
    lowered = ladder_lower(state.ctx, c)
    if state.n_max == 0:
        return EigenResidual(float(np.linalg.norm(lowered)), state.z * float(c[0]))
    diff = lowered - state.z * c[:-1]
    return EigenResidual(float(np.linalg.norm(diff)), state.z * float(c[-1]))
