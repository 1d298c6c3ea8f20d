"""Curvature constants, exact spectrum and the f-deformed ladder algebra.

Units are hbar = m = omega = 1, so the curvature ``lam = 1/R**2`` is
dimensionless.  Everything here is a pure function of an immutable
:class:`CurvatureContext`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from ._errors import DomainError

__all__ = [
    "CurvatureContext",
    "RhoMode",
    "gamma_tilde",
    "remainder",
    "energy_level",
    "energy_shape_invariance",
    "energy_from_deformation",
    "deformation_f2",
    "deformation_f",
    "commutator_diagonal",
    "log_rho",
    "log_rho_table",
    "rho",
    "ladder_lower",
    "ladder_raise",
]


class RhoMode(str, enum.Enum):
    """Which closed form is used for the coherent-state weight rho(n).

    ``CANONICAL`` is ``n! * prod_{k<=n} f(k)**2`` and is the one for which the
    states are eigenvectors of the deformed annihilator.  ``PAPER`` is the
    Gamma-function expression with ``beta = 2*gamma/lam + 1``, kept so that
    published curves can be compared against.  Both reduce to ``n!`` when the
    circle becomes a line.
    """

    CANONICAL = "canonical"
    PAPER = "paper"

    @classmethod
    def parse(cls, value: "RhoMode | str") -> "RhoMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(
                f"unknown rho mode {value!r}; expected 'canonical' or 'paper'"
            ) from None


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not math.isfinite(lam) or lam < 0.0:
        raise DomainError(f"curvature must be finite and >= 0, got {lam!r}")
    return lam


def gamma_tilde(lam: float) -> float:
    """Factorization constant solving ``g**2 - lam*g = 1`` on the positive branch."""
    lam = _check_lambda(lam)
    return 0.5 * (lam + math.sqrt(lam * lam + 4.0))


@dataclass(frozen=True)
class CurvatureContext:
    """Curvature ``lam`` together with the constants derived from it."""

    lam: float
    gamma_tilde: float = field(init=False)

    def __post_init__(self):
        lam = _check_lambda(self.lam)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "gamma_tilde", gamma_tilde(lam))

    @property
    def is_flat(self) -> bool:
        return self.lam == 0.0

    @property
    def beta_canonical(self) -> float:
        """``2*gamma/lam``; the Gamma-function shift of the canonical weight."""
        if self.is_flat:
            raise DomainError("beta is undefined at lam = 0")
        return 2.0 * self.gamma_tilde / self.lam

    @property
    def beta_paper(self) -> float:
        if self.is_flat:
            raise DomainError("beta is undefined at lam = 0")
        return 2.0 * self.gamma_tilde / self.lam + 1.0


def _check_level(n):
    arr = np.asarray(n)
    if arr.dtype.kind not in "iu":
        if arr.dtype.kind == "f" and np.all(np.isfinite(arr)) and np.all(arr == np.floor(arr)):
            arr = arr.astype(np.int64)
        else:
            raise DomainError(f"level index must be an integer, got {n!r}")
    if np.any(arr < 0):
        raise DomainError(f"level index must be >= 0, got {n!r}")
    return arr


def remainder(ctx: CurvatureContext, gamma: float) -> float:
    """Shape-invariance remainder ``R(gamma) = gamma - lam/2``."""
    return gamma - 0.5 * ctx.lam


def energy_level(ctx: CurvatureContext, n):
    """Closed-form spectrum ``gamma*(n + 1/2) + lam*n**2/2``."""
    n = _check_level(n)
    out = ctx.gamma_tilde * (n + 0.5) + 0.5 * ctx.lam * n * n
    return float(out) if out.ndim == 0 else out


def energy_shape_invariance(ctx: CurvatureContext, n: int) -> float:
    """Spectrum built by summing remainders along the shape-invariant chain.

    Deliberately does not reuse :func:`energy_level`; the two are compared in
    the tests.
    """
    n = int(_check_level(n))
    g = ctx.gamma_tilde
    terms = [remainder(ctx, g + k * ctx.lam) for k in range(1, n + 1)]
    return math.fsum(terms) + 0.5 * g


def deformation_f2(ctx: CurvatureContext, n):
    """Squared deformation function ``gamma + (n - 1)*lam/2``."""
    n = _check_level(n)
    out = ctx.gamma_tilde + 0.5 * (n - 1) * ctx.lam
    if np.any(out < 0):
        # gamma - lam/2 = sqrt(lam**2 + 4)/2 > 0, so this cannot happen
        raise RuntimeError(f"negative deformation radicand at lam={ctx.lam}")
    return float(out) if out.ndim == 0 else out


def deformation_f(ctx: CurvatureContext, n):
    return np.sqrt(deformation_f2(ctx, n))


def energy_from_deformation(ctx: CurvatureContext, n):
    """``((n+1) f(n+1)**2 + n f(n)**2) / 2``, the deformed-oscillator spectrum."""
    n = _check_level(n)
    out = 0.5 * ((n + 1) * deformation_f2(ctx, n + 1) + n * deformation_f2(ctx, n))
    return float(out) if np.ndim(out) == 0 else out


def commutator_diagonal(ctx: CurvatureContext, n: int, exact: bool = True) -> float:
    """Diagonal element ``<n|[A, A+]|n> = (n+1) f(n+1)**2 - n f(n)**2``.

    With ``exact=True`` the expression is evaluated in rational arithmetic on
    the binary values of ``lam`` and ``gamma`` and rounded once, so the result
    is the correctly rounded value of the algebraic expression.  The float
    route loses about ``log10(n)`` digits to cancellation.
    """
    n = int(_check_level(n))
    if not exact:
        return (n + 1) * deformation_f2(ctx, n + 1) - n * deformation_f2(ctx, n)
    g = Fraction(ctx.gamma_tilde)
    lam = Fraction(ctx.lam)

    def f2(m):
        return g + Fraction(m - 1, 2) * lam

    return float((n + 1) * f2(n + 1) - n * f2(n))


def log_rho_table(ctx: CurvatureContext, n_max: int, mode: RhoMode | str = RhoMode.CANONICAL) -> np.ndarray:
    """``log rho(n)`` for ``n = 0..n_max``."""
    mode = RhoMode.parse(mode)
    n_max = int(_check_level(n_max))
    n = np.arange(n_max + 1)
    log_fact = gammaln(n + 1.0)
    if mode is RhoMode.CANONICAL:
        logs = np.zeros(n_max + 1)
        if n_max > 0 and not ctx.is_flat:
            logs[1:] = np.log(deformation_f2(ctx, n[1:]))
        return log_fact + np.cumsum(logs)
    if ctx.is_flat:
        raise DomainError("rho mode 'paper' needs lam > 0; use RhoMode.CANONICAL at lam = 0")
    beta = ctx.beta_paper
    return log_fact + 2.0 * n * math.log(0.5 * ctx.lam) + 2.0 * (gammaln(beta + n) - gammaln(beta))


def log_rho(ctx: CurvatureContext, n: int, mode: RhoMode | str = RhoMode.CANONICAL) -> float:
    # rho > 0, so the log carries everything (the sign is always +1)
    return float(log_rho_table(ctx, int(_check_level(n)), mode)[-1])


def rho(ctx: CurvatureContext, n: int, mode: RhoMode | str = RhoMode.CANONICAL) -> float:
    """Coherent-state weight ``rho(n)``; overflows to inf beyond n ~ 170."""
    lr = log_rho(ctx, n, mode)
    return math.exp(lr) if lr < 709.78 else math.inf


def _coeff_array(coeffs) -> np.ndarray:
    c = np.asarray(getattr(coeffs, "coeffs", coeffs), dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise DomainError("expected a non-empty 1-d coefficient vector")
    if not np.all(np.isfinite(c)):
        raise DomainError("coefficient vector must be finite")
    return c


def ladder_lower(ctx: CurvatureContext, coeffs) -> np.ndarray:
    """Apply ``A|n> = f(n) sqrt(n) |n-1>``.

    A vector supported on ``0..N`` maps to one supported on ``0..N-1``
    (the vacuum maps to the one-element zero vector).
    """
    c = _coeff_array(coeffs)
    if c.size == 1:
        return np.zeros(1)
    n = np.arange(1, c.size)
    return deformation_f(ctx, n) * np.sqrt(n) * c[1:]


def ladder_raise(ctx: CurvatureContext, coeffs) -> np.ndarray:
    """Apply ``A+|n> = f(n+1) sqrt(n+1) |n+1>``; support grows from ``0..N`` to ``0..N+1``."""
    c = _coeff_array(coeffs)
    n = np.arange(1, c.size + 1)
    out = np.zeros(c.size + 1)
    out[1:] = deformation_f(ctx, n) * np.sqrt(n) * c
    return out
