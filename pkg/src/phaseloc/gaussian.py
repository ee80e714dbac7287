"""Closed-form algebra of Gaussian functions.

Everything here is exact up to floating-point rounding and serves as ground
truth for the grid-based engine: convolutions and p-norms of Gaussians, the
sharp Young (Beckner / Brascamp-Lieb) constants, and the complex Gaussian
integral.

Exponents live in the extended reals ``[1, inf]``.  ``math.inf`` stands for
infinity, reciprocals follow ``1/0 = inf`` and ``1/inf = 0``, and passing
``fractions.Fraction`` values keeps exponent arithmetic exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

import numpy as np

from .errors import ConfigError

__all__ = [
    "GaussianFn",
    "ExponentTriple",
    "reciprocal",
    "conjugate_exponent",
    "young_partner",
    "gauss_convolve",
    "gauss_pnorm",
    "bbl_constant",
    "bbl_bound",
    "bbl_extremal_pair",
    "gauss_integral_1d",
    "normal",
]

INF = math.inf


def _is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


def reciprocal(x):
    """``1/x`` with ``1/0 = inf`` and ``1/inf = 0``; Fractions stay exact."""
    if _is_inf(x):
        return 0
    if x == 0:
        return INF
    if isinstance(x, (int, Fraction)):
        return Fraction(1) / Fraction(x)
    return 1.0 / x


def conjugate_exponent(p):
    """Hoelder conjugate ``p' = p/(p-1)``, with ``1' = inf`` and ``inf' = 1``."""
    _check_exponent(p)
    inv = reciprocal(p)
    return reciprocal(1 - inv)


def young_partner(p, q):
    """``r`` solving ``1 + 1/r = 1/p + 1/q``."""
    inv_r = reciprocal(p) + reciprocal(q) - 1
    if inv_r < 0:
        raise ConfigError(f"no r >= 1 satisfies 1 + 1/r = 1/p + 1/q for p={p}, q={q}")
    return reciprocal(inv_r)


def _check_exponent(p):
    if not isinstance(p, Real) or math.isnan(float(p)) or p < 1:
        raise ConfigError(f"exponent must lie in [1, inf], got {p!r}")


@dataclass(frozen=True)
class ExponentTriple:
    """Exponents with ``1 + 1/r = 1/p + 1/q``."""

    p: object
    q: object
    r: object

    def __post_init__(self):
        for x in (self.p, self.q, self.r):
            _check_exponent(x)
        lhs = 1 + reciprocal(self.r)
        rhs = reciprocal(self.p) + reciprocal(self.q)
        exact = all(isinstance(v, (int, Fraction)) for v in (lhs, rhs))
        if (lhs != rhs) if exact else not math.isclose(float(lhs), float(rhs), rel_tol=0, abs_tol=1e-12):
            raise ConfigError(
                f"exponents (p={self.p}, q={self.q}, r={self.r}) violate 1 + 1/r = 1/p + 1/q"
            )


@dataclass(frozen=True)
class GaussianFn:
    """``A exp(-a |z - c|^2 + i delta . z)`` on the line (n=1) or the complex plane (n=2).

    For ``n = 1`` the centre and the linear phase are real; for ``n = 2`` the
    centre is complex and the phase, if any, acts on the real part only.
    """

    amplitude: complex = 1.0
    width: float = 1.0
    centre: complex = 0.0
    dims: int = 2
    phase: float = 0.0

    def __post_init__(self):
        if not self.width > 0:
            raise ConfigError(f"Gaussian width must be > 0, got {self.width}")
        if self.dims not in (1, 2):
            raise ConfigError(f"dims must be 1 or 2, got {self.dims}")

    def __call__(self, z):
        z = np.asarray(z)
        return (
            self.amplitude
            * np.exp(-self.width * np.abs(z - self.centre) ** 2)
            * np.exp(1j * self.phase * np.real(z))
        )


def normal(mean: float, variance: float) -> GaussianFn:
    """1-D normal density as a GaussianFn."""
    if not variance > 0:
        raise ConfigError("variance must be > 0")
    return GaussianFn(1.0 / math.sqrt(2 * math.pi * variance), 1.0 / (2 * variance), mean, dims=1)


def gauss_convolve(f: GaussianFn, g: GaussianFn) -> GaussianFn:
    """Exact convolution ``f * g``.

    Per real dimension ``f_a * f_b = sqrt(pi/(a+b)) f_{ab/(a+b)}``; centres
    add.  Both factors must share the same linear phase, which then carries
    over unchanged.
    """
    if f.dims != g.dims:
        raise ConfigError("cannot convolve Gaussians of different dimension")
    if f.phase != g.phase:
        raise ConfigError("convolution is only closed for equal linear phases")
    a, b = f.width, g.width
    prefactor = (math.pi / (a + b)) ** (f.dims / 2)
    return GaussianFn(
        amplitude=f.amplitude * g.amplitude * prefactor,
        width=a * b / (a + b),
        centre=f.centre + g.centre,
        dims=f.dims,
        phase=f.phase,
    )


def gauss_pnorm(f: GaussianFn, p) -> float:
    """``||f||_p = |A| (pi / (p a))^(n / 2p)``; ``p = inf`` gives ``|A|``."""
    _check_exponent(p)
    if _is_inf(p):
        return abs(f.amplitude)
    p = float(p)
    return abs(f.amplitude) * (math.pi / (p * f.width)) ** (f.dims / (2 * p))


def bbl_constant(p) -> float:
    """``C_p = sqrt(p^(1/p) / p'^(1/p'))`` with ``C_1 = C_inf = 1``.

    ``C_p C_p' = 1``; ``C_p < 1`` for ``1 < p < 2`` and ``C_p > 1`` for ``p > 2``.
    """
    _check_exponent(p)
    if _is_inf(p) or p == 1:
        return 1.0
    p = float(p)
    pc = p / (p - 1.0)
    return math.sqrt(p ** (1.0 / p) / pc ** (1.0 / pc))


def bbl_bound(f_norm: float, g_norm: float, triple: ExponentTriple, n: int = 1) -> float:
    """Right-hand side ``(C_p C_q / C_r)^n ||f||_p ||g||_q`` of the sharp Young inequality."""
    if not isinstance(triple, ExponentTriple):
        triple = ExponentTriple(*triple)
    const = bbl_constant(triple.p) * bbl_constant(triple.q) / bbl_constant(triple.r)
    return const**n * f_norm * g_norm


def bbl_extremal_pair(p, q, gamma: float = 1.0, dims: int = 1) -> tuple[GaussianFn, GaussianFn]:
    """Centred Gaussians with widths ``gamma p'`` and ``gamma q'``, the equality case.

    Only meaningful for ``p, q`` in the open interval ``(1, inf)``.  In two
    dimensions these are isotropic, hence separable, Gaussians; equality for
    non-separable pairs in ``n = 2`` is not covered and remains unverified.
    """
    if _is_inf(p) or _is_inf(q) or p <= 1 or q <= 1:
        raise ConfigError("the equality family needs 1 < p, q < inf")
    pc, qc = conjugate_exponent(p), conjugate_exponent(q)
    return GaussianFn(1.0, gamma * float(pc), dims=dims), GaussianFn(1.0, gamma * float(qc), dims=dims)


def gauss_integral_1d(a: complex, b: complex = 0.0, c: complex = 0.0) -> complex:
    """``int exp(-a x^2 + b x + c) dx = sqrt(pi/a) exp(b^2/(4a) + c)`` for ``Re(a) > 0``.

    The principal square root is used, which has non-negative real part.
    """
    a, b, c = complex(a), complex(b), complex(c)
    if not a.real > 0:
        raise ConfigError(f"Gaussian integral diverges for Re(a) = {a.real} <= 0")
    return cmath.sqrt(math.pi / a) * cmath.exp(b * b / (4 * a) + c)
