"""Phase-space functions of a truncated-Fock state sampled on square grids.

Two independent routes produce an s-ordered function:

* the Fock route evaluates closed forms directly: ``Q(alpha) = <alpha|rho|alpha>/pi``
  and ``W(alpha) = (2/pi) Tr[rho D(2 alpha) Pi]`` (displaced parity) with
  Laguerre matrix elements;
* the transform route samples the characteristic function
  ``chi_s(xi) = Tr[rho D(xi)] exp(s |xi|^2 / 2)`` on the dual grid and applies
  the symplectic Fourier transform
  ``Phi(alpha) = pi^-2 int chi_s(xi) exp(-(xi alpha^* - xi^* alpha)) d^2 xi``.

Orders are lowered by Gaussian smoothing,
``Phi_s = 2/(pi (t-s)) Phi_t * exp(-2|.|^2/(t-s))``, done spectrally with zero
padding.  Integrals are midpoint sums on the cell-centred grid, with the sum
on a self-symmetric 3h sub-lattice providing the error estimate.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .errors import ConfigError, GridError, NumericalValidityError
from .fock import (
    DensityMatrix,
    laguerre_ladder,
    mean_amplitude,
    mean_photon_number,
)

__all__ = [
    "PhaseGrid",
    "PhaseSpaceField",
    "CharacteristicField",
    "Estimate",
    "auto_grid",
    "husimi_q",
    "wigner_w",
    "husimi_at",
    "wigner_at",
    "char_function",
    "field_from_char",
    "wigner_via_char",
    "order_smooth",
    "integrate",
    "grid_pnorm",
    "zoomed_sup",
    "grid_product_trace",
    "check_order",
]

log = logging.getLogger(__name__)

DEFAULT_POINTS = 256
MIN_HALF_EXTENT = 6.0
Q_CLIP_TOL = 1e-9
CHAR_BOUNDARY_TOL = 1e-12
IMAG_TOL = 1e-8
_CHUNK = 1 << 16
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform square grid of ``points x points`` cell centres on ``[-R, R]^2``.

    Axis 0 samples ``Re(alpha)``, axis 1 samples ``Im(alpha)``.
    """

    half_extent: float
    points: int = DEFAULT_POINTS

    def __post_init__(self):
        if not (math.isfinite(self.half_extent) and self.half_extent > 0):
            raise ConfigError(f"grid half extent must be a positive number, got {self.half_extent!r}")
        if isinstance(self.points, bool) or int(self.points) != self.points:
            raise ConfigError(f"grid size must be an integer, got {self.points!r}")
        if self.points < 16 or self.points % 2:
            raise ConfigError(f"grid size must be even and >= 16, got {self.points}")
        object.__setattr__(self, "half_extent", float(self.half_extent))
        object.__setattr__(self, "points", int(self.points))

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_extent / self.points

    @property
    def cell_area(self) -> float:
        return self.spacing**2

    @property
    def axis(self) -> np.ndarray:
        return -self.half_extent + (np.arange(self.points) + 0.5) * self.spacing

    @property
    def alpha(self) -> np.ndarray:
        x = self.axis
        return x[:, None] + 1j * x[None, :]

    def dual(self) -> "PhaseGrid":
        """Grid paired with this one by the symplectic DFT (spacing product ``pi/N``)."""
        return PhaseGrid(self.points * math.pi / (4.0 * self.half_extent), self.points)

    def refined(self, factor: int = 2) -> "PhaseGrid":
        return PhaseGrid(self.half_extent, self.points * factor)

    def to_dict(self) -> dict:
        return {"R": self.half_extent, "N": self.points, "h": self.spacing}


@dataclass(frozen=True)
class Estimate:
    """A numerical value with an absolute error estimate."""

    value: float
    error: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "error", float(self.error))

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True, eq=False)
class PhaseSpaceField:
    """Samples of an s-ordered phase-space function on a grid."""

    grid: PhaseGrid
    values: np.ndarray
    order: float
    state_tag: str = ""
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.grid.points, self.grid.points):
            raise ConfigError(f"field shape {v.shape} does not match grid {self.grid.points}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)


@dataclass(frozen=True, eq=False)
class CharacteristicField:
    """Samples of ``Tr[rho D(xi)] exp(s |xi|^2 / 2)`` on a grid over the xi-plane."""

    grid: PhaseGrid
    values: np.ndarray
    order: complex
    state_tag: str = ""
    origin_value: complex = 1.0


def check_order(s) -> float:
    """Validate a public ordering parameter: real and within ``[-1, 0]``."""
    try:
        s = float(s)
    except (TypeError, ValueError):
        raise ConfigError(f"order must be a real number, got {s!r}") from None
    if not -1.0 <= s <= 0.0:
        raise ConfigError("order must lie in [-1, 0]")
    return s


# -- grid sizing -------------------------------------------------------------


def auto_grid(rho: DensityMatrix, points: int = DEFAULT_POINTS, tail: float = 1e-17) -> PhaseGrid:
    """Pick a half extent that holds the state's phase-space support.

    The extent is the larger of ``max(6, 3 + 2 sqrt(<n>) + |<a>|)`` and the
    smallest radius (in steps of 0.25) beyond which ``Q`` stays below ``tail``
    on a probe circle.  ``Q`` is the widest of the functions we sample, so
    ``W`` and every intermediate order have decayed there as well.
    """
    centre = mean_amplitude(rho)
    n = mean_photon_number(rho)
    base = max(MIN_HALF_EXTENT, 3.0 + 2.0 * math.sqrt(max(n, 0.0)) + abs(centre))
    angles = np.exp(2j * np.pi * np.arange(256) / 256)
    radius = MIN_HALF_EXTENT
    while radius < 60.0:
        ring = centre + radius * angles
        if np.max(_husimi_values(rho.entries, ring)) < tail:
            break
        radius += 0.25
    extent = max(base, radius)
    return PhaseGrid(math.ceil(extent * 4.0) / 4.0, points)


# -- Fock route --------------------------------------------------------------


def _coherent_rows(alpha: np.ndarray, dim: int) -> np.ndarray:
    out = np.empty(alpha.shape + (dim,), dtype=complex)
    with np.errstate(under="ignore"):
        out[..., 0] = np.exp(-0.5 * np.abs(alpha) ** 2)
        for n in range(1, dim):
            out[..., n] = out[..., n - 1] * alpha / math.sqrt(n)
    return out


def _husimi_values(rho: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    # Q = sum_k lam_k |<alpha|psi_k>|^2 / pi over the spectral decomposition;
    # low-rank states (all pure battery states) then cost one matrix-vector product.
    # Negative eigenvalues are kept with their sign so that invalid input shows up.
    lam, vecs = np.linalg.eigh(rho)
    keep = np.abs(lam) > 1e-17 * max(np.max(np.abs(lam)), 1e-300)
    amps = vecs[:, keep] * np.sqrt(np.abs(lam[keep]))
    sign = np.sign(lam[keep])
    flat = alpha.ravel()
    out = np.empty(flat.shape)
    for start in range(0, flat.size, _CHUNK):
        c = _coherent_rows(flat[start : start + _CHUNK], rho.shape[0])
        out[start : start + _CHUNK] = (np.abs(c.conj() @ amps) ** 2 @ sign) / math.pi
    return out.reshape(alpha.shape)


def husimi_q(rho: DensityMatrix, grid: PhaseGrid) -> PhaseSpaceField:
    """Husimi function ``Q(alpha) = <alpha|rho|alpha> / pi`` on the grid.

    Rounding can leave tiny negative samples; values in ``[-1e-9, 0)`` are
    clipped to zero and counted in ``info['clipped']``.

    Raises:
        NumericalValidityError: if any sample is below ``-1e-9``.
    """
    q = _husimi_values(rho.entries, grid.alpha)
    low = q.min()
    if low < -Q_CLIP_TOL:
        raise NumericalValidityError(
            f"Husimi function has a sample of {low:.3e} < -{Q_CLIP_TOL:g}; state and cutoff are inconsistent"
        )
    neg = q < 0
    clipped = int(np.count_nonzero(neg))
    if clipped:
        log.info("clipped %d slightly negative Q samples (min %.2e) for %s", clipped, low, rho.tag)
        q = np.where(neg, 0.0, q)
    return PhaseSpaceField(grid, q, -1.0, rho.tag, {"clipped": clipped, "path": "fock"})


def _displaced_sum(rho: np.ndarray, beta: np.ndarray, parity: bool) -> np.ndarray:
    """``sum_{m,n} rho_{nm} sigma_n <m|D(beta)|n>`` with ``sigma_n = (-1)^n`` if ``parity``."""
    dim = rho.shape[0]
    sign = (-1.0) ** np.arange(dim) if parity else np.ones(dim)
    flat = beta.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for start in range(0, flat.size, _CHUNK):
        b = flat[start : start + _CHUNK]
        x = np.abs(b) ** 2
        rot = np.exp(1j * np.angle(b))
        phase = np.ones_like(b)
        acc = np.zeros_like(b)
        for d in range(dim):
            count = dim - d
            m = laguerre_ladder(x, d, count)
            idx = np.arange(count)
            up = rho[idx, idx + d] * sign[idx]
            down = rho[idx + d, idx] * sign[idx + d] * (-1.0) ** d
            # real BLAS product; complex @ float would copy m to complex
            coef = np.stack([up.real, up.imag, down.real, down.imag])
            u_re, u_im, d_re, d_im = coef @ m
            acc += phase * (u_re + 1j * u_im)
            if d:
                acc += np.conj(phase) * (d_re + 1j * d_im)
            phase = phase * rot
        out[start : start + _CHUNK] = acc
    return out.reshape(beta.shape)


def wigner_w(rho: DensityMatrix, grid: PhaseGrid) -> PhaseSpaceField:
    """Wigner function ``W(alpha) = (2/pi) sum_n (-1)^n <n|D(alpha)^dag rho D(alpha)|n>``.

    Evaluated as ``(2/pi) Tr[rho D(2 alpha) Pi]`` with closed-form Laguerre
    matrix elements.  Normalised so that ``int W d^2 alpha = 1``.
    """
    w = _displaced_sum(rho.entries, 2.0 * grid.alpha, parity=True)
    residue = float(np.max(np.abs(w.imag))) if w.size else 0.0
    return PhaseSpaceField(grid, (2.0 / math.pi) * w.real, 0.0, rho.tag, {"imag_residue": residue, "path": "fock"})


def husimi_at(rho: DensityMatrix, alpha) -> np.ndarray:
    """``Q`` at arbitrary points, without clipping."""
    return _husimi_values(rho.entries, np.asarray(alpha, dtype=complex))


def wigner_at(rho: DensityMatrix, alpha) -> np.ndarray:
    """``W`` at arbitrary points."""
    w = _displaced_sum(rho.entries, 2.0 * np.asarray(alpha, dtype=complex), parity=True)
    return (2.0 / math.pi) * w.real


# -- transform route ---------------------------------------------------------


def char_function(rho: DensityMatrix, s: complex, grid: PhaseGrid) -> CharacteristicField:
    """Sample the s-ordered characteristic function on ``grid`` (a xi-plane grid).

    Raises:
        ConfigError: for ``Re(s) > 0``; the P-function regime is unsupported.
    """
    s = complex(s)
    if s.real > 0:
        raise ConfigError("unsupported ordering; P-function regime (Re(s) > 0)")
    xi = grid.alpha
    vals = _displaced_sum(rho.entries, xi, parity=False)
    if s != 0:
        vals = vals * np.exp(0.5 * s * np.abs(xi) ** 2)
    origin = complex(_displaced_sum(rho.entries, np.zeros(1, dtype=complex), parity=False)[0])
    if abs(origin - 1.0) > 1e-10:
        raise NumericalValidityError(f"characteristic function at 0 is {origin}, expected 1")
    return CharacteristicField(grid, vals, s, rho.tag, origin)


def _centred_dft(a: np.ndarray, sign: int, axis: int) -> np.ndarray:
    """``out[m] = sum_k exp(sign 2 pi i (k-c)(m-c)/N) a[k]`` with ``c = (N-1)/2``."""
    n = a.shape[axis]
    c = 0.5 * (n - 1)
    k = np.arange(n)
    shape = [1] * a.ndim
    shape[axis] = n
    twiddle = np.exp(-sign * 2j * np.pi * c * k / n).reshape(shape)
    pre = a * twiddle
    if sign > 0:
        core = scipy.fft.ifft(pre, axis=axis) * n
    else:
        core = scipy.fft.fft(pre, axis=axis)
    const = np.exp(sign * 2j * np.pi * ((c * c) % n) / n)
    return core * twiddle * const


def _centred_dft_direct(a: np.ndarray, sign: int, axis: int) -> np.ndarray:
    n = a.shape[axis]
    c = 0.5 * (n - 1)
    k = np.arange(n) - c
    prod = np.mod(np.outer(k, k), n)
    kernel = np.exp(sign * 2j * np.pi * prod / n)
    return np.moveaxis(np.tensordot(kernel, np.moveaxis(a, axis, 0), axes=(1, 0)), 0, axis)


def field_from_char(chi: CharacteristicField, *, method: str = "fft") -> PhaseSpaceField:
    """Symplectic Fourier transform of a characteristic field onto the dual grid.

    Args:
        chi: characteristic function samples.
        method: ``"fft"`` or ``"direct"`` (dense DFT matrices, an oracle).

    Raises:
        GridError: if ``|chi|`` on the boundary exceeds 1e-12.
        NumericalValidityError: if the transform is not real to 1e-8.
    """
    v = chi.values
    boundary = max(np.abs(v[0]).max(), np.abs(v[-1]).max(), np.abs(v[:, 0]).max(), np.abs(v[:, -1]).max())
    if boundary > CHAR_BOUNDARY_TOL:
        raise GridError(
            f"grid too small for order s={chi.order.real:g}: |chi| = {boundary:.2e} on the xi boundary"
        )
    dft = _centred_dft if method == "fft" else _centred_dft_direct
    # Phi[j, m] = sum_{k,l} exp(+2i u_k y_m) exp(-2i v_l x_j) chi[k, l]
    t = dft(v, +1, axis=0)  # t[m, l]
    phi = dft(t, -1, axis=1).T  # (m, j) -> (j, m)
    phi = phi * (chi.grid.cell_area / math.pi**2)
    residue = float(np.max(np.abs(phi.imag)))
    if chi.order.imag == 0 and residue > IMAG_TOL:
        raise NumericalValidityError(f"transform has imaginary residue {residue:.2e}")
    values = phi.real if chi.order.imag == 0 else phi
    order = chi.order.real if chi.order.imag == 0 else chi.order
    return PhaseSpaceField(
        chi.grid.dual(), values, order, chi.state_tag, {"imag_residue": residue, "path": "transform"}
    )


def wigner_via_char(rho: DensityMatrix, grid: PhaseGrid, s: float = 0.0) -> PhaseSpaceField:
    """The order-``s`` function on ``grid`` by the transform route."""
    out = field_from_char(char_function(rho, s, grid.dual()))
    # the dual of the dual equals grid up to rounding; keep the caller's grid
    return PhaseSpaceField(grid, out.values, out.order, out.state_tag, out.info)


# -- smoothing ---------------------------------------------------------------


def _smoothing_kernel(grid: PhaseGrid, width: float) -> np.ndarray:
    h = grid.spacing
    n = grid.points
    offsets = h * np.arange(-(n - 1), n)
    g = np.exp(-2.0 * offsets**2 / width)
    return (2.0 / (math.pi * width)) * np.outer(g, g)


def order_smooth(field: PhaseSpaceField, s: float, *, method: str = "spectral") -> PhaseSpaceField:
    """Lower the order of ``field`` from ``t`` to ``s < t`` by Gaussian smoothing.

    Args:
        field: samples at order ``t``.
        s: target order, ``s < t``.
        method: ``"spectral"`` (FFT, zero-padded past full linear size) or
            ``"direct"`` (O(N^4) summation, for small grids only).
    """
    s = float(s)
    t = float(np.real(field.order))
    if not s < t:
        raise ConfigError(f"smoothing needs Re(s) < Re(t); got s={s}, t={t}")
    grid = field.grid
    n = grid.points
    kernel = _smoothing_kernel(grid, t - s)
    mass = kernel.sum() * grid.cell_area
    if abs(mass - 1.0) > 1e-8:
        log.warning("smoothing kernel under-resolved: discrete mass %.3e", mass)
    values = np.asarray(field.values)
    if method == "spectral":
        size = scipy.fft.next_fast_len(3 * n - 2, real=True)
        real = not np.iscomplexobj(values)
        fwd = scipy.fft.rfft2 if real else scipy.fft.fft2
        inv = scipy.fft.irfft2 if real else scipy.fft.ifft2
        spec = fwd(values, s=(size, size)) * fwd(kernel, s=(size, size))
        full = inv(spec, s=(size, size))
        out = full[n - 1 : 2 * n - 1, n - 1 : 2 * n - 1]
    elif method == "direct":
        out = np.zeros_like(values, dtype=np.result_type(values, float))
        for j in range(n):
            for m in range(n):
                out[j, m] = np.sum(values * kernel[n - 1 + j - np.arange(n)[:, None], n - 1 + m - np.arange(n)[None, :]])
    else:
        raise ConfigError(f"unknown smoothing method {method!r}")
    out = out * grid.cell_area
    info = {"path": f"smooth({t:g}->{s:g})", "kernel_mass": float(mass)}
    return PhaseSpaceField(grid, out, s, field.state_tag, info)


# -- quadrature --------------------------------------------------------------


def riemann_estimate(values: np.ndarray, h: float) -> Estimate:
    """Midpoint sum with an error estimate from a coarser sub-lattice.

    The 2h sub-lattices of a cell-centred grid are mirror images of each
    other, so for reflection-symmetric integrands each reproduces the full sum
    exactly and hides the error.  The 3h sub-lattice that is mapped onto itself
    by the reflection does not have this blind spot.  The undivided difference
    is used because lattice sums of integrands with kinks (``|W|``) converge
    erratically rather than at a clean rate.
    """
    n = values.shape[0]
    c = (2 * (n - 1)) % 3
    fine = float(np.sum(values)) * h * h
    coarse = float(np.sum(values[c::3, c::3])) * 9 * h * h
    return Estimate(fine, abs(fine - coarse) + 64 * _EPS * abs(fine))


def integrate(field: PhaseSpaceField) -> Estimate:
    """``int Phi d^2 alpha`` with its Richardson error estimate."""
    return riemann_estimate(np.real(field.values), field.grid.spacing)


def _quadratic_peak(f: np.ndarray):
    """Peak value of the quadratic through a 3x3 stencil, or None if not a maximum."""
    gx = 0.5 * (f[2, 1] - f[0, 1])
    gy = 0.5 * (f[1, 2] - f[1, 0])
    hxx = f[2, 1] - 2 * f[1, 1] + f[0, 1]
    hyy = f[1, 2] - 2 * f[1, 1] + f[1, 0]
    hxy = 0.25 * (f[2, 2] - f[2, 0] - f[0, 2] + f[0, 0])
    det = hxx * hyy - hxy * hxy
    if not (hxx < 0 and det > 0):
        return None
    dx = -(hyy * gx - hxy * gy) / det
    dy = -(hxx * gy - hxy * gx) / det
    if max(abs(dx), abs(dy)) > 1.0:
        return None
    return f[1, 1] + 0.5 * (gx * dx + gy * dy)


def _half_cell_rise(f: np.ndarray) -> float:
    """Largest rise of the local quadratic model within half a cell of the centre."""
    gx = 0.5 * abs(f[2, 1] - f[0, 1])
    gy = 0.5 * abs(f[1, 2] - f[1, 0])
    hxx = abs(f[2, 1] - 2 * f[1, 1] + f[0, 1])
    hyy = abs(f[1, 2] - 2 * f[1, 1] + f[1, 0])
    hxy = 0.25 * abs(f[2, 2] - f[2, 0] - f[0, 2] + f[0, 0])
    return 0.5 * (gx + gy) + 0.125 * (hxx + hyy + 2 * hxy)


def _refined_peak(mag: np.ndarray, i: int, j: int, step: int):
    patch = mag[i - step : i + step + 1 : step, j - step : j + step + 1 : step]
    if np.all(patch > 0):
        peak = _quadratic_peak(np.log(patch))
        if peak is not None:
            return math.exp(peak)
    return _quadratic_peak(patch)


def sup_estimate(values: np.ndarray) -> Estimate:
    """Supremum of ``|values|`` refined around the grid maximum.

    The 3x3 neighbourhood of the largest sample is fitted by a quadratic in
    ``log|v|``, which is exact for Gaussian peaks.  Repeating the fit on the
    stencil of spacing ``2h`` gives the error estimate.  Where no isolated
    peak can be fitted (ridges such as the ring of a Fock state's ``Q``) the
    grid maximum is returned with the half-cell rise of the local quadratic
    as its error.
    """
    mag = np.abs(values)
    i, j = np.unravel_index(np.argmax(mag), mag.shape)
    top = float(mag[i, j])
    floor = 64 * _EPS * top
    size = mag.shape[0]
    if not (0 < i < size - 1 and 0 < j < size - 1) or top == 0:
        return Estimate(top, floor)
    fine = _refined_peak(mag, i, j, 1)
    if fine is None:
        # ridge or flat top: no isolated peak to fit, bound the rise instead
        rise = _half_cell_rise(mag[i - 1 : i + 2, j - 1 : j + 2])
        return Estimate(top, rise + floor)
    value = max(top, float(fine))
    if 1 < i < size - 2 and 1 < j < size - 2:
        coarse = _refined_peak(mag, i, j, 2)
    else:
        coarse = None
    if coarse is None:
        return Estimate(value, max(value - top, _half_cell_rise(mag[i - 1 : i + 2, j - 1 : j + 2])) + floor)
    return Estimate(value, abs(value - max(top, float(coarse))) + floor)


def _kink_bound(values: np.ndarray, p: float, h: float) -> float:
    """Midpoint-rule error bound from the zero lines of a real field.

    ``|f|^p`` has a kink where ``f`` changes sign; a grid edge crossing it with
    jump ``d`` contributes at most about ``h^2 |d|^p / 4``.  This is
    deterministic, unlike the lattice difference, which can vanish by accident.
    """
    total = 0.0
    for a, b in ((values[1:], values[:-1]), (values[:, 1:], values[:, :-1])):
        cut = (a * b) < 0
        total += float(np.sum(np.abs(a - b)[cut] ** p))
    return 0.25 * h * h * total


def zoomed_sup(field: PhaseSpaceField, evaluate, zoom: int = 16) -> Estimate:
    """Supremum of ``|field|`` resampled around the grid maximum.

    ``evaluate`` maps complex points to field values.  The two cells either
    side of the largest sample are resampled ``zoom`` times more finely and
    :func:`sup_estimate` is applied to the patch, so ridge-shaped maxima get
    a half-cell error ``zoom^2`` times smaller.  The patch is recentred up to
    three times if its maximum sits on the edge, after which the plain grid
    estimate is returned.
    """
    coarse = sup_estimate(field.values)
    mag = np.abs(field.values)
    i, j = np.unravel_index(np.argmax(mag), mag.shape)
    centre = field.grid.alpha[i, j]
    offsets = field.grid.spacing / zoom * np.arange(-zoom, zoom + 1)
    for _ in range(3):
        pts = centre + offsets[:, None] + 1j * offsets[None, :]
        patch = np.abs(np.asarray(evaluate(pts)))
        k, m = np.unravel_index(np.argmax(patch), patch.shape)
        if 0 < k < 2 * zoom and 0 < m < 2 * zoom:
            return sup_estimate(patch)
        # the maximum sits on the patch edge: recentre on it and retry
        centre = pts[k, m]
    return coarse


def grid_pnorm(field: PhaseSpaceField, p) -> Estimate:
    """``||Phi||_p`` on the grid, ``p`` in ``[1, inf]``, with an error estimate."""
    if isinstance(p, str):
        p = float(p)
    if not p >= 1:
        raise ConfigError(f"norm exponent must lie in [1, inf], got {p!r}")
    if math.isinf(p):
        return sup_estimate(field.values)
    p = float(p)
    mag = np.abs(field.values)
    h = field.grid.spacing
    integral = riemann_estimate(mag**p, h)
    if p < 2 and np.isrealobj(field.values):
        integral = Estimate(integral.value, integral.error + _kink_bound(field.values, p, h))
    value = integral.value ** (1.0 / p)
    # propagate the error of the p-th power integral through x -> x^(1/p)
    err = value * integral.error / (p * integral.value) if integral.value > 0 else integral.error
    return Estimate(float(value), float(err))


def grid_product_trace(f1: PhaseSpaceField, f2: PhaseSpaceField) -> float:
    """``pi int W1 W2 d^2 alpha``, the overlap ``Tr(rho1 rho2)``, for two Wigner fields."""
    if f1.grid != f2.grid:
        raise ConfigError("fields live on different grids")
    if f1.order != 0 or f2.order != 0:
        raise ConfigError("product trace needs two Wigner (order 0) fields")
    return float(math.pi * f1.grid.cell_area * np.sum(np.real(f1.values) * np.real(f2.values)))


def max_abs_difference(f1: PhaseSpaceField, f2: PhaseSpaceField) -> float:
    if f1.grid != f2.grid:
        raise ConfigError("fields live on different grids")
    return float(np.max(np.abs(np.asarray(f1.values) - np.asarray(f2.values))))

