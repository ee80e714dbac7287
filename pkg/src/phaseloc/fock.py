"""Truncated Fock-space linear algebra for a single bosonic mode.

Conventions: ``a|n> = sqrt(n)|n-1>``, ``D(alpha) = exp(alpha a^dag - alpha^* a)``,
``S(xi) = exp(-(xi a^dag^2 - xi^* a^2) / 2)``.  A cutoff ``n_max`` keeps the
basis ``|0>, ..., |n_max>``.

States are constructed in an enlarged working space and then truncated, so
that operator truncation artefacts never reach the retained levels; the
population lost by the final truncation is recorded as ``tail_mass``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy.special import gammaln

from .errors import ConfigError, NumericalValidityError, TruncationWarning

__all__ = [
    "DEFAULT_N_MAX",
    "SqueezeParam",
    "DensityMatrix",
    "StateSpec",
    "make_ladder_ops",
    "laguerre_ladder",
    "displacement_op",
    "squeezing_op",
    "squeeze_interchange",
    "make_state",
    "purity",
    "mean_photon_number",
    "mean_amplitude",
    "coherent_vector",
    "coherent_expectation",
    "fidelity",
    "displace",
    "squeeze",
]

DEFAULT_N_MAX = 63

HERMITIAN_TOL = 1e-12
PSD_TOL = -1e-10
TRACE_TOL = 1e-10


def _check_cutoff(n_max) -> int:
    if isinstance(n_max, bool) or int(n_max) != n_max or n_max < 0:
        raise ConfigError(f"cutoff must be a non-negative integer, got {n_max!r}")
    return int(n_max)


def _working_dim(n_max: int) -> int:
    # room above the cutoff for operator truncation errors to die out
    return 2 * (n_max + 1) + 32


@dataclass(frozen=True)
class SqueezeParam:
    """Squeezing parameter ``xi = r * exp(i*phi)`` with ``r >= 0``."""

    r: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.r) and math.isfinite(self.phi)):
            raise ConfigError("squeeze parameters must be finite")
        if self.r < 0:
            raise ConfigError(f"squeeze magnitude r must be >= 0, got {self.r}")
        object.__setattr__(self, "phi", float(self.phi) % (2 * math.pi))

    @property
    def xi(self) -> complex:
        return self.r * complex(math.cos(self.phi), math.sin(self.phi))

    @classmethod
    def from_complex(cls, xi: complex) -> "SqueezeParam":
        xi = complex(xi)
        return cls(abs(xi), math.atan2(xi.imag, xi.real) if xi != 0 else 0.0)


def _as_squeeze(xi) -> SqueezeParam:
    if isinstance(xi, SqueezeParam):
        return xi
    if isinstance(xi, complex):
        return SqueezeParam.from_complex(xi)
    return SqueezeParam(float(xi))


def _as_amplitude(alpha) -> complex:
    alpha = complex(alpha)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise ConfigError(f"amplitude must be finite, got {alpha!r}")
    return alpha


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A density matrix in the truncated Fock basis ``|0>..|n_max>``.

    Construction validates Hermiticity, positivity and unit trace; the entry
    array is made read-only.
    """

    entries: np.ndarray
    tail_mass: float = 0.0
    tag: str = ""
    kind: str = ""

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
            raise ConfigError(f"density matrix must be square, got shape {rho.shape}")
        herm = np.max(np.abs(rho - rho.conj().T))
        if herm > HERMITIAN_TOL:
            raise NumericalValidityError(f"density matrix not Hermitian (deviation {herm:.2e})")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise NumericalValidityError(f"density matrix trace is {tr!r}, expected 1")
        lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
        if lam < PSD_TOL:
            raise NumericalValidityError(f"density matrix not positive (min eigenvalue {lam:.2e})")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_max(self) -> int:
        return self.dim - 1

    @classmethod
    def from_vector(cls, psi, *, tag: str = "", kind: str = "") -> "DensityMatrix":
        """Projector onto ``psi`` after renormalisation."""
        psi = np.asarray(psi, dtype=complex)
        norm2 = float(np.vdot(psi, psi).real)
        psi = psi / math.sqrt(norm2)
        return cls(np.outer(psi, psi.conj()), tag=tag, kind=kind)


def make_ladder_ops(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Annihilation and creation operators truncated to ``n_max``."""
    n_max = _check_cutoff(n_max)
    a = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1).astype(complex)
    return a, a.conj().T


def laguerre_ladder(x, d: int, count: int) -> np.ndarray:
    """Normalised associated Laguerre functions for the displacement matrix.

    Returns ``M[n] = sqrt(n!/(n+d)!) x^(d/2) exp(-x/2) L_n^(d)(x)`` for
    ``n = 0..count-1``, stacked along a new leading axis.  With ``x = |beta|^2``
    these are the magnitudes-with-sign of ``<n+d|D(beta)|n>``; the full element
    carries an extra phase ``exp(i d arg beta)``.

    The three-term recurrence is run on the normalised functions so that no
    factorial or power is ever formed explicitly: the seed is evaluated in
    log-space and every later value is bounded by one in magnitude.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((count,) + x.shape)
    if count == 0:
        return out
    with np.errstate(divide="ignore", under="ignore"):
        log_seed = -0.5 * x - 0.5 * gammaln(d + 1.0)
        if d > 0:
            log_seed = log_seed + 0.5 * d * np.log(x)
        out[0] = np.exp(log_seed)
    if count > 1:
        out[1] = (1.0 + d - x) * out[0] / math.sqrt(d + 1.0)
    for n in range(1, count - 1):
        out[n + 1] = ((2 * n + 1 + d - x) * out[n] - math.sqrt(n * (n + d)) * out[n - 1]) / math.sqrt(
            (n + 1) * (n + d + 1)
        )
    return out


def _displacement_matrix(beta: complex, dim: int) -> np.ndarray:
    x = abs(beta) ** 2
    theta = math.atan2(beta.imag, beta.real)
    mat = np.zeros((dim, dim), dtype=complex)
    for d in range(dim):
        m = laguerre_ladder(x, d, dim - d)
        idx = np.arange(dim - d)
        lower = m * np.exp(1j * d * theta)
        mat[idx + d, idx] = lower
        if d:
            mat[idx, idx + d] = (-1) ** d * np.conj(lower)
    return mat


def displacement_op(alpha, n_max: int = DEFAULT_N_MAX) -> np.ndarray:
    """Displacement operator ``D(alpha)`` truncated to ``n_max``.

    Matrix elements use the closed Laguerre form, so each retained element is
    exact up to rounding; only unitarity near the cutoff is lost.
    """
    n_max = _check_cutoff(n_max)
    alpha = _as_amplitude(alpha)
    if abs(alpha) ** 2 > n_max / 4:
        warnings.warn(
            f"|alpha|^2 = {abs(alpha) ** 2:.3g} exceeds n_max/4 = {n_max / 4:.3g}; "
            "truncation may be unreliable",
            TruncationWarning,
            stacklevel=2,
        )
    return _displacement_matrix(alpha, n_max + 1)


def _squeeze_generator(xi: complex, dim: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)
    ad = a.conj().T
    return -0.5 * (xi * ad @ ad - np.conj(xi) * a @ a)


def _check_squeeze_envelope(r: float, n_max: int, stacklevel: int = 3):
    if 3 * math.sinh(r) ** 2 > n_max:
        warnings.warn(
            f"3 sinh^2(r) = {3 * math.sinh(r) ** 2:.3g} exceeds n_max = {n_max}; "
            "truncation may be unreliable",
            TruncationWarning,
            stacklevel=stacklevel,
        )


def squeezing_op(xi, n_max: int = DEFAULT_N_MAX) -> np.ndarray:
    """Squeezing operator ``S(xi)`` on the retained levels.

    Computed with a Pade matrix exponential of the quadratic generator in an
    enlarged space, then cut back to ``n_max``.
    """
    n_max = _check_cutoff(n_max)
    sq = _as_squeeze(xi)
    _check_squeeze_envelope(sq.r, n_max)
    dim = _working_dim(n_max)
    full = scipy.linalg.expm(_squeeze_generator(sq.xi, dim))
    return full[: n_max + 1, : n_max + 1]


def squeeze_interchange(alpha, xi) -> complex:
    """Displacement ``beta`` with ``S(xi) D(alpha) = D(beta) S(xi)``.

    For the sign convention of ``S`` used here,
    ``beta = alpha cosh r - alpha^* exp(i phi) sinh r``.
    """
    alpha = _as_amplitude(alpha)
    sq = _as_squeeze(xi)
    return alpha * math.cosh(sq.r) - alpha.conjugate() * complex(
        math.cos(sq.phi), math.sin(sq.phi)
    ) * math.sinh(sq.r)


def coherent_vector(alpha, dim: int) -> np.ndarray:
    """Fock coefficients ``exp(-|alpha|^2/2) alpha^n / sqrt(n!)`` for ``n < dim``."""
    alpha = _as_amplitude(alpha)
    n = np.arange(dim)
    if alpha == 0:
        out = np.zeros(dim, dtype=complex)
        out[0] = 1.0
        return out
    logmag = -0.5 * abs(alpha) ** 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1.0)
    return np.exp(logmag) * np.exp(1j * n * math.atan2(alpha.imag, alpha.real))


# -- state descriptors ------------------------------------------------------


@dataclass(frozen=True)
class StateSpec:
    """A parsed state descriptor.

    ``kind`` is one of ``fock``, ``coherent``, ``squeezed_vacuum``,
    ``ideal_squeezed``, ``two_mode_squeezed_order``, ``thermal``, ``cat`` or
    ``mixture``; ``params`` holds the kind-specific arguments.
    """

    kind: str
    params: tuple = ()
    components: tuple = field(default=())

    @property
    def tag(self) -> str:
        if self.kind == "mixture":
            inner = "|".join(f"{_fmt(w)}@{spec.tag}" for w, spec in self.components)
            return f"mixture:{inner}"
        if self.kind == "fock" and self.params == (0,):
            return "vacuum"
        return self.kind + (":" + ",".join(_fmt(p) for p in self.params) if self.params else "")

    @property
    def is_coherent(self) -> bool:
        """True for displaced vacua (the Wehrl-Lieb equality class)."""
        if self.kind == "coherent":
            return True
        if self.kind == "fock":
            return self.params[0] == 0
        if self.kind in ("ideal_squeezed", "two_mode_squeezed_order", "squeezed_vacuum"):
            return self.params[-2] == 0
        return False

    def to_json(self):
        if self.kind == "mixture":
            return {
                "kind": "mixture",
                "components": [[w, spec.to_json()] for w, spec in self.components],
            }
        return self.tag


def _fmt(value) -> str:
    if isinstance(value, complex):
        if value.imag == 0:
            return repr(value.real)
        return f"{value.real!r}{value.imag:+}j"
    if isinstance(value, float):
        return repr(value)
    return str(value)


_ALIASES = {
    "vacuum": "fock",
    "number": "fock",
    "squeezed": "squeezed_vacuum",
    "coh": "coherent",
}

_KINDS = (
    "fock",
    "coherent",
    "squeezed_vacuum",
    "ideal_squeezed",
    "two_mode_squeezed_order",
    "thermal",
    "cat",
    "mixture",
)


def _parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        value = complex(t)
    except ValueError:
        raise ConfigError(f"cannot parse complex amplitude {text!r}") from None
    return _as_amplitude(value)


def _parse_float(text: str, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"cannot parse {what} {text!r} as a real number") from None
    if not math.isfinite(value):
        raise ConfigError(f"{what} must be finite")
    return value


def _parse_string(text: str) -> StateSpec:
    text = text.strip()
    head, _, rest = text.partition(":")
    head = head.strip().lower()
    kind = _ALIASES.get(head, head)
    if kind not in _KINDS:
        raise ConfigError(
            f"unknown state kind {head!r} in descriptor {text!r}; expected one of "
            + ", ".join(("vacuum",) + _KINDS)
        )
    if kind == "mixture":
        if not rest:
            raise ConfigError("mixture needs components, e.g. 'mixture:0.5@fock:0|0.5@fock:1'")
        comps = []
        for part in rest.split("|"):
            w, sep, desc = part.partition("@")
            if not sep:
                raise ConfigError(f"mixture component {part!r} must look like 'weight@descriptor'")
            comps.append((_parse_float(w, "mixture weight"), parse_descriptor(desc)))
        return _mixture(comps)
    args = [a for a in rest.split(",")] if rest else []
    if head == "vacuum":
        if args:
            raise ConfigError("'vacuum' takes no arguments")
        return StateSpec("fock", (0,))
    return _build_spec(kind, args, text)


def _build_spec(kind: str, args: Sequence[str], text: str) -> StateSpec:
    def need(lo, hi):
        if not lo <= len(args) <= hi:
            raise ConfigError(f"descriptor {text!r}: '{kind}' takes {lo}..{hi} arguments, got {len(args)}")

    if kind == "fock":
        need(1, 1)
        try:
            m = int(args[0])
        except ValueError:
            raise ConfigError(f"descriptor {text!r}: Fock index must be an integer") from None
        if m < 0:
            raise ConfigError(f"descriptor {text!r}: Fock index must be >= 0")
        return StateSpec("fock", (m,))
    if kind == "coherent":
        need(1, 1)
        return StateSpec("coherent", (_parse_complex(args[0]),))
    if kind == "squeezed_vacuum":
        need(1, 2)
        r = _parse_float(args[0], "squeeze magnitude")
        phi = _parse_float(args[1], "squeeze phase") if len(args) > 1 else 0.0
        SqueezeParam(r, phi)
        return StateSpec(kind, (r, phi))
    if kind in ("ideal_squeezed", "two_mode_squeezed_order"):
        need(2, 3)
        alpha = _parse_complex(args[0])
        r = _parse_float(args[1], "squeeze magnitude")
        phi = _parse_float(args[2], "squeeze phase") if len(args) > 2 else 0.0
        SqueezeParam(r, phi)
        return StateSpec(kind, (alpha, r, phi))
    if kind == "thermal":
        need(1, 1)
        nbar = _parse_float(args[0], "mean occupation")
        if nbar < 0:
            raise ConfigError(f"descriptor {text!r}: thermal occupation must be >= 0")
        return StateSpec("thermal", (nbar,))
    if kind == "cat":
        need(1, 2)
        alpha = _parse_complex(args[0])
        phase = args[1].strip().lower() if len(args) > 1 else "even"
        if phase == "even":
            phase_value = 0.0
        elif phase == "odd":
            phase_value = math.pi
        else:
            phase_value = _parse_float(phase, "cat phase")
        if alpha == 0 and abs(complex(math.cos(phase_value), math.sin(phase_value)) + 1) < 1e-12:
            raise ConfigError("odd cat with alpha = 0 is the zero vector")
        return StateSpec("cat", (alpha, phase_value))
    raise ConfigError(f"unknown state kind {kind!r}")  # pragma: no cover


def _mixture(comps) -> StateSpec:
    if not comps:
        raise ConfigError("mixture needs at least one component")
    weights = [w for w, _ in comps]
    if any(w < 0 for w in weights):
        raise ConfigError("mixture weights must be non-negative")
    if abs(math.fsum(weights) - 1.0) > 1e-12:
        raise ConfigError(f"mixture weights sum to {math.fsum(weights)!r}, expected 1")
    return StateSpec("mixture", components=tuple(comps))


def parse_descriptor(desc) -> StateSpec:
    """Parse a state descriptor from a string or a JSON-style mapping.

    Strings look like ``"coherent:0.7+0.2j"``, ``"squeezed_vacuum:0.5"``,
    ``"cat:1.5,odd"`` or ``"mixture:0.5@fock:0|0.5@fock:1"``.  Mappings carry
    a ``kind`` key plus named arguments (``m``, ``alpha``, ``r``, ``phi``,
    ``nbar``, ``phase``, ``components``).
    """
    if isinstance(desc, StateSpec):
        return desc
    if isinstance(desc, str):
        return _parse_string(desc)
    if isinstance(desc, dict):
        if "kind" not in desc:
            raise ConfigError(f"state descriptor {desc!r} lacks a 'kind'")
        kind = _ALIASES.get(str(desc["kind"]).lower(), str(desc["kind"]).lower())
        if str(desc["kind"]).lower() == "vacuum":
            return StateSpec("fock", (0,))
        if kind == "mixture":
            comps = desc.get("components")
            if not isinstance(comps, list):
                raise ConfigError("mixture descriptor needs a 'components' list of [weight, descriptor]")
            parsed = []
            for item in comps:
                if not (isinstance(item, (list, tuple)) and len(item) == 2):
                    raise ConfigError(f"mixture component {item!r} must be [weight, descriptor]")
                parsed.append((float(item[0]), parse_descriptor(item[1])))
            return _mixture(parsed)

        def get(*names, default=None):
            for n in names:
                if n in desc:
                    v = desc[n]
                    if isinstance(v, (list, tuple)) and len(v) == 2:
                        return f"{float(v[0])!r}{float(v[1]):+}j"
                    return str(v)
            if default is None:
                raise ConfigError(f"descriptor {desc!r} is missing {names[0]!r}")
            return default

        if kind == "fock":
            args = [get("m", "n")]
        elif kind == "coherent":
            args = [get("alpha")]
        elif kind == "squeezed_vacuum":
            args = [get("r"), get("phi", default="0")]
        elif kind in ("ideal_squeezed", "two_mode_squeezed_order"):
            args = [get("alpha"), get("r"), get("phi", default="0")]
        elif kind == "thermal":
            args = [get("nbar", "n_bar")]
        elif kind == "cat":
            args = [get("alpha"), get("phase", default="even")]
        else:
            raise ConfigError(f"unknown state kind {desc['kind']!r}")
        return _build_spec(kind, args, repr(desc))
    raise ConfigError(f"cannot interpret state descriptor {desc!r}")


# -- constructors -----------------------------------------------------------


def _pure_vector(spec: StateSpec, dim: int, n_max: int) -> np.ndarray:
    """Unnormalised-free pure state vector in a ``dim``-level working space."""
    kind, p = spec.kind, spec.params
    if kind == "fock":
        v = np.zeros(dim, dtype=complex)
        v[p[0]] = 1.0
        return v
    if kind == "coherent":
        if abs(p[0]) ** 2 > n_max / 4:
            warnings.warn(
                f"coherent amplitude |alpha|^2 = {abs(p[0]) ** 2:.3g} exceeds n_max/4",
                TruncationWarning,
                stacklevel=4,
            )
        return coherent_vector(p[0], dim)
    if kind == "cat":
        alpha, phase = p
        v = coherent_vector(alpha, dim) + complex(math.cos(phase), math.sin(phase)) * coherent_vector(-alpha, dim)
        return v
    if kind == "squeezed_vacuum":
        r, phi = p
        _check_squeeze_envelope(r, n_max, stacklevel=5)
        vac = np.zeros(dim, dtype=complex)
        vac[0] = 1.0
        return scipy.linalg.expm(_squeeze_generator(SqueezeParam(r, phi).xi, dim)) @ vac
    if kind in ("ideal_squeezed", "two_mode_squeezed_order"):
        alpha, r, phi = p
        _check_squeeze_envelope(r, n_max, stacklevel=5)
        vac = np.zeros(dim, dtype=complex)
        vac[0] = 1.0
        s_op = scipy.linalg.expm(_squeeze_generator(SqueezeParam(r, phi).xi, dim))
        d_op = _displacement_matrix(alpha, dim)
        if kind == "ideal_squeezed":
            return d_op @ (s_op @ vac)
        return s_op @ (d_op @ vac)
    raise ValueError(kind)  # pragma: no cover


def make_state(desc, n_max: int = DEFAULT_N_MAX) -> DensityMatrix:
    """Build a density matrix from a descriptor (string, mapping or StateSpec)."""
    n_max = _check_cutoff(n_max)
    spec = parse_descriptor(desc)
    dim = n_max + 1
    kind = spec.kind
    if kind == "fock" and spec.params[0] > n_max:
        raise ConfigError(f"fock({spec.params[0]}) exceeds cutoff n_max = {n_max}")
    if kind == "thermal":
        nbar = spec.params[0]
        n = np.arange(dim)
        if nbar == 0:
            pops = (n == 0).astype(float)
            tail = 0.0
        else:
            ratio = nbar / (nbar + 1.0)
            pops = ratio**n / (nbar + 1.0)
            tail = ratio ** (n_max + 1)
        return DensityMatrix(np.diag(pops / pops.sum()), tail_mass=float(tail), tag=spec.tag, kind=kind)
    if kind == "mixture":
        rho = np.zeros((dim, dim), dtype=complex)
        tail = 0.0
        for w, comp in spec.components:
            sub = make_state(comp, n_max)
            rho += w * sub.entries
            tail += w * sub.tail_mass
        tr = np.trace(rho).real
        tail += abs(1.0 - tr)
        return DensityMatrix(rho / tr, tail_mass=tail, tag=spec.tag, kind=kind)

    work = _working_dim(n_max)
    psi = _pure_vector(spec, work, n_max)
    psi = psi / np.linalg.norm(psi)
    kept = psi[:dim]
    norm2 = float(np.vdot(kept, kept).real)
    tail = max(0.0, 1.0 - norm2)
    kept = kept / math.sqrt(norm2)
    return DensityMatrix(np.outer(kept, kept.conj()), tail_mass=tail, tag=spec.tag, kind=kind)


def purity(rho: DensityMatrix) -> float:
    """``Tr(rho^2)``."""
    m = rho.entries
    return float(np.sum(np.abs(m) ** 2))


def mean_photon_number(rho: DensityMatrix) -> float:
    return float(np.real(np.sum(np.arange(rho.dim) * np.diag(rho.entries))))


def mean_amplitude(rho: DensityMatrix) -> complex:
    """``Tr(rho a)``, the phase-space centre of the state."""
    a, _ = make_ladder_ops(rho.n_max)
    return complex(np.trace(rho.entries @ a))


def coherent_expectation(rho: DensityMatrix, alpha) -> float:
    """``<alpha|rho|alpha>``."""
    c = coherent_vector(alpha, rho.dim)
    return float(np.real(np.vdot(c, rho.entries @ c)))


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2``."""
    if rho.dim != sigma.dim:
        raise ConfigError("fidelity needs states with the same cutoff")
    sq = scipy.linalg.sqrtm(rho.entries)
    inner = scipy.linalg.sqrtm(sq @ sigma.entries @ sq)
    return float(np.real(np.trace(inner)) ** 2)


def _conjugate_padded(rho: DensityMatrix, op_full: np.ndarray, tag: str) -> DensityMatrix:
    dim = rho.dim
    work = op_full.shape[0]
    big = np.zeros((work, work), dtype=complex)
    big[:dim, :dim] = rho.entries
    out = (op_full @ big @ op_full.conj().T)[:dim, :dim]
    tr = np.trace(out).real
    out = 0.5 * (out + out.conj().T) / tr
    return DensityMatrix(out, tail_mass=rho.tail_mass + max(0.0, 1.0 - tr), tag=tag, kind=rho.kind)


def displace(rho: DensityMatrix, beta) -> DensityMatrix:
    """``D(beta) rho D(beta)^dag``, evaluated in an enlarged space then truncated."""
    beta = _as_amplitude(beta)
    op = _displacement_matrix(beta, _working_dim(rho.n_max))
    return _conjugate_padded(rho, op, f"D({_fmt(beta)})[{rho.tag}]")


def squeeze(rho: DensityMatrix, xi) -> DensityMatrix:
    """``S(xi) rho S(xi)^dag``, evaluated in an enlarged space then truncated."""
    sq = _as_squeeze(xi)
    _check_squeeze_envelope(sq.r, rho.n_max)
    op = scipy.linalg.expm(_squeeze_generator(sq.xi, _working_dim(rho.n_max)))
    return _conjugate_padded(rho, op, f"S({_fmt(sq.r)},{_fmt(sq.phi)})[{rho.tag}]")
