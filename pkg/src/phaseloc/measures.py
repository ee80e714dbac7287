"""Entropic localisation measures of a state in phase space.

All quantities are in the dimensionless ``alpha`` convention (``d^2 alpha``
integration, ``Q`` and ``W`` normalised to one), so hbar never appears: the
Suessmann uncertainty area is reported as the ratio ``delta / (2 pi hbar)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .engine import (
    riemann_estimate,
    DEFAULT_POINTS,
    Estimate,
    PhaseGrid,
    PhaseSpaceField,
    auto_grid,
    grid_pnorm,
    husimi_at,
    husimi_q,
    sup_estimate,
    wigner_at,
    wigner_w,
    zoomed_sup,
)
from .errors import ConfigError
from .fock import DensityMatrix, purity

__all__ = [
    "StateAnalysis",
    "MeasureConfig",
    "MeasureReport",
    "renyi_wehrl",
    "wehrl_entropy",
    "suessmann",
    "nonclassicality",
    "build_measure_report",
    "format_exponent",
]

INF = math.inf
SUPPORT_THRESHOLD = 1e-15


def format_exponent(x):
    """JSON-friendly exponent: finite values as floats, infinity as ``"inf"``."""
    x = float(x)
    return "inf" if math.isinf(x) else x


def parse_exponent(x) -> float:
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        try:
            return float(x)
        except ValueError:
            raise ConfigError(f"cannot parse exponent {x!r}") from None
    try:
        return float(x)
    except (TypeError, ValueError):
        raise ConfigError(f"cannot parse exponent {x!r}") from None


class StateAnalysis:
    """Phase-space fields of one state on one grid, computed on demand.

    Measures and inequality verdicts for a state share one instance, so ``W``
    and ``Q`` are sampled once.
    """

    def __init__(self, rho: DensityMatrix, grid: PhaseGrid | None = None, points: int = DEFAULT_POINTS):
        self.rho = rho
        self.grid = grid if grid is not None else auto_grid(rho, points)
        self._norms: dict = {}

    @property
    def tag(self) -> str:
        return self.rho.tag

    @cached_property
    def wigner(self) -> PhaseSpaceField:
        return wigner_w(self.rho, self.grid)

    @cached_property
    def husimi(self) -> PhaseSpaceField:
        return husimi_q(self.rho, self.grid)

    @cached_property
    def purity(self) -> float:
        return purity(self.rho)

    def w_norm(self, p) -> Estimate:
        key = ("W", float(p))
        if key not in self._norms:
            if math.isinf(key[1]):
                self._norms[key] = zoomed_sup(self.wigner, lambda a: wigner_at(self.rho, a))
            else:
                self._norms[key] = grid_pnorm(self.wigner, p)
        return self._norms[key]

    def q_norm(self, q) -> Estimate:
        key = ("Q", float(q))
        if key not in self._norms:
            if math.isinf(key[1]):
                self._norms[key] = zoomed_sup(self.husimi, lambda a: husimi_at(self.rho, a))
            else:
                self._norms[key] = grid_pnorm(self.husimi, q)
        return self._norms[key]


def _q_field(source) -> PhaseSpaceField:
    if isinstance(source, StateAnalysis):
        return source.husimi
    if isinstance(source, DensityMatrix):
        return husimi_q(source, auto_grid(source))
    if isinstance(source, PhaseSpaceField):
        if source.order != -1:
            raise ConfigError(f"expected a Husimi (order -1) field, got order {source.order}")
        return source
    raise ConfigError(f"cannot take a Husimi function from {type(source).__name__}")


def _w_field(source) -> PhaseSpaceField:
    if isinstance(source, StateAnalysis):
        return source.wigner
    if isinstance(source, DensityMatrix):
        return wigner_w(source, auto_grid(source))
    if isinstance(source, PhaseSpaceField):
        if source.order != 0:
            raise ConfigError(f"expected a Wigner (order 0) field, got order {source.order}")
        return source
    raise ConfigError(f"cannot take a Wigner function from {type(source).__name__}")


def renyi_wehrl_estimate(source, q, *, norm_form: bool = False) -> Estimate:
    """Renyi-Wehrl entropy of order ``q`` with its quadrature error.

    ``q = 1`` gives the Wehrl entropy ``-int Q ln Q`` (``0 ln 0 = 0``),
    ``q = inf`` gives ``-ln max Q`` and ``q = 0`` gives the log-area where
    ``Q > 1e-15``; the last one depends on the grid by construction.  With
    ``norm_form`` (only for ``q > 1``) the value is ``q/(1-q) ln ||Q||_q``.
    """
    q = parse_exponent(q)
    if not q >= 0:
        raise ConfigError(f"Renyi order must be >= 0, got {q}")
    if isinstance(source, DensityMatrix):
        source = StateAnalysis(source)
    field_ = _q_field(source)
    vals = np.asarray(field_.values)
    h = field_.grid.spacing
    if math.isinf(q):
        peak = source.q_norm(INF) if isinstance(source, StateAnalysis) else sup_estimate(vals)
        return Estimate(-math.log(peak.value), peak.error / peak.value)
    if q == 0:
        area = riemann_estimate((vals > SUPPORT_THRESHOLD).astype(float), h)
        return Estimate(math.log(area.value), area.error / area.value)
    if q == 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            integrand = np.where(vals > 0, -vals * np.log(vals), 0.0)
        return riemann_estimate(integrand, h)
    if norm_form:
        if not q > 1:
            raise ConfigError("the norm form of the Renyi-Wehrl entropy needs q > 1")
        norm = source.q_norm(q) if isinstance(source, StateAnalysis) else grid_pnorm(field_, q)
        return Estimate(q / (1.0 - q) * math.log(norm.value), q / (q - 1.0) * norm.error / norm.value)
    power = riemann_estimate(vals**q, h)
    return Estimate(math.log(power.value) / (1.0 - q), power.error / (abs(1.0 - q) * power.value))


def renyi_wehrl(source, q, *, norm_form: bool = False) -> float:
    """Renyi-Wehrl entropy ``R_q = ln(int Q^q d^2 alpha) / (1 - q)``.

    Args:
        source: a DensityMatrix, a Husimi field or a StateAnalysis.
        q: order in ``[0, inf]``; 1 and inf use their limit formulas.
        norm_form: evaluate ``q/(1-q) ln ||Q||_q`` instead (``q > 1``).
    """
    return renyi_wehrl_estimate(source, q, norm_form=norm_form).value


def wehrl_entropy(source, *, original: bool = False) -> float:
    """Wehrl entropy ``-int Q ln Q d^2 alpha``; at least ``1 + ln pi``.

    With ``original=True`` the historical convention based on the
    unnormalised ``<alpha|rho|alpha>`` is returned, which is smaller by ``ln pi``.
    """
    value = renyi_wehrl(source, 1)
    return value - math.log(math.pi) if original else value


def suessmann_estimate(source) -> tuple[Estimate, Estimate]:
    norm = _norm2(source)
    s_delta = -math.log(math.pi) - 2.0 * math.log(norm.value)
    err = 2.0 * norm.error / norm.value
    area = math.exp(s_delta)
    return Estimate(area, area * err), Estimate(s_delta, err)


def _norm2(source) -> Estimate:
    if isinstance(source, StateAnalysis):
        return source.w_norm(2)
    return grid_pnorm(_w_field(source), 2)


def suessmann(source) -> tuple[float, float]:
    """Suessmann area ratio ``delta/(2 pi hbar) = 1/(pi int W^2)`` and ``S_delta = ln`` of it.

    Returns:
        ``(area_ratio, S_delta)``; pure states give ``(1, 0)``.
    """
    area, s = suessmann_estimate(source)
    return area.value, s.value


def nonclassicality_estimate(source) -> Estimate:
    norm = source.w_norm(1) if isinstance(source, StateAnalysis) else grid_pnorm(_w_field(source), 1)
    return Estimate(math.log(norm.value), norm.error / norm.value)


def nonclassicality(source) -> float:
    """``C = ln ||W||_1``, zero exactly when the Wigner function is non-negative."""
    return nonclassicality_estimate(source).value


# -- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class MeasureConfig:
    """Numerical parameters of a measure report."""

    q_orders: tuple = (0.5, 1.0, 2.0, 3.0, 5.0, INF)
    w_norm_orders: tuple = (1.0, 2.0, INF)
    q_norm_orders: tuple = (1.0, 2.0, INF)
    points: int = DEFAULT_POINTS
    half_extent: float | None = None
    original_wehrl: bool = False

    def grid_for(self, rho: DensityMatrix) -> PhaseGrid:
        if self.half_extent is None:
            return auto_grid(rho, self.points)
        return PhaseGrid(self.half_extent, self.points)


@dataclass
class MeasureReport:
    """All localisation measures of one state with the numerics behind them."""

    state_tag: str
    renyi_wehrl: list
    wehrl: float
    suessmann_entropy: float
    suessmann_area_over_2pi_hbar: float
    nonclassicality: float
    purity: float
    w_norms: list
    q_norms: list
    numerics: dict = field(default_factory=dict)
    wehrl_original: float | None = None

    def to_dict(self) -> dict:
        out = {
            "state_tag": self.state_tag,
            "renyi_wehrl": [[format_exponent(q), v] for q, v in self.renyi_wehrl],
            "wehrl": self.wehrl,
            "suessmann_entropy": self.suessmann_entropy,
            "suessmann_area_over_2pi_hbar": self.suessmann_area_over_2pi_hbar,
            "nonclassicality": self.nonclassicality,
            "purity": self.purity,
            "w_norms": [[format_exponent(p), v] for p, v in self.w_norms],
            "q_norms": [[format_exponent(p), v] for p, v in self.q_norms],
            "numerics": self.numerics,
        }
        if self.wehrl_original is not None:
            out["wehrl_original"] = self.wehrl_original
        return out


def build_measure_report(
    rho: DensityMatrix,
    config: MeasureConfig | None = None,
    analysis: StateAnalysis | None = None,
) -> MeasureReport:
    """Compute every measure of ``rho`` and embed cross-identity checks.

    The embedded checks compare ``S_delta`` with ``-ln Tr rho^2`` (phase space
    against Hilbert space) and ``R_2`` with its norm form.
    """
    config = config or MeasureConfig()
    if analysis is None:
        analysis = StateAnalysis(rho, config.grid_for(rho))
    errors = {}
    renyi = []
    for q in config.q_orders:
        q = parse_exponent(q)
        est = renyi_wehrl_estimate(analysis, q)
        renyi.append((q, est.value))
        errors[f"renyi_wehrl[{format_exponent(q)}]"] = est.error
    wehrl = renyi_wehrl_estimate(analysis, 1)
    errors["wehrl"] = wehrl.error
    area, s_delta = suessmann_estimate(analysis)
    errors["suessmann_entropy"] = s_delta.error
    c_rho = nonclassicality_estimate(analysis)
    errors["nonclassicality"] = c_rho.error
    w_norms, q_norms = [], []
    for p in config.w_norm_orders:
        p = parse_exponent(p)
        est = analysis.w_norm(p)
        w_norms.append((p, est.value))
        errors[f"w_norm[{format_exponent(p)}]"] = est.error
    for p in config.q_norm_orders:
        p = parse_exponent(p)
        est = analysis.q_norm(p)
        q_norms.append((p, est.value))
        errors[f"q_norm[{format_exponent(p)}]"] = est.error

    pur = analysis.purity
    r2 = renyi_wehrl_estimate(analysis, 2).value
    r2_norm = renyi_wehrl_estimate(analysis, 2, norm_form=True).value
    grid = analysis.grid
    numerics = {
        "n_max": rho.n_max,
        "tail_mass": rho.tail_mass,
        "grid": grid.to_dict(),
        "q_clipped": analysis.husimi.info.get("clipped", 0),
        "grid_dependent": [f"renyi_wehrl[{format_exponent(q)}]" for q, _ in renyi if q == 0],
        "error_estimates": errors,
        "cross_checks": {
            "suessmann_vs_purity": s_delta.value + math.log(pur),
            "renyi2_integral_vs_norm_form": r2 - r2_norm,
        },
    }
    return MeasureReport(
        state_tag=rho.tag,
        renyi_wehrl=renyi,
        wehrl=wehrl.value,
        suessmann_entropy=s_delta.value,
        suessmann_area_over_2pi_hbar=area.value,
        nonclassicality=c_rho.value,
        purity=pur,
        w_norms=w_norms,
        q_norms=q_norms,
        numerics=numerics,
        wehrl_original=wehrl.value - math.log(math.pi) if config.original_wehrl else None,
    )
