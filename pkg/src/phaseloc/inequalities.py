"""Verdicts for the phase-space entropy relations and their special cases.

Each ``verify_*`` function takes a :class:`StateAnalysis` (so a state's
fields are sampled once) and returns an :class:`InequalityVerdict` with
``slack = rhs - lhs``.  Relations that compare entropies are stated in their
logarithmic form so that slacks are additive: the general relation

    ||Q||_r <= (C_q / C_r)^2 (2/pi) ||W||_2 ||f_2||_q,    q = 2r / (r + 2)

is reported as ``R_r >= -(r/(r-1)) ln B`` with ``B`` the right-hand side,
which at ``r = 2`` is literally ``S_delta + ln pi <= R_2``.  The norm form is
kept in ``details``.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .engine import DEFAULT_POINTS, PhaseGrid, auto_grid, max_abs_difference, order_smooth
from .errors import ConfigError, PhaseLocError
from .fock import DEFAULT_N_MAX, make_state, parse_descriptor, purity
from .gaussian import INF, GaussianFn, bbl_constant, gauss_pnorm
from .measures import (
    StateAnalysis,
    format_exponent,
    parse_exponent,
    renyi_wehrl_estimate,
    suessmann_estimate,
)

__all__ = [
    "InequalityVerdict",
    "BatteryConfig",
    "RELATIONS",
    "entropy_exponents",
    "verify_entropy_relation",
    "verify_collision_case",
    "verify_renyi_infty_case",
    "verify_p1_case",
    "verify_p_infty_case",
    "verify_wehrl_lieb",
    "verify_purity_norm_identity",
    "verify_convolution_identity",
    "run_battery",
    "summarize",
    "verdict_table",
]

TOLERANCE_FLOOR = 1e-8
EQUALITY_FACTOR = 10.0
IDENTITY_TOLERANCE = 1e-6
TAIL_WARNING = 1e-10

RELATIONS = (
    "entropy_relation",
    "collision_case",
    "renyi_infty_case",
    "p1_case",
    "p_infty_case",
    "wehrl_lieb",
    "purity_norm_identity",
    "convolution_identity",
)
DEFAULT_R_ORDERS = (2, 3, 4, 8, INF)
DEFAULT_P1_ORDERS = (1, 2, INF)

_LN_PI = math.log(math.pi)
# f_2(alpha) = exp(-2 |alpha|^2), the kernel linking W and Q
_F2 = GaussianFn(1.0, 2.0)


@dataclass
class InequalityVerdict:
    """Outcome of checking one relation on one state."""

    relation_id: str
    state_tag: str
    lhs: float
    rhs: float
    slack: float
    tolerance: float
    passed: bool
    equality_expected: bool = False
    equality_tolerance: float | None = None
    warnings: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    error: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _verdict(relation_id, analysis, lhs, rhs, tolerance, *, equality=False, equality_tolerance=None, details=None):
    lhs, rhs, tolerance = float(lhs), float(rhs), float(tolerance)
    slack = rhs - lhs
    eq_tol = None
    if equality:
        eq_tol = float(equality_tolerance if equality_tolerance is not None else EQUALITY_FACTOR * tolerance)
    passed = slack >= -tolerance and (not equality or abs(slack) <= eq_tol)
    return InequalityVerdict(
        relation_id=relation_id,
        state_tag=analysis.tag,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        tolerance=tolerance,
        passed=bool(passed),
        equality_expected=equality,
        equality_tolerance=eq_tol,
        details=details or {},
    )


def _order_label(x) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf"
    return str(int(x)) if x.is_integer() else repr(x)


def _is_coherent(analysis: StateAnalysis) -> bool:
    try:
        return parse_descriptor(analysis.tag).is_coherent
    except PhaseLocError:
        return False


def entropy_exponents(r):
    """``q = 2r/(r+2)`` for the entropy relation, exact for int/Fraction ``r``.

    ``r = inf`` gives ``q = 2``; ``r < 2`` would make ``q < 1`` and is rejected.
    """
    if isinstance(r, str):
        r = parse_exponent(r)
    if isinstance(r, float) and not math.isinf(r) and r.is_integer():
        r = int(r)
    if not r >= 2:
        raise ConfigError(f"the entropy relation needs r >= 2, got {r}")
    if isinstance(r, float) and math.isinf(r):
        return INF, Fraction(2)
    if isinstance(r, int):
        r = Fraction(r)
    return r, 2 * r / (r + 2)


def verify_entropy_relation(analysis: StateAnalysis, r) -> InequalityVerdict:
    """General relation for ``r >= 2`` in entropic form (``lhs <= R_r``)."""
    r, q = entropy_exponents(r)
    rf, qf = float(r), float(q)
    w2 = analysis.w_norm(2)
    f2q = gauss_pnorm(_F2, q)
    const = (bbl_constant(q) / bbl_constant(r)) ** 2
    bound = const * (2.0 / math.pi) * w2.value * f2q
    weight = 1.0 if math.isinf(rf) else rf / (rf - 1.0)
    lhs = -weight * math.log(bound)
    renyi = renyi_wehrl_estimate(analysis, rf, norm_form=True)
    tol = renyi.error + weight * w2.error / w2.value + TOLERANCE_FLOOR
    qr = analysis.q_norm(rf)
    details = {
        "r": format_exponent(r),
        "q": format_exponent(q),
        "q_norm_r": qr.value,
        "bbl_bound": bound,
        "norm_slack": bound - qr.value,
        "constant_factor": const,
        "f2_norm_q": f2q,
    }
    equality = math.isinf(rf) and _is_coherent(analysis)
    return _verdict(f"entropy_relation({_order_label(r)})", analysis, lhs, renyi.value, tol,
                    equality=equality, details=details)


def verify_collision_case(analysis: StateAnalysis) -> InequalityVerdict:
    """``S_delta + ln pi <= R_2``."""
    _, s_delta = suessmann_estimate(analysis)
    r2 = renyi_wehrl_estimate(analysis, 2, norm_form=True)
    tol = s_delta.error + r2.error + TOLERANCE_FLOOR
    return _verdict("collision_case", analysis, s_delta.value + _LN_PI, r2.value, tol,
                    details={"suessmann_entropy": s_delta.value})


def verify_renyi_infty_case(analysis: StateAnalysis) -> InequalityVerdict:
    """``S_delta + 2 ln pi <= 2 R_inf``, with equality for coherent states."""
    _, s_delta = suessmann_estimate(analysis)
    rinf = renyi_wehrl_estimate(analysis, INF)
    tol = s_delta.error + 2.0 * rinf.error + TOLERANCE_FLOOR
    return _verdict("renyi_infty_case", analysis, s_delta.value + 2.0 * _LN_PI, 2.0 * rinf.value, tol,
                    equality=_is_coherent(analysis),
                    details={"suessmann_entropy": s_delta.value, "renyi_inf": rinf.value})


def verify_p1_case(analysis: StateAnalysis, q) -> InequalityVerdict:
    """``||Q||_q <= (2/pi) ||W||_1 ||f_2||_q`` for ``q`` in ``[1, inf]``."""
    q = parse_exponent(q)
    if not q >= 1:
        raise ConfigError(f"p1_case needs q >= 1, got {q}")
    qn = analysis.q_norm(q)
    w1 = analysis.w_norm(1)
    factor = gauss_pnorm(_F2, q)
    rhs = (2.0 / math.pi) * w1.value * factor
    tol = qn.error + (2.0 / math.pi) * factor * w1.error + TOLERANCE_FLOOR
    return _verdict(f"p1_case({_order_label(q)})", analysis, qn.value, rhs, tol,
                    details={"w_norm_1": w1.value, "f2_norm_q": factor})


def verify_p_infty_case(analysis: StateAnalysis) -> InequalityVerdict:
    """``||Q||_inf <= ||W||_inf``."""
    qn = analysis.q_norm(INF)
    wn = analysis.w_norm(INF)
    return _verdict("p_infty_case", analysis, qn.value, wn.value, qn.error + wn.error + TOLERANCE_FLOOR)


def verify_wehrl_lieb(analysis: StateAnalysis) -> InequalityVerdict:
    """Wehrl entropy ``>= 1 + ln pi``, with equality for coherent states."""
    wehrl = renyi_wehrl_estimate(analysis, 1)
    return _verdict("wehrl_lieb", analysis, 1.0 + _LN_PI, wehrl.value, wehrl.error + TOLERANCE_FLOOR,
                    equality=_is_coherent(analysis))


def verify_purity_norm_identity(analysis: StateAnalysis) -> InequalityVerdict:
    """``S_delta`` from the grid against ``-ln Tr rho^2`` from the matrix."""
    _, s_delta = suessmann_estimate(analysis)
    exact = -math.log(purity(analysis.rho))
    tol = max(IDENTITY_TOLERANCE, s_delta.error + TOLERANCE_FLOOR)
    return _verdict("purity_norm_identity", analysis, s_delta.value, exact, tol,
                    equality=True, equality_tolerance=tol)


def verify_convolution_identity(analysis: StateAnalysis) -> InequalityVerdict:
    """Max deviation between ``Q`` and the smoothed ``W``; expected to vanish."""
    smoothed = order_smooth(analysis.wigner, -1.0)
    dev = max_abs_difference(analysis.husimi, smoothed)
    return _verdict("convolution_identity", analysis, dev, 0.0, IDENTITY_TOLERANCE,
                    equality=True, equality_tolerance=IDENTITY_TOLERANCE)


# -- battery ----------------------------------------------------------------


@dataclass(frozen=True)
class BatteryConfig:
    """What to check and on which numerical grid."""

    relations: tuple = RELATIONS
    r_orders: tuple = DEFAULT_R_ORDERS
    p1_q_orders: tuple = DEFAULT_P1_ORDERS
    cutoff: int = DEFAULT_N_MAX
    points: int = DEFAULT_POINTS
    half_extent: float | None = None

    def __post_init__(self):
        unknown = [r for r in self.relations if r not in RELATIONS]
        if unknown:
            raise ConfigError(f"unknown relation(s) {unknown}; choose from {list(RELATIONS)}")
        if "entropy_relation" in self.relations and not self.r_orders:
            raise ConfigError("r_orders must be non-empty")
        if "p1_case" in self.relations and not self.p1_q_orders:
            raise ConfigError("p1_q_orders must be non-empty")

    def tasks(self) -> list[tuple[str, object]]:
        out = []
        for name in RELATIONS:
            if name not in self.relations:
                continue
            if name == "entropy_relation":
                out += [(name, r) for r in self.r_orders]
            elif name == "p1_case":
                out += [(name, q) for q in self.p1_q_orders]
            else:
                out.append((name, None))
        return out

    def grid_for(self, rho) -> PhaseGrid:
        if self.half_extent is None:
            return auto_grid(rho, self.points)
        return PhaseGrid(self.half_extent, self.points)


def _task_id(name, arg) -> str:
    return name if arg is None else f"{name}({_order_label(parse_exponent(arg))})"


def _dispatch(analysis, name, arg):
    if name == "entropy_relation":
        return verify_entropy_relation(analysis, arg)
    if name == "p1_case":
        return verify_p1_case(analysis, arg)
    return {
        "collision_case": verify_collision_case,
        "renyi_infty_case": verify_renyi_infty_case,
        "p_infty_case": verify_p_infty_case,
        "wehrl_lieb": verify_wehrl_lieb,
        "purity_norm_identity": verify_purity_norm_identity,
        "convolution_identity": verify_convolution_identity,
    }[name](analysis)


def _failed(relation_id, tag, exc, notes):
    return InequalityVerdict(
        relation_id=relation_id,
        state_tag=tag,
        lhs=math.nan,
        rhs=math.nan,
        slack=math.nan,
        tolerance=math.nan,
        passed=False,
        warnings=list(notes),
        error=f"{type(exc).__name__}: {exc}",
    )


def _state_verdicts(desc, config: BatteryConfig) -> list[InequalityVerdict]:
    tasks = config.tasks()
    tag = str(desc)
    notes: list[str] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            tag = parse_descriptor(desc).tag
            rho = make_state(desc, config.cutoff)
            analysis = StateAnalysis(rho, config.grid_for(rho))
        except Exception as exc:  # noqa: BLE001 - reported per state
            return [_failed(_task_id(n, a), tag, exc, notes) for n, a in tasks]
        if rho.tail_mass > TAIL_WARNING:
            notes.append(f"TruncationWarning: truncated tail mass {rho.tail_mass:.3g} at n_max={rho.n_max}")
        out = []
        for name, arg in tasks:
            try:
                out.append(_dispatch(analysis, name, arg))
            except Exception as exc:  # noqa: BLE001 - one failure must not stop the batch
                out.append(_failed(_task_id(name, arg), tag, exc, []))
    notes += [f"{w.category.__name__}: {w.message}" for w in caught]
    notes = list(dict.fromkeys(notes))
    for v in out:
        v.warnings = notes + [n for n in v.warnings if n not in notes]
    return out


def run_battery(states, config: BatteryConfig | None = None, *, workers: int = 1) -> list[InequalityVerdict]:
    """Check every configured relation on every state.

    Verdicts come back in state order, then in the fixed relation order of
    :data:`RELATIONS`, whatever ``workers`` is.  Errors in one state or
    relation become failed verdicts carrying the message.
    """
    config = config or BatteryConfig()
    states = list(states)
    if workers > 1 and len(states) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_state_verdicts, states, [config] * len(states)))
    else:
        chunks = [_state_verdicts(s, config) for s in states]
    return [v for chunk in chunks for v in chunk]


def summarize(verdicts) -> dict:
    """Counts and minimum slack per relation id."""
    per = {}
    for v in verdicts:
        entry = per.setdefault(v.relation_id, {"count": 0, "failed": 0, "min_slack": None, "min_slack_state": None})
        entry["count"] += 1
        if not v.passed:
            entry["failed"] += 1
        if v.error is None and (entry["min_slack"] is None or v.slack < entry["min_slack"]):
            entry["min_slack"] = v.slack
            entry["min_slack_state"] = v.state_tag
    failed = sum(1 for v in verdicts if not v.passed)
    return {"total": len(verdicts), "failed": failed, "passed": len(verdicts) - failed, "relations": per}


def verdict_table(verdicts) -> str:
    """Fixed-width text table, one row per verdict."""
    head = f"{'state':<34} {'relation':<26} {'lhs':>14} {'rhs':>14} {'slack':>11} {'tol':>9} {'eq':>2} {'ok':>4}"
    rows = [head, "-" * len(head)]
    for v in verdicts:
        rows.append(
            f"{v.state_tag[:34]:<34} {v.relation_id[:26]:<26} {v.lhs:>14.8g} {v.rhs:>14.8g} "
            f"{v.slack:>11.3e} {v.tolerance:>9.1e} {'=' if v.equality_expected else '':>2} "
            f"{'PASS' if v.passed else 'FAIL':>4}"
        )
    return "\n".join(rows) + "\n"
