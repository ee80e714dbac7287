"""Acceptance criteria 1-12 at their stated tolerances.

Each test prints one ``criterion N PASS|FAIL ...`` line, visible with or
without ``-s``.  Defaults throughout: n_max = 63, N = 256, automatic extent.
"""

import math

import numpy as np
import pytest

from oracles import (
    LN_PI,
    displacement_expm,
    gaussian_pnorm_quad,
    squeezed_renyi,
    thermal_purity,
)
from phaseloc import StateAnalysis, auto_grid, make_state, order_smooth, wigner_via_char
from phaseloc.battery import DEFAULT_BATTERY
from phaseloc.engine import grid_pnorm, max_abs_difference
from phaseloc.fock import SqueezeParam, displacement_op, parse_descriptor, purity, squeeze_interchange, squeezing_op
from phaseloc.gaussian import (
    ExponentTriple,
    GaussianFn,
    bbl_bound,
    bbl_extremal_pair,
    gauss_convolve,
    gauss_pnorm,
    young_partner,
)
from phaseloc.inequalities import run_battery, verify_renyi_infty_case
from phaseloc.measures import renyi_wehrl, suessmann, wehrl_entropy

INF = math.inf
COHERENT = [d for d in DEFAULT_BATTERY if parse_descriptor(d).is_coherent]
NON_COHERENT = [d for d in DEFAULT_BATTERY if not parse_descriptor(d).is_coherent]
PURE_GAUSSIAN = [d for d in DEFAULT_BATTERY if d.split(":")[0] in
                 ("vacuum", "coherent", "squeezed_vacuum", "ideal_squeezed", "two_mode_squeezed_order")]


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n} {'PASS' if ok else 'FAIL'} {detail}")
        return ok

    return emit


@pytest.fixture(scope="module")
def verdicts():
    return {(v.state_tag, v.relation_id): v for v in run_battery(DEFAULT_BATTERY)}


def relation(verdicts, prefix):
    return [v for (_, rid), v in verdicts.items() if rid.startswith(prefix)]


def test_criterion_01_squeezed_renyi(analyses, report):
    worst, where = 0.0, None
    for xi in (0.0, 0.5, 1.0):
        a = analyses["vacuum" if xi == 0 else f"squeezed_vacuum:{xi}"]
        for q in (0.5, 2, 3, 5):
            err = abs(renyi_wehrl(a, q) - squeezed_renyi(q, xi))
            if err > worst:
                worst, where = err, (xi, q)
    ok = worst < 1e-5
    report(1, ok, f"max |R_q - closed form| = {worst:.2e} at (xi, q) = {where}")
    assert ok


def test_criterion_01_diagnostic_larger_cutoff(report):
    # the n_max = 63 truncation drops the far anti-squeezed tail that dominates R_0.5
    rho = make_state("squeezed_vacuum:1", 127)
    a = StateAnalysis(rho, auto_grid(rho, 512))
    err = abs(renyi_wehrl(a, 0.5) - squeezed_renyi(0.5, 1.0))
    report("1b", err < 1e-5, f"(xi, q) = (1, 0.5) at n_max=127, N=512: error {err:.2e}")
    assert err < 1e-5


def test_criterion_02_wehrl_lieb(analyses, report):
    floor = 1 + LN_PI
    eq = abs(wehrl_entropy(analyses["coherent:0.7+0.2j"]) - floor)
    excess = min(wehrl_entropy(analyses[d]) - floor for d in NON_COHERENT)
    ok = eq < 1e-5 and excess > 1e-3
    report(2, ok, f"coherent deviation {eq:.2e}; min non-coherent excess {excess:.4f}")
    assert ok


def test_criterion_03_purity_bridge(analyses, report):
    dev = max(abs(suessmann(analyses[d])[1] + math.log(purity(analyses[d].rho))) for d in DEFAULT_BATTERY)
    thermal = suessmann(analyses["thermal:1"])[1]
    oracle = -math.log(thermal_purity(1.0))
    ok = dev < 1e-6 and abs(thermal - math.log(3)) < 1e-6 and abs(oracle - math.log(3)) < 1e-12
    report(3, ok, f"max |S_delta + ln Tr rho^2| = {dev:.2e}; thermal(1) S_delta - ln 3 = {thermal - math.log(3):.2e}")
    assert ok


def test_criterion_04_norm_reformulations(analyses, report):
    pure = [d for d in DEFAULT_BATTERY if not d.startswith(("thermal", "mixture"))]
    w2 = max(abs(analyses[d].w_norm(2).value - math.pi**-0.5) for d in pure)
    forms = max(
        abs(renyi_wehrl(analyses[d], q) - renyi_wehrl(analyses[d], q, norm_form=True))
        for d in DEFAULT_BATTERY
        for q in (1.5, 2, 3, 5, 8)
    )
    ok = w2 < 1e-6 and forms < 1e-10
    report(4, ok, f"max | ||W||_2 - pi^-1/2 | = {w2:.2e}; max integral/norm-form gap {forms:.2e}")
    assert ok


def test_criterion_05_convolution_identity(analyses, report):
    conv = semi = 0.0
    for d in DEFAULT_BATTERY:
        a = analyses[d]
        direct = order_smooth(a.wigner, -1.0)
        conv = max(conv, max_abs_difference(a.husimi, direct))
        semi = max(semi, max_abs_difference(order_smooth(order_smooth(a.wigner, -0.4), -1.0), direct))
    ok = conv < 1e-6 and semi < 1e-6
    report(5, ok, f"max |Q - (2/pi) W * f2| = {conv:.2e}; semigroup gap {semi:.2e}")
    assert ok


def test_criterion_06_entropy_relation(verdicts, report):
    rel = relation(verdicts, "entropy_relation(")
    failed = [(v.state_tag, v.relation_id) for v in rel if v.slack < -v.tolerance]
    coll = [verdicts[(tag, "collision_case")] for tag, rid in verdicts if rid == "entropy_relation(2)"]
    reduction = max(abs(c.slack - verdicts[(c.state_tag, "entropy_relation(2)")].slack) for c in coll)
    coherent = [v.slack for v in coll if parse_descriptor(v.state_tag).is_coherent]
    ln2 = max(abs(s - math.log(2)) for s in coherent)
    ok = len(rel) == 5 * len(DEFAULT_BATTERY) and not failed and reduction < 1e-10 and ln2 < 1e-5
    report(6, ok, f"{len(rel)} checks, {len(failed)} negative; r=2 reduction gap {reduction:.1e}; "
                  f"coherent slack - ln 2 = {ln2:.2e}")
    assert ok


def test_criterion_07_equality_case(analyses, report):
    coherent = max(abs(verify_renyi_infty_case(analyses[d]).slack) for d in COHERENT)
    strict = min(verify_renyi_infty_case(analyses[d]).slack for d in ("fock:1", "cat:1.5,odd"))
    ok = coherent < 1e-5 and strict > 0.1
    report(7, ok, f"coherent |2R_inf - S_delta - 2 ln pi| <= {coherent:.2e}; fock(1)/odd cat gap >= {strict:.3f}")
    assert ok


def test_criterion_08_p1_case(verdicts, analyses, report):
    rel = relation(verdicts, "p1_case(")
    failed = [(v.state_tag, v.relation_id) for v in rel if v.slack < -v.tolerance]
    gauss = max(abs(analyses[d].w_norm(1).value - 1) for d in PURE_GAUSSIAN)
    band = max(abs(analyses[f"fock:{m}"].w_norm(1).value / math.sqrt(m + 1) - 1) for m in range(11))
    ok = len(rel) == 3 * len(DEFAULT_BATTERY) and not failed and gauss < 2e-6 and band < 0.15
    report(8, ok, f"{len(rel)} checks, {len(failed)} negative; Gaussian | ||W||_1 - 1 | <= {gauss:.2e}; "
                  f"Fock band {band:.3f}")
    assert ok


def test_criterion_09_p_infty_case(verdicts, report):
    rel = relation(verdicts, "p_infty_case")
    failed = [v.state_tag for v in rel if v.slack < -v.tolerance]
    ok = len(rel) == len(DEFAULT_BATTERY) and not failed
    report(9, ok, f"{len(rel)} checks, min slack {min(v.slack for v in rel):.3e}")
    assert ok


def test_criterion_10_operator_algebra(report):
    n_max = 60
    block = slice(0, n_max // 3 + 1)
    rng = np.random.default_rng(10)
    worst_comp = worst_swap = worst_expm = 0.0
    for _ in range(10):
        alpha, beta = (complex(*rng.uniform(-0.7, 0.7, 2)) for _ in range(2))
        xi = SqueezeParam(rng.uniform(0, 0.5), rng.uniform(0, 2 * math.pi))
        d_a, d_b = displacement_op(alpha, n_max), displacement_op(beta, n_max)
        phase = np.exp(0.5 * (alpha * beta.conjugate() - alpha.conjugate() * beta))
        comp = (d_a @ d_b - phase * displacement_op(alpha + beta, n_max))[block, block]
        s = squeezing_op(xi, n_max)
        swap = (s @ d_a - displacement_op(squeeze_interchange(alpha, xi), n_max) @ s)[block, block]
        worst_comp = max(worst_comp, float(np.linalg.norm(comp)))
        worst_swap = max(worst_swap, float(np.linalg.norm(swap)))
        worst_expm = max(worst_expm, float(np.linalg.norm(d_a - displacement_expm(alpha, n_max))))
    ok = worst_comp < 1e-7 and worst_swap < 1e-7 and worst_expm < 1e-7
    report(10, ok, f"composition {worst_comp:.1e}, interchange {worst_swap:.1e}, D vs expm {worst_expm:.1e}")
    assert ok


def test_criterion_11_gaussian_oracle(report):
    rng = np.random.default_rng(11)
    norm_err = 0.0
    for _ in range(20):
        a, p, dims = rng.uniform(0.1, 10), rng.uniform(1, 10), int(rng.integers(1, 3))
        ref = gaussian_pnorm_quad(a, p, dims)
        norm_err = max(norm_err, abs(gauss_pnorm(GaussianFn(1.0, a, dims=dims), p) / ref - 1))
    bbl_err = 0.0
    for _ in range(20):
        # reciprocals with 1/p + 1/q > 1, so that r is finite
        u = rng.uniform(0.125, 0.95)
        v = rng.uniform(max(1.02 - u, 0.125), 0.95)
        p, q = 1 / u, 1 / v
        r = young_partner(p, q)
        f, g = bbl_extremal_pair(p, q, rng.uniform(0.2, 5), int(rng.integers(1, 3)))
        lhs = gauss_pnorm(gauss_convolve(f, g), r)
        rhs = bbl_bound(gauss_pnorm(f, p), gauss_pnorm(g, q), ExponentTriple(p, q, r), f.dims)
        bbl_err = max(bbl_err, abs(lhs / rhs - 1))
    ok = norm_err < 1e-10 and bbl_err < 1e-12
    report(11, ok, f"pnorm vs quadrature rel {norm_err:.1e}; BBL equality rel {bbl_err:.1e}")
    assert ok


def test_criterion_12_two_path_wigner(analyses, report):
    worst, where = 0.0, None
    for d in DEFAULT_BATTERY:
        a = analyses[d]
        dev = max_abs_difference(a.wigner, wigner_via_char(a.rho, a.grid))
        if dev > worst:
            worst, where = dev, a.tag
    ok = worst < 1e-6
    report(12, ok, f"max |W_transform - W_parity| = {worst:.2e} ({where})")
    assert ok


def test_grid_pnorm_matches_closed_form_gaussian():
    # ties the grid norms used above to the Gaussian oracle
    a = StateAnalysis(make_state("coherent:0.5+0.5j"))
    f2 = GaussianFn(1.0, 2.0)
    err = max(abs(grid_pnorm(a.wigner, p).value - (2 / math.pi) * gauss_pnorm(f2, p)) for p in (1, 2, 3))
    assert err < 1e-9
