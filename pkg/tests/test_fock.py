import cmath
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import displacement_expm, squeezed_vacuum_coefficients, thermal_purity
from phaseloc import ConfigError, NumericalValidityError, TruncationWarning
from phaseloc.fock import (
    DensityMatrix,
    SqueezeParam,
    coherent_expectation,
    coherent_vector,
    displace,
    displacement_op,
    fidelity,
    laguerre_ladder,
    make_ladder_ops,
    make_state,
    mean_amplitude,
    mean_photon_number,
    parse_descriptor,
    purity,
    squeeze,
    squeeze_interchange,
    squeezing_op,
)

amplitudes = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)
squeezes = st.floats(0.0, 0.5)
phases = st.floats(0.0, 2 * math.pi)


def frob(a, b):
    return float(np.linalg.norm(a - b))


# -- ladder operators ---------------------------------------------------------


def test_ladder_commutator_is_identity_below_cutoff():
    a, ad = make_ladder_ops(10)
    comm = a @ ad - ad @ a
    np.testing.assert_allclose(comm[:-1, :-1], np.eye(10), atol=1e-14)
    assert comm[-1, -1] == pytest.approx(-10)


def test_number_operator_diagonal():
    a, ad = make_ladder_ops(6)
    np.testing.assert_allclose(np.diag(ad @ a).real, np.arange(7), atol=1e-14)


# -- displacement --------------------------------------------------------------


def test_laguerre_ladder_matches_scipy():
    from scipy.special import eval_genlaguerre, gammaln

    x = np.array([0.1, 0.7, 2.5])
    for d in (0, 1, 4):
        m = laguerre_ladder(x, d, 12)
        for n in range(12):
            ref = np.exp(0.5 * (gammaln(n + 1) - gammaln(n + d + 1)) - x / 2) * x ** (d / 2) * eval_genlaguerre(n, d, x)
            np.testing.assert_allclose(m[n], ref, rtol=1e-11, atol=1e-15)


@given(amplitudes)
@settings(max_examples=25, deadline=None)
def test_displacement_matches_matrix_exponential(alpha):
    d = displacement_op(alpha, 20)
    assert frob(d, displacement_expm(alpha, 20)) < 1e-10


def test_displacement_of_vacuum_is_coherent_state():
    alpha = 0.8 - 0.3j
    d = displacement_op(alpha, 40)
    np.testing.assert_allclose(d[:, 0], coherent_vector(alpha, 41), atol=1e-13)


@given(amplitudes, amplitudes)
@settings(max_examples=20, deadline=None)
def test_displacement_composition_phase_law(alpha, beta):
    n_max = 60
    lhs = displacement_op(alpha, n_max) @ displacement_op(beta, n_max)
    phase = cmath.exp(0.5 * (alpha * beta.conjugate() - alpha.conjugate() * beta))
    rhs = phase * displacement_op(alpha + beta, n_max)
    block = slice(0, n_max // 3 + 1)
    assert frob(lhs[block, block], rhs[block, block]) < 1e-8


def test_displacement_warns_outside_envelope():
    with pytest.warns(TruncationWarning):
        displacement_op(3.0, 20)


# -- squeezing -------------------------------------------------------------------


@given(squeezes, phases)
@settings(max_examples=20, deadline=None)
def test_squeezed_vacuum_matches_series(r, phi):
    s = squeezing_op(SqueezeParam(r, phi), 40)
    np.testing.assert_allclose(s[:, 0], squeezed_vacuum_coefficients(r, phi, 41), atol=1e-12)


@given(amplitudes, squeezes, phases)
@settings(max_examples=20, deadline=None)
def test_squeeze_interchange_law(alpha, r, phi):
    n_max = 60
    xi = SqueezeParam(r, phi)
    beta = squeeze_interchange(alpha, xi)
    s = squeezing_op(xi, n_max)
    lhs = s @ displacement_op(alpha, n_max)
    rhs = displacement_op(beta, n_max) @ s
    block = slice(0, n_max // 3 + 1)
    assert frob(lhs[block, block], rhs[block, block]) < 1e-8


def test_interchange_sign_is_not_plus():
    alpha, xi = 0.6 + 0.2j, SqueezeParam(0.4, 0.3)
    s = squeezing_op(xi, 60)
    lhs = (s @ displacement_op(alpha, 60))[:21, :21]
    plus = alpha * math.cosh(xi.r) + alpha.conjugate() * cmath.exp(1j * xi.phi) * math.sinh(xi.r)
    wrong = (displacement_op(plus, 60) @ s)[:21, :21]
    assert frob(lhs, wrong) > 0.1


def test_squeeze_param_normalises_phase():
    assert SqueezeParam(0.3, 2 * math.pi + 0.1).phi == pytest.approx(0.1)
    assert SqueezeParam.from_complex(-0.5j).r == pytest.approx(0.5)
    with pytest.raises(ConfigError):
        SqueezeParam(-0.1)


def test_squeezing_warns_outside_envelope():
    with pytest.warns(TruncationWarning):
        squeezing_op(2.0, 20)


# -- density matrices -----------------------------------------------------------


def test_density_matrix_validation():
    with pytest.raises(NumericalValidityError):
        DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(NumericalValidityError):
        DensityMatrix(np.diag([0.7, 0.7]))
    with pytest.raises(NumericalValidityError):
        DensityMatrix(np.diag([1.5, -0.5]))
    rho = DensityMatrix(np.diag([0.25, 0.75]))
    with pytest.raises(ValueError):
        rho.entries[0, 0] = 1.0


@pytest.mark.parametrize(
    "desc, tag",
    [
        ("vacuum", "vacuum"),
        ("fock:0", "vacuum"),
        ("coherent:0.7+0.2i", "coherent:0.7+0.2j"),
        ("squeezed:0.5", "squeezed_vacuum:0.5,0.0"),
        ("cat:1.5,odd", f"cat:1.5,{math.pi!r}"),
        ({"kind": "thermal", "nbar": 1}, "thermal:1.0"),
        ({"kind": "coherent", "alpha": [0.5, -0.5]}, "coherent:0.5-0.5j"),
        ("mixture:0.5@fock:0|0.5@fock:1", "mixture:0.5@vacuum|0.5@fock:1"),
    ],
)
def test_descriptor_tags(desc, tag):
    assert parse_descriptor(desc).tag == tag


@pytest.mark.parametrize(
    "desc",
    ["coherant:1", "fock:-1", "fock:1.5", "coherent:", "thermal:-1", "mixture:0.5@fock:0|0.4@fock:1",
     "squeezed_vacuum:-0.2", "cat:0,odd", {"alpha": 1}, 42],
)
def test_bad_descriptors(desc):
    with pytest.raises(ConfigError):
        parse_descriptor(desc)


def test_descriptor_tag_round_trips():
    for desc in ("coherent:0.5+0.5j", "ideal_squeezed:0.5+0.3j,0.4", "mixture:0.5@fock:0|0.5@fock:1"):
        tag = parse_descriptor(desc).tag
        assert parse_descriptor(tag).tag == tag


def test_is_coherent_flags():
    assert parse_descriptor("vacuum").is_coherent
    assert parse_descriptor("coherent:1").is_coherent
    assert parse_descriptor("ideal_squeezed:1,0").is_coherent
    assert not parse_descriptor("squeezed_vacuum:0.1").is_coherent
    assert not parse_descriptor("fock:1").is_coherent
    assert not parse_descriptor("thermal:0.5").is_coherent


@pytest.mark.parametrize("nbar", [0.25, 1.0, 2.0])
def test_thermal_purity_matches_series(nbar):
    rho = make_state(f"thermal:{nbar}")
    assert purity(rho) == pytest.approx(thermal_purity(nbar), abs=1e-12 + rho.tail_mass)
    assert mean_photon_number(rho) == pytest.approx(nbar, abs=1e-6)


def test_thermal_one_purity_is_one_third():
    assert purity(make_state("thermal:1")) == pytest.approx(1 / 3, abs=1e-15)


@pytest.mark.parametrize("desc", ["coherent:0.7+0.2j", "squeezed_vacuum:0.5", "cat:1.5,odd", "fock:5",
                                  "ideal_squeezed:0.5+0.3j,0.4"])
def test_pure_states_are_pure(desc):
    rho = make_state(desc)
    assert purity(rho) == pytest.approx(1.0, abs=1e-14)
    assert rho.tail_mass < 1e-12


def test_cat_parity():
    odd = make_state("cat:1.5,odd").entries
    even = make_state("cat:1.5,even").entries
    n = np.arange(odd.shape[0])
    assert np.allclose(np.diag(odd).real[n % 2 == 0], 0, atol=1e-15)
    assert np.allclose(np.diag(even).real[n % 2 == 1], 0, atol=1e-15)


def test_squeeze_orders_differ_by_interchange():
    alpha, r = 0.5 + 0.3j, 0.4
    ideal = make_state(f"ideal_squeezed:{alpha},{r}")
    other = make_state(f"two_mode_squeezed_order:{alpha},{r}")
    assert mean_amplitude(ideal) == pytest.approx(alpha, abs=1e-12)
    assert mean_amplitude(other) == pytest.approx(squeeze_interchange(alpha, r), abs=1e-12)
    assert fidelity(ideal, other) < 0.99


def test_tail_mass_of_squeezed_state_at_default_cutoff():
    rho = make_state("squeezed_vacuum:1")
    assert 1e-9 < rho.tail_mass < 1e-8
    assert make_state("squeezed_vacuum:1", 127).tail_mass < 1e-15


def test_coherent_expectation_gives_overlap():
    rho = make_state("coherent:2")
    assert coherent_expectation(rho, 0) == pytest.approx(math.exp(-4), rel=1e-12)


@given(amplitudes)
@settings(max_examples=15, deadline=None)
def test_displace_moves_the_centre(beta):
    rho = displace(make_state("squeezed_vacuum:0.3", 30), beta)
    assert mean_amplitude(rho) == pytest.approx(beta, abs=1e-9)


def test_squeeze_of_vacuum_matches_constructor():
    a = squeeze(make_state("vacuum", 30), SqueezeParam(0.5, 0.7))
    b = make_state("squeezed_vacuum:0.5,0.7", 30)
    np.testing.assert_allclose(a.entries, b.entries, atol=1e-12)


def test_fock_beyond_cutoff_rejected():
    with pytest.raises(ConfigError):
        make_state("fock:70")


def test_mixture_weights():
    rho = make_state("mixture:0.25@fock:0|0.75@fock:2")
    np.testing.assert_allclose(np.diag(rho.entries).real[:3], [0.25, 0, 0.75], atol=1e-15)


def test_wide_coherent_state_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        make_state("coherent:5", 20)
    assert any(issubclass(w.category, TruncationWarning) for w in caught)
