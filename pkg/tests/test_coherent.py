import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from closed_forms import even_odd_cs, ho_susy_cs, pt_cs, pt_susy_cs, standard_cs
from multiphoton import (
    CoherentStateSpec, ConfigError, ModelSpec, SusyConfig, TruncationFailure, coefficients,
    eigen_residual, phi, rho,
)
from multiphoton.coherent import log_phi, log_rho

HO = ModelSpec.harmonic()
PT = ModelSpec.poschl_teller(2.0)
HALF = SusyConfig([-0.5])


def moduli(spec, n_max):
    vec = coefficients(spec)
    out = np.zeros(n_max + 1)
    a = np.abs(vec.amplitudes)[: n_max + 1]
    out[: len(a)] = a
    return out


@pytest.mark.parametrize("model, m, j, n, expected", [
    (HO, 2, 0, 1, 2.0), (HO, 3, 2, 0, 1.0), (PT, 2, 0, 1, 15.0),
])
def test_rho(model, m, j, n, expected):
    assert rho(model, m, j, n) == pytest.approx(expected)


@pytest.mark.parametrize("j, n, expected", [(0, 1, 6.0), (1, 1, 48.0), (0, 0, 1.0)])
def test_phi(j, n, expected):
    assert phi(HO, HALF, 2, j, n) == pytest.approx(expected)


def test_phi_rho_edge_cases():
    assert phi(PT, SusyConfig([-1.0, -2.0]), 3, 1, 0) == 1.0
    assert phi(PT, None, 2, 1, 4) == rho(PT, 2, 1, 4)
    with pytest.raises(ValueError):
        rho(HO, 2, 2, 1)


@given(st.integers(0, 15), st.integers(1, 4), st.data())
def test_log_forms_match_direct_products(n, m, data):
    j = data.draw(st.integers(0, m - 1))
    assert log_rho(PT, m, j, n) == pytest.approx(math.log(rho(PT, m, j, n)), abs=1e-9)
    assert log_phi(PT, HALF, m, j, n) == pytest.approx(math.log(phi(PT, HALF, m, j, n)), abs=1e-9)


def test_large_index_stays_finite():
    # (2n)!-type growth overflows doubles long before n = 400
    assert math.isinf(rho(HO, 2, 0, 200))
    assert math.isfinite(log_rho(HO, 2, 0, 400))
    vec = coefficients(CoherentStateSpec(HO, 2, 0, 45.0))
    assert np.all(np.isfinite(vec.amplitudes))


def test_standard_coherent_state():
    spec = CoherentStateSpec(HO, 1, 0, 1.0, tol=1e-14)
    vec = coefficients(spec)
    n = np.arange(vec.n_trunc + 1)
    expected = math.exp(-0.5) / np.sqrt([float(math.factorial(int(k))) for k in n])
    assert np.max(np.abs(vec.amplitudes - expected)) < 1e-12


@pytest.mark.parametrize("model, cfg, m, j", [
    (HO, None, 1, 0), (HO, None, 3, 2), (PT, HALF, 2, 1), (PT, SusyConfig([-0.5, -3.0]), 2, 0),
])
def test_zero_eigenvalue_is_extremal_state(model, cfg, m, j):
    spec = CoherentStateSpec(model, m, j, 0, cfg)
    vec = coefficients(spec)
    assert list(vec.levels) == [j] and vec.amplitudes[0] == 1
    assert eigen_residual(spec, vec) == 0.0


def test_odd_ho_state():
    vec = coefficients(CoherentStateSpec(HO, 2, 1, 0.5))
    n = np.arange(vec.n_trunc + 1)
    ref = math.sqrt(0.5 / math.sinh(0.5)) * 0.5**n / np.sqrt([float(math.factorial(int(2 * k + 1))) for k in n])
    assert np.max(np.abs(np.abs(vec.amplitudes) - ref)) < 1e-12


@pytest.mark.parametrize("spec, bound", [
    (CoherentStateSpec(HO, 1, 0, 1.0, tol=1e-14), 1e-12),
    (CoherentStateSpec(HO, 2, 0, 2.0, HALF, tol=1e-14), 1e-10),
])
def test_residual_examples(spec, bound):
    assert eigen_residual(spec, coefficients(spec)) < bound


@pytest.mark.parametrize("tol", [1e-6, 1e-10, 1e-14])
@pytest.mark.parametrize("model, cfg, m, j, z", [
    (HO, None, 1, 0, 1.7), (PT, HALF, 2, 1, 2.5 - 1j), (PT, None, 3, 2, 4j),
])
def test_residual_tracks_tolerance(model, cfg, m, j, z, tol):
    spec = CoherentStateSpec(model, m, j, z, cfg, tol=tol)
    assert eigen_residual(spec, coefficients(spec)) < 10 * tol


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=8), st.sampled_from([1, 2, 3]), st.data(),
       st.sampled_from([None, (-0.5,), (-0.5, -1.5)]), st.sampled_from([HO, PT]))
def test_normalization_and_purity(z, m, data, eps, model):
    j = data.draw(st.integers(0, m - 1))
    cfg = None if eps is None else SusyConfig(eps)
    vec = coefficients(CoherentStateSpec(model, m, j, z, cfg))
    total = float(np.sum(vec.probabilities))
    assert 1 - vec.tail_bound - 1e-15 <= total <= 1 + 1e-15
    assert np.all((vec.levels - j) % m == 0)
    assert list(vec.levels) == [j + n * m for n in range(vec.n_trunc + 1)]


@settings(max_examples=30, deadline=None)
@given(st.complex_numbers(max_magnitude=5), st.floats(-6, 6), st.sampled_from([1, 2, 3]))
def test_alpha_leaves_moduli_unchanged(z, alpha, m):
    a = coefficients(CoherentStateSpec(PT, m, 0, z, HALF))
    b = coefficients(CoherentStateSpec(PT, m, 0, z, HALF, alpha=alpha))
    assert a.n_trunc == b.n_trunc
    assert np.allclose(np.abs(a.amplitudes), np.abs(b.amplitudes), rtol=1e-13, atol=1e-300)
    assert np.allclose(np.abs(b.amplitudes[1:] / a.amplitudes[1:]) if a.n_trunc else [1.0], 1.0)


@settings(max_examples=20, deadline=None)
@given(st.complex_numbers(max_magnitude=4), st.floats(-3, 3))
def test_alpha_state_is_eigenvector(z, alpha):
    spec = CoherentStateSpec(PT, 2, 1, z, alpha=alpha)
    assert eigen_residual(spec, coefficients(spec)) < 1e-10


ZS = [0.3, 1 + 1j, -2.2 + 0.4j, 5.0, 5j]


@pytest.mark.parametrize("z", ZS)
def test_closed_form_standard(z):
    assert np.max(np.abs(moduli(CoherentStateSpec(HO, 1, 0, z, tol=1e-20), 30) - standard_cs(z, 30))) < 1e-10


@pytest.mark.parametrize("j", [0, 1])
@pytest.mark.parametrize("z", ZS)
def test_closed_form_even_odd(z, j):
    got = moduli(CoherentStateSpec(HO, 2, j, z, tol=1e-20), 30)
    assert np.max(np.abs(got - even_odd_cs(z, j, 30))) < 1e-10


@pytest.mark.parametrize("j", [0, 1])
@pytest.mark.parametrize("z", ZS)
def test_closed_form_ho_partner(z, j):
    got = moduli(CoherentStateSpec(HO, 2, j, z, HALF, tol=1e-20), 30)
    assert np.max(np.abs(got - ho_susy_cs(z, j, 30))) < 1e-10


@pytest.mark.parametrize("nu", [1.5, 2.0, 3.7])
@pytest.mark.parametrize("j", [0, 1])
@pytest.mark.parametrize("z", ZS)
def test_closed_form_trig_well(z, j, nu):
    model = ModelSpec.poschl_teller(nu)
    assert np.max(np.abs(moduli(CoherentStateSpec(model, 2, j, z, tol=1e-20), 30) - pt_cs(z, nu, j, 30))) < 1e-10
    got = moduli(CoherentStateSpec(model, 2, j, z, HALF, tol=1e-20), 30)
    assert np.max(np.abs(got - pt_susy_cs(z, nu, j, 30))) < 1e-10


def test_printed_partner_normalization_differs():
    got = moduli(CoherentStateSpec(PT, 2, 0, 2.0, HALF, tol=1e-20), 30)
    assert np.max(np.abs(got - pt_susy_cs(2.0, 2.0, 0, 30, literal=True))) > 1e-3


def test_phase_of_coefficients():
    z = 1.3 * cmath.exp(0.7j)
    vec = coefficients(CoherentStateSpec(HO, 2, 0, z))
    phases = np.angle(vec.amplitudes[1:4])
    assert np.allclose(phases, [0.7, 1.4, 2.1])


def test_truncation_failure():
    with pytest.raises(TruncationFailure):
        coefficients(CoherentStateSpec(HO, 1, 0, 30.0, n_cap=50))


@pytest.mark.parametrize("kwargs", [
    dict(m=0, j=0), dict(m=2, j=2), dict(m=2, j=-1), dict(m=1, j=0, tol=0.0),
    dict(m=1, j=0, n_cap=0), dict(m=1, j=0, z=complex("nan")),
])
def test_spec_validation(kwargs):
    kwargs.setdefault("z", 1.0)
    with pytest.raises(ConfigError):
        CoherentStateSpec(HO, **kwargs)


def test_spec_checks_susy_against_model():
    with pytest.raises(ConfigError):
        CoherentStateSpec(HO, 1, 0, 1.0, SusyConfig([0.7]))
