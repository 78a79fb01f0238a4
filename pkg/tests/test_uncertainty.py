import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multiphoton import CoherentStateSpec, ConfigError, ModelSpec, SusyConfig, coefficients
from multiphoton.oracle import oracle_uncertainty
from multiphoton.uncertainty import (
    ADAG_A, COMM_A, ELL_ELLDAG, ELLDAG_ELL, ELLM_ELLMDAG, AM_AMDAG, MOMENTS, QuadratureKind,
    ell_squared_expectation, expect_number_moment, quadratic_form_moment, radial_grid, scan,
    square_grid, uncertainty_product,
)

HO = ModelSpec.harmonic()
PT = ModelSpec.poschl_teller(2.0)
HALF = SusyConfig([-0.5])


@pytest.mark.parametrize("spec, which, expected", [
    (CoherentStateSpec(HO, 2, 1, 0), ADAG_A, 1.0),
    (CoherentStateSpec(PT, 2, 0, 0), COMM_A, 2.5),
    (CoherentStateSpec(HO, 2, 1, 0, HALF), ELL_ELLDAG, 12.0),
])
def test_moment_examples(spec, which, expected):
    assert expect_number_moment(spec, which) == pytest.approx(expected)


@pytest.mark.parametrize("model, cfg, m, j, z, kind, expected", [
    (HO, None, 2, 0, 0, "intrinsic-h0", 0.5),
    (HO, None, 2, 1, 0, "intrinsic-h0", 1.5),
    (PT, None, 2, 0, 0, "intrinsic-h0", 1.25),
    (PT, None, 2, 1, 0, "multiphoton-h0", 31.5),
    (HO, HALF, 2, 0, 0, "natural-hk", 1.0),
    (HO, HALF, 2, 1, 0, "natural-hk", 7.0),
    (HO, HALF, 2, 0, 0, "multiphoton-hk", 3.0),
    (HO, HALF, 2, 1, 0, "multiphoton-hk", 24.0),
    (PT, HALF, 2, 0, 0, "natural-hk", 15.625),
    (PT, HALF, 2, 1, 0, "multiphoton-hk", 2047.5),
    (HO, None, 2, 0, 0, "multiphoton-h0", 1.0),
    (HO, None, 2, 1, 0, "multiphoton-h0", 3.0),
])
def test_minima(model, cfg, m, j, z, kind, expected):
    spec = CoherentStateSpec(model, m, j, z, cfg)
    assert uncertainty_product(spec, kind) == pytest.approx(expected, abs=1e-10)


def test_m1_oscillator_is_minimum_uncertainty():
    spec = CoherentStateSpec(HO, 1, 0, 0)
    for p in scan(spec, [0, 1, 2], "intrinsic-h0"):
        assert p.product == pytest.approx(0.5, abs=1e-12)


def test_real_and_imaginary_directions_differ():
    spec = CoherentStateSpec(HO, 2, 0, 0)
    real = uncertainty_product(spec.with_z(1.0), "intrinsic-h0")
    imag = uncertainty_product(spec.with_z(1j), "intrinsic-h0")
    assert abs(real - imag) > 1e-3


def test_scan_minimum_at_origin():
    spec = CoherentStateSpec(PT, 2, 0, 0)
    pts = scan(spec, radial_grid(3.0, 61), "multiphoton-h0")
    values = [p.product for p in pts]
    assert min(values) == values[0]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("kind, cfg", [
    ("intrinsic-h0", None), ("multiphoton-h0", None), ("natural-hk", HALF), ("multiphoton-hk", HALF),
])
@pytest.mark.parametrize("model", [HO, PT])
def test_radial_scans_grow_from_minimum(model, kind, cfg):
    spec = CoherentStateSpec(model, 2, 1, 0, cfg)
    values = [p.product for p in scan(spec, radial_grid(2.0, 21, angle=0.4), kind)]
    assert all(v >= values[0] - 1e-12 for v in values)
    assert values[-1] > values[0]


@pytest.mark.parametrize("cfg, m", [(None, 1), (None, 2), (None, 3), (HALF, 1), (HALF, 2),
                                    (SusyConfig([-0.5, -1.5]), 3)])
@pytest.mark.parametrize("z", [0.4, 1.1 - 0.8j, 2.5j])
def test_series_and_quadratic_forms_agree(cfg, m, z):
    spec = CoherentStateSpec(PT, m, m - 1, z, cfg, alpha=0.3)
    vec = coefficients(spec)
    whichs = [ADAG_A, COMM_A, AM_AMDAG] if cfg is None else [ELLDAG_ELL, ELL_ELLDAG, ELLM_ELLMDAG]
    for which in whichs:
        a = expect_number_moment(spec, which, vec)
        b = quadratic_form_moment(spec, which, vec)
        assert a == pytest.approx(b, rel=1e-12)


def test_moment_names():
    assert len(set(MOMENTS)) == 6
    with pytest.raises(ValueError):
        expect_number_moment(CoherentStateSpec(HO, 1, 0, 0), "nope")


@settings(max_examples=25, deadline=None)
@given(st.complex_numbers(max_magnitude=3), st.floats(-4, 4),
       st.sampled_from(list(QuadratureKind)), st.sampled_from([1, 2, 3]))
def test_alpha_invariance_and_positivity(z, alpha, kind, m):
    cfg = HALF if kind.needs_susy else None
    a = uncertainty_product(CoherentStateSpec(PT, m, 0, z, cfg), kind)
    b = uncertainty_product(CoherentStateSpec(PT, m, 0, z, cfg, alpha=alpha), kind)
    assert a >= 0 and a == pytest.approx(b, rel=1e-11)


@pytest.mark.parametrize("z", [0.5, 1.3 - 0.7j, 2j])
def test_eigenvalue_shortcut_m1(z):
    spec = CoherentStateSpec(PT, 1, 0, z, HALF)
    vec = coefficients(spec)
    up = expect_number_moment(spec, ELL_ELLDAG, vec)
    down = expect_number_moment(spec, ELLDAG_ELL, vec)
    assert 0.5 * (up - abs(z) ** 2) == pytest.approx(0.5 * (up - down), abs=1e-10)


def test_ell_squared_reduces_to_w_without_susy_factor():
    spec = CoherentStateSpec(HO, 2, 0, 1.5 + 0.5j, SusyConfig([-0.5]))
    val = ell_squared_expectation(spec)
    # <prod(E(N+1) - eps)> exceeds one, so <ell^2> is not just w
    assert abs(val) > abs(spec.z)


@pytest.mark.parametrize("model", [HO, PT])
@pytest.mark.parametrize("z", [0.8 + 0.3j, -1.7 + 1.1j])
def test_cross_term_matches_oracle(model, z):
    spec = CoherentStateSpec(model, 2, 0, z, HALF)
    oracle = oracle_uncertainty(spec, "natural-hk", 128)
    assert uncertainty_product(spec, "natural-hk") == pytest.approx(oracle, abs=1e-8)
    literal = uncertainty_product(spec, "natural-hk", literal_cross_term=True)
    assert abs(literal - oracle) > 1e-3


def test_kind_requirements():
    with pytest.raises(ConfigError):
        uncertainty_product(CoherentStateSpec(HO, 2, 0, 0), "natural-hk")
    with pytest.raises(ConfigError):
        uncertainty_product(CoherentStateSpec(HO, 2, 0, 0, HALF), "intrinsic-h0")


@pytest.mark.parametrize("text, kind", [
    ("intrinsic-h0", QuadratureKind.INTRINSIC_H0), ("IntrinsicH0", QuadratureKind.INTRINSIC_H0),
    ("multiphoton_hk", QuadratureKind.MULTIPHOTON_HK), ("NaturalHk", QuadratureKind.NATURAL_HK),
])
def test_kind_parsing(text, kind):
    assert QuadratureKind.parse(text) is kind


def test_unknown_kind():
    with pytest.raises(ConfigError):
        QuadratureKind.parse("position")


def test_grids():
    g = radial_grid(2.0, 5, angle=math.pi / 2)
    assert len(g) == 5 and abs(g[-1] - 2j) < 1e-15
    sq = square_grid(1.0, 3)
    assert len(sq) == 9 and sq[0] == complex(-1, -1) and sq[-1] == complex(1, 1)
    with pytest.raises(ConfigError):
        radial_grid(1.0, 0)


def test_scan_records_failures_per_point():
    spec = CoherentStateSpec(HO, 1, 0, 0, n_cap=20)
    pts = scan(spec, [0.5, 40.0], "intrinsic-h0")
    assert pts[0].error is None and pts[0].product == pytest.approx(0.5)
    assert pts[1].product is None and "TruncationFailure" in pts[1].error
    with pytest.raises(ConfigError):
        scan(spec, [], "intrinsic-h0")


def test_scan_preserves_order():
    grid = [1.0, 0.0, 2.0j]
    pts = scan(CoherentStateSpec(PT, 2, 0, 0), grid, "intrinsic-h0")
    assert [p.z for p in pts] == grid
    assert np.isclose(pts[1].product, 1.25)
