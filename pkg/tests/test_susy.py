import math

import pytest
from hypothesis import given, strategies as st

from multiphoton import ConfigError, ModelSpec, SusyConfig
from multiphoton.ladder import LadderSpec, annihilate_m, commutator_structure, create_m
from multiphoton.susy import (
    Iso, Isolated, apply_ell, bk_eigenvalue, commutator_structure_susy, ell_annihilate, ell_create,
    ell_dag_ell_eigenvalue, ell_on_isolated, hk_ladder_factors, number_operator_k, partner_spectrum,
)

HO = ModelSpec.harmonic()
PT = ModelSpec.poschl_teller(2.0)
HALF = SusyConfig([-0.5])


@pytest.mark.parametrize("eps", [[], [-1.0, -0.5], [-1.0, -1.0], [0.0, float("nan")]])
def test_config_rejects_bad_orderings(eps):
    with pytest.raises(ConfigError):
        SusyConfig(eps)


def test_config_must_lie_below_ground(ho):
    with pytest.raises(ConfigError):
        SusyConfig([0.5], ho)
    assert SusyConfig([0.49, -3.0], ho).k == 2


@pytest.mark.parametrize("model, n, expected", [(HO, 0, 1.0), (HO, 1, 2.0), (PT, 1, 5.0)])
def test_bk_eigenvalue(model, n, expected):
    assert bk_eigenvalue(model, HALF, n) == expected


@pytest.mark.parametrize("model, m, n, target, amp", [
    (HO, 2, 2, 0, math.sqrt(6)),
    (HO, 1, 0, -1, 0.0),
    (PT, 1, 1, 0, math.sqrt(31.25)),
])
def test_ell_annihilate(model, m, n, target, amp):
    t, a = ell_annihilate(model, HALF, LadderSpec(m), n)
    assert t == target and a == pytest.approx(amp)


@pytest.mark.parametrize("model, m, n, target, amp", [
    (HO, 1, 0, 1, math.sqrt(2)),
    (HO, 2, 1, 3, math.sqrt(48)),
    (PT, 2, 0, 2, math.sqrt(318.75)),
])
def test_ell_create(model, m, n, target, amp):
    t, a = ell_create(model, HALF, LadderSpec(m), n)
    assert t == target and a == pytest.approx(amp)


@pytest.mark.parametrize("m, n, expected", [(1, 1, 2.0), (2, 1, 0.0)])
def test_ell_dag_ell_ho(m, n, expected):
    assert ell_dag_ell_eigenvalue(HO, HALF, m, n) == expected


def test_ell_dag_ell_pt():
    assert ell_dag_ell_eigenvalue(PT, HALF, 2, 2) == pytest.approx(318.75)


@pytest.mark.parametrize("m, n, expected", [(1, 0, 2.0), (2, 0, 6.0)])
def test_commutator_susy(m, n, expected):
    assert commutator_structure_susy(HO, HALF, m, n) == pytest.approx(expected)


@given(st.integers(0, 80), st.integers(1, 4),
       st.lists(st.floats(-20, 0.49), min_size=1, max_size=3, unique=True))
def test_commutator_is_norm_difference(n, m, eps):
    cfg = SusyConfig(sorted(eps, reverse=True))
    spec = LadderSpec(m)
    up = abs(ell_create(HO, cfg, spec, n)[1]) ** 2
    down = abs(ell_annihilate(HO, cfg, spec, n)[1]) ** 2
    assert commutator_structure_susy(HO, cfg, m, n) == pytest.approx(up - down, rel=1e-9, abs=1e-9)


@given(st.integers(0, 100), st.integers(1, 4), st.floats(-4, 4))
def test_no_config_delegates_to_h0(n, m, alpha):
    spec = LadderSpec(m, alpha)
    assert ell_annihilate(PT, None, spec, n) == annihilate_m(PT, spec, n)
    assert ell_create(PT, None, spec, n) == create_m(PT, spec, n)
    assert commutator_structure_susy(PT, None, m, n) == commutator_structure(PT, m, n)


@given(st.integers(0, 100), st.integers(1, 4), st.floats(-4, 4))
def test_alpha_only_changes_phase(n, m, alpha):
    a0 = ell_annihilate(PT, HALF, LadderSpec(m), n)[1]
    a1 = ell_annihilate(PT, HALF, LadderSpec(m, alpha), n)[1]
    assert abs(a1) == pytest.approx(abs(a0))


def test_isolated_states_are_inert():
    cfg = SusyConfig([-0.5, -1.0, -2.0])
    assert ell_on_isolated(HALF, 1) == 0
    assert ell_on_isolated(cfg, 2) == 0
    for dagger in (False, True):
        label, amp = apply_ell(HO, cfg, LadderSpec(2), Isolated(3), dagger)
        assert label == Isolated(3) and amp == 0
    with pytest.raises(ValueError):
        ell_on_isolated(HALF, 2)


def test_apply_ell_on_iso():
    assert apply_ell(HO, HALF, LadderSpec(1), Iso(0), dagger=True) == (Iso(1), pytest.approx(math.sqrt(2)))


@pytest.mark.parametrize("label, expected", [(Iso(5), 5), (Isolated(1), 0), (Iso(0), 0)])
def test_number_operator(label, expected):
    assert number_operator_k(HO, HALF, label) == expected


def test_isolated_and_iso_labels_are_distinct():
    # both have N_k eigenvalue 0 but they are different states
    assert Iso(0) != Isolated(1)


@pytest.mark.parametrize("model, m, n, expected", [
    (HO, 2, 4, (2.0, 2.0)), (PT, 2, 2, (6.0, 10.0)), (PT, 1, 0, (1.5, 2.5)),
])
def test_hk_factors(model, m, n, expected):
    assert hk_ladder_factors(model, m, n) == pytest.approx(expected)


@pytest.mark.parametrize("k, m", [(1, 1), (1, 2), (2, 3), (3, 2)])
def test_partner_spectrum_counts(k, m):
    cfg = SusyConfig([-0.5 - i for i in range(k)])
    spec = partner_spectrum(HO, cfg, m)
    assert len(spec.extremal_states()) == k + m
    levels = spec.levels(10)
    energies = [e for _, e in levels]
    assert energies == sorted(energies) and len(set(energies)) == len(energies)
    assert [e for lab, e in levels if isinstance(lab, Isolated)] == sorted(cfg.epsilons)


def test_partner_ladders():
    spec = partner_spectrum(HO, HALF, 2)
    assert spec.ladder_of(Iso(5)) == (1, 2)
    assert spec.ladder_of(Isolated(1)) == ("isolated-1", 0)
    assert partner_spectrum(PT, None, 1).isolated == []
