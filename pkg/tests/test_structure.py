import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from noptica import CONSTANTS, HardSphere, PairCorrelation, Tabulated, s_static, s_zero_sum_rule
from noptica.errors import DomainError, ExtrapolationError
from noptica.structure import SERIES_SWITCH, hard_sphere_samples, pair_correlation_hard_sphere

from oracles import hard_sphere_s_by_3d_radial

A = 3e-10


def n_for(packing, a=A):
    return packing / (4.0 / 3.0 * math.pi * a**3)


def test_pair_correlation_step():
    assert pair_correlation_hard_sphere(A / 2, A) == 0.0
    assert pair_correlation_hard_sphere(2 * A, A) == 1.0
    assert pair_correlation_hard_sphere(A, A) == 1.0
    assert pair_correlation_hard_sphere(1e-12, 0.0) == 1.0
    with pytest.raises(DomainError):
        pair_correlation_hard_sphere(-1.0, A)


@pytest.mark.parametrize("packing", [1e-4, 1e-2, 0.3])
def test_hard_sphere_q_zero(packing):
    n_o = n_for(packing)
    expected = 1 - 4.0 / 3.0 * math.pi * A**3 * n_o
    assert s_static(HardSphere(A, n_o), 0.0) == pytest.approx(expected, rel=1e-12)


def test_no_excluded_volume():
    q = np.linspace(0, 1e11, 7)
    assert np.all(s_static(HardSphere(0.0, 1e28), q) == 1.0)


def test_negative_q_rejected():
    with pytest.raises(DomainError):
        s_static(HardSphere(A, 1e27), -1.0)


@pytest.mark.parametrize("qa", [0.0, 1e-4, 0.05, 1.0, 3.7, 10.0, 41.3])
def test_hard_sphere_against_radial_quadrature(qa):
    n_o = n_for(0.01)
    assert s_static(HardSphere(A, n_o), qa / A) == pytest.approx(
        hard_sphere_s_by_3d_radial(qa / A, A, n_o), rel=1e-12
    )


def test_pair_correlation_variant_at_qa_10():
    n_o = n_for(0.01)
    r, g = hard_sphere_samples(A, 3 * A, points=50)
    hs = s_static(HardSphere(A, n_o), 10.0 / A)
    pc = s_static(PairCorrelation(r, g, n_o), 10.0 / A)
    assert pc == pytest.approx(hs, rel=1e-6)


def test_series_switch_continuity():
    n_o = n_for(0.3)
    hs = HardSphere(A, n_o)
    x = SERIES_SWITCH
    below = s_static(hs, np.nextafter(x, 0) / A)
    above = s_static(hs, x / A)
    assert above == pytest.approx(below, rel=1e-12)


def test_large_q_decay():
    hs = HardSphere(A, n_for(0.05))
    qa = np.logspace(2, 4, 400)
    dev = np.abs(s_static(hs, qa / A) - 1.0)
    C = np.max(dev * qa**2)
    # |S - 1| (qa)^2 = 3 eta |sin(x)/x - cos(x)| <= 3 eta (1 + 1/x)
    assert C <= 3 * 0.05 * (1 + 1e-2)
    assert np.all(dev <= C / qa**2 * (1 + 1e-12))


def test_three_variants_agree():
    n_o = n_for(0.01)
    hs = HardSphere(A, n_o)
    r, g = hard_sphere_samples(A, 2 * A)
    pc = PairCorrelation(r, g, n_o)
    tab = Tabulated.from_model(hs, np.linspace(0, 50 / A, 5001))
    q = np.linspace(0, 50 / A, 200)
    ref = s_static(hs, q)
    np.testing.assert_allclose(s_static(pc, q), ref, rtol=1e-6)
    np.testing.assert_allclose(s_static(tab, q), ref, rtol=1e-6)


def test_tabulated_validation_and_extrapolation():
    with pytest.raises(DomainError):
        Tabulated([0.0, 1.0, 1.0], [1.0, 1.0, 1.0])
    with pytest.raises(DomainError):
        Tabulated([0.0, 1.0], [1.0, np.nan])
    with pytest.raises(DomainError):
        Tabulated([0.0, 1.0], [1.0, -0.1])
    tab = Tabulated([1.0, 2.0, 3.0], [0.5, 0.7, 0.9])
    assert s_static(tab, 2.0) == pytest.approx(0.7)
    with pytest.raises(ExtrapolationError):
        s_static(tab, 0.5)
    with pytest.raises(ExtrapolationError):
        s_static(tab, 3.5)


def test_tabulated_is_monotone_between_monotone_samples():
    tab = Tabulated([0, 1, 2, 3, 10], [0.1, 0.2, 0.9, 0.95, 1.0])
    q = np.linspace(0, 10, 1001)
    assert np.all(np.diff(s_static(tab, q)) >= 0)


def test_csv_loaders(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("q_in_inverse_meters,S\n0,0.5\n1e10,0.8\n2e10,1.0\n")
    tab = Tabulated.from_csv(p)
    assert s_static(tab, 1e10) == pytest.approx(0.8)
    n_o = n_for(0.01)
    r, g = hard_sphere_samples(A, 2 * A)
    p2 = tmp_path / "g.csv"
    p2.write_text("r_in_meters,g\n" + "".join(f"{float(ri)!r},{float(gi)!r}\n" for ri, gi in zip(r, g)))
    pc = PairCorrelation.from_csv(p2, n_o)
    assert s_static(pc, 1.0 / A) == pytest.approx(s_static(HardSphere(A, n_o), 1.0 / A), rel=1e-10)
    bad = tmp_path / "bad.csv"
    bad.write_text("q,S\n1,2,3\n")
    with pytest.raises(DomainError, match="2 columns"):
        Tabulated.from_csv(bad)


def test_sum_rule_ideal_gas_and_linearity():
    n_o, T = 2.7e25, 300.0
    chi = 1.0 / (n_o * CONSTANTS.boltzmann * T)
    assert s_zero_sum_rule(n_o, T, chi) == pytest.approx(1.0, rel=1e-15)
    assert s_zero_sum_rule(n_o, T, 2 * chi) == pytest.approx(2.0, rel=1e-15)
    with pytest.raises(DomainError):
        s_zero_sum_rule(n_o, 0.0, chi)


@pytest.mark.parametrize("packing", [1e-4, 3e-4, 1e-3])
def test_sum_rule_against_second_virial(packing):
    # Z = 1 + B2 n with B2 = (2 pi / 3) a^3 gives n k T chi_T = 1 / (1 + 2 B2 n)
    n_o, T = n_for(packing), 300.0
    B2 = 2.0 * math.pi / 3.0 * A**3
    chi = 1.0 / (n_o * CONSTANTS.boltzmann * T * (1.0 + 2.0 * B2 * n_o))
    s_rule = s_zero_sum_rule(n_o, T, chi)
    s_model = s_static(HardSphere(A, n_o), 0.0)
    assert abs(s_rule - s_model) <= 2 * packing**2


@settings(max_examples=50, deadline=None)
@given(qa=st.floats(0.0, 50.0), packing=st.floats(1e-5, 0.5))
def test_hard_sphere_nonnegative(qa, packing):
    assert s_static(HardSphere(A, n_for(packing)), qa / A) >= 0.0
