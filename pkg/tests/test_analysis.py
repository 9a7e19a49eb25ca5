import math

import numpy as np
import pytest

from lvnsfd import (
    DomainError,
    NotFoundError,
    Params,
    RegimeError,
    State,
    consistency_report,
    convergence_order,
    discrete_jacobian,
    oscillation_period,
    positivity_scan,
    recurrence_coefficient,
    spectral_report,
)
from lvnsfd.analysis import LinearizedMap, closed_form_jacobian

# frozen from 50-digit mpmath
K_UNIT_01 = 0.010008336111607197976
K_UNIT_2 = 5.5243913821672629191
PERIOD_UNIT_01 = 6.2779471327134711426
SQRT_101 = 1.004987562112089027


def test_euler_jacobian_is_identity_plus_hJ(unit):
    m = discrete_jacobian("euler", unit, 0.1)
    np.testing.assert_allclose(m.matrix, [[1, -0.1], [0.1, 1]], atol=1e-9)


def test_nsfd_jacobian_det_one(unit):
    m = discrete_jacobian("nsfd", unit, 0.1)
    assert abs(m.determinant - 1) <= 1e-8
    assert m.closed_form is not None


def test_nsfd_jacobian_tends_to_identity(rng):
    p = Params(*rng.uniform(0.5, 3, 4))
    for h in (1e-2, 1e-3, 1e-4):
        m = discrete_jacobian("nsfd", p, h)
        assert np.max(np.abs(np.array(m.matrix) - np.eye(2))) <= 10 * h


def test_nsfd_closed_form_structure():
    p = Params(2.0, 0.5, 1.5, 3.0)
    (m11, m12), (m21, m22) = closed_form_jacobian("nsfd", p, 0.3)
    assert m11 == 1.0
    assert m22 == pytest.approx(1 + m12 * m21, rel=1e-15)


def test_jacobian_missing_interior():
    with pytest.raises(NotFoundError):
        discrete_jacobian("nsfd", Params(1, 0, 1, 1), 0.1)


def test_jacobian_at_origin(unit):
    m = discrete_jacobian("nsfd", unit, 0.5, at="origin")
    np.testing.assert_allclose(m.matrix, [[math.exp(0.5), 0], [0, math.exp(-0.5)]], rtol=1e-9, atol=1e-12)


def test_spectral_euler_expanding(unit):
    rep = spectral_report(discrete_jacobian("euler", unit, 0.1))
    assert rep.regime == "expanding_spiral"
    assert rep.moduli == pytest.approx((SQRT_101, SQRT_101), abs=1e-8)
    assert rep.eigenvalues[0] == pytest.approx(complex(1, 0.1), abs=1e-8)


def test_spectral_nsfd_neutral(unit):
    rep = spectral_report(discrete_jacobian("nsfd", unit, 0.1))
    assert rep.regime == "neutral_rotation"
    assert rep.moduli == pytest.approx((1, 1), abs=1e-8)


def test_spectral_identity():
    rep = spectral_report(LinearizedMap.from_matrix(((1, 0), (0, 1))))
    assert rep.eigenvalues == (1, 1)
    assert rep.degenerate
    assert rep.regime == "real_split"


@pytest.mark.parametrize(
    "m, regime",
    [
        (((0.5, 0.0), (0.0, 0.25)), "contracting"),
        (((0.5, -0.5), (0.5, 0.5)), "contracting"),
        (((2.0, 0.0), (0.0, 0.5)), "real_split"),
        (((0.0, -1.0), (1.0, 0.0)), "neutral_rotation"),
    ],
)
def test_spectral_regimes(m, regime):
    rep = spectral_report(LinearizedMap.from_matrix(m))
    assert rep.regime == regime
    assert rep.eigenvalues[0] * rep.eigenvalues[1] == pytest.approx(rep.determinant, abs=1e-10)
    assert rep.eigenvalues[0] + rep.eigenvalues[1] == pytest.approx(rep.trace, abs=1e-10)


def test_spectral_rejects_non_finite():
    from lvnsfd import NumericError
    with pytest.raises(NumericError):
        spectral_report(LinearizedMap.from_matrix(((math.nan, 0), (0, 1))))


@pytest.mark.parametrize(
    "params, h, K, regime",
    [
        ((1, 1, 1, 1), 0.1, K_UNIT_01, "oscillatory"),
        ((0, 1, 1, 1), 0.7, 0.0, "degenerate"),
        ((1, 1, 0, 1), 0.7, 0.0, "degenerate"),
        ((1, 1, 1, 1), 2.0, K_UNIT_2, "real_roots"),
    ],
)
def test_recurrence_coefficient(params, h, K, regime):
    rc = recurrence_coefficient(Params(*params), h)
    assert rc.K == pytest.approx(K, rel=1e-14, abs=0)
    assert rc.regime == regime


def test_recurrence_linearized_coefficient_matches_map(rng):
    # the exact map has trace 2 - linearized coefficient
    for _ in range(20):
        p = Params(*rng.uniform(0.1, 5, 4))
        h = float(rng.uniform(0.01, 2))
        rc = recurrence_coefficient(p, h)
        cf = closed_form_jacobian("nsfd", p, h)
        assert cf[0][0] + cf[1][1] == pytest.approx(2 - rc.linearized, rel=1e-13)


def test_recurrence_roots_product_one(unit):
    for h in (0.1, 1.0, 2.0):
        r1, r2 = recurrence_coefficient(unit, h).roots()
        assert r1 * r2 == pytest.approx(1.0, abs=1e-14)


def test_oscillation_period(unit):
    cont, disc = oscillation_period(unit, 0.1)
    assert cont == pytest.approx(2 * math.pi, rel=1e-15)
    assert disc == pytest.approx(PERIOD_UNIT_01, rel=1e-12)
    cont, _ = oscillation_period(Params(4, 1, 1, 1), 1e-6)
    assert cont == pytest.approx(math.pi, rel=1e-15)
    cont, disc = oscillation_period(unit, 0.01)
    assert abs(disc / cont - 1) <= 1e-3


def test_oscillation_period_errors(unit):
    with pytest.raises(RegimeError):
        oscillation_period(unit, 2.0)
    with pytest.raises(DomainError):
        oscillation_period(Params(0, 1, 1, 1), 0.1)


def test_period_gap_monotone(unit):
    gaps = []
    for h in (0.1, 0.05, 0.025, 0.0125):
        cont, disc = oscillation_period(unit, h)
        gaps.append(abs(disc / cont - 1))
    assert all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:]))


def test_positivity_scan_euler_witness(unit):
    grid = [State(0.5, 3.0), State(1.0, 1.0)]
    w = positivity_scan("euler", unit, grid, [0.1, 1.0], 5)
    assert w.step == 1 and w.s0 == State(0.5, 3.0) and w.h == 1.0
    assert w.state == State(-0.5, 1.5)


def test_positivity_scan_nsfd_none(unit):
    grid = [State(0.5, 3.0), State(1.0, 1.0)]
    assert positivity_scan("nsfd", unit, grid, [0.1, 1.0, 10.0], 200) is None


def test_positivity_scan_euler_small_h(unit):
    grid = [State(x, y) for x in (0.9, 1.0, 1.1) for y in (0.9, 1.0, 1.1)]
    assert positivity_scan("euler", unit, grid, [1e-4], 100) is None


def test_positivity_scan_rejects_bad_grid(unit):
    with pytest.raises(DomainError):
        positivity_scan("euler", unit, [], [0.1], 1)
    with pytest.raises(DomainError):
        positivity_scan("euler", unit, [State(0.0, 1.0)], [0.1], 1)


@pytest.mark.parametrize("scheme", ["nsfd", "euler"])
def test_convergence_first_order(unit, scheme):
    rep = convergence_order(scheme, unit, State(1.5, 1.0), 5.0, 0.1, 4)
    assert len(rep.errors) == 4 and all(e > 0 for e in rep.errors)
    assert rep.h_ref == 0.1 / 2**7
    assert all(0.8 <= p <= 1.2 for p in rep.orders)


def test_convergence_degenerate(unit):
    rep = convergence_order("nsfd", unit, State(1.0, 1.0), 5.0, 0.1, 4)
    assert rep.degenerate and rep.orders == []
    assert all(e == 0 for e in rep.errors)


def test_convergence_preconditions(unit):
    with pytest.raises(DomainError):
        convergence_order("nsfd", unit, State(1.5, 1.0), 5.0, 0.1, 1)
    with pytest.raises(DomainError):
        convergence_order("nsfd", unit, State(1.5, 1.0), 5.05, 0.1, 3)


@pytest.mark.parametrize("h", [0.01, 0.1, 0.5])
def test_consistency_nsfd_all_pass(unit, h):
    rep = consistency_report("nsfd", unit, h)
    assert [v.name for v in rep.verdicts] == list(rep.PROPERTIES)
    assert rep.all_passed, [(v.name, v.evidence) for v in rep.verdicts if not v.passed]


def test_consistency_euler_large_h(unit):
    rep = consistency_report("euler", unit, 1.0)
    pos = rep["positivity"]
    assert not pos.passed
    w = pos.evidence["witness"]
    assert w.s0 == State(0.5, 3.0) and w.step == 1 and w.state == State(-0.5, 1.5)
    assert not rep["stability"].passed
    assert rep["stability"].evidence["interior"].regime == "expanding_spiral"


def test_consistency_euler_small_h(unit):
    rep = consistency_report("euler", unit, 1e-4)
    assert rep["positivity"].passed
    assert not rep["stability"].passed
    mod = rep["stability"].evidence["interior"].moduli[0]
    assert mod == pytest.approx(math.sqrt(1 + 1e-8), abs=1e-14) and mod > 1


def test_consistency_nsfd_large_h_recurrence_regime(unit):
    # K > 4 at h = 10: the printed recurrence is non-oscillatory there even
    # though the exact linearization stays a neutral rotation
    rep = consistency_report("nsfd", unit, 10.0)
    assert rep["stability"].passed
    assert not rep["oscillation"].passed
    assert rep["oscillation"].evidence["regime"] == "real_roots"


def test_consistency_needs_interior():
    with pytest.raises(NotFoundError):
        consistency_report("nsfd", Params(1, 0, 1, 1), 0.1)
