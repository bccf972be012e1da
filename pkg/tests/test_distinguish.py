import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from disentangle.distinguish import (
    FamilyParams,
    build_family,
    delta_disent,
    delta_pattern,
    family_overlap,
    grid_centers,
    helstrom_pe,
    is_violation,
    pe_disent,
    pe_disent_matrix,
    pe_ent,
    pe_ent_matrix,
    pure_pe,
    reduced_pair,
    violation_scan,
)
from disentangle.qstate import DensityMatrix, DimensionError, ket, maximally_mixed, partial_trace

import oracles

QUARTER = math.pi / 4
angles = st.floats(0.0, QUARTER)
PI8 = FamilyParams(math.pi / 8, math.pi / 8)

# frozen from the 40-digit mpmath oracle
PE_ENT_PI8 = 0.23949730836000646
PE_DISENT_PI8 = 0.22049150281252627


def test_helstrom_examples():
    assert helstrom_pe(ket("0").density(), ket("1").density()) == pytest.approx(0.0)
    rho = maximally_mixed(2)
    assert helstrom_pe(rho, rho) == pytest.approx(0.5)
    with pytest.raises(DimensionError):
        helstrom_pe(maximally_mixed(2), maximally_mixed(4))


def test_pure_pe_matches_helstrom():
    p, q = ket("0"), ket("+")
    assert pure_pe(p, q) == pytest.approx(helstrom_pe(p.density(), q.density()), abs=1e-14)
    assert pure_pe(p, q) == pytest.approx(0.5 - 0.5 / math.sqrt(2))


def test_pi_8_values_match_oracle():
    assert float(oracles.pe_ent_hp(oracles.PI8, oracles.PI8)) == PE_ENT_PI8
    assert float(oracles.pe_disent_hp(oracles.PI8, oracles.PI8)) == PE_DISENT_PI8
    assert pe_ent(PI8) == pytest.approx(PE_ENT_PI8, abs=1e-12)
    assert pe_disent(PI8) == pytest.approx(PE_DISENT_PI8, abs=1e-12)
    assert pe_disent(PI8) == pytest.approx(0.5 - math.sqrt(5) / 8, abs=1e-15)
    assert pe_ent_matrix(PI8) == pytest.approx(PE_ENT_PI8, abs=1e-12)
    assert pe_disent_matrix(PI8) == pytest.approx(PE_DISENT_PI8, abs=1e-12)
    assert is_violation(pe_ent(PI8), pe_disent(PI8))


def test_pi_8_delta_entries():
    delta, e = delta_disent(PI8)
    assert e.prefactor == pytest.approx(0.5)
    assert e.a == pytest.approx(0.75)
    assert e.b == pytest.approx(0.25)
    np.testing.assert_allclose(delta, e.prefactor * delta_pattern(e.a, e.b), atol=1e-15)


@pytest.mark.parametrize(
    "theta, phi",
    [(0.0, 0.3), (QUARTER, 0.3), (0.3, 0.0), (0.3, QUARTER)],
)
def test_boundary_lines_have_no_violation(theta, phi):
    p = FamilyParams(theta, phi)
    assert not is_violation(pe_ent(p), pe_disent(p))


def test_theta_zero_states_coincide():
    p = FamilyParams(0.0, 0.3)
    assert family_overlap(p) == pytest.approx(1.0)
    assert pe_ent(p) == pytest.approx(0.5)
    assert pe_disent(p) == pytest.approx(0.5)


def test_phi_zero_is_already_product():
    p = FamilyParams(0.3, 0.0)
    assert pe_ent(p) == pytest.approx(pe_disent(p), abs=1e-12)


def test_near_theta_zero_still_violates():
    p = FamilyParams(1e-3, math.pi / 8)
    assert is_violation(pe_ent(p), pe_disent(p))


def test_grid_centers():
    np.testing.assert_allclose(grid_centers(2), [math.pi / 16, 3 * math.pi / 16])
    with pytest.raises(ValueError):
        grid_centers(1)


def test_scan_order_and_size():
    rows = violation_scan(4)
    assert len(rows) == 16
    thetas = [r.params.theta for r in rows]
    assert thetas == sorted(thetas)
    assert rows[0].params.phi < rows[1].params.phi


def test_scan_interior_always_violates():
    # every open cell of (0, pi/4)^2 is strictly below the entangled error
    assert all(r.violation for r in violation_scan(16))


@settings(max_examples=80, deadline=None)
@given(theta=angles, phi=angles)
def test_overlap_closed_form_matches_vectors(theta, phi):
    p = FamilyParams(theta, phi)
    psi0, psi1 = build_family(p)
    assert np.vdot(psi0.amplitudes, psi1.amplitudes).real == pytest.approx(family_overlap(p), abs=1e-12)
    assert abs(np.vdot(psi0.amplitudes, psi1.amplitudes).imag) < 1e-15


@settings(max_examples=80, deadline=None)
@given(theta=angles, phi=angles)
def test_reduced_pair_matches_partial_trace(theta, phi):
    p = FamilyParams(theta, phi)
    for psi, r in zip(build_family(p), reduced_pair(p)):
        rho = psi.density()
        np.testing.assert_allclose(partial_trace(rho, "X").matrix, r.matrix, atol=1e-12)
        np.testing.assert_allclose(partial_trace(rho, "Y").matrix, r.matrix, atol=1e-12)


@settings(max_examples=80, deadline=None)
@given(theta=angles, phi=angles)
def test_delta_matches_pattern(theta, phi):
    delta, e = delta_disent(FamilyParams(theta, phi))
    np.testing.assert_allclose(delta, e.prefactor * delta_pattern(e.a, e.b), atol=1e-12)


@settings(max_examples=80, deadline=None)
@given(theta=angles, phi=angles)
def test_closed_forms_match_matrix_level(theta, phi):
    p = FamilyParams(theta, phi)
    assert pe_ent(p) == pytest.approx(pe_ent_matrix(p), abs=1e-10)
    assert pe_disent(p) == pytest.approx(pe_disent_matrix(p), abs=1e-10)


@settings(max_examples=80, deadline=None)
@given(theta=st.floats(-3, 3), phi=st.floats(-3, 3))
def test_closed_forms_hold_outside_the_square(theta, phi):
    p = FamilyParams(theta, phi)
    assert pe_ent(p) == pytest.approx(pe_ent_matrix(p), abs=1e-10)
    assert pe_disent(p) == pytest.approx(pe_disent_matrix(p), abs=1e-10)


@pytest.mark.parametrize("theta", [1e-8, 1e-5, QUARTER - 1e-9])
def test_closed_form_is_stable_near_coinciding_states(theta):
    p = FamilyParams(theta, math.pi / 8)
    ref = float(oracles.pe_ent_hp(theta, oracles.PI8))
    assert pe_ent(p) == pytest.approx(ref, abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(theta=angles, phi=angles)
def test_no_signalling_bound_direction(theta, phi):
    # a disentangling process may not reduce the error; the product pair does
    p = FamilyParams(theta, phi)
    assert pe_disent(p) <= pe_ent(p) + 1e-12
    assert 0.0 <= pe_disent(p) <= 0.5 and 0.0 <= pe_ent(p) <= 0.5


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_helstrom_is_symmetric(seed):
    rng = np.random.default_rng(seed)
    mats = []
    for _ in range(2):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = g @ g.conj().T
        mats.append(DensityMatrix(m / np.trace(m).real, (2, 2)))
    assert helstrom_pe(*mats) == pytest.approx(helstrom_pe(*mats[::-1]), abs=1e-14)
