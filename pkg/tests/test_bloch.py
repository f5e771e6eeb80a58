import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eitat import (
    DecayMatrix,
    OracleVerdict,
    PolarizationRates,
    SingularSteadyStateError,
    SteadyState,
    SystemKind,
    build_liouvillian,
    compare_to_closed_form,
    default_grid,
    derive_gammas,
    poles,
    probe_response,
    reference_decay,
    steady_state,
    threshold_of,
)

ALL_SYSTEMS = list(SystemKind)


def _setup(system):
    w = reference_decay(system)
    g = derive_gammas(system, w)
    return w, g, threshold_of(system, g)


def _idx(m, n):
    # vec(rho) ordering: row-major over the 3x3 matrix, 0-based levels
    return 3 * m + n


# -- generator structure -------------------------------------------------------


def test_bare_detuning_rotation():
    """With no fields and no damping only the detuned coherences rotate."""
    w0 = DecayMatrix(w21=0.0, w31=0.0, w32=0.0)
    g0 = PolarizationRates(gamma12=0.0, gamma13=0.0, gamma23=0.0)
    delta = 0.7
    liouvillian = build_liouvillian(SystemKind.LAMBDA, w0, g0, 0.0, 0.0, delta)
    matrix = liouvillian.matrix
    expected = np.zeros((9, 9), dtype=complex)
    for m, n, sign in ((0, 1, -1), (0, 2, -1), (1, 0, +1), (2, 0, +1)):
        expected[_idx(m, n), _idx(m, n)] = sign * 1j * delta
    np.testing.assert_array_equal(matrix, expected)


def test_matrix_is_read_only():
    w, g, _ = _setup(SystemKind.VEE)
    liouvillian = build_liouvillian(SystemKind.VEE, w, g, 1.0, 0.01, 0.2)
    with pytest.raises(ValueError):
        liouvillian.matrix[0, 0] = 1.0


def test_build_rejects_bad_inputs():
    w, g, _ = _setup(SystemKind.LAMBDA)
    with pytest.raises(ValueError):
        build_liouvillian(SystemKind.LAMBDA, w, g, -1.0, 0.01, 0.0)
    with pytest.raises(ValueError):
        build_liouvillian(SystemKind.LAMBDA, w, g, 1.0, -0.01, 0.0)
    with pytest.raises(ValueError):
        build_liouvillian(SystemKind.LAMBDA, w, g, 1.0, 0.01, np.inf)


_rate = st.floats(min_value=0.0, max_value=5.0)
_field = st.floats(min_value=0.0, max_value=10.0)
_detuning = st.floats(min_value=-20.0, max_value=20.0)


@given(
    system=st.sampled_from(ALL_SYSTEMS),
    w21=_rate,
    w31=_rate,
    w32=_rate,
    omega_c=_field,
    omega_p=_field,
    delta=_detuning,
)
def test_generator_preserves_trace(system, w21, w31, w32, omega_c, omega_p, delta):
    w = DecayMatrix(w21=w21, w31=w31, w32=w32)
    g = derive_gammas(system, w)
    matrix = build_liouvillian(system, w, g, omega_c, omega_p, delta).matrix
    trace_rows = matrix[_idx(0, 0)] + matrix[_idx(1, 1)] + matrix[_idx(2, 2)]
    assert np.abs(trace_rows).max() <= 1e-14


@given(
    system=st.sampled_from(ALL_SYSTEMS),
    w21=_rate,
    w31=_rate,
    w32=_rate,
    omega_c=_field,
    omega_p=_field,
    delta=_detuning,
)
def test_generator_respects_hermiticity(
    system, w21, w31, w32, omega_c, omega_p, delta
):
    """The equation for rho_nm is the conjugate of the one for rho_mn."""
    w = DecayMatrix(w21=w21, w31=w31, w32=w32)
    g = derive_gammas(system, w)
    matrix = build_liouvillian(system, w, g, omega_c, omega_p, delta).matrix
    for m in range(3):
        for n in range(3):
            for k in range(3):
                for l in range(3):
                    lhs = matrix[_idx(n, m), _idx(l, k)]
                    rhs = np.conj(matrix[_idx(m, n), _idx(k, l)])
                    assert lhs == pytest.approx(rhs, abs=1e-15)


# -- steady states ---------------------------------------------------------------


def test_rest_state_collects_in_the_ground_level():
    w, g, _ = _setup(SystemKind.LAMBDA)
    liouvillian = build_liouvillian(SystemKind.LAMBDA, w, g, 0.0, 0.0, 0.0)
    state = steady_state(liouvillian)
    np.testing.assert_allclose(state.rho, np.diag([1.0, 0.0, 0.0]), atol=1e-14)
    assert state.population(1) == pytest.approx(1.0)


def test_coupling_alone_keeps_population_dark():
    w, g, _ = _setup(SystemKind.LAMBDA)
    liouvillian = build_liouvillian(SystemKind.LAMBDA, w, g, 2.0, 0.0, 0.3)
    state = steady_state(liouvillian)
    assert state.population(1) == pytest.approx(1.0, abs=1e-12)
    assert abs(state.coherence(1, 3)) <= 1e-13


def test_replaced_population_row_does_not_matter():
    w, g, threshold = _setup(SystemKind.CASCADE_EIT)
    liouvillian = build_liouvillian(
        SystemKind.CASCADE_EIT, w, g, 0.5 * threshold, 1e-4, 0.3
    )
    states = [steady_state(liouvillian, replaced_population=i) for i in (1, 2, 3)]
    np.testing.assert_allclose(states[1].rho, states[0].rho, atol=1e-12)
    np.testing.assert_allclose(states[2].rho, states[0].rho, atol=1e-12)


def test_steady_state_is_physical_across_operating_points():
    for system in ALL_SYSTEMS:
        w, g, threshold = _setup(system)
        for factor in (0.2, 2.0):
            for delta in (-1.3, 0.0, 0.8):
                liouvillian = build_liouvillian(
                    system, w, g, factor * threshold, 0.05, delta
                )
                state = steady_state(liouvillian)
                populations = [state.population(i) for i in (1, 2, 3)]
                assert all(p >= -1e-12 for p in populations)
                assert sum(populations) == pytest.approx(1.0, abs=1e-12)


def test_disconnected_system_has_no_unique_steady_state():
    w0 = DecayMatrix(w21=0.0, w31=0.0, w32=0.0)
    g0 = PolarizationRates(gamma12=0.0, gamma13=0.0, gamma23=0.0)
    liouvillian = build_liouvillian(SystemKind.LAMBDA, w0, g0, 0.0, 0.0, 0.0)
    with pytest.raises(SingularSteadyStateError):
        steady_state(liouvillian)


def test_steady_state_validation_rejects_bad_matrices():
    good = np.diag([1.0, 0.0, 0.0]).astype(complex)
    SteadyState(rho=good)
    skewed = good.copy()
    skewed[0, 1] = 0.5
    with pytest.raises(SingularSteadyStateError):
        SteadyState(rho=skewed)
    with pytest.raises(SingularSteadyStateError):
        SteadyState(rho=0.5 * good)
    with pytest.raises(ValueError):
        SteadyState(rho=np.eye(2, dtype=complex))


def test_steady_state_replaced_row_validation():
    w, g, _ = _setup(SystemKind.LAMBDA)
    liouvillian = build_liouvillian(SystemKind.LAMBDA, w, g, 1.0, 1e-4, 0.0)
    with pytest.raises(ValueError):
        steady_state(liouvillian, replaced_population=4)


# -- probe response --------------------------------------------------------------


def test_probe_eps_bounds():
    w, _, _ = _setup(SystemKind.LAMBDA)
    grid = np.array([0.0])
    with pytest.raises(ValueError):
        probe_response(SystemKind.LAMBDA, w, 1.0, grid, probe_eps=0.0)
    with pytest.raises(ValueError):
        probe_response(SystemKind.LAMBDA, w, 1.0, grid, probe_eps=0.02)
    with pytest.raises(ValueError):
        probe_response(SystemKind.LAMBDA, w, 1.0, grid, convention="paperback")


def test_probe_response_is_linear_in_probe_strength():
    """Normalized response must be independent of the probe amplitude in the
    perturbative window."""
    w, g, threshold = _setup(SystemKind.CASCADE_EIT)
    grid = default_grid(0.5 * threshold, g, points=101)
    coarse = probe_response(SystemKind.CASCADE_EIT, w, 0.5 * threshold, grid, 1e-4)
    fine = probe_response(SystemKind.CASCADE_EIT, w, 0.5 * threshold, grid, 1e-5)
    scale = np.abs(coarse).max()
    assert np.abs(coarse - fine).max() <= 1e-6 * scale


def test_probe_response_shows_symmetric_splitting():
    w, g, _ = _setup(SystemKind.LAMBDA)
    omega_c = 3.798
    grid = default_grid(omega_c, g)
    response = probe_response(SystemKind.LAMBDA, w, omega_c, grid)
    magnitude = np.abs(response.imag)
    center = len(grid) // 2
    left = grid[np.argmax(magnitude[:center])]
    right = grid[center + np.argmax(magnitude[center:])]
    assert left == pytest.approx(-right, abs=1e-9)
    displacement = poles(SystemKind.LAMBDA, g, omega_c).z1.real
    assert right == pytest.approx(displacement, rel=0.2)


def test_probe_response_vanishes_for_empty_probed_transition():
    # the upper rung of the saturation cascade is unpopulated at weak coupling
    w, g, _ = _setup(SystemKind.CASCADE_AT)
    grid = default_grid(1e-3, g, points=201)
    response = probe_response(SystemKind.CASCADE_AT, w, 1e-3, grid)
    assert np.abs(response).max() < 1e-5


# -- agreement with the closed forms ----------------------------------------------


def _verdict(system, factor, convention="full", probe_eps=1e-4):
    w, g, threshold = _setup(system)
    omega_c = factor * threshold
    grid = default_grid(omega_c, g)
    return compare_to_closed_form(
        system, w, omega_c, grid, probe_eps, convention=convention
    )


def test_interference_pair_matches_oracle():
    for system in (SystemKind.LAMBDA, SystemKind.CASCADE_EIT):
        for factor in (0.5, 2.0):
            verdict = _verdict(system, factor)
            assert isinstance(verdict, OracleVerdict)
            assert verdict.residual < 1e-6
            assert verdict.residual <= verdict.per_point
            # recorded opposite sign between oracle and closed form
            assert verdict.scale.real == pytest.approx(-1.0, abs=1e-6)
            assert verdict.scale.imag == pytest.approx(0.0, abs=1e-6)


def test_vee_mismatch_is_reproducible():
    # frozen regression for the saturation scheme under the verbatim widths
    verdict = _verdict(SystemKind.VEE, 0.5)
    assert verdict.residual == pytest.approx(0.0007394815099243312, rel=1e-6)


def test_halved_convention_matches_all_schemes():
    for system in ALL_SYSTEMS:
        verdict = _verdict(system, 0.5, convention="halved")
        assert verdict.residual < 1e-6
        assert abs(verdict.scale + 1.0) < 1e-6


def test_residual_never_exceeds_worst_point():
    for system in ALL_SYSTEMS:
        verdict = _verdict(system, 2.0)
        assert verdict.residual <= verdict.per_point
