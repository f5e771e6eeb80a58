import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from eitat import (
    DegeneratePoleError,
    GridError,
    NearSingularDenominatorError,
    PolarizationRates,
    SystemKind,
    coherence_closed_form,
    default_grid,
    derive_gammas,
    linear_grid,
    poles,
    prefactor,
    reference_decay,
    resonance_pair,
    spectrum_table,
    threshold_of,
)

ALL_SYSTEMS = list(SystemKind)


def _setup(system):
    w = reference_decay(system)
    g = derive_gammas(system, w)
    return w, g, threshold_of(system, g)


def test_poles_strong_coupling_reference():
    _, g, _ = _setup(SystemKind.LAMBDA)
    pair = poles(SystemKind.LAMBDA, g, 4.0)
    assert pair.z1.real == pytest.approx(1.760241389696311, rel=1e-12)
    assert pair.z1.imag == pytest.approx(-0.9505, rel=1e-12)
    assert pair.z2 == pytest.approx(-pair.z1.conjugate(), rel=1e-12)


@pytest.mark.parametrize("system", ALL_SYSTEMS, ids=lambda s: s.value)
def test_poles_zero_coupling_are_bare(system):
    """At zero coupling the pair reduces to the two bare damped lines."""
    _, g, _ = _setup(system)
    pair = poles(system, g, 0.0)
    if system is SystemKind.LAMBDA:
        expected = (g.gamma12, g.gamma13)
    elif system is SystemKind.CASCADE_EIT:
        expected = (g.gamma13, g.gamma12)
    else:
        expected = (g.gamma13, g.gamma23)
    assert pair.z1 == pytest.approx(complex(0.0, -expected[0]), abs=1e-15)
    assert pair.z2 == pytest.approx(complex(0.0, -expected[1]), abs=1e-15)


def test_poles_rejects_negative_coupling():
    _, g, _ = _setup(SystemKind.VEE)
    with pytest.raises(ValueError):
        poles(SystemKind.VEE, g, -1.0)


@pytest.mark.parametrize("system", ALL_SYSTEMS, ids=lambda s: s.value)
@pytest.mark.parametrize("factor", [0.0, 0.3, 0.999, 1.001, 2.0, 10.0])
def test_pole_pair_structure(system, factor):
    """Sum is a fixed imaginary constant; the splitting changes character at
    the threshold: purely real above, purely imaginary below."""
    _, g, threshold = _setup(system)
    pair = poles(system, g, factor * threshold)
    total = pair.z1 + pair.z2
    assert total.real == pytest.approx(0.0, abs=1e-12)
    if system in (SystemKind.LAMBDA, SystemKind.CASCADE_EIT):
        gamma_sum = g.gamma23
    else:
        gamma_sum = g.gamma23 + g.gamma13
    assert total.imag == pytest.approx(-gamma_sum, rel=1e-12)
    if factor > 1.0:
        assert pair.splitting.imag == 0.0
        assert pair.splitting.real > 0.0
    else:
        assert pair.splitting.real == 0.0
        assert pair.splitting.imag >= 0.0


def test_prefactor_unity_for_interference_pair():
    for system in (SystemKind.LAMBDA, SystemKind.CASCADE_EIT):
        _, g, _ = _setup(system)
        for omega_c in (0.0, 0.5, 3.0, 50.0):
            assert prefactor(system, g, omega_c) == 1.0


def test_prefactor_saturation_shapes():
    _, g_at, _ = _setup(SystemKind.CASCADE_AT)
    # empty probed transition at zero coupling, half population in saturation
    assert prefactor(SystemKind.CASCADE_AT, g_at, 0.0) == 0.0
    assert prefactor(SystemKind.CASCADE_AT, g_at, 2.0 * g_at.gamma12) == pytest.approx(
        1.0 / 3.0
    )
    assert prefactor(SystemKind.CASCADE_AT, g_at, 1e6) == pytest.approx(0.5, rel=1e-9)

    _, g_v, _ = _setup(SystemKind.VEE)
    assert prefactor(SystemKind.VEE, g_v, 0.0) == 1.0
    omega = g_v.gamma12 * math.sqrt(2.0)
    assert prefactor(SystemKind.VEE, g_v, omega) == pytest.approx(0.5)
    assert prefactor(SystemKind.VEE, g_v, 1e6) == pytest.approx(0.0, abs=1e-9)


def test_closed_form_zero_coupling_center_value():
    _, g, _ = _setup(SystemKind.LAMBDA)
    value = coherence_closed_form(
        SystemKind.LAMBDA, g, 0.0, 0.0, include_prefactor=True
    )
    assert value == pytest.approx(complex(0.0, -1.0 / 1.9), rel=1e-12)


def test_closed_form_transparency_center_value():
    # frozen regression: deep transparency at twice the threshold coupling
    _, g, _ = _setup(SystemKind.LAMBDA)
    value = coherence_closed_form(
        SystemKind.LAMBDA, g, 3.798, 0.0, include_prefactor=True
    )
    assert value.real == pytest.approx(0.0, abs=1e-15)
    assert value.imag == pytest.approx(-0.0002771541040563997, rel=1e-12)


def test_closed_form_scalar_and_array():
    _, g, _ = _setup(SystemKind.VEE)
    scalar = coherence_closed_form(SystemKind.VEE, g, 1.0, 0.3, include_prefactor=True)
    assert isinstance(scalar, complex)
    arr = coherence_closed_form(
        SystemKind.VEE, g, 1.0, np.array([0.3, 0.4]), include_prefactor=True
    )
    assert arr.shape == (2,)
    assert arr[0] == scalar


def test_closed_form_denominator_floor():
    g = PolarizationRates(gamma12=0.0, gamma13=0.0, gamma23=0.0)
    with pytest.raises(NearSingularDenominatorError):
        coherence_closed_form(SystemKind.LAMBDA, g, 0.0, 0.0, include_prefactor=True)


@pytest.mark.parametrize("system", ALL_SYSTEMS, ids=lambda s: s.value)
@pytest.mark.parametrize("factor", [0.1, 0.5, 2.0, 5.0])
def test_split_reconstructs_imaginary_part(system, factor):
    """r1 + r2 equals the closed form up to a real-part sign flip."""
    _, g, threshold = _setup(system)
    omega_c = factor * threshold
    for delta in (-3.7, -0.2, 0.0, 0.9, 12.0):
        dec = resonance_pair(system, g, omega_c, delta, include_prefactor=True)
        total = dec.r1 + dec.r2
        reference = dec.total_closed_form
        bound = 1e-12 * max(1.0, abs(reference))
        assert abs(total.imag - reference.imag) <= bound
        assert abs(total.real + reference.real) <= bound


@pytest.mark.parametrize("system", ALL_SYSTEMS, ids=lambda s: s.value)
def test_degenerate_split_raises_but_closed_form_is_finite(system):
    _, g, threshold = _setup(system)
    with pytest.raises(DegeneratePoleError) as excinfo:
        resonance_pair(system, g, threshold, 0.4, include_prefactor=True)
    assert excinfo.value.threshold == pytest.approx(threshold)
    value = coherence_closed_form(system, g, threshold, 0.4, include_prefactor=True)
    assert np.isfinite(value.real) and np.isfinite(value.imag)


def test_spectrum_table_columns_and_absorption():
    system = SystemKind.CASCADE_EIT
    w, g, threshold = _setup(system)
    grid = default_grid(0.5 * threshold, g)
    table = spectrum_table(system, w, 0.5 * threshold, grid, include_prefactor=True)
    assert len(table) == len(grid)
    np.testing.assert_array_equal(table.total, table.r1 + table.r2)
    np.testing.assert_array_equal(table.absorption, -table.total.imag)
    assert table.system is system
    assert table.include_prefactor is True


def test_spectrum_table_prefactor_scales_everything():
    system = SystemKind.CASCADE_AT
    w, g, threshold = _setup(system)
    omega_c = 0.7 * threshold
    grid = linear_grid(-4.0, 4.0, 101)
    on = spectrum_table(system, w, omega_c, grid, include_prefactor=True)
    off = spectrum_table(system, w, omega_c, grid, include_prefactor=False)
    scale = prefactor(system, g, omega_c)
    np.testing.assert_allclose(on.total, scale * off.total, rtol=1e-13)
    np.testing.assert_allclose(on.r1, scale * off.r1, rtol=1e-13)


def test_spectrum_table_grid_validation():
    system = SystemKind.LAMBDA
    w, _, threshold = _setup(system)
    with pytest.raises(GridError):
        spectrum_table(system, w, 0.5, np.array([]), include_prefactor=True)
    with pytest.raises(GridError):
        spectrum_table(system, w, 0.5, np.array([0.0, 0.0]), include_prefactor=True)
    with pytest.raises(GridError):
        spectrum_table(system, w, 0.5, np.array([1.0, 0.0]), include_prefactor=True)
    with pytest.raises(GridError):
        spectrum_table(
            system, w, 0.5, np.array([0.0, np.inf]), include_prefactor=True
        )
    single = spectrum_table(system, w, 0.5, np.array([0.3]), include_prefactor=True)
    assert len(single) == 1


def test_default_grid_shape():
    _, g, _ = _setup(SystemKind.LAMBDA)
    grid = default_grid(4.0, g)
    assert len(grid) == 2001
    assert grid[0] == -20.0 and grid[-1] == 20.0  # 5 * max(omega_c, gamma23)
    assert grid[1000] == 0.0
    np.testing.assert_array_equal(grid, -grid[::-1])  # exactly mirror-symmetric
    small = default_grid(0.1, g)
    assert small[-1] == pytest.approx(5.0 * g.gamma23)


def test_linear_grid_validation():
    grid = linear_grid(-1.0, 1.0, 5)
    assert grid[2] == 0.0
    asym = linear_grid(0.0, 1.0, 3)
    np.testing.assert_allclose(asym, [0.0, 0.5, 1.0])
    assert linear_grid(0.7, 0.7, 1).tolist() == [0.7]
    with pytest.raises(GridError):
        linear_grid(1.0, -1.0, 5)
    with pytest.raises(GridError):
        linear_grid(0.0, 1.0, 0)
    with pytest.raises(GridError):
        linear_grid(0.0, 1.0, 1)
    with pytest.raises(GridError):
        linear_grid(0.0, np.inf, 5)


# -- properties ------------------------------------------------------------

_factors = st.floats(min_value=0.01, max_value=20.0)
_deltas = st.floats(min_value=-80.0, max_value=80.0)


@given(
    system=st.sampled_from(ALL_SYSTEMS),
    factor=_factors,
    delta=_deltas,
)
def test_property_split_identity_reference_sets(system, factor, delta):
    assume(abs(factor - 1.0) >= 1e-3)
    _, g, threshold = _setup(system)
    dec = resonance_pair(
        system, g, factor * threshold, delta, include_prefactor=True
    )
    total = dec.r1 + dec.r2
    reference = dec.total_closed_form
    bound = 1e-10 * max(1.0, abs(reference))
    assert abs(total.imag - reference.imag) <= bound
    assert abs(total.real + reference.real) <= bound


_rates = st.floats(min_value=1e-3, max_value=5.0)


@given(
    system=st.sampled_from(ALL_SYSTEMS),
    w21=_rates,
    w31=_rates,
    w32=_rates,
    factor=st.floats(min_value=0.1, max_value=10.0),
    delta=_deltas,
)
def test_property_split_identity_random_sets(system, w21, w31, w32, factor, delta):
    from eitat import DecayMatrix, threshold_expression

    w = DecayMatrix(w21=w21, w31=w31, w32=w32)
    g = derive_gammas(system, w)
    expression = threshold_expression(system, g)
    assume(expression > 1e-2)
    assume(abs(factor - 1.0) >= 1e-3)
    dec = resonance_pair(
        system, g, factor * expression, delta, include_prefactor=True
    )
    total = dec.r1 + dec.r2
    reference = dec.total_closed_form
    bound = 1e-10 * max(1.0, abs(reference))
    assert abs(total.imag - reference.imag) <= bound
    assert abs(total.real + reference.real) <= bound


@given(system=st.sampled_from(ALL_SYSTEMS), factor=_factors)
def test_property_pole_scale_covariance(system, factor):
    """Scaling all rates and the coupling scales both poles linearly."""
    w, g, threshold = _setup(system)
    scale = 3.0
    gs = derive_gammas(system, w.scaled(scale))
    pair = poles(system, g, factor * threshold)
    scaled_pair = poles(system, gs, scale * factor * threshold)
    assert scaled_pair.z1 == pytest.approx(scale * pair.z1, rel=1e-9, abs=1e-12)
    assert scaled_pair.z2 == pytest.approx(scale * pair.z2, rel=1e-9, abs=1e-12)
