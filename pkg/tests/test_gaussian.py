import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from squeezed_dsp.gaussian import (
    CovarianceState,
    ModeDecomposition,
    QuadratureReport,
    SqueezeSpec,
    check_symplectic,
    duan_bound,
    duan_scaled,
    physicality_margin,
    quadrature_report,
    single_mode_squeeze_symplectic,
    squeeze_along_mode,
    squeeze_symplectic,
    symplectic_form,
    vacuum_state,
)

E2 = math.exp(-2.0)
ANTI = ModeDecomposition((1 / math.sqrt(2), -1 / math.sqrt(2)))

r_values = st.floats(0.0, 2.0)
angles = st.floats(0.0, 2 * math.pi, exclude_max=True)


@st.composite
def directions(draw, n_modes=None):
    n = n_modes or draw(st.integers(1, 4))
    re = draw(st.lists(st.floats(-1, 1), min_size=n, max_size=n))
    im = draw(st.lists(st.floats(-1, 1), min_size=n, max_size=n))
    c = np.array(re) + 1j * np.array(im)
    if np.linalg.norm(c) < 1e-3:
        c = np.zeros(n, dtype=complex)
        c[0] = 1.0
    return ModeDecomposition.normalized(c)


class TestSqueezeSpec:
    def test_angle_reduced_modulo_two_pi(self):
        assert SqueezeSpec(1.0, 2 * math.pi + 0.5).delta == pytest.approx(0.5, abs=1e-15)
        assert SqueezeSpec(1.0, -math.pi / 2).delta == pytest.approx(1.5 * math.pi)

    def test_tiny_negative_angle_stays_below_two_pi(self):
        assert 0.0 <= SqueezeSpec(1.0, -1e-18).delta < 2 * math.pi

    @pytest.mark.parametrize("r", [-0.1, math.inf, math.nan])
    def test_rejects_bad_magnitude(self, r):
        with pytest.raises(ValueError):
            SqueezeSpec(r)

    def test_xi(self):
        assert SqueezeSpec(2.0, math.pi / 2).xi == pytest.approx(2j)


class TestModeDecomposition:
    def test_rejects_non_unit(self):
        with pytest.raises(ValueError):
            ModeDecomposition((1.0, 1.0))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            ModeDecomposition(())

    def test_normalized(self):
        d = ModeDecomposition.normalized((3.0, 4.0))
        assert np.allclose(d.array, [0.6, 0.8])


class TestVacuum:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_identity(self, n):
        assert np.array_equal(vacuum_state(n).matrix, np.eye(2 * n))

    def test_rejects_zero_modes(self):
        with pytest.raises(ValueError):
            vacuum_state(0)

    def test_three_mode_vacuum_saturates_bound(self):
        assert duan_scaled(vacuum_state(3), 0, 1, 1.0) == 4.0

    def test_report(self):
        rep = quadrature_report(vacuum_state(2))
        assert np.array_equal(rep.var_x, [1, 1]) and np.array_equal(rep.var_y, [1, 1])
        assert rep.corr_xx[0, 1] == 0 and rep.corr_yy[0, 1] == 0


class TestSqueezeAlongMode:
    def test_single_mode_squeezed_vacuum(self):
        rep = quadrature_report(squeeze_along_mode(vacuum_state(1), ModeDecomposition((1.0,)), SqueezeSpec(1.0)))
        assert rep.var_x[0] == pytest.approx(0.135335283236613, abs=1e-14)
        assert rep.var_y[0] == pytest.approx(7.38905609893065, abs=1e-13)

    def test_two_mode_antisymmetric(self):
        rep = quadrature_report(squeeze_along_mode(vacuum_state(2), ANTI, SqueezeSpec(1.0)))
        assert rep.var_x[0] == pytest.approx((E2 + 1) / 2, abs=1e-14)
        assert rep.corr_xx[0, 1] == pytest.approx((1 - E2) / 2, abs=1e-14)
        assert (1 - E2) / 2 == pytest.approx(0.432332, abs=1e-6)

    def test_quarter_turn_angle_equal_variances(self):
        rep = quadrature_report(
            squeeze_along_mode(vacuum_state(2), ModeDecomposition((1.0, 0.0)), SqueezeSpec(1.0, math.pi / 2))
        )
        assert rep.var_x[0] == pytest.approx(math.cosh(2), abs=1e-13)
        assert rep.var_y[0] == pytest.approx(math.cosh(2), abs=1e-13)
        assert math.cosh(2) == pytest.approx(3.762196, abs=1e-6)

    def test_xy_covariance_sign(self):
        # <{X, Y}>/2 = -sinh(2r) sin(delta) for S(xi) acting on the vacuum
        spec = SqueezeSpec(0.7, 1.1)
        v = squeeze_along_mode(vacuum_state(1), ModeDecomposition((1.0,)), spec).matrix
        assert v[0, 1] == pytest.approx(-math.sinh(1.4) * math.sin(1.1), abs=1e-14)

    @given(directions(), angles)
    def test_zero_squeeze_is_identity(self, d, delta):
        state = vacuum_state(len(d))
        assert squeeze_along_mode(state, d, SqueezeSpec(0.0, delta)) is state

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            squeeze_along_mode(vacuum_state(3), ANTI, SqueezeSpec(1.0))

    def test_non_unit_direction(self):
        with pytest.raises(ValueError):
            squeeze_along_mode(vacuum_state(2), (1.0, 1.0), SqueezeSpec(1.0))

    @given(directions(), r_values, angles)
    def test_output_is_physical(self, d, r, delta):
        state = squeeze_along_mode(vacuum_state(len(d)), d, SqueezeSpec(r, delta))
        assert physicality_margin(state.matrix) > -1e-9
        rep = quadrature_report(state)
        assert np.all(rep.uncertainty_products() >= 1 - 1e-10)
        assert np.allclose(rep.corr_xx, rep.corr_xx.T) and np.allclose(rep.corr_yy, rep.corr_yy.T)
        assert np.array_equal(np.diag(rep.corr_xx), rep.var_x)

    @given(directions(), r_values, angles)
    def test_collective_mode_carries_input_variances(self, d, r, delta):
        # the squeezed mode's own quadratures see cosh 2r -+ sinh 2r cos(delta)
        state = squeeze_along_mode(vacuum_state(len(d)), d, SqueezeSpec(r, delta))
        c = d.array
        w = np.zeros(2 * len(d))
        w[0::2], w[1::2] = c.real, -c.imag  # X_psi = sum Re(c) X_i - Im(c) Y_i
        expected = math.cosh(2 * r) - math.sinh(2 * r) * math.cos(delta)
        assert w @ state.matrix @ w == pytest.approx(expected, rel=1e-11, abs=1e-11)

    @given(directions(), r_values, angles)
    def test_commutes_with_direction_phase(self, d, r, delta):
        # squeezing along c with angle delta equals squeezing along c*e^{ia} with delta - 2a
        a = 0.37
        s1 = squeeze_along_mode(vacuum_state(len(d)), d, SqueezeSpec(r, delta))
        rotated = ModeDecomposition.normalized(d.array * np.exp(1j * a))
        s2 = squeeze_along_mode(vacuum_state(len(d)), rotated, SqueezeSpec(r, delta + 2 * a))
        assert np.allclose(s1.matrix, s2.matrix, atol=1e-10 * math.cosh(2 * r))


class TestDuan:
    def test_vacuum_equals_bound(self):
        assert duan_scaled(vacuum_state(2), 0, 1, 1.0) == pytest.approx(4.0, abs=1e-15)
        assert duan_bound(1.0) == 4.0

    def test_two_mode_squeezed_entangled(self):
        state = squeeze_along_mode(vacuum_state(2), ANTI, SqueezeSpec(1.0))
        value = duan_scaled(state, 0, 1, 1.0)
        assert value == pytest.approx(2 * E2 + 2, abs=1e-13)
        assert value < duan_bound(1.0)

    def test_polariton_embedding(self):
        theta = math.atan2(math.sqrt(10), 1)
        d = ModeDecomposition((math.cos(theta), -math.sin(theta)))
        state = squeeze_along_mode(vacuum_state(2), d, SqueezeSpec(1.0))
        f = 2 * math.sinh(1) ** 2 - 2 * math.sinh(1) * math.cosh(1)
        expected = 2 + 2 / 10 + 4 * f / 11
        # the field-sigma sum with b = sqrt(N) sigma: Var(X_E - lam X_b/sqrt N) ...
        value = duan_scaled(state, 0, 1, 1 / math.sqrt(10))
        assert value == pytest.approx(expected, abs=1e-13)
        assert value == pytest.approx(1.885577, abs=1e-6)

    @pytest.mark.parametrize("i,j,lam", [(0, 0, 1.0), (0, 2, 1.0), (-1, 0, 1.0), (0, 1, 0.0), (0, 1, -1.0)])
    def test_invalid_arguments(self, i, j, lam):
        with pytest.raises(ValueError):
            duan_scaled(vacuum_state(2), i, j, lam)


class TestSymplectic:
    def test_identity(self):
        assert check_symplectic(np.eye(4))

    @given(r_values, angles)
    def test_single_mode_squeeze(self, r, delta):
        s = single_mode_squeeze_symplectic(SqueezeSpec(r, delta))
        assert check_symplectic(s, tol=1e-10 * math.cosh(2 * r))

    @given(directions(), r_values, angles)
    def test_multimode_squeeze(self, d, r, delta):
        assert check_symplectic(squeeze_symplectic(d, SqueezeSpec(r, delta)), tol=1e-9 * math.cosh(2 * r))

    def test_perturbed_identity(self):
        s = np.eye(4)
        s[2, 2] = 2.0
        assert not check_symplectic(s)

    def test_odd_dimension(self):
        with pytest.raises(ValueError):
            check_symplectic(np.eye(3))

    def test_form(self):
        assert np.array_equal(symplectic_form(1), [[0, 1], [-1, 0]])


class TestCovarianceState:
    def test_csv_round_trip(self):
        state = squeeze_along_mode(vacuum_state(2), ANTI, SqueezeSpec(0.8, 0.3))
        text = state.to_csv()
        assert text.startswith("# covariance n_modes=2\n")
        back = CovarianceState.from_csv(text)
        assert np.array_equal(back.matrix, state.matrix)

    def test_rejects_asymmetric(self):
        m = np.eye(2)
        m[0, 1] = 0.1
        with pytest.raises(ValueError):
            CovarianceState(1, m)

    def test_rejects_unphysical(self):
        with pytest.raises(ValueError):
            CovarianceState(1, 0.5 * np.eye(2))

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            CovarianceState(2, np.eye(2))

    def test_report_dict(self):
        rep = quadrature_report(vacuum_state(1))
        assert isinstance(rep, QuadratureReport)
        assert rep.as_dict() == {"var_x": [1.0], "var_y": [1.0], "corr_xx": [[1.0]], "corr_yy": [[1.0]]}
