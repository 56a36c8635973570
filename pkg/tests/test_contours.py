import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rieszlab.contours import CirclePath, SeparationPath, integrate_circle, integrate_separation
from rieszlab.errors import NodeEvaluationFailure


class TestCircle:
    def test_simple_pole(self):
        assert abs(integrate_circle(lambda z: 1 / z, CirclePath(0, 1, 16)) - 1) <= 1e-12

    @pytest.mark.parametrize("center,radius", [(0, 1), (2 + 1j, 0.3), (-5j, 4.0)])
    def test_analytic_integrand(self, center, radius):
        assert abs(integrate_circle(lambda z: z**2, CirclePath(center, radius, 16))) <= 1e-12

    def test_pole_outside(self):
        assert abs(integrate_circle(lambda z: 1 / (z - 3), CirclePath(0, 1, 64))) <= 1e-10

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            CirclePath(0, 0.0)
        with pytest.raises(ValueError):
            CirclePath(0, 1.0, nodes=2)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0, 0.5), st.floats(0, 2 * np.pi))
    def test_exponential_convergence(self, rho, phi):
        # pole inside at relative distance >= 0.5 from the circle
        p = rho * np.exp(1j * phi)
        err = abs(integrate_circle(lambda z: 1 / (z - p), CirclePath(0, 1, 64)) - 1)
        assert err <= 1e-10

    def test_error_squares_when_doubling(self):
        p = 0.5
        errs = [abs(integrate_circle(lambda z: 1 / (z - p), CirclePath(0, 1, m)) - 1)
                for m in (8, 16)]
        # trapezoid error is p^M / (1 - p^M): doubling M squares it
        assert errs[1] <= 2 * errs[0] ** 2 + 1e-16

    def test_deformation_invariance(self):
        a = np.diag([1j, 3j])
        res = lambda z: np.linalg.inv(z * np.eye(2) - a)
        p1 = integrate_circle(res, CirclePath(1j, 0.5, 64))
        p2 = integrate_circle(res, CirclePath(1j, 1.2, 64))
        assert np.abs(p1 - p2).max() <= 1e-9

    def test_linearity(self):
        path = CirclePath(0.2, 1.1, 32)
        f, g = (lambda z: 1 / (z - 0.3)), (lambda z: np.exp(z) / z)
        lhs = integrate_circle(lambda z: 2 * f(z) - 3j * g(z), path)
        rhs = 2 * integrate_circle(f, path) - 3j * integrate_circle(g, path)
        assert abs(lhs - rhs) <= 1e-12

    def test_threads_bit_identical(self):
        path = CirclePath(0, 1, 64)
        f = lambda z: np.array([[1 / (z - 0.1), z], [np.exp(z), 1.0]])
        np.testing.assert_array_equal(integrate_circle(f, path), integrate_circle(f, path, 4))

    def test_node_failure_carries_node(self):
        def f(z):
            if z.real > 0.99:
                raise ZeroDivisionError("boom")
            return 1.0

        with pytest.raises(NodeEvaluationFailure) as info:
            integrate_circle(f, CirclePath(0, 1, 8))
        assert info.value.node == pytest.approx(1.0)


def reference(f, path):
    """Same path with ten times the nodes."""
    fine = SeparationPath(path.cut_radius, path.outer_radius,
                          10 * path.segment_nodes, 10 * path.arc_nodes)
    return integrate_separation(f, fine)


class TestSeparation:
    def test_inverse_counts_half_winding(self):
        # the arc passes above 0 clockwise, so 1/z picks up minus half a residue
        val = integrate_separation(lambda z: 1 / z, SeparationPath(0.5, 1e6))
        assert abs(val - (-0.5)) <= 1e-5

    def test_pole_above_axis(self):
        path = SeparationPath(0.1, 1e3)
        f = lambda z: 1 / (z - 1j)
        val = integrate_separation(f, path)
        exact = (np.pi - 2 * np.arctan(1 / 1e3)) / (2 * np.pi)
        assert abs(val - reference(f, path)) <= 1e-8
        assert abs(val - exact) <= 1e-8

    def test_odd_entire(self):
        path = SeparationPath(0.1, 1e3)
        val = integrate_separation(lambda z: z, path)
        assert abs(val - reference(lambda z: z, path)) <= 1e-10
        # z has antiderivative z^2 / 2, equal at both ends
        assert abs(val) <= 1e-9

    def test_path_shape(self):
        path = SeparationPath(0.5, 10.0, 32, 8)
        z, w = path.rule()
        assert z.real[0] < -0.5 and z.real[-1] > 0.5
        arc = np.abs(np.abs(z) - 0.5) < 1e-12
        assert np.all(z[arc].imag > 0)
        assert np.all(np.diff(z.real) > 0)
        # total weight integrates f = 1, i.e. (R - (-R)) / (2 pi i)
        assert abs(w.sum() - 20.0 / (2j * np.pi)) <= 1e-12

    def test_rejects_bad_radii(self):
        with pytest.raises(ValueError):
            SeparationPath(2.0, 1.0)
