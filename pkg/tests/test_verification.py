import numpy as np
import pytest

from modpoisson.data import bump, shell_bump
from modpoisson.errors import DomainError
from modpoisson.expansions import HarmonicFamilyTerm, harmonic_term
from modpoisson.geometry import HalfSpacePoint
from modpoisson.kernels import KernelParams
from modpoisson.quadrature import QuadratureSpec, dirichlet_D, integral_F
from modpoisson.verification import (
    CheckReport,
    check_boundary,
    check_harmonicity,
    check_kernel_identity,
    check_neumann_representation,
    fd_laplacian,
    growth_sweep,
    refinement_order,
)

RNG = np.random.default_rng(23)
SPEC = QuadratureSpec()


def random_interior(n, lo=0.5, hi=2.0):
    x = RNG.normal(size=n)
    x[-1] = RNG.uniform(lo, hi)
    return x


class TestFdLaplacian:
    def test_linear_field_is_flat(self):
        lap = fd_laplacian(lambda x: x[-1], np.array([0.3, -0.2, 1.0]), 1e-3)
        assert lap == pytest.approx(0.0, abs=1e-9)

    def test_quadratic_field_is_exact(self):
        lap = fd_laplacian(lambda x: float(np.dot(x, x)), np.array([0.5, 0.1, 1.2]), 1e-3)
        assert lap == pytest.approx(6.0, abs=1e-8)

    def test_cubic_harmonic_polynomial(self):
        term = HarmonicFamilyTerm("dirichlet", 2, 3)
        x = np.array([0.4, -0.3, 0.9])
        scale = max(abs(harmonic_term(term, x)), 1.0)
        assert abs(fd_laplacian(lambda p: harmonic_term(term, p), x, 1e-3)) <= 1e-8 * scale

    def test_refinement_order_on_quartic_control(self):
        def quartic(x):
            return float(np.dot(x, x)) ** 2

        def exact(x):
            n = x.size
            return 4.0 * (n + 2) * float(np.dot(x, x))

        order = refinement_order(quartic, exact, np.array([0.7, -0.4, 1.1]), 1e-2)
        assert 1.8 <= order <= 2.2


class TestHarmonicity:
    @staticmethod
    def sphere_scale(fn, radius, n, samples=24):
        dirs = RNG.normal(size=(samples, n))
        dirs /= np.linalg.norm(dirs, axis=1)[:, None]
        return max(abs(fn(radius * d)) for d in dirs)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_harmonic_families(self, n):
        families = [("dirichlet", m) for m in range(7)]
        if n >= 3:
            families += [("neumann", m) for m in range(7)]
        for family, m in families:
            term = HarmonicFamilyTerm(family, m, n, pole=None)
            fn = lambda p: harmonic_term(term, p)
            for _ in range(5):
                direction = RNG.normal(size=n)
                direction[-1] = abs(direction[-1]) + 0.25
                direction /= np.linalg.norm(direction)
                radius = RNG.uniform(1.5, 2.5)
                report = check_harmonicity(
                    fn, [radius * direction], h=1.2e-4, tol=1e-6,
                    name=f"harmonic_{family}_{m}_{n}",
                    scale=self.sphere_scale(fn, radius, n),
                )
                assert report.passed, (family, m, n, report.residual)

    def test_inverse_power_fields(self):
        # |x|^-(2m + n - 2) times the degree-m solid harmonic is harmonic
        # away from the origin
        n = 3
        term = HarmonicFamilyTerm("neumann", 3, n)

        def field(p):
            r = float(np.linalg.norm(p))
            return harmonic_term(term, p) / r ** (2 * 3 + n - 2)

        points = [random_interior(n, lo=1.0, hi=2.0) for _ in range(5)]
        report = check_harmonicity(field, points, h=1e-4, tol=1e-6, name="kelvin",
                                   scale=self.sphere_scale(field, 1.5, n))
        assert report.passed, report.residual

    def test_dirichlet_integral_is_harmonic(self):
        f = bump(3, center=[2.0, 0.0], radius=1.0)
        spec = QuadratureSpec(abs_tol=1e-11, rel_tol=1e-11)

        def field(p):
            return dirichlet_D(f, HalfSpacePoint.from_cartesian(p), spec)

        points = [np.array([0.5, 0.3, 0.8]), np.array([-1.0, 0.5, 1.5])]
        report = check_harmonicity(field, points, h=1e-2, tol=1e-4,
                                   name="dirichlet_harmonic",
                                   noise_floor=7 * 1e-11 / 1e-4)
        assert report.passed, report.residual

    def test_assembled_solution_with_growth_data_is_harmonic(self):
        # shells with polynomially growing amplitudes, assembled through the
        # cutoff split with a nonzero modification order
        from modpoisson.data import bump_train
        from modpoisson.quadrature import solution_u

        f = bump_train(3, radii=(4.0, 16.0), growth=1.0)
        spec = QuadratureSpec(abs_tol=1e-10, rel_tol=1e-10)

        def field(p):
            return solution_u(f, 2, HalfSpacePoint.from_cartesian(p), spec)

        points = [np.array([0.5, 0.3, 0.8]), np.array([-1.5, 6.0, 2.0]),
                  np.array([8.0, 1.0, 3.0])]
        report = check_harmonicity(field, points, h=5e-3, tol=1e-4,
                                   name="growth_solution_harmonic")
        assert report.passed, report.residual

    def test_noise_floor_marks_inconclusive(self):
        report = check_harmonicity(lambda p: p[-1], [np.array([0.0, 0.0, 1.0])],
                                   h=1e-3, tol=1e-8, name="drowned",
                                   noise_floor=1e-6)
        assert report.inconclusive
        assert not report.passed


class TestBoundary:
    def test_dirichlet_recovers_bump_center(self):
        f = bump(3, radius=8.0)
        report = check_boundary("dirichlet", f, [0.0, 0.0], [0.1, 0.01, 0.001],
                                tol=1e-3)
        assert report.passed, report.parameters

    def test_dirichlet_vanishes_off_support(self):
        f = bump(3, center=[0.0, 0.0], radius=1.0)
        report = check_boundary("dirichlet", f, [6.0, 0.0], [0.1, 0.01], tol=2e-3)
        assert report.passed
        assert report.parameters["gaps"][-1] < 2e-3

    def test_neumann_normal_derivative(self):
        f = bump(3, radius=8.0)
        report = check_boundary("neumann", f, [0.0, 0.0], [0.1, 0.01], tol=5e-3)
        assert report.passed, report.parameters


PROP31_IDS = ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii"]


class TestProp31:
    def sample_pair(self, n=3):
        x = HalfSpacePoint(
            n=n,
            r=RNG.uniform(0.5, 3.0),
            theta=RNG.uniform(0.15, 1.35),
            y_hat=self.random_unit(n - 1),
        )
        yp = RNG.normal(size=n - 1)
        yp *= RNG.uniform(1.0, 4.0) / np.linalg.norm(yp)
        # keep clear of the kernel contact point, where differences blow up
        if np.linalg.norm(yp - x.y) ** 2 + x.x_n**2 < 0.25:
            return self.sample_pair(n)
        return x, yp

    @staticmethod
    def random_unit(k):
        v = RNG.normal(size=k)
        return v / np.linalg.norm(v)

    @pytest.mark.parametrize("identity", PROP31_IDS)
    @pytest.mark.parametrize("lam", [0.5, 1.5])
    def test_identities_on_random_samples(self, identity, lam):
        for big_m in range(4):
            for _ in range(13):
                x, yp = self.sample_pair()
                report = check_kernel_identity(identity, lam, big_m, x, yp, h=1e-4, tol=1e-6)
                assert report.passed, (identity, lam, big_m, report.residual)

    def test_convention_kernels_in_v(self):
        # for M in {0, 1} the right side degenerates to the base kernel
        for big_m in (0, 1):
            x, yp = self.sample_pair()
            report = check_kernel_identity("v", 0.5, big_m, x, yp)
            assert report.passed

    def test_viii_zero_at_aligned_directions(self):
        x = HalfSpacePoint(n=3, r=1.5, theta=0.8, y_hat=[1.0, 0.0])
        for yp in (np.array([2.0, 0.0]), np.array([-2.0, 0.0])):
            report = check_kernel_identity("viii", 1.5, 2, x, yp, h=1e-4, tol=1e-6)
            assert report.passed

    def test_dimension_four(self):
        x, yp = self.sample_pair(4)
        for identity in ("i", "v", "vii"):
            report = check_kernel_identity(identity, 1.0, 2, x, yp)
            assert report.passed


@pytest.fixture(scope="module")
def annular_data():
    return shell_bump(3, 2.0, 3.0)


class TestProp32:

    def test_trivial_anchor_is_exact(self, annular_data):
        x = HalfSpacePoint(n=3, r=1.5, theta=0.7, y_hat=[1.0, 0.0])
        report = check_neumann_representation("v", annular_data, 1, x, anchor=x.x_n, spec=SPEC)
        assert report.residual < 1e-9
        report = check_neumann_representation("i", annular_data, 1, x, anchor=x.theta, spec=SPEC)
        assert report.residual < 1e-9

    @pytest.mark.parametrize("representation,anchor_kind", [
        ("i", "theta"), ("ii", "radius"), ("iii", "coord"),
        ("iv", "proj"), ("v", "height"),
    ])
    @pytest.mark.parametrize("big_m", [1, 2])
    def test_nontrivial_anchors(self, annular_data, representation, anchor_kind, big_m):
        x = HalfSpacePoint(n=3, r=1.5, theta=0.7, y_hat=[1.0, 0.0])
        anchor = {
            "theta": x.theta / 2.0,
            "radius": x.r / 2.0,
            "coord": x.y[0] - 0.5,
            "proj": (x.r * x.sin_theta) / 2.0,
            "height": 2.0 * x.x_n,
        }[anchor_kind]
        report = check_neumann_representation(representation, annular_data, big_m, x, anchor, SPEC)
        assert report.passed, (representation, big_m, report.residual)

    def test_rejects_origin_touching_support(self):
        f = bump(3, radius=1.0)
        x = HalfSpacePoint(n=3, r=1.5, theta=0.7, y_hat=[1.0, 0.0])
        with pytest.raises(DomainError):
            check_neumann_representation("v", f, 1, x, anchor=1.0)


class TestGrowthSweep:
    def test_zero_data_sweeps_flat(self):
        report = growth_sweep(lambda x: 0.0, [8, 16, 32], [0.0, 0.6],
                              weight_exponent=1.0, radial_exponent=1.0,
                              name="zero")
        assert report.passed
        assert report.residual == 0.0

    def test_modified_integral_sweep(self):
        f = shell_bump(3, 2.0, 3.0)
        lam, big_m = 0.5, 1
        params = KernelParams(lam, big_m)
        spec = QuadratureSpec(abs_tol=1e-10, rel_tol=1e-10)
        report = growth_sweep(
            lambda x: integral_F(params, f, x, spec),
            radii=[24, 48, 96, 192],
            thetas=[0.0, 0.6, 1.2, 1.45],
            weight_exponent=2 * lam,
            radial_exponent=big_m,
            name="modified_integral_growth",
            parameters={"n": 3},
        )
        assert report.passed, report.parameters

    def test_failing_sweep_reports_infinite_residual(self):
        report = growth_sweep(lambda x: x.r ** 3, [8, 16, 32, 64], [0.3],
                              weight_exponent=0.0, radial_exponent=1.0,
                              name="growing")
        assert not report.passed


class TestCheckReport:
    def test_pass_consistency(self):
        r = CheckReport("demo", {}, residual=1e-7, tolerance=1e-6)
        assert r.passed
        r2 = CheckReport("demo", {}, residual=2e-6, tolerance=1e-6)
        assert not r2.passed

    def test_json_round_trip(self):
        import json

        r = CheckReport("demo", {"a": 1}, residual=0.5, tolerance=1.0)
        rec = json.loads(r.as_json())
        assert rec["pass"] is True
        assert rec["residual"] == 0.5
