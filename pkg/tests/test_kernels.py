import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _fd import central, rel_gap
from conftest import REAL_MASSES, wedge_point
from dskg import kernels as K
from dskg.errors import DomainError, RealnessError
from dskg.kernels import Mass, as_mass, phi
from dskg.verify import _d_db, halton_points

MASSES = [0.0, 0.25, 0.5, 1.0, 0.3j, 1.7j]

# reference values from mpmath at 40 digits
E_REFERENCE = [
    (0.3, 1.0, 0.0, 0.0, 0.78548804357924633754),
    (0.3, 1.0, 0.0, 0.25, 0.79511713303095865669),
    (0.1, 2.0, 0.5, 1.0, 2.4644524444840501303),
    (0.2, 1.5, 0.3, 1.7j, 0.33270733780564709095),
    (0.05, 3.0, 1.0, 0.3j, 2.7048964522497956778),
]
K0_REFERENCE = [
    (0.3, 1.0, 0.0, -0.50051012775465911975),
    (0.2, 2.0, 1.0, -0.01560062523111812032),
    (0.1, 0.5, 1.7j, -0.72381072381556067625),
]
# limits of dK0/dz and dK0/dt at z = phi(1), M = 0, by extrapolation in mpmath
K0_DZ_LIMIT_M0_T1 = -0.43672562893694424873
K0_DT_LIMIT_M0_T1 = -0.41406358915376086069

cube = st.tuples(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))


class TestPhiAndMass:
    @pytest.mark.parametrize("t,expected", [(0.0, 0.0), (math.log(2), 0.5), (50.0, 1.0)])
    def test_phi(self, t, expected):
        assert abs(phi(t) - expected) < 1e-15

    def test_phi_small_t_keeps_precision(self):
        assert abs(phi(1e-12) - (1e-12 - 0.5e-24)) < 1e-27

    def test_physical_mass_flips_sign_of_square(self):
        m = Mass.physical(0.7)
        assert m.value == -0.7j
        assert m.squared == pytest.approx(-0.49)
        assert m.convention == "real-mass"

    @pytest.mark.parametrize("v,real", [(0.3, True), (0.3j, True), (0.3 + 0.1j, False), (0, True)])
    def test_real_valued(self, v, real):
        assert Mass(v).real_valued is real

    def test_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            Mass(float("nan"))
        with pytest.raises(ValueError):
            Mass(0.1, "other")

    def test_as_mass_passthrough(self):
        m = Mass(0.25)
        assert as_mass(m) is m
        assert as_mass(0.25) == m

    def test_str(self):
        assert str(Mass(0.25)) == "0.25"
        assert str(Mass(0.3j)) == "0+0.3i"


class TestAux:
    def test_frozen_gamma(self):
        assert abs(K.aux(0.3, 1.0, 0.0, 0.25).gamma - 0.1738124838520282152) < 1e-15

    @pytest.mark.parametrize("mass", MASSES)
    def test_edge_values(self, mass):
        t, b = 2.0, 0.5
        w = math.exp(-b) - math.exp(-t)
        a = K.aux(w, t, b, mass)
        assert abs(a.alpha - 1) < 1e-13
        assert abs(a.beta - 0.5 * math.exp(0.5 * (b + t))) < 1e-13
        assert a.gamma == 0.0

    @pytest.mark.parametrize("mass", [0.0, 0.25, 1.0, 1.7j, 0.3 + 0.2j])
    def test_derivatives_against_differences(self, mass):
        r, t, b = 0.2, 1.7, 0.4
        d = K.aux_derivatives(r, t, b, mass)
        for name in ("alpha", "beta", "gamma"):
            get = lambda r_, t_, n=name: getattr(K.aux(r_, t_, b, mass), n)
            # alpha_r vanishes identically at M = 0, so compare against the function scale too
            scale = abs(get(r, t))
            for an, fd in [
                (d.__dict__[name + "_r"], central(lambda x: get(x, t), r, 1e-3)),
                (d.__dict__[name + "_rr"], central(lambda x: get(x, t), r, 5e-3, order=2)),
                (d.__dict__[name + "_t"], central(lambda x: get(r, x), t, 1e-3)),
            ]:
                assert abs(an - fd) <= 1e-9 * max(abs(an), abs(fd), scale)

    def test_factorisation(self):
        for mass in MASSES:
            a = K.aux(0.2, 1.5, 0.3, mass)
            from dskg.hypergeom import gauss_2f1

            h = 0.5 - mass
            assert abs(a.alpha * a.beta * gauss_2f1(h, h, 1, a.gamma) - K.kernel_E(0.2, 1.5, 0.3, mass)) < 1e-14


class TestKernelE:
    @pytest.mark.parametrize("r,t,b,mass,expected", E_REFERENCE)
    def test_reference_values(self, r, t, b, mass, expected):
        assert abs(K.kernel_E(r, t, b, mass) - expected) <= 2e-15 * abs(expected)

    @given(cube)
    def test_half_mass_closed_form(self, u):
        r, t, b = wedge_point(*u)
        assert abs(K.kernel_E(r, t, b, 0.5) - 0.5 * math.exp(0.5 * (b + t))) <= 1e-14 * math.exp(0.5 * (b + t))

    @pytest.mark.parametrize("mass", MASSES)
    def test_edge_value(self, mass):
        r, t, b = halton_points(64, seed=4)
        w = np.exp(-b) - np.exp(-t)
        half = 0.5 * np.exp(0.5 * (b + t))
        assert np.all(rel_gap(K.kernel_E(w, t, b, mass), half) < 1e-13)

    @pytest.mark.parametrize("mass", MASSES)
    def test_diagonal(self, mass):
        t = np.linspace(0, 5, 11)
        assert np.all(rel_gap(K.kernel_E(0.0, t, t, mass), 0.5 * np.exp(t)) < 1e-14)

    @pytest.mark.parametrize("mass", MASSES)
    @given(u=cube)
    def test_time_symmetry(self, mass, u):
        r, t, b = wedge_point(*u)
        assert rel_gap(K.kernel_E(r, t, b, mass), K.kernel_E_past(r, b, t, mass)) < 1e-13

    @pytest.mark.parametrize("mass", REAL_MASSES)
    def test_kg_residual(self, mass):
        r, t, b = halton_points(128, seed=7)
        terms = K.kg_terms(r, t, b, mass)
        res = np.abs(sum(terms)) / sum(np.abs(x) for x in terms)
        assert res.max() < 1e-11

    def test_real_masses_give_real_arrays(self):
        for mass in [0.25, 1.7j, Mass.physical(2.0)]:
            assert np.isrealobj(K.kernel_E(np.array([0.1, 0.2]), 2.0, 0.3, mass))

    def test_complex_mass_gives_complex(self):
        v = K.kernel_E(0.1, 2.0, 0.3, 0.3 + 0.2j)
        assert isinstance(v, complex) or np.iscomplexobj(v)
        assert abs(v.imag) > 1e-3

    def test_broadcasting(self):
        r = np.array([[0.0], [0.1]])
        t = np.array([1.0, 2.0, 3.0])
        assert K.kernel_E(r, t, 0.0, 1.0).shape == (2, 3)

    def test_edge_slack_clamps(self):
        t, b = 1.0, 0.0
        w = 1 - math.exp(-1)
        assert K.kernel_E(w + 5e-10, t, b, 0.25) == K.kernel_E(w, t, b, 0.25)

    @pytest.mark.parametrize(
        "r,t,b",
        [(-0.1, 1.0, 0.0), (0.1, 1.0, 1.5), (0.1, 1.0, -0.2), (0.7, 1.0, 0.0), (float("nan"), 1.0, 0.0)],
    )
    def test_domain_errors(self, r, t, b):
        with pytest.raises(DomainError):
            K.kernel_E(r, t, b, 0.25)

    def test_realness_guard(self):
        with pytest.raises(RealnessError):
            K._finish([np.array(1 + 1e-6j)], [np.array(1.0)], Mass(0.25))
        assert K._finish([np.array(1 + 1e-14j)], [np.array(1.0)], Mass(0.25)) == 1.0


class TestEDerivatives:
    # interior points away from the edge so the stencils stay inside the wedge
    POINTS = [(0.1, 1.0, 0.2), (0.3, 2.5, 0.4), (0.05, 4.0, 2.0), (0.2, 0.8, 0.1)]

    @pytest.mark.parametrize("mass", REAL_MASSES + [0.3 + 0.2j])
    @pytest.mark.parametrize("r,t,b", POINTS)
    def test_against_differences(self, mass, r, t, b):
        w = math.exp(-b) - math.exp(-t)
        dr = min(r, w - r)
        dt = min(t - b, (w - r) * math.exp(t))
        Er = lambda x: K.kernel_E(x, t, b, mass)
        Et = lambda x: K.kernel_E(r, x, b, mass)
        assert rel_gap(K.kernel_E_r(r, t, b, mass), central(Er, r, 1e-3 * dr)) < 1e-7
        assert rel_gap(K.kernel_E_rr(r, t, b, mass), central(Er, r, 2e-2 * dr, 2)) < 1e-7
        assert rel_gap(K.kernel_E_t(r, t, b, mass), central(Et, t, 1e-3 * dt)) < 1e-7
        assert rel_gap(K.kernel_E_tt(r, t, b, mass), central(Et, t, 2e-2 * dt, 2)) < 1e-7

    @pytest.mark.parametrize("mass", MASSES)
    def test_r_derivative_vanishes_on_axis(self, mass):
        assert np.all(K.kernel_E_r(0.0, np.array([0.5, 2.0, 4.0]), 0.1, mass) == 0)

    def test_half_mass_derivatives(self):
        r, t, b = 0.1, 1.2, 0.3
        e = 0.5 * math.exp(0.5 * (b + t))
        assert K.kernel_E_r(r, t, b, 0.5) == 0
        assert K.kernel_E_rr(r, t, b, 0.5) == 0
        assert abs(K.kernel_E_t(r, t, b, 0.5) - 0.5 * e) < 1e-14
        assert abs(K.kernel_E_tt(r, t, b, 0.5) - 0.25 * e) < 1e-14

    @pytest.mark.parametrize("mass", MASSES)
    def test_edge_slopes(self, mass):
        m2 = complex(mass) ** 2
        t, b = 2.0, 0.5
        w = math.exp(-b) - math.exp(-t)
        er = 0.25 * (0.25 - m2) * (math.exp(t) - math.exp(b)) * math.exp(0.5 * (b + t))
        et = math.exp(0.5 * (b - t)) * (math.exp(b) * (1 - 4 * m2) + (4 * m2 + 3) * math.exp(t)) / 16
        assert abs(K.kernel_E_r(w, t, b, mass) - er) <= 1e-13 * max(1, abs(er))
        assert abs(K.kernel_E_t(w, t, b, mass) - et) <= 1e-13 * max(1, abs(et))


class TestK1:
    def test_is_E_at_zero_source_time(self):
        z = np.linspace(0, phi(2.0), 9)
        assert np.array_equal(K.kernel_K1(z, 2.0, 1.0), K.kernel_E(z, 2.0, 0.0, 1.0))

    @pytest.mark.parametrize("mass", MASSES)
    def test_edge_value(self, mass):
        t = np.array([0.3, 1.0, 3.0])
        assert np.all(rel_gap(K.kernel_K1(phi(t), t, mass), 0.5 * np.exp(0.5 * t)) < 1e-13)

    @pytest.mark.parametrize("mass", MASSES)
    def test_edge_flux(self, mass):
        t = np.array([0.3, 1.0, 3.0])
        ph = phi(t)
        terms = [2 * np.exp(-t) * K.kernel_K1_z(ph, t, mass), 2 * K.kernel_K1_t(ph, t, mass), -K.kernel_K1(ph, t, mass)]
        assert np.all(np.abs(sum(terms)) <= 1e-13 * sum(np.abs(x) for x in terms))

    def test_edge_typed_to_nine_digits(self):
        assert abs(K.kernel_K1(0.632120559, 1.0, 0.25) - 0.5 * math.exp(0.5)) < 1e-9

    @pytest.mark.parametrize("z,t", [(-0.01, 1.0), (0.7, 1.0), (0.1, -1.0)])
    def test_domain(self, z, t):
        with pytest.raises(DomainError):
            K.kernel_K1(z, t, 0.25)


class TestK0:
    @pytest.mark.parametrize("z,t,mass,expected", K0_REFERENCE)
    def test_reference_values(self, z, t, mass, expected):
        # the two-term formula cancels when K0 is small next to its terms
        assert abs(K.kernel_K0(z, t, mass) - expected) <= 1e-12 * abs(expected)

    @pytest.mark.parametrize("z,t,mass,expected", K0_REFERENCE)
    def test_symmetric_form_reference(self, z, t, mass, expected):
        assert abs(K.kernel_K0_symmetric(z, t, mass) - expected) <= 1e-13 * abs(expected)

    def test_half_mass_closed_form(self):
        t = np.array([0.2, 1.0, 4.0])
        for z in (0.0, 0.5, 1.0):
            zz = z * phi(t)
            assert np.all(np.abs(K.kernel_K0(zz, t, 0.5) + 0.25 * np.exp(0.5 * t)) < 1e-13 * np.exp(0.5 * t))

    @pytest.mark.parametrize("mass", REAL_MASSES)
    def test_minus_b_derivative_of_E(self, mass):
        r, t, b = halton_points(200, seed=3)
        z = r / (np.exp(-b) - np.exp(-t)) * phi(t)
        h = np.minimum(3e-3, 0.01 * -np.log(z + np.exp(-t)))
        dE, _ = _d_db("E", z, t, mass, h)
        k0 = K.kernel_K0(z, t, mass)
        # value-relative: independent of the stencil rounding scale
        assert np.max(np.abs(k0 + dE) / np.abs(k0)) < 2e-9

    @pytest.mark.parametrize("mass", MASSES)
    def test_direct_formula_near_edge(self, mass):
        t = np.array([0.1, 1.0, 2.5, 5.0])
        for frac in (0.5, 0.99, 1 - 1e-3, 1 - 1e-4):
            z = frac * phi(t)
            # cancellation in the two-term formula grows toward the edge at small t
            assert np.all(rel_gap(K.kernel_K0(z, t, mass), K.kernel_K0_symmetric(z, t, mass)) < 1e-10)

    @pytest.mark.parametrize("mass", MASSES)
    def test_blend_matches_symmetric_form(self, mass):
        # cubic Hermite over eps*phi(t); K0 varies on the scale e^-t, so the
        # fourth-order blend error grows like (eps phi e^t)^4 with t
        t = np.array([0.1, 1.0, 2.5, 5.0])
        bound = np.array([1e-10, 2e-11, 2e-11, 2e-8])
        for frac in (1 - 9e-5, 1 - 3e-5, 1 - 1e-7, 1.0):
            z = frac * phi(t)
            assert np.all(rel_gap(K.kernel_K0(z, t, mass), K.kernel_K0_symmetric(z, t, mass)) < bound)

    @pytest.mark.parametrize("mass", MASSES)
    def test_boundary_value_matches_kernel(self, mass):
        t = np.array([0.3, 1.0, 4.0])
        lim = K.kernel_K0_boundary(t, mass)
        assert np.all(rel_gap(lim.value, K.kernel_K0_symmetric(phi(t), t, mass)) < 1e-13)
        assert np.all(lim.value == K.kernel_K0(phi(t), t, mass))

    def test_boundary_slopes_against_extrapolated_limits(self):
        lim = K.kernel_K0_boundary(1.0, 0.0)
        assert abs(lim.dz - K0_DZ_LIMIT_M0_T1) < 1e-15
        assert abs(lim.dt - K0_DT_LIMIT_M0_T1) < 1e-15

    @pytest.mark.parametrize("mass", MASSES)
    def test_boundary_balance(self, mass):
        t = np.linspace(0.1, 5, 12)
        m2 = complex(mass) ** 2
        lim = K.kernel_K0_boundary(t, mass)
        terms = [(0.25 - m2) * np.exp(0.5 * t), -2 * np.exp(-t) * lim.value, 4 * np.exp(-2 * t) * lim.dz,
                 4 * np.exp(-t) * lim.dt]
        assert np.all(np.abs(sum(terms)) <= 1e-14 * sum(np.abs(x) for x in terms))

    def test_opposite_constant_sign_breaks_balance(self):
        t = 1.0
        lim = K.kernel_K0_boundary(t, 0.0)
        flipped = lim.dt + 2 * 15 / 256 * math.exp(-0.5 * t)
        bal = 0.25 * math.exp(0.5 * t) - 2 * math.exp(-t) * lim.value + 4 * math.exp(-2 * t) * lim.dz
        assert abs(bal + 4 * math.exp(-t) * lim.dt) < 1e-14
        assert abs(bal + 4 * math.exp(-t) * flipped) > 1e-2

    def test_alias(self):
        assert K.kernel_K0_boundary_derivatives is K.kernel_K0_boundary

    @pytest.mark.parametrize("mass", MASSES)
    def test_axis_slope_small(self, mass):
        t = np.array([0.5, 2.0, 4.5])
        hz = 1e-3 * np.minimum(phi(t), np.exp(-t))
        f0, f1, f2 = (K.kernel_K0(k * hz, t, mass) for k in range(3))
        slope = (-3 * f0 + 4 * f1 - f2) / (2 * hz)
        # truncation O(hz^2) times K0_zzz, rounding ~ |K0| eps / hz
        assert np.all(np.abs(slope) <= 1e-8 * np.abs(f0) / hz)

    def test_needs_positive_time(self):
        with pytest.raises(DomainError):
            K.kernel_K0(0.0, 0.0, 0.25)

    def test_complex_mass(self):
        v = K.kernel_K0(0.2, 1.0, 0.3 + 0.2j)
        s = K.kernel_K0_symmetric(0.2, 1.0, 0.3 + 0.2j)
        assert abs(v - s) < 1e-13 * abs(s)
        assert abs(v.imag) > 1e-4
