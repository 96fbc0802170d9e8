"""Tests for the boundary-condition extension: mu, phase shifts, S and bound states."""
import cmath
import math

import numpy as np
import pytest

from bg import (
    ExtensionParam,
    MethodTag,
    bound_state_bg,
    continued_denominator,
    mu_nu,
    partial_wave_sum,
    phase_shift_extended,
    phase_shift_regular,
    radial_wavefunction,
    s_matrix,
    s_matrix_from_bound,
    scatter_channel,
)
from error_handling import DegenerateChannelError, PhysicsDomainError, PoleError
from model import PhysicalConfig
from specfun import bessel_j


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def attractive():
    """nu = -1, the extension with a bound state at kappa_b = 1 for |j| = 1/2."""
    return ExtensionParam.finite(-1.0)


class TestExtensionParam:
    """Test the extension parameter."""

    def test_friedrichs(self):
        """Test the Friedrichs extension has zero scattering length."""
        ext = ExtensionParam.friedrichs()
        assert ext.is_friedrichs
        assert ext.scattering_length == 0.0
        assert str(ext) == "friedrichs"

    def test_finite(self):
        """Test a finite nu gives scattering length 1/nu."""
        ext = ExtensionParam.finite(-2.0)
        assert not ext.is_friedrichs
        assert ext.scattering_length == -0.5
        assert ExtensionParam.finite(0.0).scattering_length == math.inf

    @pytest.mark.parametrize("nu", [math.inf, -math.inf, math.nan])
    def test_rejects_non_finite(self, nu):
        """Test infinite and NaN values are rejected as finite parameters."""
        with pytest.raises(PhysicsDomainError):
            ExtensionParam.finite(nu)


class TestMuNu:
    """Test the irregular admixture."""

    def test_friedrichs_is_zero(self):
        """Test mu vanishes for the Friedrichs extension."""
        assert mu_nu(ExtensionParam.friedrichs(), 0.4, 2.0) == 0.0

    def test_half_integer(self, attractive):
        """Test mu reduces to k/nu at |j| = 1/2."""
        # cos(pi/2) vanishes, so mu = k Gamma(1/2) / (2 Gamma(3/2) nu) = k / nu
        for k in (0.1, 1.0, 3.0):
            assert mu_nu(attractive, 0.5, k) == pytest.approx(-k, rel=1e-12)

    def test_depends_on_abs_j(self):
        """Test mu depends on j only through |j|."""
        ext = ExtensionParam.finite(0.7)
        assert mu_nu(ext, -0.3, 1.5) == mu_nu(ext, 0.3, 1.5)

    def test_degenerate_channel(self, attractive):
        """Test j = 0 raises DegenerateChannelError."""
        with pytest.raises(DegenerateChannelError):
            mu_nu(attractive, 0.0, 1.0)

    def test_outside_critical_range(self, attractive):
        """Test |j| >= 1 is outside the domain of mu."""
        with pytest.raises(PhysicsDomainError):
            mu_nu(attractive, 1.2, 1.0)

    def test_rejects_non_positive_k(self, attractive):
        """Test k <= 0 is rejected."""
        with pytest.raises(PhysicsDomainError):
            mu_nu(attractive, 0.5, 0.0)


class TestPhaseShifts:
    """Test regular and extended phase shifts."""

    @pytest.mark.parametrize("m", range(-4, 5))
    def test_flat_space_no_flux(self, m):
        """Test flat space without flux scatters trivially."""
        cfg = PhysicalConfig(alpha=1.0, phi=0.0, s=1)
        entry = scatter_channel(cfg, m, ExtensionParam.friedrichs(), 1.0)
        assert entry.delta_reg == pytest.approx(0.0, abs=1e-15)
        assert entry.s_element == pytest.approx(1.0 + 0j, abs=1e-15)

    def test_regular_formula(self):
        """Test the regular phase shift formula on known values."""
        assert phase_shift_regular(2, 0.5) == pytest.approx(0.75 * math.pi)
        assert phase_shift_regular(-1, -0.5) == pytest.approx(0.25 * math.pi)

    def test_extended_reduces_to_regular(self):
        """Test the Friedrichs extension keeps the regular phase shift."""
        assert phase_shift_extended(0, 0.4, ExtensionParam.friedrichs(), 2.0) == phase_shift_regular(0, 0.4)

    def test_extended_adds_arctan(self, attractive):
        """Test a finite extension adds arctan(mu) to the regular phase shift."""
        expected = phase_shift_regular(0, 0.5) + math.atan(-2.0)
        assert phase_shift_extended(0, 0.5, attractive, 2.0) == pytest.approx(expected)


class TestSMatrix:
    """Test unitarity and the bound-state form."""

    def test_unitarity(self, rng):
        """Test |S| = 1 on random channels and extensions."""
        for _ in range(2000):
            j = rng.uniform(0.02, 0.98) * rng.choice([-1.0, 1.0])
            nu = rng.uniform(-5.0, 5.0)
            k = rng.uniform(0.05, 20.0)
            m = int(rng.integers(-5, 6))
            value = s_matrix(m, j, ExtensionParam.finite(nu), k)
            assert abs(abs(value) - 1.0) <= 1e-12

    def test_friedrichs_is_pure_rotation(self):
        """Test the Friedrichs S-matrix is exp(2i delta_reg)."""
        value = s_matrix(1, 0.3, ExtensionParam.friedrichs(), 4.0)
        assert value == pytest.approx(cmath.exp(2j * phase_shift_regular(1, 0.3)))

    @pytest.mark.parametrize("j", [0.2, 0.5, 0.8])
    @pytest.mark.parametrize("nu", [-0.3, -1.0, -4.0])
    def test_bound_form_matches(self, j, nu):
        """Test the bound-state form of S agrees with the direct one."""
        ext = ExtensionParam.finite(nu)
        kappa_b = bound_state_bg(ext, j, 1.0).kappa_b
        for k in (0.1, 0.9, 2.5, 11.0):
            expected = s_matrix(0, j, ext, k)
            assert s_matrix_from_bound(0, j, kappa_b, k) == pytest.approx(expected, abs=1e-10)

    def test_unphased_form_is_not_unimodular(self):
        """Test the unphased bound form leaves the unit circle."""
        value = s_matrix_from_bound(0, 0.5, 1.0, 2.0, unphased=True)
        assert abs(value) == pytest.approx(3.0)

    def test_unphased_form_pole(self):
        """Test the unphased bound form has a pole at k = kappa_b."""
        with pytest.raises(PoleError):
            s_matrix_from_bound(0, 0.5, 1.0, 1.0, unphased=True)


class TestBoundState:
    """Test the bound state of nu < 0."""

    def test_half_integer_example(self, attractive):
        """Test nu = -1 at |j| = 1/2 binds at kappa_b = 1."""
        state = bound_state_bg(attractive, 0.5, 1.0)
        assert state.energy == pytest.approx(-0.5, rel=1e-12)
        assert state.kappa_b == pytest.approx(1.0, rel=1e-12)
        assert state.method_tag is MethodTag.BG

    def test_energy_scales_with_mass(self, attractive):
        """Test the energy scales as 1/M with kappa_b fixed."""
        light = bound_state_bg(attractive, 0.3, 1.0)
        heavy = bound_state_bg(attractive, 0.3, 4.0)
        assert heavy.energy == pytest.approx(light.energy / 4.0)
        assert heavy.kappa_b == pytest.approx(light.kappa_b)

    @pytest.mark.parametrize("j", [0.15, 0.5, 0.85])
    def test_pole_of_continued_s_matrix(self, j):
        """Test kappa_b zeroes the continued denominator."""
        ext = ExtensionParam.finite(-0.6)
        kappa_b = bound_state_bg(ext, j, 1.0).kappa_b
        scale = 4.0 ** j
        assert abs(continued_denominator(-0.6, j, 1j * kappa_b)) <= 1e-12 * scale

    @pytest.mark.parametrize("ext", [ExtensionParam.friedrichs(), ExtensionParam.finite(0.0),
                                     ExtensionParam.finite(2.0)])
    def test_no_bound_state(self, ext):
        """Test non-negative and Friedrichs extensions have no bound state."""
        with pytest.raises(PhysicsDomainError):
            bound_state_bg(ext, 0.5, 1.0)

    def test_rejects_bad_mass(self, attractive):
        """Test a negative mass is rejected."""
        with pytest.raises(PhysicsDomainError):
            bound_state_bg(attractive, 0.5, -1.0)


class TestWavefunction:
    """Test radial functions and the partial-wave sum."""

    def test_friedrichs_is_regular(self):
        """Test the Friedrichs radial function is the phased regular Bessel function."""
        value = radial_wavefunction(0, 0.4, ExtensionParam.friedrichs(), 2.0, 1.5)
        expected = cmath.exp(-0.2j * math.pi) * bessel_j(0.4, 3.0)
        assert value == pytest.approx(expected, abs=1e-14)

    def test_extension_adds_irregular(self, attractive):
        """Test a finite extension mixes in the irregular solution."""
        k, r = 2.0, 0.5
        value = radial_wavefunction(0, 0.5, attractive, k, r)
        mu = mu_nu(attractive, 0.5, k)
        expected = cmath.exp(-0.25j * math.pi) * (bessel_j(0.5, 1.0) - mu * bessel_j(-0.5, 1.0))
        assert value == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("varphi", [0.0, 0.7, 2.0, math.pi])
    def test_plane_wave_modulus(self, varphi):
        """Test the flat-space sum reproduces a unit plane wave."""
        cfg = PhysicalConfig(alpha=1.0, phi=0.0, s=1)
        result = partial_wave_sum(cfg, ExtensionParam.friedrichs(), 1.0, 5.0, varphi, 40)
        assert abs(result.psi) == pytest.approx(1.0, abs=1e-10)
        assert result.tail_estimate < 1e-20
        assert result.m_max == 40

    def test_degenerate_channel_falls_back(self, attractive):
        """Test a j = 0 channel falls back to the regular solution."""
        cfg = PhysicalConfig(alpha=1.0, phi=0.0, s=1)
        extended = partial_wave_sum(cfg, attractive, 1.0, 2.0, 0.3, 20)
        regular = partial_wave_sum(cfg, ExtensionParam.friedrichs(), 1.0, 2.0, 0.3, 20)
        assert extended.psi == pytest.approx(regular.psi)

    def test_rejects_small_m_max(self):
        """Test m_max below 1 is rejected."""
        cfg = PhysicalConfig(alpha=1.0, phi=0.5, s=1)
        with pytest.raises(PhysicsDomainError):
            partial_wave_sum(cfg, ExtensionParam.friedrichs(), 1.0, 1.0, 0.0, 0)


class TestScatterChannel:
    """Test per-channel scattering data."""

    def test_channels_and_flags(self, attractive):
        """Test rows keep the requested channel order and critical flags."""
        cfg = PhysicalConfig(alpha=1.0, phi=0.5, s=1)
        table = [scatter_channel(cfg, m, attractive, 1.5) for m in (2, -1, 0, 1)]
        assert [e.m for e in table] == [2, -1, 0, 1]
        assert [e.critical for e in table] == [False, True, True, False]

    def test_non_critical_channels_ignore_extension(self, attractive):
        """Test non-critical channels use the regular phase shift."""
        cfg = PhysicalConfig(alpha=1.0, phi=0.5, s=1)
        entry = scatter_channel(cfg, 3, attractive, 1.5)
        assert entry.delta_nu == entry.delta_reg
