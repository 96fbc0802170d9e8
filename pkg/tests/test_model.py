"""Tests for kinematics: j, lambda, flux split, planes and channels."""
import math

import pytest

from error_handling import PhysicsDomainError
from model import (
    DEFAULT_G_FACTOR,
    Effect,
    PhysicalConfig,
    affected_channels,
    alpha_min_for_two_channels,
    boundary_channels,
    channel_beta_windows,
    coupling_lambda,
    critical_channels,
    effective_j,
    flux_decompose,
    make_channel,
    planes,
    planes_ab,
    planes_ac,
)


@pytest.fixture
def flat_half_flux():
    """alpha = 1, phi = 0.5, s = +1."""
    return PhysicalConfig(alpha=1.0, phi=0.5, s=1)


class TestPhysicalConfig:
    """Test configuration invariants."""

    @pytest.mark.parametrize("alpha", [0.0, -0.1, 1.0000001])
    def test_rejects_alpha(self, alpha):
        """Test alpha outside (0, 1] is rejected."""
        with pytest.raises(PhysicsDomainError, match="alpha"):
            PhysicalConfig(alpha=alpha, phi=0.5, s=1)

    @pytest.mark.parametrize("s", [0, 2, -2])
    def test_rejects_spin(self, s):
        """Test spins other than +-1 are rejected."""
        with pytest.raises(PhysicsDomainError):
            PhysicalConfig(alpha=0.5, phi=0.5, s=s)

    def test_rejects_mass(self):
        """Test a zero mass is rejected."""
        with pytest.raises(PhysicsDomainError, match="mass"):
            PhysicalConfig(alpha=0.5, phi=0.5, s=1, mass=0.0)

    def test_default_g_factor(self):
        """Test the default g-factor is the electron value."""
        cfg = PhysicalConfig(alpha=0.5, phi=0.5, s=1)
        assert cfg.g_factor == DEFAULT_G_FACTOR
        assert DEFAULT_G_FACTOR == pytest.approx(2.0023193, abs=1e-7)


class TestEffectiveJ:
    """Test j and lambda."""

    def test_flat_space(self, flat_half_flux):
        """Test j = m + phi in flat space."""
        for m in range(-5, 6):
            assert effective_j(flat_half_flux, m) == pytest.approx(m + 0.5, abs=1e-15)

    def test_cone(self):
        """Test the spin term shifts j on a cone."""
        cfg = PhysicalConfig(alpha=0.5, phi=0.25, s=-1)
        # (m + phi)/alpha - (1 - alpha) s / (2 alpha)
        assert effective_j(cfg, 0) == pytest.approx(0.5 + 0.5)
        assert effective_j(cfg, -1) == pytest.approx(-1.5 + 0.5)

    def test_coupling(self):
        """Test lambda = g phi s / (2 alpha)."""
        cfg = PhysicalConfig(alpha=0.5, phi=0.3, s=-1, g_factor=2.0)
        assert coupling_lambda(cfg) == pytest.approx(-0.6)


class TestFluxDecompose:
    """Test phi = N + beta."""

    @pytest.mark.parametrize("phi,n,beta", [
        (0.0, 0, 0.0),
        (2.25, 2, 0.25),
        (-0.25, -1, 0.75),
        (-3.0, -3, 0.0),
    ])
    def test_split(self, phi, n, beta):
        """Test phi splits into floor and remainder."""
        parts = flux_decompose(phi)
        assert parts.n_integer == n
        assert parts.beta == pytest.approx(beta)
        assert 0.0 <= parts.beta < 1.0

    def test_just_below_integer(self):
        """Test beta stays below 1 when rounding pushes it up."""
        parts = flux_decompose(-1e-20)
        assert 0.0 <= parts.beta < 1.0
        assert parts.n_integer + parts.beta == pytest.approx(0.0, abs=1e-15)


class TestPlanes:
    """Test the pi_-/pi_+ planes."""

    @pytest.mark.parametrize("alpha", [0.1, 0.5, 1.0])
    @pytest.mark.parametrize("s", [-1, 1])
    def test_width(self, alpha, s):
        """Test both plane pairs are 2 alpha apart."""
        lo, hi = planes_ab(alpha, 0.3, s, 2)
        assert hi - lo == pytest.approx(2.0 * alpha)
        lo, hi = planes_ac(alpha, 0.3, s, 2)
        assert hi - lo == pytest.approx(2.0 * alpha)

    def test_ac_equals_ab_for_positive_spin(self):
        """Test the AC planes equal the AB ones for s = +1."""
        for alpha in (0.2, 0.7):
            for beta in (0.0, 0.4):
                assert planes(Effect.AC, alpha, beta, 1, 3) == planes(Effect.AB, alpha, beta, 1, 3)

    def test_ac_negative_spin_flips_flux(self):
        """Test the AC planes flip the flux for s = -1."""
        lo, hi = planes_ac(0.5, 0.25, -1, 1)
        centre = 1.25 - 0.25
        assert (lo, hi) == (pytest.approx(centre - 0.5), pytest.approx(centre + 0.5))

    def test_planes_match_j(self):
        """Test m lies between the planes exactly when |j| < 1."""
        cfg = PhysicalConfig(alpha=0.4, phi=1.35, s=-1)
        parts = cfg.flux_parts()
        lo, hi = planes_ab(cfg.alpha, parts.beta, cfg.s, parts.n_integer)
        for m in range(-6, 4):
            assert (lo < m < hi) == (abs(effective_j(cfg, m)) < 1.0)


class TestCriticalChannels:
    """Test channel enumeration."""

    def test_flat_half_flux(self, flat_half_flux):
        """Test half flux in flat space makes m = -1 and 0 critical."""
        assert [c.m for c in critical_channels(flat_half_flux)] == [-1, 0]

    def test_quarter_cone_negative_spin(self):
        """Test a quarter cone with s = -1 has one critical channel."""
        cfg = PhysicalConfig(alpha=0.25, phi=0.5, s=-1)
        assert [c.m for c in critical_channels(cfg)] == [-1]

    def test_boundary_channel_excluded(self):
        """Test |j| = 1 channels are boundary channels and not critical."""
        cfg = PhysicalConfig(alpha=1.0, phi=0.0, s=1)
        assert [c.m for c in critical_channels(cfg)] == [0]
        assert [c.m for c in boundary_channels(cfg)] == [-1, 1]
        assert not make_channel(cfg, 1).in_critical_subspace

    @pytest.mark.parametrize("alpha", [0.05, 0.3, 0.6, 1.0])
    @pytest.mark.parametrize("phi", [0.0, 0.1, 0.5, 0.99, 2.7, -1.4])
    def test_at_most_two(self, alpha, phi):
        """Test no configuration has more than two critical channels."""
        for s in (-1, 1):
            channels = critical_channels(PhysicalConfig(alpha=alpha, phi=phi, s=s))
            assert len(channels) <= 2
            assert all(abs(c.j) < 1.0 for c in channels)

    def test_channel_carries_lambda(self, flat_half_flux):
        """Test channels carry the configuration coupling."""
        channel = make_channel(flat_half_flux, 0)
        assert channel.lam == coupling_lambda(flat_half_flux)
        assert channel.abs_j == pytest.approx(0.5)


class TestRegionStatements:
    """Which m are affected for some beta in [0, 1)."""

    @pytest.mark.parametrize("n", [0, 4, -3])
    def test_quarter_cone(self, n):
        """Test a quarter cone affects one channel chosen by spin."""
        assert affected_channels(0.25, -1, n) == [-n - 1]
        assert affected_channels(0.25, 1, n) == [-n]

    @pytest.mark.parametrize("s", [-1, 1])
    def test_half_cone(self, s):
        """Test a half cone affects both channels."""
        assert affected_channels(0.5, s, 2) == [-3, -2]

    @pytest.mark.parametrize("beta", [0.05, 0.5, 0.95])
    def test_flat_space_all_beta(self, beta):
        """Test flat space has two critical channels for every beta."""
        for s in (-1, 1):
            cfg = PhysicalConfig(alpha=1.0, phi=3 + beta, s=s)
            assert sorted(c.m for c in critical_channels(cfg)) == [-4, -3]

    def test_windows_are_consistent_with_j(self):
        """Test window midpoints give |j| < 1."""
        alpha, s, n = 0.5, -1, 1
        for window in channel_beta_windows(alpha, s, n):
            beta = 0.5 * (window.beta_lo + window.beta_hi)
            cfg = PhysicalConfig(alpha=alpha, phi=n + beta, s=s)
            assert abs(effective_j(cfg, window.m)) < 1.0

    def test_ac_windows_negative_spin(self):
        """Test AC window midpoints lie between the AC planes."""
        alpha, n = 0.5, 2
        for window in channel_beta_windows(alpha, -1, n, Effect.AC):
            beta = 0.5 * (window.beta_lo + window.beta_hi)
            lo, hi = planes_ac(alpha, beta, -1, n)
            assert lo < window.m < hi
            assert 0.0 <= window.beta_lo < window.beta_hi <= 1.0


class TestAlphaMin:
    """Test the smallest alpha with two affected channels."""

    @pytest.mark.parametrize("s", [-1, 1])
    def test_region_value(self, s):
        """Test the region infimum is 1/3 for either spin."""
        report = alpha_min_for_two_channels(s)
        assert report.value == pytest.approx(1.0 / 3.0, abs=1e-12)
        assert report.feasible
        assert report.is_infimum
        assert report.binding_offset in (0, -1)

    def test_just_above_and_below(self):
        """Test the channel count changes across 1/3."""
        assert len(affected_channels(1.0 / 3.0 + 1e-9, 1, 0)) == 2
        assert len(affected_channels(1.0 / 3.0 - 1e-9, 1, 0)) == 1

    def test_fixed_beta(self):
        """Test the fixed-beta value at beta = 1/2 is 2/3."""
        report = alpha_min_for_two_channels(-1, beta=0.5)
        assert report.value == pytest.approx(2.0 / 3.0)
        assert report.feasible
        assert report.value >= 0.5

    def test_fixed_beta_is_simultaneous(self):
        """Test both channels are critical just above the fixed-beta value."""
        s, beta = 1, 0.3
        value = alpha_min_for_two_channels(s, beta).value
        cfg = PhysicalConfig(alpha=min(value + 1e-6, 1.0), phi=beta, s=s)
        assert [c.m for c in critical_channels(cfg)] == [-1, 0]

    def test_invalid_inputs(self):
        """Test bad spins and beta = 1 are rejected."""
        with pytest.raises(PhysicsDomainError):
            alpha_min_for_two_channels(0)
        with pytest.raises(PhysicsDomainError):
            alpha_min_for_two_channels(1, beta=1.0)

    def test_never_below_half_at_fixed_beta(self):
        """Test fixed-beta values never drop below 1/2."""
        for s in (-1, 1):
            for beta in (0.0, 0.2, 0.5, 0.8):
                report = alpha_min_for_two_channels(s, beta)
                assert report.value >= 0.5 - 1e-12 or not report.feasible
                assert math.isfinite(report.value)
