"""Tests for the delta-shell regularization."""
import logging

import pytest

from bg import MethodTag, bound_state_bg
from error_handling import DegenerateChannelError, PhysicsDomainError
from ks import (
    ADVISORY_KR0,
    MatchingVariant,
    ShellConfig,
    bound_state_ks,
    exterior_log_derivative,
    interior_log_derivative,
    kappa_from_log_derivative,
    nu_from_physical,
)


@pytest.fixture
def unit_shell():
    """r0 = 1, lambda = -3/2."""
    return ShellConfig(r0=1.0, lam=-1.5)


class TestShellConfig:
    """Test shell parameters."""

    @pytest.mark.parametrize("r0", [0.0, -1.0, float("inf"), float("nan")])
    def test_rejects_radius(self, r0):
        """Test non-positive shell radii are rejected."""
        with pytest.raises(PhysicsDomainError):
            ShellConfig(r0=r0, lam=-1.0)

    def test_rejects_non_finite_lambda(self):
        """Test an infinite coupling is rejected."""
        with pytest.raises(PhysicsDomainError):
            ShellConfig(r0=1.0, lam=float("-inf"))


class TestBoundStateKS:
    """Test the closed-form shell bound state."""

    def test_half_integer_example(self, unit_shell):
        """Test lambda = -1.5 at |j| = 1/2 binds at kappa_b = 1/2."""
        state = bound_state_ks(unit_shell, 0.5, 1.0)
        assert state.energy == pytest.approx(-0.125, rel=1e-12)
        assert state.kappa_b == pytest.approx(0.5, rel=1e-12)
        assert state.method_tag is MethodTag.KS

    def test_implied_nu(self, unit_shell):
        """Test the bridge gives nu = -1/2 for the unit shell."""
        assert nu_from_physical(unit_shell, 0.5).nu == pytest.approx(-0.5)

    @pytest.mark.parametrize("j", [0.1, 0.45, 0.9, -0.6])
    @pytest.mark.parametrize("lam", [-1.2, -4.0, 3.0])
    @pytest.mark.parametrize("r0", [1e-3, 0.2])
    def test_agrees_with_boundary_condition_route(self, j, lam, r0):
        """Test the closed form matches the boundary-condition energy via the bridge."""
        shell = ShellConfig(r0=r0, lam=lam)
        closed = bound_state_ks(shell, j, 2.0)
        bridged = bound_state_bg(nu_from_physical(shell, j), j, 2.0)
        assert closed.energy == pytest.approx(bridged.energy, rel=1e-10)

    @pytest.mark.parametrize("lam", [-0.3, 0.0, 0.3])
    def test_no_bound_state_between(self, lam):
        """Test couplings with |lambda| < |j| have no bound state."""
        with pytest.raises(PhysicsDomainError, match="no bound state"):
            bound_state_ks(ShellConfig(r0=1.0, lam=lam), 0.5, 1.0)

    def test_coupling_equal_to_j(self):
        """Test lambda = |j| is rejected by the closed form and the bridge."""
        with pytest.raises(PhysicsDomainError):
            bound_state_ks(ShellConfig(r0=1.0, lam=0.5), 0.5, 1.0)
        with pytest.raises(PhysicsDomainError):
            nu_from_physical(ShellConfig(r0=1.0, lam=0.5), 0.5)

    def test_rejects_mass(self, unit_shell):
        """Test a zero mass is rejected."""
        with pytest.raises(PhysicsDomainError):
            bound_state_ks(unit_shell, 0.5, 0.0)

    def test_degenerate_channel(self, unit_shell):
        """Test j = 0 raises DegenerateChannelError."""
        with pytest.raises(DegenerateChannelError):
            bound_state_ks(unit_shell, 0.0, 1.0)

    def test_shell_variant(self, unit_shell):
        """Test the shell matching uses lambda + |j| as the interior value."""
        # L = lambda + |j| = -1, ratio (L + |j|)/(L - |j|) = 1/3
        assert interior_log_derivative(unit_shell, 0.5, MatchingVariant.SHELL) == -1.0
        state = bound_state_ks(unit_shell, 0.5, 1.0, MatchingVariant.SHELL)
        assert state.energy == pytest.approx(-2.0 * (1.0 / 3.0 * 0.5) ** 2)

    def test_default_variant_uses_lambda(self, unit_shell):
        """Test the default matching uses lambda itself."""
        assert interior_log_derivative(unit_shell, 0.5) == -1.5


class TestLogDerivative:
    """Test the exterior log-derivative and its inverse."""

    @pytest.mark.parametrize("j", [0.2, 0.5, 0.8])
    @pytest.mark.parametrize("kappa", [0.01, 0.1, 0.3])
    def test_round_trip(self, j, kappa):
        """Test kappa is recovered from its exterior log-derivative."""
        r0 = 1.0
        value = exterior_log_derivative(j, kappa, r0).value
        assert kappa_from_log_derivative(value, j, r0) == pytest.approx(kappa, rel=1e-10)

    @pytest.mark.parametrize("j", [0.3, 0.5, 0.7])
    def test_ks_kappa_reproduces_lambda(self, j):
        """Test the KS kappa reproduces lambda as exterior log-derivative."""
        shell = ShellConfig(r0=0.01, lam=-2.5)
        kappa = bound_state_ks(shell, j, 1.0).kappa_b
        assert exterior_log_derivative(j, kappa, shell.r0).value == pytest.approx(shell.lam, rel=1e-10)

    def test_advisory(self, caplog):
        """Test large kappa r0 sets the advisory and logs a warning."""
        with caplog.at_level(logging.WARNING, logger="ks"):
            result = exterior_log_derivative(0.5, 1.5 * ADVISORY_KR0, 1.0)
        assert result.advisory
        assert "inaccurate" in caplog.text

    def test_small_kr0_is_quiet(self):
        """Test small kappa r0 carries no advisory."""
        assert not exterior_log_derivative(0.5, 0.01, 1.0).advisory

    def test_inverse_rejects_non_decaying(self):
        """Test a log-derivative with no decaying solution is rejected."""
        with pytest.raises(PhysicsDomainError):
            kappa_from_log_derivative(0.0, 0.5, 1.0)

    def test_rejects_non_positive_kappa(self):
        """Test kappa = 0 is rejected."""
        with pytest.raises(PhysicsDomainError):
            exterior_log_derivative(0.5, 0.0, 1.0)
