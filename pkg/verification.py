"""
Deterministic invariant suite behind the ``verify`` command.

Every check returns (passed, detail); the detail is a short, reproducible
string (no commas, so the report stays a plain CSV). Sampled checks draw
from a numpy generator with a fixed seed.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import optimize

from bg import (
    ExtensionParam,
    bound_state_bg,
    partial_wave_sum,
    s_matrix,
    s_matrix_from_bound,
    scatter_channel,
)
from config import ConicalABConfig
from error_handling import ErrorAggregator, PoleError
from ks import MatchingVariant, ShellConfig, bound_state_ks, kappa_from_log_derivative, nu_from_physical
from model import PhysicalConfig, affected_channels, alpha_min_for_two_channels, critical_channels
from oracle import (
    RootFindSpec,
    boundary_values_extract,
    deficiency_indices,
    deficiency_norm,
    delta_shell_bound_state,
    find_smatrix_pole,
    implied_nu,
    shell_condition,
    shell_ks_gap,
)
from specfun import (
    bessel_i,
    bessel_i_prime,
    bessel_j,
    bessel_k,
    bessel_k_prime,
    gamma,
    half_integer_reference,
    j_asymptotic,
    j_series,
)

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20240917
UNITARITY_SAMPLES = 10_000

_ORDERS = [0.1 * i for i in range(1, 10)]
_CheckOutcome = Tuple[bool, str]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check."""
    name: str
    passed: bool
    detail: str


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / abs(b)


def _ms(values) -> str:
    return "{" + " ".join(str(v) for v in values) + "}"


def _worst(label: str, value: float, limit: float) -> _CheckOutcome:
    return value <= limit, f"{label} {value:.3e} (limit {limit:.0e})"


class InvariantSuite:
    """
    Named identity and cross-method checks across all numerics modules.

    Usage:
        results = InvariantSuite().run_all()
    """

    def __init__(self, config: Optional[ConicalABConfig] = None, seed: int = DEFAULT_SEED,
                 unitarity_samples: int = UNITARITY_SAMPLES):
        self.config = config or ConicalABConfig()
        self.seed = seed
        self.unitarity_samples = unitarity_samples
        self.errors = ErrorAggregator()
        self.root_spec = RootFindSpec(
            rel_tol=self.config.root_find.rel_tol,
            max_iter=self.config.root_find.max_iter,
            growth_factor=self.config.root_find.growth_factor,
            max_expansions=self.config.root_find.max_expansions,
        )
        self.policy = self.config.numerics.to_policy()

    def checks(self) -> Dict[str, Callable[[], _CheckOutcome]]:
        """Check names mapped to their methods, in report order."""
        return {
            "gamma_reflection": self.check_gamma_reflection,
            "bessel_wronskian": self.check_bessel_wronskian,
            "half_integer_forms": self.check_half_integer_forms,
            "j_branch_overlap": self.check_j_branch_overlap,
            "region_claims": self.check_region_claims,
            "alpha_min": self.check_alpha_min,
            "flat_phase_shift": self.check_flat_phase_shift,
            "unitarity": self.check_unitarity,
            "friedrichs_limit": self.check_friedrichs_limit,
            "bound_form_identity": self.check_bound_form_identity,
            "pole_energy_duality": self.check_pole_energy_duality,
            "bridge_identity": self.check_bridge_identity,
            "log_derivative_round_trip": self.check_log_derivative_round_trip,
            "shell_residual": self.check_shell_residual,
            "shell_half_integer": self.check_shell_half_integer,
            "shell_convergence": self.check_shell_convergence,
            "deficiency_indices": self.check_deficiency_indices,
            "deficiency_half_integer": self.check_deficiency_half_integer,
            "boundary_values": self.check_boundary_values,
            "plane_wave": self.check_plane_wave,
        }

    # -- special functions -------------------------------------------------

    def check_gamma_reflection(self) -> _CheckOutcome:
        worst = 0.0
        for i in range(1, 99):
            nu = 0.01 * i
            exact = math.pi * nu / math.sin(math.pi * nu)
            worst = max(worst, _rel(gamma(1.0 + nu) * gamma(1.0 - nu), exact))
        return _worst("max rel err", worst, 1e-11)

    def check_bessel_wronskian(self) -> _CheckOutcome:
        worst = 0.0
        for nu in _ORDERS:
            for z in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0):
                i_nu, k_nu = bessel_i(nu, z, self.policy), bessel_k(nu, z, self.policy)
                wronskian = z * (i_nu * bessel_k_prime(nu, z, self.policy)
                                 - bessel_i_prime(nu, z, self.policy) * k_nu)
                worst = max(worst, abs(wronskian + 1.0))
        return _worst("max |z W + 1|", worst, 1e-9)

    def check_half_integer_forms(self) -> _CheckOutcome:
        worst = 0.0
        for x in np.geomspace(0.1, 50.0, 40):
            x = float(x)
            envelope = math.sqrt(2.0 / (math.pi * x))
            worst = max(worst, abs(bessel_j(0.5, x, self.policy) - half_integer_reference("j", x)) / envelope)
            worst = max(worst, _rel(bessel_i(0.5, x, self.policy), half_integer_reference("i", x)))
            worst = max(worst, _rel(bessel_k(0.5, x, self.policy), half_integer_reference("k", x)))
            z = complex(math.sqrt(0.5), -math.sqrt(0.5)) * x
            worst = max(worst, _rel(bessel_k(0.5, z, self.policy), half_integer_reference("k", z)))
        return _worst("max rel err", worst, 1e-10)

    def check_j_branch_overlap(self) -> _CheckOutcome:
        worst = 0.0
        window = (12.0, 13.0, 14.0, 15.0)
        for nu in [-o for o in _ORDERS] + _ORDERS:
            for x in window:
                gap = abs(j_series(nu, x, self.policy) - j_asymptotic(nu, x, self.policy))
                worst = max(worst, gap / math.sqrt(2.0 / (math.pi * x)))
        return _worst(f"max scaled gap on x in [{window[0]:g} {window[-1]:g}]", worst, 1e-8)

    # -- planes and channels -----------------------------------------------

    def check_region_claims(self) -> _CheckOutcome:
        expected = {
            (0.25, -1): [-1],
            (0.25, 1): [0],
            (0.5, -1): [-1, 0],
            (0.5, 1): [-1, 0],
        }
        for n_integer in (0, 3, -2):
            for (alpha, s), offsets in expected.items():
                found = affected_channels(alpha, s, n_integer)
                wanted = [-n_integer + q for q in offsets]
                if found != wanted:
                    return False, f"alpha={alpha} s={s} N={n_integer}: {_ms(found)} != {_ms(wanted)}"
            for s in (-1, 1):
                for beta in (0.1, 0.5, 0.9):
                    cfg = PhysicalConfig(alpha=1.0, phi=n_integer + beta, s=s)
                    found = sorted(c.m for c in critical_channels(cfg))
                    if found != [-n_integer - 1, -n_integer]:
                        return False, f"alpha=1 phi={cfg.phi} s={s}: {_ms(found)}"
        return True, "all region statements hold"

    def check_alpha_min(self) -> _CheckOutcome:
        worst = max(abs(alpha_min_for_two_channels(s).value - 1.0 / 3.0) for s in (-1, 1))
        return _worst("max |alpha_min - 1/3|", worst, 1e-12)

    # -- extended Hamiltonian ----------------------------------------------

    def check_flat_phase_shift(self) -> _CheckOutcome:
        worst = 0.0
        friedrichs = ExtensionParam.friedrichs()
        for i in range(1, 10):
            phi = 0.1 * i
            cfg = PhysicalConfig(alpha=1.0, phi=phi, s=1)
            for m in range(-10, 11):
                entry = scatter_channel(cfg, m, friedrichs, 1.0)
                worst = max(worst, abs(entry.delta_nu - 0.5 * math.pi * (abs(m) - abs(m + phi))))
        return _worst("max abs err", worst, 1e-14)

    def check_unitarity(self) -> _CheckOutcome:
        rng = np.random.default_rng(self.seed)
        worst, poles = 0.0, 0
        for _ in range(self.unitarity_samples):
            aj = max(float(rng.uniform(0.0, 1.0)), 1e-9)
            j = aj if rng.uniform() < 0.5 else -aj
            ext = (ExtensionParam.friedrichs() if rng.uniform() < 0.1
                   else ExtensionParam.finite(float(rng.uniform(-1e3, 1e3))))
            k = 100.0 * (1.0 - float(rng.uniform()))
            m = int(rng.integers(-5, 6))
            try:
                worst = max(worst, abs(abs(s_matrix(m, j, ext, k)) - 1.0))
            except PoleError:
                poles += 1
        passed, detail = _worst("max ||S| - 1|", worst, 1e-12)
        return passed, f"{detail}; {self.unitarity_samples} samples; {poles} poles skipped"

    def check_friedrichs_limit(self) -> _CheckOutcome:
        worst = 0.0
        for aj in (0.3, 0.5, 0.7):
            regular = s_matrix(0, aj, ExtensionParam.friedrichs(), 1.0)
            for nu in (1e12, -1e12):
                worst = max(worst, abs(s_matrix(0, aj, ExtensionParam.finite(nu), 1.0) - regular))
        return _worst("max |S - S_F|", worst, 1e-6)

    def check_bound_form_identity(self) -> _CheckOutcome:
        worst = 0.0
        for aj in (0.3, 0.5, 0.7):
            for nu in (-10.0, -1.0, -0.1):
                ext = ExtensionParam.finite(nu)
                kappa = bound_state_bg(ext, aj, 1.0).kappa_b
                for k in (0.1, 1.0, 10.0):
                    worst = max(worst, _rel(s_matrix_from_bound(0, aj, kappa, k), s_matrix(0, aj, ext, k)))
        return _worst("max rel err", worst, 1e-10)

    def check_pole_energy_duality(self) -> _CheckOutcome:
        worst = 0.0
        for aj in _ORDERS:
            for nu in (-10.0, -1.0, -0.1):
                closed = bound_state_bg(ExtensionParam.finite(nu), aj, 1.0).kappa_b
                worst = max(worst, _rel(find_smatrix_pole(aj, nu, self.root_spec), closed))
        return _worst("max rel err", worst, 1e-8)

    def check_bridge_identity(self) -> _CheckOutcome:
        worst, cases = 0.0, 0
        for lam in (-0.6, -1.5, -5.0, -50.0):
            for aj in _ORDERS:
                if not lam < -aj:
                    continue
                for r0 in (1e-3, 1e-2, 1.0):
                    shell = ShellConfig(r0=r0, lam=lam)
                    via_nu = bound_state_bg(nu_from_physical(shell, aj), aj, 1.0).energy
                    direct = bound_state_ks(shell, aj, 1.0).energy
                    worst = max(worst, _rel(via_nu, direct))
                    cases += 1
        passed, detail = _worst("max rel err", worst, 1e-13)
        return passed, f"{detail}; {cases} cases"

    def check_log_derivative_round_trip(self) -> _CheckOutcome:
        worst = 0.0
        for aj in (0.3, 0.5, 0.7):
            for lam in (-1.5, -5.0):
                shell = ShellConfig(r0=1e-2, lam=lam)
                direct = bound_state_ks(shell, aj, 1.0).kappa_b
                worst = max(worst, _rel(kappa_from_log_derivative(lam, aj, shell.r0), direct))
        return _worst("max rel err", worst, 1e-10)

    # -- oracles -----------------------------------------------------------

    def check_shell_residual(self) -> _CheckOutcome:
        worst = 0.0
        for aj in (0.3, 0.5, 0.7):
            for lam in (-1.5, -5.0, -50.0):
                shell = ShellConfig(r0=1.0, lam=lam)
                state = delta_shell_bound_state(shell, aj, 1.0, self.root_spec)
                worst = max(worst, abs(shell_condition(state.kappa_b * shell.r0, aj, lam)))
        return _worst("max residual", worst, 1e-12)

    def check_shell_half_integer(self) -> _CheckOutcome:
        worst = 0.0
        for lam in (-1.5, -5.0, -50.0):
            def scalar(z: float) -> float:
                return -math.expm1(-2.0 * z) / (2.0 * z) + 1.0 / lam

            reference = optimize.brentq(scalar, 1e-8, 1e3, xtol=1e-15, rtol=1e-14)
            state = delta_shell_bound_state(ShellConfig(r0=1.0, lam=lam), 0.5, 1.0, self.root_spec)
            worst = max(worst, _rel(state.kappa_b, reference))
        return _worst("max rel err", worst, 1e-10)

    def check_shell_convergence(self) -> _CheckOutcome:
        aj = 0.5
        gaps = []
        for excess in (0.5, 0.2, 0.05, 0.01):
            shell = ShellConfig(r0=1e-3, lam=-2.0 * aj * (1.0 + excess))
            gaps.append(shell_ks_gap(shell, aj, 1.0, MatchingVariant.SHELL, self.root_spec).relative_gap)
        decreasing = all(b < a for a, b in zip(gaps, gaps[1:]))
        detail = "gaps " + " ".join(f"{g:.3e}" for g in gaps)
        return decreasing and gaps[-1] <= 1e-2, detail

    def check_deficiency_indices(self) -> _CheckOutcome:
        inside = [round(o, 1) for o in _ORDERS] + [0.999]
        expected = {**{o: (1, 1) for o in inside}, 1.1: (0, 0), 1.5: (0, 0)}
        tol = self.config.quadrature.index_tol
        for k0 in (0.5, 1.0, 2.0):
            for order, wanted in expected.items():
                found = deficiency_indices(order, k0, tol)
                if found != wanted:
                    return False, f"|j|={order} k0={k0}: {_ms(found)} != {_ms(wanted)}"
        return True, f"(1 1) on {len(inside)} orders below 1 and (0 0) above at 3 scales"

    def check_deficiency_half_integer(self) -> _CheckOutcome:
        q = self.config.quadrature
        exact = math.pi / (2.0 * math.sqrt(2.0))
        report = deficiency_norm(0.5, 1.0, sign=-1, tol=q.tol, decades=q.decades,
                                 envelope=q.envelope, limit=q.limit)
        if not report.converged:
            return False, f"quadrature did not converge (ratio {report.decade_ratio:.3e})"
        return _worst("abs err", abs(report.value - exact), 1e-8)

    def check_boundary_values(self) -> _CheckOutcome:
        aj, k, a, b = 0.5, 1.0, 1.0, 2.0
        samples = []
        for i in range(10):
            r = 1e-4 * 2.0 ** i
            samples.append((r, a * bessel_j(aj, k * r, self.policy) + b * bessel_j(-aj, k * r, self.policy)))
        values = boundary_values_extract(samples, aj)
        psi0_exact = b * (k / 2.0) ** (-aj) / gamma(1.0 - aj)
        ratio_exact = (a / b) * (k / 2.0) ** (2.0 * aj) * gamma(1.0 - aj) / gamma(1.0 + aj)
        psi0_err = _rel(values.psi0, psi0_exact)
        ratio_err = _rel(implied_nu(values), ratio_exact)
        passed = psi0_err <= 1e-8 and ratio_err <= 1e-6
        return passed, f"psi0 rel err {psi0_err:.3e}; ratio rel err {ratio_err:.3e}"

    def check_plane_wave(self) -> _CheckOutcome:
        cfg = PhysicalConfig(alpha=1.0, phi=0.0, s=1)
        worst = 0.0
        for varphi in (0.0, math.pi / 3.0, math.pi / 2.0, math.pi):
            result = partial_wave_sum(cfg, ExtensionParam.friedrichs(), 1.0, 5.0, varphi, 60)
            worst = max(worst, abs(abs(result.psi) - 1.0))
        return _worst("max ||psi| - 1|", worst, 1e-3)

    # -- driver ------------------------------------------------------------

    def run_all(self) -> List[CheckResult]:
        """
        Run every check in report order.

        A check that raises is recorded as failed with the exception in its
        detail; the exception also goes to self.errors.

        Returns:
            List of CheckResult
        """
        results = []
        for name, check in self.checks().items():
            try:
                passed, detail = check()
            except Exception as e:
                self.errors.add_error(e, context=name)
                passed, detail = False, f"{type(e).__name__}: {e}".replace(",", ";")
            results.append(CheckResult(name=name, passed=bool(passed), detail=detail))
            logger.debug(f"{name}: {'PASS' if passed else 'FAIL'} ({detail})")

        failed = [r.name for r in results if not r.passed]
        if failed:
            logger.warning(f"Verification found {len(failed)} failing check(s): {', '.join(failed)}")
        else:
            logger.info(f"Verification PASSED ({len(results)}/{len(results)} checks)")
        return results


def report_rows(results: List[CheckResult]) -> List[Tuple[str, str, str]]:
    """Rows of the plain verify report (name, status, detail)."""
    return [(r.name, "pass" if r.passed else "fail", r.detail) for r in results]
