"""Version information for conical-ab."""

__version__ = "0.1.0"
__license__ = "MIT"
__description__ = "Self-adjoint extensions, scattering and bound states of the spin-1/2 Aharonov-Bohm problem on a cone"
