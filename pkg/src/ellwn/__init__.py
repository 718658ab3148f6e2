"""Free-field checks for the elliptic algebra U_{q,p}(sl_N^) and the deformed W_N algebra."""

from .qspecial import (ParameterError, PoleError, QParams, bracket, bracket_star, C_n, g_N,
                       mu_star, phi_N, rho, rho_plus, S_nm, theta)
from .report import RelationReport
from .suites import RunConfig

__all__ = ["ParameterError", "PoleError", "QParams", "RelationReport", "RunConfig", "C_n",
           "S_nm", "bracket", "bracket_star", "g_N", "mu_star", "phi_N", "rho", "rho_plus",
           "theta"]

__version__ = "0.1.0"
