"""Statistical and numerical verification of the noise family."""

from .privacy import laplace_lipschitz_audit, lipschitz_grid_audit
from .quadrature import chapman_kolmogorov_audit, marginal_consistency_audit
from .report import AuditReport, format_table
from .statistics import (
    atom_mass_audit,
    correlation_audit,
    ks_one_sample,
    ks_two_sample,
    mse_audit,
)
from .suites import run_suite, suite_names

__all__ = [
    "AuditReport",
    "atom_mass_audit",
    "chapman_kolmogorov_audit",
    "correlation_audit",
    "format_table",
    "ks_one_sample",
    "ks_two_sample",
    "laplace_lipschitz_audit",
    "lipschitz_grid_audit",
    "marginal_consistency_audit",
    "mse_audit",
    "run_suite",
    "suite_names",
]
