"""Deterministic checks by adaptive quadrature.

Point masses are always added analytically; only the continuous parts go
through :func:`scipy.integrate.quad`, on ``[-50/eps_min, 50/eps_min]`` with
the kinks of the integrand passed as break points.
"""

from __future__ import annotations

import numpy as np
from scipy import integrate

from .._validation import check_level, check_level_pair
from ..exceptions import LevelOrderError
from ..laws import (
    forward_atom_mass,
    forward_conditional,
    forward_conditional_logpdf,
    joint_logpdf,
    laplace_pdf,
)
from .report import AuditReport

QUAD_EPSABS = 1e-10
TAIL_WIDTH = 50.0

MARGINAL_TOLERANCE = 1e-8
NORMALIZATION_TOLERANCE = 1e-8
CHAPMAN_KOLMOGOROV_TOLERANCE = 1e-6


def integrate_line(f, eps_min, breaks=()):
    """Integrate ``f`` over the effective support of a level-``eps_min`` law."""
    half = TAIL_WIDTH / eps_min
    pts = sorted({float(b) for b in breaks if -half < b < half})
    value, _ = integrate.quad(f, -half, half, points=pts or None, epsabs=QUAD_EPSABS, epsrel=1e-12, limit=500)
    return value


def laplace_total_mass(eps):
    eps = check_level(eps)
    return integrate_line(lambda t: laplace_pdf(t, eps), eps, breaks=(0.0,))


def conditional_total_mass(x, eps1, eps2):
    """Atom mass plus integrated continuous density of the relax kernel at ``x``."""
    law = forward_conditional(x, eps1, eps2)
    if law.params.eps1 == law.params.eps2:
        return law.atom_mass
    cont = integrate_line(lambda y: np.exp(law.continuous_logpdf(y)), law.params.eps1, breaks=(0.0, x))
    return law.atom_mass + cont


def _joint_continuous(x, y, eps1, eps2):
    return float(np.exp(joint_logpdf(x, y, eps1, eps2)[1]))


def _joint_diagonal(y, eps1, eps2):
    return float(np.exp(joint_logpdf(y, y, eps1, eps2)[0]))


def marginal_errors(eps1, eps2, n_grid=100, half_width=None):
    """Largest deviations of the joint law's marginals from the Laplace laws.

    Returns ``(err_first, err_second)`` over ``n_grid`` points per axis.
    """
    eps1, eps2 = check_level_pair(eps1, eps2)
    half = 5.0 / eps1 if half_width is None else float(half_width)
    grid = np.linspace(-half, half, n_grid)
    err1 = err2 = 0.0
    for t in grid:
        over_y = integrate_line(lambda y: _joint_continuous(t, y, eps1, eps2), eps1, breaks=(0.0, t))
        err1 = max(err1, abs(over_y + _joint_diagonal(t, eps1, eps2) - laplace_pdf(t, eps1)))
        over_x = integrate_line(lambda x: _joint_continuous(x, t, eps1, eps2), eps1, breaks=(t,))
        err2 = max(err2, abs(over_x + _joint_diagonal(t, eps1, eps2) - laplace_pdf(t, eps2)))
    return err1, err2


def marginal_consistency_audit(eps1, eps2, n_grid=100):
    err1, err2 = marginal_errors(eps1, eps2, n_grid)
    return AuditReport(
        test_name=f"marginal_quadrature[{eps1:g},{eps2:g}]",
        statistic=max(err1, err2),
        threshold=MARGINAL_TOLERANCE,
        n_samples=n_grid,
        details={"max_error_first": err1, "max_error_second": err2, "grid_points_per_axis": n_grid},
    )


def _default_grid(eps):
    return np.linspace(-3.0 / eps, 3.0 / eps, 13)


def composed_kernel(x, z, eps1, eps2, eps3):
    """Two-step relax kernel ``eps1 -> eps2 -> eps3`` from ``x``, evaluated at ``z``.

    Returns ``(atom_mass, continuous_density)``; the four atom/continuous
    combinations of the two steps are accounted for separately.
    """
    a12 = forward_atom_mass(x, eps1, eps2)
    a23_x = forward_atom_mass(x, eps2, eps3)
    a23_z = forward_atom_mass(z, eps2, eps3)
    f12_z = float(np.exp(forward_conditional_logpdf(z, x, eps1, eps2)))
    f23_xz = float(np.exp(forward_conditional_logpdf(z, x, eps2, eps3)))

    def both_continuous(y):
        return float(
            np.exp(forward_conditional_logpdf(y, x, eps1, eps2) + forward_conditional_logpdf(z, y, eps2, eps3))
        )

    if eps1 == eps2 or eps2 == eps3:
        inner = 0.0
    else:
        inner = integrate_line(both_continuous, eps1, breaks=(0.0, x, z))
    return a12 * a23_x, a12 * f23_xz + f12_z * a23_z + inner


def chapman_kolmogorov_audit(eps1, eps2, eps3, x_grid=None, z_grid=None):
    """Two-step relax kernel must match the direct ``eps1 -> eps3`` kernel.

    Deviation is measured pointwise on ``x_grid x z_grid`` for the
    continuous density and on ``x_grid`` for the atom mass.
    """
    eps1 = check_level(eps1, "eps1")
    eps2 = check_level(eps2, "eps2")
    eps3 = check_level(eps3, "eps3")
    if not eps1 < eps2 < eps3:
        raise LevelOrderError(f"expected eps1 < eps2 < eps3, got {eps1}, {eps2}, {eps3}")
    xs = _default_grid(eps1) if x_grid is None else np.asarray(x_grid, dtype=np.float64)
    zs = _default_grid(eps1) if z_grid is None else np.asarray(z_grid, dtype=np.float64)
    atom_dev = cont_dev = 0.0
    for x in xs:
        for z in zs:
            atom, cont = composed_kernel(x, z, eps1, eps2, eps3)
            direct = float(np.exp(forward_conditional_logpdf(z, x, eps1, eps3)))
            cont_dev = max(cont_dev, abs(cont - direct))
            atom_dev = max(atom_dev, abs(atom - forward_atom_mass(x, eps1, eps3)))
    return AuditReport(
        test_name=f"chapman_kolmogorov[{eps1:g},{eps2:g},{eps3:g}]",
        statistic=max(atom_dev, cont_dev),
        threshold=CHAPMAN_KOLMOGOROV_TOLERANCE,
        n_samples=int(xs.size * zs.size),
        details={"max_atom_deviation": atom_dev, "max_density_deviation": cont_dev},
    )


def expected_atom_mass(eps, eps_next):
    """Probability a relax step ``eps -> eps_next`` keeps a Laplace(``1/eps``) value."""
    eps, eps_next = check_level_pair(eps, eps_next)
    return integrate_line(
        lambda t: laplace_pdf(t, eps) * forward_atom_mass(t, eps, eps_next), eps, breaks=(0.0,)
    )


def path_atom_masses(eps1, eps2, eps3):
    """Atom pattern of a three-level path started from Laplace(``1/eps1``).

    Returns ``P(V1 = V2)``, ``P(V2 = V3)`` and ``P(V1 = V2 = V3)``.
    """
    check_level_pair(eps1, eps2)
    check_level_pair(eps2, eps3)
    p12 = expected_atom_mass(eps1, eps2)
    p23 = expected_atom_mass(eps2, eps3)
    p123 = integrate_line(
        lambda t: laplace_pdf(t, eps1) * forward_atom_mass(t, eps1, eps2) * forward_atom_mass(t, eps2, eps3),
        eps1,
        breaks=(0.0,),
    )
    return p12, p23, p123
