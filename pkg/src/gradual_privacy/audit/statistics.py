"""Monte-Carlo checks against the closed-form properties of the noise family."""

from __future__ import annotations

import numpy as np

from .._validation import check_level, check_level_pair, check_positive
from ..exceptions import InsufficientSamplesError
from ..laws import laplace_cdf
from .report import AuditReport

#: Critical coefficient of the KS statistic at significance 0.001.
KS_COEFFICIENT = 1.95

MIN_KS_SAMPLES = 1_000
MIN_PAIR_SAMPLES = 10_000

ATOM_TOLERANCE = 0.01
CORRELATION_TOLERANCE = 0.01
MSE_RELATIVE_TOLERANCE = 0.02


def _require(n, floor, what):
    if n < floor:
        raise InsufficientSamplesError(f"{what} needs at least {floor} observations, got {n}")


def _as_1d(a, name):
    a = np.asarray(a, dtype=np.float64).ravel()
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite values")
    return a


def ks_statistic(samples, cdf):
    """Largest gap between the empirical CDF of ``samples`` and ``cdf``."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    n = x.size
    f = cdf(x)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_two_sample_statistic(a, b):
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ks_one_sample(samples, eps, name="ks_one_sample"):
    """KS test of ``samples`` against Laplace(``1/eps``); threshold ``1.95/sqrt(N)``."""
    eps = check_level(eps)
    x = _as_1d(samples, "samples")
    _require(x.size, MIN_KS_SAMPLES, "ks_one_sample")
    stat = ks_statistic(x, lambda t: laplace_cdf(t, eps))
    return AuditReport(
        test_name=name,
        statistic=stat,
        threshold=KS_COEFFICIENT / np.sqrt(x.size),
        n_samples=int(x.size),
        details={"eps": eps, "reference": "laplace"},
    )


def ks_two_sample(a, b, name="ks_two_sample"):
    """Two-sample KS with threshold ``1.95*sqrt((n+m)/(n*m))``."""
    a = _as_1d(a, "a")
    b = _as_1d(b, "b")
    _require(min(a.size, b.size), MIN_KS_SAMPLES, "ks_two_sample")
    return AuditReport(
        test_name=name,
        statistic=ks_two_sample_statistic(a, b),
        threshold=KS_COEFFICIENT * np.sqrt((a.size + b.size) / (a.size * b.size)),
        n_samples=int(a.size + b.size),
        details={"n_a": int(a.size), "n_b": int(b.size)},
    )


def atom_mass_audit(x, y, eps1, eps2, name="atom_mass"):
    """Fraction of pairs with ``x == y`` bit-for-bit versus ``(eps1/eps2)**2``."""
    eps1, eps2 = check_level_pair(eps1, eps2)
    x = _as_1d(x, "x")
    y = _as_1d(y, "y")
    if x.size != y.size:
        raise ValueError("x and y must have the same length")
    _require(x.size, MIN_PAIR_SAMPLES, "atom_mass_audit")
    frac = float(np.mean(x == y))
    target = (eps1 / eps2) ** 2
    return AuditReport(
        test_name=name,
        statistic=abs(frac - target),
        threshold=ATOM_TOLERANCE,
        n_samples=int(x.size),
        details={"eps1": eps1, "eps2": eps2, "empirical": frac, "target": target},
    )


def correlation_audit(x, y, target, tolerance=CORRELATION_TOLERANCE, name="correlation"):
    """Pearson correlation of the pairs against ``target`` (e.g. ``eps1/eps2``)."""
    x = _as_1d(x, "x")
    y = _as_1d(y, "y")
    if x.size != y.size:
        raise ValueError("x and y must have the same length")
    _require(x.size, MIN_PAIR_SAMPLES, "correlation_audit")
    rho = float(np.corrcoef(x, y)[0, 1])
    return AuditReport(
        test_name=name,
        statistic=abs(rho - target),
        threshold=float(tolerance),
        n_samples=int(x.size),
        details={"empirical": rho, "target": float(target)},
    )


def mse_audit(noise, eps, n=None, name="mse"):
    """Mean squared norm of noise vectors versus the optimum ``2n/eps**2``.

    ``noise`` is either a flat array of scalar draws (``n = 1``) or an
    array of shape ``(N, n)``. Passes within 2% relative error.
    """
    eps = check_level(eps)
    noise = np.asarray(noise, dtype=np.float64)
    if noise.ndim == 1:
        noise = noise[:, None]
    if n is not None and noise.shape[1] != n:
        raise ValueError(f"noise has dimension {noise.shape[1]}, expected {n}")
    n = noise.shape[1]
    _require(noise.shape[0], MIN_PAIR_SAMPLES, "mse_audit")
    mse = float(np.mean(np.sum(noise * noise, axis=1)))
    target = 2.0 * n / eps**2
    return AuditReport(
        test_name=name,
        statistic=abs(mse / target - 1.0),
        threshold=MSE_RELATIVE_TOLERANCE,
        n_samples=int(noise.shape[0]),
        details={"eps": eps, "dim": n, "empirical": mse, "target": target},
    )


def relative_target_audit(values, target, tolerance, name):
    """Generic mean-of-values check with a relative tolerance."""
    values = _as_1d(values, "values")
    target = check_positive(target, "target")
    _require(values.size, MIN_PAIR_SAMPLES, name)
    mean = float(values.mean())
    return AuditReport(
        test_name=name,
        statistic=abs(mean / target - 1.0),
        threshold=float(tolerance),
        n_samples=int(values.size),
        details={"empirical": mean, "target": target},
    )
