"""Densities and samplers for the coupled Laplace noise family.

A single level ``eps`` gives Laplace noise with density
``(eps/2) * exp(-eps*|v|)``. Two levels ``eps1 <= eps2`` are coupled by a
joint law with a point mass on the diagonal: the tighter noise ``V1`` is
kept verbatim as ``V2`` with positive probability, otherwise ``V2`` moves
toward zero. Every density here is evaluated in log space first and only
exponentiated on the way out.

All samplers take a :class:`numpy.random.Generator` and draw three
uniforms per output element, laid out element-major (shape ``(..., 3)``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_finite, check_level, check_level_pair

#: Levels above this are treated as "no privacy": relaxing returns zero noise.
LARGE_EPS = 1e12

_UNIFORMS_PER_DRAW = 3


@dataclass(frozen=True)
class LevelPair:
    """Ordered pair of privacy levels ``eps1 <= eps2``."""

    eps1: float
    eps2: float

    def __post_init__(self):
        eps1, eps2 = check_level_pair(self.eps1, self.eps2)
        object.__setattr__(self, "eps1", eps1)
        object.__setattr__(self, "eps2", eps2)


@dataclass(frozen=True)
class JointDensityValue:
    """Both components of the two-level joint law at a point ``(x, y)``.

    ``diagonal_coefficient`` multiplies ``delta(x - y)`` and is non-zero only
    when ``x == y`` exactly; ``continuous_density`` is the ordinary density.
    """

    diagonal_coefficient: float
    continuous_density: float


@dataclass(frozen=True)
class ConditionalLaw:
    """Law of the relaxed noise ``V2`` given ``V1 = source_noise``.

    The law is an atom at ``atom_location`` plus three continuous branches:
    negative side of the source sign, between zero and the source, and
    beyond the source. ``branch_weights`` holds their masses in that order.
    """

    atom_location: float
    atom_mass: float
    branch_weights: tuple
    params: LevelPair
    source_noise: float

    @property
    def total_mass(self):
        return self.atom_mass + sum(self.branch_weights)

    def continuous_logpdf(self, y):
        return forward_conditional_logpdf(y, self.source_noise, self.params.eps1, self.params.eps2)

    def continuous_pdf(self, y):
        return np.exp(self.continuous_logpdf(y))

    def sample(self, rng):
        return relax_sample(self.source_noise, self.params.eps1, self.params.eps2, rng)


def _scalar_or_array(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def _uniforms(rng, shape):
    """Uniforms of shape ``shape + (3,)``; the last slot lies in (0, 1]."""
    u = rng.random(tuple(shape) + (_UNIFORMS_PER_DRAW,))
    # inverse-CDF slot must exclude 0 so that log() stays finite
    u[..., 2] = 1.0 - u[..., 2]
    return u


def _signs(x, u_sign):
    s = np.sign(x)
    # sgn(0) is undefined for the kernel; the law at 0 is symmetric, so flip a coin
    return np.where(s == 0.0, np.where(u_sign < 0.5, -1.0, 1.0), s)


# -- single level ----------------------------------------------------------


def laplace_logpdf(x, eps):
    eps = check_level(eps)
    x = check_finite(x)
    return _scalar_or_array(np.log(eps / 2.0) - eps * np.abs(x))


def laplace_pdf(x, eps):
    """Laplace density ``(eps/2) * exp(-eps*|x|)`` evaluated via its log."""
    return _scalar_or_array(np.exp(laplace_logpdf(x, eps)))


def laplace_cdf(x, eps):
    eps = check_level(eps)
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(over="ignore"):
        lower = 0.5 * np.exp(eps * np.minimum(x, 0.0))
        upper = 1.0 - 0.5 * np.exp(-eps * np.maximum(x, 0.0))
    return _scalar_or_array(np.where(x < 0.0, lower, upper))


def laplace_sample(eps, rng, size=None):
    """Draw Laplace noise with scale ``1/eps`` by inverse-CDF transform.

    Parameters
    ----------
    eps : float
        Privacy level.
    rng : numpy.random.Generator
        Source of uniforms.
    size : int or tuple of int, optional
        Output shape. ``None`` returns a Python float.

    Returns
    -------
    float or ndarray
    """
    eps = check_level(eps)
    shape = () if size is None else np.atleast_1d(size).tolist()
    u = _uniforms(rng, shape)
    v = _signs(np.zeros(shape), u[..., 1]) * (-np.log(u[..., 2])) / eps
    return _scalar_or_array(v)


# -- two levels ------------------------------------------------------------


def joint_logpdf(x, y, eps1, eps2):
    """Log of both joint-law components; returns ``(log_diagonal, log_continuous)``.

    The diagonal term is ``-inf`` wherever ``x != y``. The continuous term is
    ``-inf`` when ``eps1 == eps2`` (the coupling is then the identity).
    """
    eps1, eps2 = check_level_pair(eps1, eps2)
    x = check_finite(x, "x")
    y = check_finite(y, "y")
    log_diag_coef = np.log(eps1 * eps1 / (2.0 * eps2))
    log_diag = np.where(x == y, log_diag_coef - eps2 * np.abs(y), -np.inf)
    with np.errstate(divide="ignore"):
        log_cont_coef = np.log(eps1 * (eps2 * eps2 - eps1 * eps1) / (4.0 * eps2))
    log_cont = log_cont_coef - eps1 * np.abs(x - y) - eps2 * np.abs(y)
    return _scalar_or_array(log_diag), _scalar_or_array(log_cont)


def joint_pdf(x, y, eps1, eps2):
    log_diag, log_cont = joint_logpdf(x, y, eps1, eps2)
    return JointDensityValue(
        diagonal_coefficient=_scalar_or_array(np.exp(log_diag)),
        continuous_density=_scalar_or_array(np.exp(log_cont)),
    )


def forward_atom_mass(x, eps1, eps2):
    """Probability that relaxing ``eps1 -> eps2`` leaves noise ``x`` unchanged."""
    eps1, eps2 = check_level_pair(eps1, eps2)
    x = check_finite(x)
    return _scalar_or_array(np.exp(np.log(eps1 / eps2) - (eps2 - eps1) * np.abs(x)))


def forward_conditional_logpdf(y, x, eps1, eps2):
    """Log density of the continuous part of ``V2 | V1 = x`` at ``y``."""
    eps1, eps2 = check_level_pair(eps1, eps2)
    x = check_finite(x, "x")
    y = check_finite(y, "y")
    with np.errstate(divide="ignore"):
        log_coef = np.log((eps2 * eps2 - eps1 * eps1) / (2.0 * eps2))
    out = log_coef - eps1 * np.abs(y - x) - eps2 * np.abs(y) + eps1 * np.abs(x)
    return _scalar_or_array(out)


def forward_conditional(x, eps1, eps2):
    """Transition law for relaxing privacy from ``eps1`` to ``eps2`` at noise ``x``."""
    pair = LevelPair(eps1, eps2)
    x = float(check_finite(x))
    eps1, eps2 = pair.eps1, pair.eps2
    d = eps2 - eps1
    ax = abs(x)
    decay = float(np.exp(-d * ax))
    weights = (
        d / (2.0 * eps2),
        (eps1 + eps2) / (2.0 * eps2) * float(-np.expm1(-d * ax)),
        d / (2.0 * eps2) * decay,
    )
    return ConditionalLaw(
        atom_location=x,
        atom_mass=float(np.exp(np.log(eps1 / eps2) - d * ax)),
        branch_weights=weights,
        params=pair,
        source_noise=x,
    )


def relax_sample(x, eps1, eps2, rng):
    """Sample the relaxed noise ``V2`` given the current noise ``V1 = x``.

    Four-way mixture: keep ``x``; a point on the opposite side of zero; a
    point between zero and ``x``; a point beyond ``x``. Each continuous piece
    is a (truncated) exponential drawn by inverse CDF. Vectorised over ``x``.

    Parameters
    ----------
    x : float or array_like
        Noise sampled at level ``eps1``.
    eps1, eps2 : float
        Current and relaxed privacy levels, ``eps1 <= eps2``.
    rng : numpy.random.Generator

    Returns
    -------
    float or ndarray
        Noise at level ``eps2``. On the keep branch the input value is
        returned bit-for-bit. Levels above :data:`LARGE_EPS` return zeros.
    """
    eps1, eps2 = check_level_pair(eps1, eps2)
    x = check_finite(x)
    if eps1 == eps2:
        return _scalar_or_array(x.copy())
    if eps2 > LARGE_EPS:
        return _scalar_or_array(np.zeros_like(x))

    u = _uniforms(rng, x.shape)
    pick, v = u[..., 0], u[..., 2]
    d = eps2 - eps1
    s = eps1 + eps2
    ax = np.abs(x)
    em1 = np.expm1(-d * ax)  # in (-1, 0]

    c_atom = np.exp(np.log(eps1 / eps2) - d * ax)
    c_neg = c_atom + d / (2.0 * eps2)
    c_mid = c_neg + s / (2.0 * eps2) * (-em1)

    z_neg = np.log(v) / s
    z_mid = np.minimum(-np.log1p(v * em1) / d, ax)
    z_far = ax - np.log(v) / s
    z = np.where(pick < c_neg, z_neg, np.where(pick < c_mid, z_mid, z_far))
    y = _signs(x, u[..., 1]) * z
    return _scalar_or_array(np.where(pick < c_atom, x, y))


# -- backward direction ----------------------------------------------------


def backward_atom_mass(eps1, eps2):
    """Probability that tightening ``eps2 -> eps1`` keeps the noise: ``(eps1/eps2)**2``."""
    eps1, eps2 = check_level_pair(eps1, eps2)
    return (eps1 / eps2) ** 2


def backward_conditional_logpdf(x, y, eps1, eps2):
    """Log density of the continuous part of ``V1 | V2 = y`` at ``x``."""
    eps1, eps2 = check_level_pair(eps1, eps2)
    x = check_finite(x, "x")
    y = check_finite(y, "y")
    with np.errstate(divide="ignore"):
        log_coef = np.log1p(-((eps1 / eps2) ** 2)) + np.log(eps1 / 2.0)
    return _scalar_or_array(log_coef - eps1 * np.abs(x - y))


def tighten_sample(y, eps1, eps2, rng):
    """Sample tighter noise ``V1`` at level ``eps1`` given ``V2 = y`` at ``eps2``.

    Keeps ``y`` with probability ``(eps1/eps2)**2``, otherwise adds an
    independent Laplace(``1/eps1``) increment. Needs only the released value,
    never the private data.
    """
    eps1, eps2 = check_level_pair(eps1, eps2)
    y = check_finite(y)
    if eps1 == eps2:
        return _scalar_or_array(y.copy())
    u = _uniforms(rng, y.shape)
    increment = _signs(np.zeros(y.shape), u[..., 1]) * (-np.log(u[..., 2])) / eps1
    keep = u[..., 0] < (eps1 / eps2) ** 2
    return _scalar_or_array(np.where(keep, y, y + increment))
