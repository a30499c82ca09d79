"""Gradual-release Laplace mechanism for real vectors under l1 adjacency.

The estimators follow the scikit-learn conventions: constructor arguments
are plain hyper-parameters, ``fit`` binds the private data and sets
trailing-underscore attributes, ``transform`` returns a noisy copy at the
current ``epsilon``. Raising ``epsilon`` with ``set_params`` and calling
``transform`` again relaxes privacy along one coupled noise path.

Levels handed to the public API are differential-privacy levels for the
adjacency ``||u - u'||_1 <= alpha``; internally the noise process runs at
the Lipschitz level ``eps_dp / alpha``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import check_level, check_level_pair, check_positive, check_seed
from .exceptions import BridgeUnsupported, ChainFormatError, LevelOrderError
from .laws import laplace_sample, tighten_sample
from .process import JumpChain, decode_floats, encode_floats
from .rng import RandomSource

STATE_FORMAT = "gradual-privacy/mechanism"
STATE_VERSION = 1


def dp_to_lipschitz(eps_dp, alpha):
    """Lipschitz level whose mechanism is ``eps_dp``-DP for adjacency radius ``alpha``."""
    return check_level(eps_dp, "eps_dp") / check_positive(alpha, "alpha")


def lipschitz_to_dp(eps_lipschitz, alpha):
    return check_level(eps_lipschitz, "eps_lipschitz") * check_positive(alpha, "alpha")


@dataclass(frozen=True)
class Response:
    """A released noisy vector together with the level it was released at."""

    eps_dp: float
    eps_lipschitz: float
    values: np.ndarray

    def to_record(self):
        vals = np.asarray(self.values, dtype=np.float64)
        return {
            "eps_dp": self.eps_dp,
            "eps_dp_hex": self.eps_dp.hex(),
            "eps_lipschitz": self.eps_lipschitz,
            "eps_lipschitz_hex": self.eps_lipschitz.hex(),
            "shape": list(vals.shape),
            "values": vals.tolist(),
            "values_hex": encode_floats(vals),
        }

    @classmethod
    def from_record(cls, record):
        try:
            values = np.array(decode_floats(record["values_hex"]), dtype=np.float64)
            values = values.reshape(tuple(record["shape"]))
            return cls(
                eps_dp=float.fromhex(record["eps_dp_hex"]),
                eps_lipschitz=float.fromhex(record["eps_lipschitz_hex"]),
                values=values,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ChainFormatError(f"malformed response record: {exc}") from exc


def _check_data(X):
    X = check_array(X, ensure_2d=False, dtype=np.float64, ensure_all_finite=True)
    if X.ndim == 1 and X.shape[0] == 0:
        raise ValueError("private data must contain at least one value")
    return X


class GradualLaplaceMechanism(TransformerMixin, BaseEstimator):
    """Laplace mechanism whose privacy level can be relaxed or tightened later.

    Every entry of the fitted array gets its own path of the noise process.
    Releases at increasing levels are coupled so that publishing all of them
    costs only the loosest level, and each release alone is distributed as a
    fresh Laplace mechanism at its level.

    Parameters
    ----------
    epsilon : float, default=1.0
        Differential-privacy level used by :meth:`transform`.
    alpha : float, default=1.0
        l1 adjacency radius. Also the place to fold in the sensitivity of a
        pre-processing step.
    random_state : int or None, default=None
        Root seed. ``None`` draws fresh OS entropy at ``fit`` time; the seed
        actually used is stored in ``seed_``.

    Attributes
    ----------
    data_ : ndarray
        The private data bound at fit time.
    seed_ : int
    chain_ : JumpChain or None
        Noise path; ``None`` until the first release.
    released_levels_ : list of float
        DP levels released so far, in call order.
    """

    def __init__(self, epsilon=1.0, alpha=1.0, random_state=None):
        self.epsilon = epsilon
        self.alpha = alpha
        self.random_state = random_state

    def fit(self, X, y=None):
        check_positive(self.alpha, "alpha")
        self.data_ = _check_data(X).copy()
        if self.data_.ndim == 2:
            self.n_features_in_ = self.data_.shape[1]
        if self.random_state is None:
            self.seed_ = int(np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0] >> 1)
        else:
            self.seed_ = check_seed(self.random_state, "random_state")
        self.chain_ = None
        self.released_levels_ = []
        return self

    def release(self, epsilon=None):
        """Release the response at DP level ``epsilon`` (default: ``self.epsilon``).

        Repeating a level returns the identical response. A level strictly
        between two released levels raises :class:`BridgeUnsupported`.
        """
        check_is_fitted(self, "data_")
        eps_dp = check_level(self.epsilon if epsilon is None else epsilon, "epsilon")
        alpha = check_positive(self.alpha, "alpha")
        eps_lip = eps_dp / alpha
        if self.chain_ is None:
            self.chain_ = JumpChain.start(eps_lip, RandomSource(self.seed_), shape=self.data_.shape)
        try:
            noise = self.chain_.query(eps_lip)
        except BridgeUnsupported:
            lower = max(e for e in self.released_levels_ if e < eps_dp)
            upper = min(e for e in self.released_levels_ if e > eps_dp)
            raise BridgeUnsupported(eps_dp, lower, upper) from None
        if eps_dp not in self.released_levels_:
            self.released_levels_.append(eps_dp)
        return Response(eps_dp=eps_dp, eps_lipschitz=eps_lip, values=self.data_ + noise)

    def transform(self, X):
        """Noisy copy of the fitted data at the current ``epsilon``.

        ``X`` must equal the fitted data: noise paths are bound to it, and
        adding the same noise to different data would leak their difference.
        """
        check_is_fitted(self, "data_")
        X = _check_data(X)
        if X.shape != self.data_.shape or not np.array_equal(X, self.data_):
            raise ValueError("transform only accepts the data passed to fit")
        return self.release().values

    @property
    def noise_(self):
        """Noise matrix, one row per stored Lipschitz level."""
        check_is_fitted(self, "data_")
        if self.chain_ is None:
            return np.empty((0,) + self.data_.shape)
        return np.stack([v for _, v in self.chain_.points])

    # -- persistence -------------------------------------------------------

    def to_record(self):
        check_is_fitted(self, "data_")
        return {
            "format": STATE_FORMAT,
            "version": STATE_VERSION,
            "n": int(self.data_.size),
            "shape": list(self.data_.shape),
            "epsilon": float(self.epsilon),
            "alpha": float(self.alpha).hex(),
            "seed": self.seed_,
            "released_levels": [e.hex() for e in self.released_levels_],
            "data": encode_floats(self.data_),
            "chain": None if self.chain_ is None else self.chain_.to_record(),
        }

    @classmethod
    def from_record(cls, record):
        if not isinstance(record, dict) or record.get("format") != STATE_FORMAT:
            raise ChainFormatError("not a mechanism state record")
        if record.get("version") != STATE_VERSION:
            raise ChainFormatError(f"unsupported state version {record.get('version')!r}")
        try:
            data = np.array(decode_floats(record["data"]), dtype=np.float64)
            data = data.reshape(tuple(record["shape"]))
            est = cls(
                epsilon=record["epsilon"],
                alpha=float.fromhex(record["alpha"]),
                random_state=record["seed"],
            ).fit(data)
            est.released_levels_ = [float.fromhex(e) for e in record["released_levels"]]
        except ChainFormatError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ChainFormatError(f"malformed mechanism record: {exc}") from exc
        if data.size != record.get("n"):
            raise ChainFormatError("declared size does not match data")
        if record["chain"] is not None:
            est.chain_ = JumpChain.from_record(record["chain"])
            if est.chain_.shape != data.shape:
                raise ChainFormatError("chain shape does not match data")
        return est

    def dumps(self):
        return json.dumps(self.to_record(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def loads(cls, text):
        try:
            record = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ChainFormatError(f"cannot parse state file: {exc}") from exc
        return cls.from_record(record)


def tighten_for_third_party(response, eps_dp_lower, alpha, rng):
    """Derive a more private response from a released one, without the data.

    Parameters
    ----------
    response : Response
        Released response at level ``response.eps_dp``.
    eps_dp_lower : float
        Target DP level, at most ``response.eps_dp``.
    alpha : float
        Adjacency radius the response was released under.
    rng : numpy.random.Generator

    Returns
    -------
    Response
    """
    alpha = check_positive(alpha, "alpha")
    eps_dp_lower = check_level(eps_dp_lower, "eps_dp_lower")
    if eps_dp_lower > response.eps_dp:
        raise LevelOrderError(
            f"cannot tighten from {response.eps_dp!r} to the looser level {eps_dp_lower!r}"
        )
    hi = response.eps_dp / alpha
    lo = eps_dp_lower / alpha
    # V1 = V2 + (V1 - V2) and the increment is independent of V2, so it can
    # be applied directly to u + V2
    values = tighten_sample(np.asarray(response.values, dtype=np.float64), lo, hi, rng)
    return Response(eps_dp=eps_dp_lower, eps_lipschitz=lo, values=np.asarray(values))


class LaplaceTightener(TransformerMixin, BaseEstimator):
    """Stateless transformer applying :func:`tighten_for_third_party`.

    ``transform`` expects responses released at ``epsilon_from`` and returns
    responses at ``epsilon_to``.
    """

    def __init__(self, epsilon_from=2.0, epsilon_to=1.0, alpha=1.0, random_state=None):
        self.epsilon_from = epsilon_from
        self.epsilon_to = epsilon_to
        self.alpha = alpha
        self.random_state = random_state

    def fit(self, X=None, y=None):
        check_level_pair(self.epsilon_to, self.epsilon_from)
        self.rng_ = np.random.default_rng(self.random_state)
        return self

    def transform(self, X):
        check_is_fitted(self, "rng_")
        X = _check_data(X)
        alpha = check_positive(self.alpha, "alpha")
        eps_from = check_level(self.epsilon_from)
        response = Response(eps_dp=eps_from, eps_lipschitz=eps_from / alpha, values=X)
        return tighten_for_third_party(response, self.epsilon_to, alpha, self.rng_).values


def naive_composition_release(data, eps1, eps2, alpha=1.0, seed=0):
    """Baseline: two independent Laplace releases split by sequential composition.

    The first response spends ``eps1``; the second spends the remaining
    ``eps2 - eps1`` so the pair is ``eps2``-DP. Each response is labelled with
    its own level. Only for accuracy comparison against the coupled release.
    """
    eps1 = check_level(eps1, "eps1")
    eps2 = check_level(eps2, "eps2")
    if eps2 <= eps1:
        raise LevelOrderError(f"naive composition needs eps2 > eps1, got {eps1!r}, {eps2!r}")
    alpha = check_positive(alpha, "alpha")
    data = _check_data(data)
    rng = RandomSource(seed)
    rest = eps2 - eps1
    first = data + laplace_sample(eps1 / alpha, rng.next_generator(), size=data.shape)
    second = data + laplace_sample(rest / alpha, rng.next_generator(), size=data.shape)
    return (
        Response(eps_dp=eps1, eps_lipschitz=eps1 / alpha, values=first),
        Response(eps_dp=rest, eps_lipschitz=rest / alpha, values=second),
    )
