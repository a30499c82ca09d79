"""Sampled paths of the lazy Markov noise process.

A :class:`JumpChain` stores the levels that have been queried together
with the noise value at each. Because the process is Markov in both
directions, a new level above the current maximum only needs the top
point (relax kernel) and a level below the minimum only needs the bottom
point (backward kernel). Levels strictly inside the stored range are
refused.

Noise values may be scalars or arrays of any fixed shape; array entries
are independent coordinates sharing the same level schedule.
"""

from __future__ import annotations

import bisect
import json

import numpy as np

from ._validation import check_level
from .exceptions import BridgeUnsupported, ChainFormatError
from .laws import laplace_sample, relax_sample, tighten_sample
from .rng import RandomSource

CHAIN_FORMAT = "gradual-privacy/jump-chain"
CHAIN_VERSION = 1


def encode_floats(values):
    """Nested lists of hexadecimal float strings (bit-exact round trip)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 0:
        return float(arr).hex()
    return [encode_floats(v) for v in arr]


def decode_floats(obj):
    if isinstance(obj, str):
        return float.fromhex(obj)
    if isinstance(obj, list):
        return [decode_floats(v) for v in obj]
    raise ChainFormatError(f"expected hex float string or list, got {type(obj).__name__}")


class JumpChain:
    """One sampled path of the noise process, indexed by privacy level.

    Create with :meth:`start`; extend and read with :meth:`query`.

    Parameters
    ----------
    levels : list of float
        Strictly increasing Lipschitz privacy levels.
    noise : list of ndarray
        Noise at each level, all with the same shape.
    rng : RandomSource
        Source for future extensions; persisted with the chain.
    """

    def __init__(self, levels, noise, rng):
        levels = [check_level(e) for e in levels]
        if not levels:
            raise ValueError("a chain needs at least one point")
        if len(levels) != len(noise):
            raise ValueError("levels and noise differ in length")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValueError("levels must be strictly increasing")
        noise = [np.array(v, dtype=np.float64) for v in noise]
        shape = noise[0].shape
        for v in noise:
            if v.shape != shape:
                raise ValueError("noise values must share one shape")
            if not np.all(np.isfinite(v)):
                raise ValueError("noise values must be finite")
        self._levels = levels
        self._noise = noise
        self.rng = rng

    @classmethod
    def start(cls, eps, rng, shape=()):
        """Open a chain with Laplace noise at level ``eps``."""
        eps = check_level(eps)
        value = laplace_sample(eps, rng.next_generator(), size=shape if shape != () else None)
        return cls([eps], [value], rng)

    @property
    def shape(self):
        return self._noise[0].shape

    @property
    def levels(self):
        return tuple(self._levels)

    @property
    def points(self):
        """List of ``(eps, noise)`` pairs in increasing ``eps`` order."""
        return [(e, self._export(v)) for e, v in zip(self._levels, self._noise)]

    def __len__(self):
        return len(self._levels)

    def _export(self, v):
        return float(v) if v.ndim == 0 else v.copy()

    def query(self, eps):
        """Noise at level ``eps``, extending the chain if needed.

        A stored level returns its value unchanged. A level above the top
        relaxes from the top point; a level below the bottom tightens from
        the bottom point. Either extension adds exactly one point.

        Raises
        ------
        BridgeUnsupported
            If ``eps`` lies strictly between two stored levels.
        """
        eps = check_level(eps)
        i = bisect.bisect_left(self._levels, eps)
        if i < len(self._levels) and self._levels[i] == eps:
            return self._export(self._noise[i])
        if i == len(self._levels):
            value = relax_sample(self._noise[-1], self._levels[-1], eps, self.rng.next_generator())
            self._levels.append(eps)
            self._noise.append(np.array(value, dtype=np.float64))
        elif i == 0:
            value = tighten_sample(self._noise[0], eps, self._levels[0], self.rng.next_generator())
            self._levels.insert(0, eps)
            self._noise.insert(0, np.array(value, dtype=np.float64))
        else:
            raise BridgeUnsupported(eps, self._levels[i - 1], self._levels[i])
        return self._export(self._noise[i])

    def compact(self):
        """Copy of the chain keeping only the end points and the jump points.

        Interior levels whose noise equals the preceding level's noise are
        dropped. Queries at dropped levels then count as bridge queries.
        """
        keep = [0]
        for k in range(1, len(self._levels) - 1):
            if not np.array_equal(self._noise[k], self._noise[k - 1]):
                keep.append(k)
        if len(self._levels) > 1:
            keep.append(len(self._levels) - 1)
        return JumpChain(
            [self._levels[k] for k in keep],
            [self._noise[k] for k in keep],
            RandomSource.from_state(self.rng.state),
        )

    # -- persistence -------------------------------------------------------

    def to_record(self):
        return {
            "format": CHAIN_FORMAT,
            "version": CHAIN_VERSION,
            "shape": list(self.shape),
            "eps_levels": [e.hex() for e in self._levels],
            "noise_values": [encode_floats(v) for v in self._noise],
            "rng_state": self.rng.state,
        }

    @classmethod
    def from_record(cls, record):
        if not isinstance(record, dict):
            raise ChainFormatError("chain record must be a JSON object")
        if record.get("format") != CHAIN_FORMAT:
            raise ChainFormatError(f"not a jump-chain record: format={record.get('format')!r}")
        if record.get("version") != CHAIN_VERSION:
            raise ChainFormatError(f"unsupported chain version {record.get('version')!r}")
        try:
            shape = tuple(int(n) for n in record["shape"])
            levels = decode_floats(record["eps_levels"])
            noise = [np.array(decode_floats(v), dtype=np.float64) for v in record["noise_values"]]
            rng = RandomSource.from_state(record["rng_state"])
            chain = cls(levels, noise, rng)
        except ChainFormatError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ChainFormatError(f"malformed chain record: {exc}") from exc
        if chain.shape != shape:
            raise ChainFormatError(f"noise shape {chain.shape} does not match declared {shape}")
        return chain

    def serialize(self):
        """Versioned JSON text record, UTF-8 encoded."""
        return json.dumps(self.to_record(), sort_keys=True, separators=(",", ":")).encode("utf-8")

    @classmethod
    def deserialize(cls, data):
        try:
            record = json.loads(data.decode("utf-8") if isinstance(data, bytes) else data)
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ChainFormatError(f"cannot parse chain record: {exc}") from exc
        return cls.from_record(record)

    def __repr__(self):
        return f"JumpChain(levels={list(self._levels)!r}, shape={self.shape}, rng={self.rng!r})"


def sample_path(levels, rng, size=None):
    """Jointly sample the process at increasing ``levels`` for many paths at once.

    Returns an array of shape ``(len(levels),) + size``. Row ``k`` is the
    noise at ``levels[k]``; successive rows are linked by the relax kernel.
    """
    levels = [check_level(e) for e in levels]
    if any(b < a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be non-decreasing")
    rows = [np.asarray(laplace_sample(levels[0], rng, size=size), dtype=np.float64)]
    for lo, hi in zip(levels, levels[1:]):
        rows.append(np.asarray(relax_sample(rows[-1], lo, hi, rng), dtype=np.float64))
    return np.stack(rows)
