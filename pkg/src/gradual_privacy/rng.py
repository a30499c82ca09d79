"""Counter-based seeded random sources.

Each draw request is served by a fresh PCG64 stream keyed on
``(seed, counter)``, so the whole state is two integers and persisting a
source is trivial. Samplers lay their uniforms out element-major, which
means element ``i`` of a vector draw sees the same variates no matter how
long the vector is.
"""

from __future__ import annotations

import numpy as np

from ._validation import check_seed


class RandomSource:
    """Deterministic stream of numpy generators.

    Parameters
    ----------
    seed : int
        Non-negative root seed.
    counter : int, default=0
        Number of generators already handed out.
    """

    def __init__(self, seed, counter=0):
        self.seed = check_seed(seed)
        self.counter = check_seed(counter, "counter")

    def next_generator(self):
        """Return the generator for the current counter and advance it."""
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.counter,))
        self.counter += 1
        return np.random.Generator(np.random.PCG64(seq))

    @property
    def state(self):
        return {"seed": self.seed, "counter": self.counter}

    @classmethod
    def from_state(cls, state):
        return cls(state["seed"], state["counter"])

    def __eq__(self, other):
        if not isinstance(other, RandomSource):
            return NotImplemented
        return self.state == other.state

    def __repr__(self):
        return f"RandomSource(seed={self.seed}, counter={self.counter})"


def derive_seed(seed, *labels):
    """Stable child seed for a named sub-task, e.g. one audit in a suite."""
    words = [check_seed(seed)]
    for label in labels:
        words.extend(label.encode("utf-8") if isinstance(label, str) else [int(label)])
    return int(np.random.SeedSequence(words).generate_state(2, dtype=np.uint64)[0] >> 1)
