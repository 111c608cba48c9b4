"""Counter-based random substreams.

Every draw is keyed by ``(master_seed, index)`` plus a purpose tag, so a
sample can be regenerated in isolation and in any order.
"""
from dataclasses import dataclass
import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1

# purpose tags keep unrelated draws with equal (seed, index) independent
HAAR = 0
POLYTOPE = 1
BALL = 2
SL_MATRIX = 3
CORPUS = 4


def _u64(value):
    return int(value) & _MASK64


@dataclass(frozen=True)
class SampleStream:
    master_seed: int
    index: int = 0

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"stream index must be nonnegative, got {self.index}")

    def rng(self, tag=HAAR):
        return np.random.default_rng([tag, _u64(self.master_seed), int(self.index)])

    def child(self, index):
        return SampleStream(self.master_seed, index)


def derive_seed(master_seed, *labels):
    """Deterministic 63-bit seed from a parent seed and any printable labels."""
    h = hashlib.blake2b(digest_size=8)
    h.update(str(_u64(master_seed)).encode())
    for label in labels:
        h.update(b"\x1f")
        h.update(str(label).encode())
    return int.from_bytes(h.digest(), "little") >> 1
