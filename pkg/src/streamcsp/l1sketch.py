"""Mergeable linear sketch estimating the l1 norm of a streamed integer vector.

The sketch keeps ``w = ceil(c0/delta^2) * t`` accumulator rows.  An update
(i, v) adds ``v * C(seed, row, i)`` to every row, where C is a standard Cauchy
variate derived deterministically from (seed, row, i) by a counter-mode mixing
function -- no per-coordinate state is stored, so memory is O(w) regardless of
the dimension.  Since median(|Cauchy|) = 1, the median of |row| within a group
of ``ceil(c0/delta^2)`` rows is a (1 +/- delta)-estimate of ||x||_1 with
constant probability, and the median over the t groups amplifies confidence.

``ExactL1`` implements the same interface with a dense signed counter per
coordinate (delta = 0) for deterministic tests.
"""

from __future__ import annotations

import math
import struct

import numpy as np
from numba import njit, uint64, int32, float32

__all__ = ["L1Sketch", "ExactL1", "DEFAULT_C0"]

DEFAULT_C0 = 8  # rows per 1/delta^2 group; empirical knob, not a derived constant

_GOLD = uint64(0x9E3779B97F4A7C15)
_MUL1 = uint64(0xBF58476D1CE4E5B9)
_MUL2 = uint64(0x94D049BB133111EB)

# buffered updates are consolidated per coordinate and flushed in batches so
# row contents do not depend on update order (and memory stays bounded)
_FLUSH_LIMIT = 1 << 16


@njit(cache=True, fastmath=True)
def _accumulate(rows, coords, values, key):
    """rows[r] += values[k] * cauchy(key, r, coords[k]) for all k, r.

    The Cauchy variate is tan(pi*(u - 1/2)) with u uniform from a splitmix-style
    mix of (key, coord, row).  tan is evaluated by range reduction to [0, 1/4]
    plus a polynomial kernel, which keeps the loop branch-free and vectorizable.
    """
    w = rows.shape[0]
    for k in range(coords.shape[0]):
        xk = values[k]
        base = uint64(coords[k]) * _GOLD + key
        for r in range(w):
            z = base + uint64(r) * _MUL1
            z = (z ^ (z >> uint64(30))) * _MUL1
            z = (z ^ (z >> uint64(27))) * _MUL2
            z ^= z >> uint64(31)
            frac = int32(z >> uint64(33))  # top 31 bits, nonnegative
            u = float32(frac) * float32(4.656612873077393e-10)  # in [0, 1)
            x0 = u - float32(0.5)
            ax = abs(x0)
            y = min(ax, float32(0.5) - ax)  # reduced argument in [0, 1/4]
            t = float32(3.141592653589793) * y
            zz = t * t
            p = float32(9.38540185543e-3)
            p = p * zz + float32(3.11992232697e-3)
            p = p * zz + float32(2.44301354525e-2)
            p = p * zz + float32(5.34112807005e-2)
            p = p * zz + float32(1.33387994085e-1)
            p = p * zz + float32(3.33331568548e-1)
            p = p * zz * t + t  # tan(pi*y) >= 0
            q = float32(1.0) / max(p, float32(1e-30))
            mag = p if ax <= float32(0.25) else q
            sgn = float32(1.0) if x0 >= float32(0.0) else float32(-1.0)
            rows[r] += xk * (sgn * mag)
    return rows


class L1Sketch:
    """Streaming (1 +/- delta) l1-norm estimator.

    Parameters
    ----------
    delta : float in (0, 1)
        Target relative error per group.
    t : odd int
        Number of independent groups (confidence amplification).
    seed : int
        64-bit key; equal (w, t, seed, scale) sketches are mergeable.
    scale : float
        Per-update unit: estimates are divided by this (used by callers that
        stream integer-scaled values).
    """

    def __init__(self, delta: float, t: int = 1, seed: int = 0, scale: float = 1.0, c0: int = DEFAULT_C0):
        if not 0.0 < delta < 1.0:
            raise ValueError("delta must be in (0,1), got %r" % (delta,))
        if t < 1 or t % 2 == 0:
            raise ValueError("t must be an odd positive integer, got %r" % (t,))
        if scale <= 0:
            raise ValueError("scale must be positive")
        self.delta = float(delta)
        self.t = int(t)
        self.group_width = int(math.ceil(c0 / delta**2))
        self.w = self.group_width * self.t
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.scale = float(scale)
        self.rows = np.zeros(self.w, dtype=np.float64)
        self._pending: dict = {}
        self._updates_seen = 0

    # -- streaming interface ------------------------------------------------

    def update(self, i: int, v: int) -> None:
        """Add v to coordinate i (1-based)."""
        if i < 1:
            raise ValueError("coordinate must be >= 1")
        if v == 0:
            return
        self._updates_seen += 1
        pending = self._pending
        total = pending.get(i, 0) + v
        if total == 0:
            del pending[i]
        else:
            pending[i] = total
        if len(pending) >= _FLUSH_LIMIT:
            self._flush()

    def update_batch(self, coords, values) -> None:
        for i, v in zip(coords, values):
            self.update(int(i), int(v))

    def _flush(self) -> None:
        if not self._pending:
            return
        items = sorted(self._pending.items())
        coords = np.array([i for i, _ in items], dtype=np.uint64)
        values = np.array([v for _, v in items], dtype=np.float64)
        _accumulate(self.rows, coords, values, uint64(self.seed))
        self._pending.clear()

    # -- queries ------------------------------------------------------------

    def estimate(self) -> float:
        """Median over groups of (median |row| within group), divided by scale."""
        self._flush()
        groups = np.abs(self.rows).reshape(self.t, self.group_width)
        return float(np.median(np.median(groups, axis=1))) / self.scale

    def error_bracket(self) -> tuple:
        """(low, high) such that the true norm lies inside at the sketch's
        confidence, assuming the estimate landed in its (1 +/- delta) window."""
        est = self.estimate()
        return est / (1.0 + self.delta), est / (1.0 - self.delta)

    # -- merge / serialization ---------------------------------------------

    def _compatible(self, other: "L1Sketch") -> bool:
        return (
            self.w == other.w
            and self.t == other.t
            and self.seed == other.seed
            and self.scale == other.scale
        )

    def merge(self, other: "L1Sketch") -> "L1Sketch":
        if not isinstance(other, L1Sketch) or not self._compatible(other):
            raise ValueError("sketches must share (w, t, seed, scale) to merge")
        self._flush()
        other._flush()
        self.rows += other.rows
        return self

    def to_bytes(self) -> bytes:
        self._flush()
        header = struct.pack("<QQQd", self.w, self.t, self.seed, self.scale)
        return header + self.rows.astype("<f8").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "L1Sketch":
        w, t, seed, scale = struct.unpack_from("<QQQd", data)
        rows = np.frombuffer(data, dtype="<f8", offset=32).copy()
        if rows.shape[0] != w:
            raise ValueError("serialized row count mismatch")
        sk = cls.__new__(cls)
        sk.delta = math.sqrt(DEFAULT_C0 * t / w) if w else 1.0
        sk.t = int(t)
        sk.group_width = int(w // t)
        sk.w = int(w)
        sk.seed = int(seed)
        sk.scale = float(scale)
        sk.rows = rows.astype(np.float64)
        sk._pending = {}
        sk._updates_seen = 0
        return sk

    @property
    def memory_cells(self) -> int:
        """Accumulator cells held -- independent of the streamed dimension."""
        return self.w + len(self._pending)


class ExactL1:
    """Dense signed-counter backend with the same interface (delta = 0)."""

    delta = 0.0

    def __init__(self, scale: float = 1.0):
        if scale <= 0:
            raise ValueError("scale must be positive")
        self.scale = float(scale)
        self.counts: dict = {}

    def update(self, i: int, v: int) -> None:
        if i < 1:
            raise ValueError("coordinate must be >= 1")
        if v == 0:
            return
        total = self.counts.get(i, 0) + v
        if total == 0:
            del self.counts[i]
        else:
            self.counts[i] = total

    def update_batch(self, coords, values) -> None:
        for i, v in zip(coords, values):
            self.update(int(i), int(v))

    def estimate(self) -> float:
        return sum(abs(v) for v in self.counts.values()) / self.scale

    def estimate_scaled(self) -> int:
        """Exact integer l1 norm in stream units (before dividing by scale)."""
        return sum(abs(v) for v in self.counts.values())

    def error_bracket(self) -> tuple:
        est = self.estimate()
        return est, est

    def merge(self, other: "ExactL1") -> "ExactL1":
        if not isinstance(other, ExactL1) or other.scale != self.scale:
            raise ValueError("backends must share scale to merge")
        for i, v in other.counts.items():
            self.update(i, v)
        return self
