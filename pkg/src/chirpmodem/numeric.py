"""Shared numeric primitives: DFT, Gaussian tail, harmonic numbers, seeded streams.

Every simulation and closed-form module builds on the conventions fixed here,
in particular the unnormalized forward DFT (a unit tone at bin k transforms to
a peak of exactly M) and the fixed draw order of the random streams.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import erfc

__all__ = [
    "dft",
    "idft",
    "q_function",
    "harmonic",
    "RngStream",
    "derive_stream",
]


def dft(x) -> np.ndarray:
    """Unnormalized forward DFT: bins[k] = sum_n x[n] exp(-j 2 pi k n / M).

    The convention is fixed so detection peaks and the closed-form
    interference terms are exactly M-scaled; do not switch normalization.
    """
    x = np.asarray(x)
    if x.size == 0:
        raise ValueError("dft: empty input")
    return np.fft.fft(x)


def idft(bins) -> np.ndarray:
    """Inverse of :func:`dft` (carries the 1/M factor)."""
    bins = np.asarray(bins)
    if bins.size == 0:
        raise ValueError("idft: empty input")
    return np.fft.ifft(bins)


def q_function(z):
    """Gaussian tail probability Q(z) = P(N(0,1) > z).

    Implemented through the complementary error function; accepts scalars or
    arrays and mirrors the input shape.
    """
    out = 0.5 * erfc(np.asarray(z, dtype=float) / math.sqrt(2.0))
    if np.ndim(out) == 0:
        return float(out)
    return out


@lru_cache(maxsize=None)
def harmonic(m: int) -> float:
    """m-th harmonic number H_m = sum_{i=1}^{m} 1/i, with H_0 = 0."""
    if m < 0:
        raise ValueError("harmonic: m must be non-negative")
    if m == 0:
        return 0.0
    return float(np.sum(1.0 / np.arange(1, m + 1)))


class RngStream:
    """Deterministic random stream identified by (master_seed, stream_path).

    Two streams with the same identity replay identical draws; distinct paths
    are statistically independent. A stream is single-owner: hand each worker
    its own instance, never share one.

    Draw order is part of the contract: simulation trials consume payload bits
    first, then noise uniforms, and one complex Gaussian sample always costs
    exactly two uniforms (polar transform, u1 block then u2 block).
    """

    def __init__(self, master_seed: int, stream_path: Sequence[int]):
        path = tuple(int(p) for p in stream_path)
        if any(p < 0 for p in path):
            raise ValueError("stream path entries must be non-negative")
        self.master_seed = int(master_seed)
        self.stream_path = path
        seq = np.random.SeedSequence(self.master_seed, spawn_key=path)
        self._gen = np.random.Generator(np.random.PCG64(seq))

    def uniform(self, n) -> np.ndarray:
        """n (or shape-n) uniforms on [0, 1)."""
        return self._gen.random(n)

    def bits(self, n: int) -> np.ndarray:
        """n hard bits, one uniform consumed per bit."""
        return (self._gen.random(int(n)) < 0.5).astype(np.uint8)

    def complex_gaussian(self, n: int, variance: float = 1.0) -> np.ndarray:
        """Circularly-symmetric complex Gaussian, total variance per sample.

        Sample i consumes uniforms (u1[i], u2[i]) drawn as a single (2, n)
        block, so the budget is exactly two uniforms per complex sample and
        the draw order never depends on the variance.
        """
        if variance < 0:
            raise ValueError("variance must be non-negative")
        u = self._gen.random((2, int(n)))
        radius = np.sqrt(-variance * np.log1p(-u[0]))
        return radius * np.exp(2j * np.pi * u[1])


def derive_stream(master_seed: int, path: Sequence[int]) -> RngStream:
    """Derive the stream for a (point, trial, ...) path under one master seed.

    Hash-based (SeedSequence spawn keys), so distinct paths never collide and
    the partitioning of trials over workers cannot change any draw.
    """
    return RngStream(master_seed, path)
