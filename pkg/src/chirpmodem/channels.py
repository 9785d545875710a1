"""Channel impairments: 2-tap fading, complex gain, frequency/phase offsets, AWGN.

All functions broadcast over leading axes, so a (batch, M) array of symbols
goes through in one call.  The 2-tap channel is a linear convolution with zero
initial state truncated to M samples: BER is measured per independent symbol,
so inter-symbol interference never enters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numeric import RngStream

__all__ = [
    "ChannelSpec",
    "apply_fading",
    "apply_freq_offset",
    "apply_phase_offset",
    "add_awgn",
    "apply_channel",
]


@dataclass(frozen=True)
class ChannelSpec:
    """Impairment bundle applied to each transmit symbol.

    `tap_rho` is the 2-tap power split (0 disables fading), `freq_offset` is
    normalized to the frequency spacing, `noise_variance` is the per-complex-
    sample AWGN variance (the Monte Carlo engine fills it per operating
    point).
    """

    gain_h: complex = 1.0 + 0.0j
    tap_rho: float = 0.0
    freq_offset: float = 0.0
    phase_offset: float = 0.0
    noise_variance: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.tap_rho <= 1.0:
            raise ValueError(f"tap_rho must be in [0, 1], got {self.tap_rho}")
        if self.noise_variance < 0:
            raise ValueError("noise_variance must be >= 0")


def apply_fading(x: np.ndarray, tap_rho: float) -> np.ndarray:
    """out[n] = sqrt(1-rho) x[n] + sqrt(rho) x[n-1], with x[-1] = 0."""
    if not 0.0 <= tap_rho <= 1.0:
        raise ValueError(f"tap_rho must be in [0, 1], got {tap_rho}")
    x = np.asarray(x)
    if tap_rho == 0.0:
        return x.copy()
    delayed = np.zeros_like(x)
    delayed[..., 1:] = x[..., :-1]
    return np.sqrt(1.0 - tap_rho) * x + np.sqrt(tap_rho) * delayed


def apply_freq_offset(x: np.ndarray, freq_offset: float, M: int) -> np.ndarray:
    """out[n] = exp(j 2 pi df n / M) x[n]; df is in bins of the DFT grid."""
    x = np.asarray(x)
    if freq_offset == 0.0:
        return x.copy()
    n = np.arange(M)
    return x * np.exp(2j * np.pi * freq_offset * n / M)


def apply_phase_offset(x: np.ndarray, psi: float) -> np.ndarray:
    """out[n] = exp(j psi) x[n]."""
    x = np.asarray(x)
    if psi == 0.0:
        return x.copy()
    return x * np.exp(1j * psi)


def add_awgn(x: np.ndarray, noise_variance: float, stream: RngStream) -> np.ndarray:
    """Add circularly-symmetric complex Gaussian noise from the given stream."""
    if noise_variance < 0:
        raise ValueError("noise_variance must be >= 0")
    x = np.asarray(x)
    if noise_variance == 0.0:
        return x.copy()
    noise = stream.complex_gaussian(x.size, noise_variance).reshape(x.shape)
    return x + noise


def apply_channel(x: np.ndarray, spec: ChannelSpec, stream: RngStream) -> np.ndarray:
    """Apply fading, gain, frequency offset, phase offset, then AWGN.

    Stages at their identity value are skipped, so an all-identity spec
    returns the input unchanged and consumes no randomness.
    """
    x = np.asarray(x)
    out = x.copy()
    if spec.tap_rho != 0.0:
        out = apply_fading(out, spec.tap_rho)
    if spec.gain_h != 1.0:
        out = out * spec.gain_h
    if spec.freq_offset != 0.0:
        out = apply_freq_offset(out, spec.freq_offset, out.shape[-1])
    if spec.phase_offset != 0.0:
        out = apply_phase_offset(out, spec.phase_offset)
    if spec.noise_variance != 0.0:
        out = add_awgn(out, spec.noise_variance, stream)
    return out
