"""De-chirp, DFT, and decide: per-branch detectors for all six schemes.

Detection is dis-joint: each de-chirp branch runs one DFT and every index
field is read off its own spectrum with an argmax.  Coherent detection
maximizes Re{h* R(k)} (or Re{H(k)* R(k)} with a per-bin response), the
non-coherent detector maximizes |R(k)|.  Even/odd dual-mode fields restrict
the argmax to their bin parity; IQ fields project onto Re or Im and therefore
have no non-coherent mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import UnsupportedModeError
from .waveforms import ModulationConfig, Scheme, SymbolIndices, _chirp_vector

__all__ = [
    "Detection",
    "DetectionMode",
    "dechirp",
    "detect",
    "detect_fields",
    "detect_tie_break",
]


class Detection(str, Enum):
    COHERENT = "coherent"
    NONCOHERENT = "noncoherent"


@dataclass(frozen=True)
class DetectionMode:
    """Detector selection plus the channel knowledge it needs.

    COHERENT requires `csi` (scalar complex gain) or `csi_bins` (per-bin
    response for frequency-selective operation, length M).
    """

    mode: Detection
    csi: complex | None = None
    csi_bins: np.ndarray | None = None

    def __post_init__(self):
        if self.mode is Detection.COHERENT and self.csi is None and self.csi_bins is None:
            raise ValueError("coherent detection requires csi or csi_bins")


def dechirp(y: np.ndarray, rate: int, M: int) -> np.ndarray:
    """Multiply by the conjugated spreading symbol of the given rate."""
    y = np.asarray(y)
    if y.shape[-1] != M:
        raise ValueError(f"expected symbols of length {M}, got {y.shape[-1]}")
    return y * np.conj(_chirp_vector(M, int(rate)))


def detect_tie_break(values) -> int:
    """Deterministic argmax: lowest index among the maxima."""
    values = np.asarray(values)
    if values.size == 0:
        raise ValueError("empty value sequence")
    return int(np.argmax(values))


def _field_statistic(R: np.ndarray, mode: DetectionMode, component: str | None) -> np.ndarray:
    if mode.mode is Detection.NONCOHERENT:
        return np.abs(R)
    if mode.csi_bins is not None:
        Z = np.conj(np.asarray(mode.csi_bins)) * R
    else:
        Z = np.conj(mode.csi) * R
    if component == "im":
        return Z.imag
    return Z.real


def detect_fields(cfg: ModulationConfig, Y: np.ndarray, mode: DetectionMode) -> np.ndarray:
    """Estimate index fields for a (batch, M) array of received symbols."""
    if cfg.scheme is Scheme.IQ_TDM_CSS and mode.mode is Detection.NONCOHERENT:
        raise UnsupportedModeError("iq_tdm_css carries data on both quadratures; "
                                   "non-coherent detection is not possible")
    Y = np.atleast_2d(np.asarray(Y, dtype=np.complex128))
    if Y.shape[-1] != cfg.M:
        raise ValueError(f"expected symbols of length {cfg.M}, got {Y.shape[-1]}")
    out = np.empty((Y.shape[0], cfg.field_count), dtype=np.int64)
    for branch in cfg.branches():
        R = np.fft.fft(dechirp(Y, branch.rate, cfg.M), axis=-1)
        for ex in branch.extractors:
            stat = _field_statistic(R, mode, ex.component)
            if ex.parity == "even":
                out[:, ex.field] = np.argmax(stat[:, 0::2], axis=-1)
            elif ex.parity == "odd":
                out[:, ex.field] = np.argmax(stat[:, 1::2], axis=-1)
            else:
                out[:, ex.field] = np.argmax(stat, axis=-1)
    return out


def detect(cfg: ModulationConfig, y: np.ndarray, mode: DetectionMode) -> SymbolIndices:
    """Detect one received symbol and return the estimated indices."""
    fields = detect_fields(cfg, np.asarray(y)[None, :], mode)[0]
    return SymbolIndices(cfg.scheme, tuple(int(v) for v in fields))
