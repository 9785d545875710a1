"""Monte Carlo engine: BER points, target-BER search, and PAPR CCDF curves.

Reproducibility model: trial t of operating point p always draws from
derive_stream(master_seed, [p, t]) — payload bits first, then one unit-
variance complex noise vector.  Trials are processed in fixed chunks and the
stopping rule is evaluated at chunk boundaries in chunk order, so the
counters are identical for any worker count.

Noise calibration: per trial, sigma^2 = E_s / (bits_per_symbol * 10^(EbN0/10))
with E_s the measured energy of that trial's waveform, so the E_b/N_0 axis is
exact symbol by symbol even though composite-symbol energies fluctuate with
the index draw.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .channels import ChannelSpec, apply_fading, apply_freq_offset, apply_phase_offset
from .detectors import Detection, DetectionMode, detect_fields
from .errors import SearchFailure, UnsupportedModeError
from .numeric import derive_stream
from .waveforms import ModulationConfig, Scheme, modulate_fields, pack_bits

__all__ = [
    "BerPointSpec",
    "BerEstimate",
    "CcdfCurve",
    "ber_point",
    "ebn0_for_target",
    "papr_ccdf",
]

CHUNK_SYMBOLS = 512  # stopping-rule granularity; part of the determinism contract

_POPCOUNT = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.uint8)


@dataclass(frozen=True)
class BerPointSpec:
    """One Monte Carlo operating point."""

    cfg: ModulationConfig
    detector: Detection
    channel: ChannelSpec
    ebn0_db: float
    min_bit_errors: int = 200
    max_symbols: int = 10_000_000
    master_seed: int = 0
    point_id: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.min_bit_errors < 1:
            raise ValueError("min_bit_errors must be >= 1")
        if self.max_symbols < 1:
            raise ValueError("max_symbols must be >= 1")


@dataclass(frozen=True)
class BerEstimate:
    bit_errors: int
    bits_sent: int
    symbol_errors: int
    symbols_sent: int
    ber: float
    ser: float
    ci95_halfwidth: float
    seed_used: int


@dataclass(frozen=True)
class CcdfCurve:
    """Pr(papr_db > threshold_db) on an ascending threshold grid."""

    thresholds_db: tuple[float, ...]
    exceed_prob: tuple[float, ...]

    def __post_init__(self):
        if len(self.thresholds_db) != len(self.exceed_prob):
            raise ValueError("threshold/probability length mismatch")
        probs = np.asarray(self.exceed_prob)
        if np.any(probs < 0) or np.any(probs > 1):
            raise ValueError("exceedance probabilities must be in [0, 1]")
        if np.any(np.diff(probs) > 0):
            raise ValueError("exceedance must be non-increasing in the threshold")


def _detection_mode(spec: BerPointSpec) -> DetectionMode:
    if spec.detector is Detection.NONCOHERENT:
        if spec.cfg.scheme is Scheme.IQ_TDM_CSS:
            raise UnsupportedModeError("iq_tdm_css has no non-coherent detector")
        return DetectionMode(Detection.NONCOHERENT)
    ch = spec.channel
    if ch.tap_rho > 0.0:
        # genie per-bin response of the 2-tap channel, including the gain
        k = np.arange(spec.cfg.M)
        response = math.sqrt(1.0 - ch.tap_rho) + math.sqrt(ch.tap_rho) * np.exp(
            -2j * np.pi * k / spec.cfg.M
        )
        return DetectionMode(Detection.COHERENT, csi_bins=ch.gain_h * response)
    return DetectionMode(Detection.COHERENT, csi=ch.gain_h)


def _bit_error_counts(cfg: ModulationConfig, tx: np.ndarray, rx: np.ndarray) -> np.ndarray:
    """Per-trial Hamming cost between payloads, via per-field XOR popcounts."""
    diff = np.bitwise_xor(tx, rx).astype(np.uint16)
    return _POPCOUNT[diff].sum(axis=-1).astype(np.int64)


def _modem_chunk(spec: BerPointSpec, start: int, count: int):
    """Run trials [start, start+count); returns raw integer counters."""
    cfg = spec.cfg
    nbits = cfg.bits_per_symbol
    mode = _detection_mode(spec)
    linear = 10.0 ** (spec.ebn0_db / 10.0)
    # one uniform block per trial, identical consumption order to
    # RngStream.bits followed by RngStream.complex_gaussian; the polar
    # transform is then applied across the whole chunk at once
    uniforms = np.empty((count, nbits + 2 * cfg.M))
    for i in range(count):
        stream = derive_stream(spec.master_seed, [spec.point_id, start + i])
        uniforms[i] = stream.uniform(nbits + 2 * cfg.M)
    bits = (uniforms[:, :nbits] < 0.5).astype(np.uint8)
    u1 = uniforms[:, nbits : nbits + cfg.M]
    u2 = uniforms[:, nbits + cfg.M :]
    unit_noise = np.sqrt(-np.log1p(-u1)) * np.exp(2j * np.pi * u2)
    tx_fields = pack_bits(cfg, bits)
    x = modulate_fields(cfg, tx_fields)
    energy = np.sum(np.abs(x) ** 2, axis=-1)
    sigma2 = energy / (nbits * linear)
    ch = spec.channel
    if ch.tap_rho != 0.0:
        x = apply_fading(x, ch.tap_rho)
    if ch.gain_h != 1.0:
        x = x * ch.gain_h
    if ch.freq_offset != 0.0:
        x = apply_freq_offset(x, ch.freq_offset, cfg.M)
    if ch.phase_offset != 0.0:
        x = apply_phase_offset(x, ch.phase_offset)
    y = x + np.sqrt(sigma2)[:, None] * unit_noise
    rx_fields = detect_fields(cfg, y, mode)
    errs = _bit_error_counts(cfg, tx_fields, rx_fields)
    bit_errors = int(errs.sum())
    symbol_errors = int(np.count_nonzero(errs))
    return bit_errors, count * nbits, symbol_errors, count


def _chunk_layout(max_symbols: int):
    starts = range(0, max_symbols, CHUNK_SYMBOLS)
    return [(s, min(CHUNK_SYMBOLS, max_symbols - s)) for s in starts]


def ber_point(spec: BerPointSpec, trial_batch_fn: Callable | None = None) -> BerEstimate:
    """Estimate BER at one operating point.

    `trial_batch_fn(spec, start, count)` is a testing hook replacing the modem
    chain; it must return the same counter tuple as the internal batch runner.
    """
    batch_fn = trial_batch_fn if trial_batch_fn is not None else _modem_chunk
    if trial_batch_fn is None:
        _detection_mode(spec)  # fail fast on unsupported pairings
    chunks = _chunk_layout(spec.max_symbols)
    bit_errors = bits_sent = symbol_errors = symbols_sent = 0

    def absorb(counters) -> bool:
        nonlocal bit_errors, bits_sent, symbol_errors, symbols_sent
        be, b, se, s = counters
        bit_errors += be
        bits_sent += b
        symbol_errors += se
        symbols_sent += s
        return bit_errors >= spec.min_bit_errors or symbols_sent >= spec.max_symbols

    if spec.workers <= 1 or trial_batch_fn is not None:
        for start, count in chunks:
            if absorb(batch_fn(spec, start, count)):
                break
    else:
        wave = 2 * spec.workers
        stopped = False
        with ProcessPoolExecutor(max_workers=spec.workers) as ex:
            for wave_start in range(0, len(chunks), wave):
                batch = chunks[wave_start : wave_start + wave]
                results = list(
                    ex.map(_modem_chunk, [spec] * len(batch), *zip(*batch))
                )
                for counters in results:  # reduce strictly in chunk order
                    if absorb(counters):
                        stopped = True
                        break
                if stopped:
                    break
    ber = bit_errors / bits_sent
    ser = symbol_errors / symbols_sent
    ci95 = 1.96 * math.sqrt(max(ber * (1.0 - ber), 0.0) / bits_sent)
    return BerEstimate(
        bit_errors=bit_errors,
        bits_sent=bits_sent,
        symbol_errors=symbol_errors,
        symbols_sent=symbols_sent,
        ber=ber,
        ser=ser,
        ci95_halfwidth=ci95,
        seed_used=spec.master_seed,
    )


def ebn0_for_target(
    spec_template: BerPointSpec,
    target_ber: float = 1e-3,
    tol_db: float = 0.1,
    evaluator: Callable[[float], float] | None = None,
    lo_db: float = -10.0,
    hi_db: float = 40.0,
) -> float:
    """E_b/N_0 (dB) where the BER curve crosses `target_ber`, by bisection.

    Probes reuse the template's point_id, so every probe sees the same trial
    streams (common random numbers) and the sampled curve is monotone in
    practice.  Each probe sends at least ~100/target bits before it may stop,
    so a point genuinely below the target cannot masquerade as above it.
    """
    if not 0.0 < target_ber < 0.5:
        raise ValueError("target_ber must be in (0, 0.5)")
    if evaluator is None:
        nbits = spec_template.cfg.bits_per_symbol
        # enough symbols that a probe sitting exactly at the target collects
        # min_bit_errors (and never fewer than 100/target bits), so probe
        # accuracy follows the requested error budget
        resolution_bits = max(spec_template.min_bit_errors, 100) / target_ber
        probe_cap = min(
            spec_template.max_symbols,
            max(math.ceil(resolution_bits / nbits), CHUNK_SYMBOLS),
        )

        def evaluator(db: float) -> float:
            probe = replace(spec_template, ebn0_db=db, max_symbols=probe_cap)
            return ber_point(probe).ber

    if evaluator(lo_db) < target_ber:
        raise SearchFailure(
            f"BER already below {target_ber:g} at {lo_db:g} dB; no bracket"
        )
    if evaluator(hi_db) > target_ber:
        raise SearchFailure(
            f"BER still above {target_ber:g} at {hi_db:g} dB (error floor); no bracket"
        )
    lo, hi = lo_db, hi_db
    while hi - lo > tol_db:
        mid = 0.5 * (lo + hi)
        if evaluator(mid) > target_ber:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def papr_ccdf(
    cfg: ModulationConfig,
    n_symbols: int,
    thresholds_db: Sequence[float],
    seed: int = 0,
) -> CcdfCurve:
    """Empirical CCDF of the PAPR over uniform random symbols."""
    if n_symbols < 1:
        raise ValueError("n_symbols must be >= 1")
    thresholds = [float(t) for t in thresholds_db]
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise ValueError("thresholds_db must be strictly ascending")
    stream = derive_stream(seed, [0])
    widths = np.array(cfg.field_widths, dtype=np.int64)
    u = stream.uniform((n_symbols, cfg.field_count))
    fields = np.minimum((u * (1 << widths)).astype(np.int64), (1 << widths) - 1)
    samples = modulate_fields(cfg, fields)
    power = np.abs(samples) ** 2
    ratio = power.max(axis=-1) / power.mean(axis=-1)
    # constant-envelope symbols sit at exactly 0 dB up to rounding; snap it
    ratio_db = np.round(10.0 * np.log10(ratio), 12)
    exceed = tuple(float(np.mean(ratio_db > t)) for t in thresholds)
    return CcdfCurve(tuple(thresholds), exceed)
