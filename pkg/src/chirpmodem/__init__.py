"""Layered chirp-spread-spectrum modem simulation toolkit.

Waveform synthesis and detection for six CSS schemes, channel impairments,
closed-form orthogonality/interference/BER analytics, and a deterministic
Monte Carlo harness.  See the README for the scheme catalog and conventions.
"""

from .analytics import (
    BerTheoryInput,
    GaussSumParams,
    InterferenceDecomposition,
    TheoryMode,
    gauss_sum_brute,
    gauss_sum_closed,
    inner_product_closed,
    interference_power,
    interference_profile,
    papr,
    receiver_complexity,
    spectral_efficiency,
    theoretical_ber,
)
from .channels import (
    ChannelSpec,
    add_awgn,
    apply_channel,
    apply_fading,
    apply_freq_offset,
    apply_phase_offset,
)
from .detectors import Detection, DetectionMode, dechirp, detect, detect_tie_break
from .errors import ConfigError, SearchFailure, UnsupportedModeError, ValidationFailure
from .numeric import RngStream, derive_stream, dft, harmonic, idft, q_function
from .simkit import (
    BerEstimate,
    BerPointSpec,
    CcdfCurve,
    ber_point,
    ebn0_for_target,
    papr_ccdf,
)
from .waveforms import (
    ModulationConfig,
    Scheme,
    SymbolIndices,
    Waveform,
    bits_to_indices,
    indices_to_bits,
    modulate,
    spreading_symbol,
    unchirped_symbol,
)

__version__ = "0.1.0"

__all__ = [
    "BerEstimate",
    "BerPointSpec",
    "BerTheoryInput",
    "CcdfCurve",
    "ChannelSpec",
    "ConfigError",
    "Detection",
    "DetectionMode",
    "GaussSumParams",
    "InterferenceDecomposition",
    "ModulationConfig",
    "RngStream",
    "Scheme",
    "SearchFailure",
    "SymbolIndices",
    "TheoryMode",
    "UnsupportedModeError",
    "ValidationFailure",
    "Waveform",
    "add_awgn",
    "apply_channel",
    "apply_fading",
    "apply_freq_offset",
    "apply_phase_offset",
    "ber_point",
    "bits_to_indices",
    "dechirp",
    "derive_stream",
    "detect",
    "detect_tie_break",
    "dft",
    "ebn0_for_target",
    "gauss_sum_brute",
    "gauss_sum_closed",
    "harmonic",
    "idft",
    "indices_to_bits",
    "inner_product_closed",
    "interference_power",
    "interference_profile",
    "modulate",
    "papr",
    "papr_ccdf",
    "q_function",
    "receiver_complexity",
    "spectral_efficiency",
    "spreading_symbol",
    "theoretical_ber",
    "unchirped_symbol",
]
