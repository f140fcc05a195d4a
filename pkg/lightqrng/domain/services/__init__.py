"""
领域服务模块，包含高斯噪声模型、采集、熵认证、标定和提取服务
"""

from .acquisition_service import (
    collapse_codes,
    histogram,
    merge_histograms,
    quantize,
    simulate_session,
    simulate_sweep,
    total_variation,
)
from .calibration_service import (
    SweepCharacterization,
    calibrate_noise_model,
    calibrate_variance,
    characterize_sweep,
)
from .entropy_service import (
    adc_penalty,
    certify,
    conditional_min_entropy,
    extractable_length,
    max_entropy_conjugate,
    min_entropy,
    quantum_shannon,
    secure_rate_single_shot,
    shannon_entropy,
)
from .extraction_service import ExtractionResult, extract_stream, serialize_codes
from .gaussian_model import (
    bin_probabilities,
    dequantize,
    discretized_entropy,
    edge_probabilities,
    gaussian_pdf,
    output_variance,
)
from .special_functions import erf, erfc

__all__ = [
    "gaussian_pdf",
    "output_variance",
    "bin_probabilities",
    "edge_probabilities",
    "dequantize",
    "discretized_entropy",
    "erf",
    "erfc",
    "quantize",
    "simulate_session",
    "simulate_sweep",
    "histogram",
    "merge_histograms",
    "collapse_codes",
    "total_variation",
    "shannon_entropy",
    "quantum_shannon",
    "min_entropy",
    "max_entropy_conjugate",
    "conditional_min_entropy",
    "adc_penalty",
    "secure_rate_single_shot",
    "extractable_length",
    "certify",
    "calibrate_variance",
    "calibrate_noise_model",
    "characterize_sweep",
    "SweepCharacterization",
    "serialize_codes",
    "extract_stream",
    "ExtractionResult",
]
