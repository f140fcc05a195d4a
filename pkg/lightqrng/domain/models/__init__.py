"""
领域模型模块，包含噪声模型、样本、熵报告、提取和检验结果等值对象
"""

from .acquisition import (
    DEFAULT_SAMPLE_RATE,
    ConfigurationTag,
    SampleBlock,
    SampleHistogram,
    SessionConfig,
)
from .base import ValueObject
from .battery import DEFAULT_ALPHA, BatteryReport, TestResult, TestStatus
from .entropy import (
    DEFAULT_EPSILON,
    DEFAULT_EPSILON_HASH,
    EffectiveWidth,
    EntropyParams,
    EntropyReport,
    WidthSource,
)
from .extraction import DEFAULT_INPUT_LEN, DEFAULT_OUTPUT_LEN, BitBlock, ToeplitzSpec
from .noise_model import GaussianSpec, NoiseModel, QuantizerSpec

__all__ = [
    "ValueObject",
    "NoiseModel",
    "QuantizerSpec",
    "GaussianSpec",
    "ConfigurationTag",
    "SessionConfig",
    "SampleBlock",
    "SampleHistogram",
    "DEFAULT_SAMPLE_RATE",
    "WidthSource",
    "EffectiveWidth",
    "EntropyParams",
    "EntropyReport",
    "DEFAULT_EPSILON",
    "DEFAULT_EPSILON_HASH",
    "BitBlock",
    "ToeplitzSpec",
    "DEFAULT_INPUT_LEN",
    "DEFAULT_OUTPUT_LEN",
    "TestStatus",
    "TestResult",
    "BatteryReport",
    "DEFAULT_ALPHA",
]
