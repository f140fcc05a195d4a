"""
统计检验组
"""

from .base_test import StatisticalTest, as_bit_array
from .battery import StatisticalTestFactory, TestBattery, apply_test, run_battery
from .frequency_tests import BlockFrequencyTest, CumulativeSumsTest, MonobitFrequencyTest
from .run_tests import LongestRunOfOnesTest, RunsTest
from .spectral_test import DiscreteFourierTest
from .template_tests import ApproximateEntropyTest, SerialTest

SUPPORTED_TESTS = StatisticalTestFactory.get_supported_tests()

__all__ = [
    "StatisticalTest",
    "StatisticalTestFactory",
    "TestBattery",
    "apply_test",
    "run_battery",
    "as_bit_array",
    "SUPPORTED_TESTS",
    "MonobitFrequencyTest",
    "BlockFrequencyTest",
    "RunsTest",
    "LongestRunOfOnesTest",
    "CumulativeSumsTest",
    "ApproximateEntropyTest",
    "SerialTest",
    "DiscreteFourierTest",
]
