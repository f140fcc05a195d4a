"""
检验组：注册、管理并运行统计检验
"""

import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Type

import numpy as np

from ..exceptions import DomainError
from ..models.battery import DEFAULT_ALPHA, BatteryReport, TestResult
from .base_test import StatisticalTest, as_bit_array
from .frequency_tests import BlockFrequencyTest, CumulativeSumsTest, MonobitFrequencyTest
from .run_tests import LongestRunOfOnesTest, RunsTest
from .spectral_test import DiscreteFourierTest
from .template_tests import ApproximateEntropyTest, SerialTest

logger = logging.getLogger(__name__)


class StatisticalTestFactory:
    """
    统计检验工厂

    按 test_id 创建检验实例
    """

    _tests: Dict[str, Type[StatisticalTest]] = {
        cls.test_id: cls
        for cls in (
            MonobitFrequencyTest,
            BlockFrequencyTest,
            RunsTest,
            LongestRunOfOnesTest,
            CumulativeSumsTest,
            ApproximateEntropyTest,
            SerialTest,
            DiscreteFourierTest,
        )
    }

    @classmethod
    def register_test(cls, test_class: Type[StatisticalTest]) -> None:
        """
        注册检验类

        Args:
            test_class: StatisticalTest 子类，以其 test_id 注册
        """
        cls._tests[test_class.test_id] = test_class

    @classmethod
    def create_test(cls, test_id: str, **params: Any) -> StatisticalTest:
        """
        创建检验实例

        Args:
            test_id: 检验 ID
            **params: 检验参数

        Returns:
            检验实例
        """
        if test_id not in cls._tests:
            raise DomainError(
                f"unknown test '{test_id}'; supported: {', '.join(cls.get_supported_tests())}"
            )
        test = cls._tests[test_id]()
        test.update_params(params)
        return test

    @classmethod
    def get_supported_tests(cls) -> List[str]:
        return sorted(cls._tests)


def input_digest(bits: np.ndarray) -> str:
    """输入摘要：sha256(比特长度 || 打包字节)"""
    digest = hashlib.sha256()
    digest.update(int(bits.size).to_bytes(8, "little"))
    digest.update(np.packbits(bits).tobytes())
    return digest.hexdigest()


class TestBattery:
    """
    统计检验组

    管理一组检验；输入长度不足某个检验的最小长度时该检验记为跳过而不是失败
    """

    __test__ = False

    def __init__(self, tests: Optional[List[StatisticalTest]] = None):
        self.tests: Dict[str, StatisticalTest] = {}
        self.logger = logging.getLogger("test_battery")
        for test in tests or []:
            self.add_test(test)

    @classmethod
    def default(cls, params: Optional[Dict[str, Dict[str, Any]]] = None) -> "TestBattery":
        """
        包含全部已注册检验的检验组

        Args:
            params: test_id -> 参数字典
        """
        params = params or {}
        unknown = set(params) - set(StatisticalTestFactory.get_supported_tests())
        if unknown:
            raise DomainError(f"parameters given for unknown tests: {sorted(unknown)}")
        return cls(
            [
                StatisticalTestFactory.create_test(test_id, **params.get(test_id, {}))
                for test_id in StatisticalTestFactory.get_supported_tests()
            ]
        )

    def add_test(self, test: StatisticalTest) -> None:
        self.tests[test.test_id] = test
        self.logger.info(f"添加统计检验: {test.test_id}")

    def remove_test(self, test_id: str) -> bool:
        if test_id in self.tests:
            del self.tests[test_id]
            self.logger.info(f"移除统计检验: {test_id}")
            return True
        self.logger.warning(f"找不到统计检验: {test_id}")
        return False

    def enable_test(self, test_id: str) -> bool:
        if test_id in self.tests:
            self.tests[test_id].enable()
            return True
        self.logger.warning(f"找不到统计检验: {test_id}")
        return False

    def disable_test(self, test_id: str) -> bool:
        if test_id in self.tests:
            self.tests[test_id].disable()
            return True
        self.logger.warning(f"找不到统计检验: {test_id}")
        return False

    def update_test_params(self, test_id: str, params: Dict[str, Any]) -> bool:
        if test_id in self.tests:
            self.tests[test_id].update_params(params)
            return True
        self.logger.warning(f"找不到统计检验: {test_id}")
        return False

    def get_test(self, test_id: str) -> Optional[StatisticalTest]:
        return self.tests.get(test_id)

    def _run_one(self, test: StatisticalTest, bits: np.ndarray, alpha: float) -> TestResult:
        required = test.required_length()
        if bits.size < required:
            self.logger.warning(
                f"{test.test_id}: 输入 {bits.size} 比特少于最小长度 {required}，跳过"
            )
            return TestResult.skip(
                test.test_id,
                alpha,
                int(bits.size),
                f"requires at least {required} bits",
            )
        return test.evaluate(bits, alpha)

    def run(self, bits, alpha: float = DEFAULT_ALPHA, workers: int = 1) -> BatteryReport:
        """
        运行所有启用的检验

        Args:
            bits: BitBlock 或 0/1 序列
            alpha: 显著性水平
            workers: 并行线程数；结果与线程数无关，按 test_id 排序

        Returns:
            检验组报告
        """
        if not 0.0 < alpha < 1.0:
            raise DomainError(f"alpha must be in (0, 1), got {alpha}")
        array = as_bit_array(bits)
        if array.size == 0:
            raise DomainError("cannot run the battery on an empty bit sequence")
        enabled = [t for t in self.tests.values() if t.enabled]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                results = list(
                    executor.map(lambda t: self._run_one(t, array, alpha), enabled)
                )
        else:
            results = [self._run_one(t, array, alpha) for t in enabled]

        report = BatteryReport(
            results=tuple(results),
            alpha=alpha,
            input_digest=input_digest(array),
            n_bits=int(array.size),
        )
        if report.passed:
            self.logger.info(f"检验组通过: {len(results)} 项检验, {array.size} 比特")
        else:
            self.logger.warning(f"检验组未通过: {', '.join(report.failed_tests)}")
        return report


def apply_test(
    test_id: str,
    bits,
    params: Optional[Dict[str, Any]] = None,
    alpha: float = DEFAULT_ALPHA,
) -> TestResult:
    """
    运行单个检验；输入过短时抛出 InsufficientInputError

    Args:
        test_id: 检验 ID
        bits: BitBlock 或 0/1 序列
        params: 检验参数
        alpha: 显著性水平

    Returns:
        检验结果
    """
    test = StatisticalTestFactory.create_test(test_id, **(params or {}))
    return test.evaluate(bits, alpha)


def run_battery(
    bits,
    alpha: float = DEFAULT_ALPHA,
    params: Optional[Dict[str, Dict[str, Any]]] = None,
    disabled: Optional[List[str]] = None,
    workers: int = 1,
) -> BatteryReport:
    """
    运行全部检验

    Args:
        bits: BitBlock 或 0/1 序列
        alpha: 显著性水平
        params: test_id -> 参数字典
        disabled: 不运行的检验
        workers: 并行线程数

    Returns:
        检验组报告
    """
    battery = TestBattery.default(params)
    for test_id in disabled or []:
        if not battery.disable_test(test_id):
            raise DomainError(f"cannot disable unknown test '{test_id}'")
    return battery.run(bits, alpha, workers)
