"""
统计检验结果模型
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from ..exceptions import DomainError
from .base import ValueObject

DEFAULT_ALPHA = 0.01


class TestStatus(Enum):
    """检验状态枚举"""

    __test__ = False

    PASSED = "passed"
    FAILED = "failed"
    SKIPPED = "skipped"  # 输入长度不足，不计为失败


@dataclass(frozen=True, eq=False)
class TestResult(ValueObject):
    """单个检验结果，passed ⇔ p_value ≥ α"""

    __test__ = False

    test_id: str
    p_value: Optional[float]  # 跳过时为 None
    alpha: float
    statistic: Optional[float]
    n_bits: int
    sub_p_values: Tuple[float, ...] = field(default_factory=tuple)
    status: TestStatus = TestStatus.PASSED
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "sub_p_values", tuple(float(p) for p in self.sub_p_values))
        if self.status == TestStatus.SKIPPED:
            return
        if self.p_value is None or not 0.0 <= self.p_value <= 1.0:
            raise DomainError(f"{self.test_id}: p-value must be in [0, 1], got {self.p_value}")
        status = TestStatus.PASSED if self.p_value >= self.alpha else TestStatus.FAILED
        object.__setattr__(self, "status", status)

    @property
    def passed(self) -> bool:
        return self.status == TestStatus.PASSED

    @property
    def skipped(self) -> bool:
        return self.status == TestStatus.SKIPPED

    @classmethod
    def skip(cls, test_id: str, alpha: float, n_bits: int, note: str) -> "TestResult":
        return cls(
            test_id=test_id,
            p_value=None,
            alpha=alpha,
            statistic=None,
            n_bits=n_bits,
            status=TestStatus.SKIPPED,
            note=note,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "test_id": self.test_id,
            "p_value": self.p_value,
            "sub_p_values": list(self.sub_p_values),
            "statistic": self.statistic,
            "n_bits": self.n_bits,
            "status": self.status.value,
            "passed": self.passed,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], alpha: float) -> "TestResult":
        return cls(
            test_id=data["test_id"],
            p_value=data["p_value"],
            alpha=alpha,
            statistic=data["statistic"],
            n_bits=data["n_bits"],
            sub_p_values=tuple(data.get("sub_p_values", [])),
            status=TestStatus(data["status"]),
            note=data.get("note", ""),
        )


@dataclass(frozen=True, eq=False)
class BatteryReport(ValueObject):
    """检验组报告，按 test_id 排序"""

    results: Tuple[TestResult, ...]
    alpha: float
    input_digest: str
    n_bits: int

    def __post_init__(self):
        ordered = tuple(sorted(self.results, key=lambda r: r.test_id))
        object.__setattr__(self, "results", ordered)

    @property
    def passed(self) -> bool:
        """所有未跳过的检验都通过"""
        return all(r.passed for r in self.results if not r.skipped)

    @property
    def failed_tests(self) -> List[str]:
        return [r.test_id for r in self.results if r.status == TestStatus.FAILED]

    def result(self, test_id: str) -> TestResult:
        for r in self.results:
            if r.test_id == test_id:
                return r
        raise KeyError(test_id)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "input_digest": self.input_digest,
            "n_bits": self.n_bits,
            "passed": self.passed,
            "results": [r.to_dict() for r in self.results],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BatteryReport":
        alpha = data["alpha"]
        return cls(
            results=tuple(TestResult.from_dict(r, alpha) for r in data["results"]),
            alpha=alpha,
            input_digest=data["input_digest"],
            n_bits=data["n_bits"],
        )
