"""
熵认证模型：有效宽度、认证参数和熵报告
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from ..exceptions import DomainError
from .base import ValueObject, require_finite

DEFAULT_EPSILON = 1e-10
DEFAULT_EPSILON_HASH = 1e-20


class WidthSource(Enum):
    """有效宽度 g′ 的来源"""

    OVERRIDE = "override"  # 配置显式给出
    MODEL = "model"  # g·√(1+2n)
    HISTOGRAM = "histogram"  # √(Var_on − Var_off)


@dataclass(frozen=True, eq=False)
class EffectiveWidth(ValueObject):
    """条件最小熵闭式中 erf(Δx/2g′) 的有效高斯宽度 g′"""

    value: float
    source: WidthSource = WidthSource.OVERRIDE

    def __post_init__(self):
        require_finite("effective width", self.value)
        if self.value <= 0:
            raise DomainError(f"effective width g' must be > 0, got {self.value}")

    @classmethod
    def from_model(cls, gain: float, mean_photon_number: float) -> "EffectiveWidth":
        """默认取测量分布的标准差 g·√(1+2n)"""
        return cls(
            value=gain * (1.0 + 2.0 * mean_photon_number) ** 0.5,
            source=WidthSource.MODEL,
        )


@dataclass(frozen=True, eq=False)
class EntropyParams(ValueObject):
    """认证参数"""

    epsilon: float = DEFAULT_EPSILON  # 单次安全参数 ε
    epsilon_hash: float = DEFAULT_EPSILON_HASH  # 哈希安全参数 ε_hash
    mean_photon_number: float = 0.0  # n
    gain: Optional[float] = None  # g，用于推导默认 g′
    effective_width: Optional[float] = None  # g′ 显式覆盖
    sup_jf: Optional[int] = None  # sup|J_f|，None 时从 LO_ON 直方图估计
    imbalance_entropy: float = 0.0  # H(X)_c(1)，常量输入

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise DomainError(f"epsilon must be in (0, 1], got {self.epsilon}")
        if not 0 < self.epsilon_hash < 1:
            raise DomainError(f"epsilon_hash must be in (0, 1), got {self.epsilon_hash}")
        if self.mean_photon_number < 0:
            raise DomainError("mean_photon_number must be >= 0")
        if self.gain is not None and self.gain <= 0:
            raise DomainError("gain must be > 0")
        if self.effective_width is not None and self.effective_width <= 0:
            raise DomainError("effective_width must be > 0")
        if self.sup_jf is not None and self.sup_jf < 1:
            raise DomainError(f"sup|J_f| must be >= 1, got {self.sup_jf}")
        if self.imbalance_entropy < 0:
            raise DomainError("imbalance_entropy must be >= 0")


@dataclass(frozen=True, eq=False)
class EntropyReport(ValueObject):
    """
    熵报告

    原始公式值不截断；usable_* 字段是在报告边界截断到 0 的可用值
    """

    shannon_total: float
    shannon_classical: Dict[str, float]  # {"c1": H(X)_c(1), "c2": H(X)_c(2)}
    shannon_quantum: float
    quantum_clamped: bool
    min_entropy_unconditional: float
    min_entropy_classical: float
    min_entropy_quantum: float
    max_entropy_conjugate: float
    conditional_min_entropy_ideal: float
    adc_penalty: float
    conditional_min_entropy_final: float
    secure_rate_single_shot: float
    usable_secure_rate: float
    extractable_length: int
    sample_count: int
    epsilon: float
    epsilon_hash: float
    mean_photon_number: float
    bin_width: float
    effective_width: float
    effective_width_source: WidthSource
    cardinality: int
    sup_jf: int
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def certified(self) -> bool:
        """存在量子熵盈余且预算为正"""
        return self.shannon_quantum > 0 and self.extractable_length > 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "shannon_total": self.shannon_total,
            "shannon_classical": dict(self.shannon_classical),
            "shannon_quantum": self.shannon_quantum,
            "quantum_clamped": self.quantum_clamped,
            "min_entropy_unconditional": self.min_entropy_unconditional,
            "min_entropy_classical": self.min_entropy_classical,
            "min_entropy_quantum": self.min_entropy_quantum,
            "max_entropy_conjugate": self.max_entropy_conjugate,
            "conditional_min_entropy_ideal": self.conditional_min_entropy_ideal,
            "adc_penalty": self.adc_penalty,
            "conditional_min_entropy_final": self.conditional_min_entropy_final,
            "secure_rate_single_shot": self.secure_rate_single_shot,
            "usable_secure_rate": self.usable_secure_rate,
            "extractable_length": self.extractable_length,
            "parameters": {
                "epsilon": self.epsilon,
                "epsilon_hash": self.epsilon_hash,
                "sample_count": self.sample_count,
                "mean_photon_number": self.mean_photon_number,
                "bin_width": self.bin_width,
                "effective_width": self.effective_width,
                "effective_width_source": self.effective_width_source.value,
                "cardinality": self.cardinality,
                "sup_jf": self.sup_jf,
            },
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EntropyReport":
        """从 to_dict() 的输出恢复报告"""
        params = data["parameters"]
        return cls(
            shannon_total=data["shannon_total"],
            shannon_classical=dict(data["shannon_classical"]),
            shannon_quantum=data["shannon_quantum"],
            quantum_clamped=data["quantum_clamped"],
            min_entropy_unconditional=data["min_entropy_unconditional"],
            min_entropy_classical=data["min_entropy_classical"],
            min_entropy_quantum=data["min_entropy_quantum"],
            max_entropy_conjugate=data["max_entropy_conjugate"],
            conditional_min_entropy_ideal=data["conditional_min_entropy_ideal"],
            adc_penalty=data["adc_penalty"],
            conditional_min_entropy_final=data["conditional_min_entropy_final"],
            secure_rate_single_shot=data["secure_rate_single_shot"],
            usable_secure_rate=data["usable_secure_rate"],
            extractable_length=data["extractable_length"],
            sample_count=params["sample_count"],
            epsilon=params["epsilon"],
            epsilon_hash=params["epsilon_hash"],
            mean_photon_number=params["mean_photon_number"],
            bin_width=params["bin_width"],
            effective_width=params["effective_width"],
            effective_width_source=WidthSource(params["effective_width_source"]),
            cardinality=params["cardinality"],
            sup_jf=params["sup_jf"],
            warnings=tuple(data.get("warnings", [])),
        )
