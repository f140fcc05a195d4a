"""
运行报告 DTO 及其 report_v1 文档模型
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ...domain.exceptions import ReportFormatError

SCHEMA_VERSION = "report_v1"


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


class EntropyParametersDocument(_Document):
    epsilon: float = Field(gt=0, le=1)
    epsilon_hash: float = Field(gt=0, lt=1)
    sample_count: int = Field(gt=0)
    mean_photon_number: float = Field(ge=0)
    bin_width: float = Field(gt=0)
    effective_width: float = Field(ge=0)
    effective_width_source: Literal["override", "model", "histogram"]
    cardinality: int = Field(ge=4)
    sup_jf: int = Field(ge=1)


class EntropyDocument(_Document):
    shannon_total: float = Field(ge=0)
    shannon_classical: Dict[str, float]
    shannon_quantum: float = Field(ge=0)
    quantum_clamped: bool
    min_entropy_unconditional: float = Field(ge=0)
    min_entropy_classical: float = Field(ge=0)
    min_entropy_quantum: float
    max_entropy_conjugate: float = Field(ge=0)
    conditional_min_entropy_ideal: float
    adc_penalty: float = Field(ge=0)
    conditional_min_entropy_final: float
    secure_rate_single_shot: float
    usable_secure_rate: float = Field(ge=0)
    extractable_length: int = Field(ge=0)
    parameters: EntropyParametersDocument
    warnings: List[str]


class ExtractionDocument(_Document):
    raw_samples: int = Field(ge=0)
    raw_bits: int = Field(ge=0)
    blocks: int = Field(ge=0)
    discarded_bits: int = Field(ge=0)
    block_output_bits: int = Field(ge=0)
    budget: int = Field(ge=0)
    certified_bits: int = Field(ge=0)
    realized_ratio: float = Field(ge=0, le=1)
    reference_ratio: float
    input_len: int = Field(ge=1)
    output_len: int = Field(ge=1)
    seed_source: Literal["hex", "file", "os", "derived"]
    seed_hex: str
    bits_sha256: str
    warnings: List[str]


class CheckResultDocument(_Document):
    test_id: str
    p_value: Optional[float] = Field(ge=0, le=1)
    sub_p_values: List[float]
    statistic: Optional[float]
    n_bits: int = Field(ge=0)
    status: Literal["passed", "failed", "skipped"]
    passed: bool
    note: str


class BatteryDocument(_Document):
    alpha: float = Field(gt=0, lt=1)
    input_digest: str
    n_bits: int = Field(gt=0)
    passed: bool
    results: List[CheckResultDocument]


class StatusDocument(_Document):
    certified: bool
    battery_passed: Optional[bool]
    exit_code: int


class ReportDocument(_Document):
    """report.json 的完整结构"""

    schema_version: Literal["report_v1"]
    config: Dict[str, Any]
    simulation: Dict[str, Any]
    entropy: EntropyDocument
    extraction: ExtractionDocument
    battery: Optional[BatteryDocument]
    status: StatusDocument
    warnings: List[str]


def validate_report(document: Dict[str, Any], source: str = "report") -> ReportDocument:
    """
    按 report_v1 结构校验报告

    Args:
        document: 报告字典
        source: 用于错误信息的来源

    Returns:
        校验后的文档模型
    """
    try:
        return ReportDocument.model_validate(document)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(p) for p in first["loc"]) or "<document>"
        raise ReportFormatError(source, location, first["msg"]) from e


@dataclass
class RunReport:
    """一次完整运行的结果：报告文档和阶段耗时"""

    document: Dict[str, Any]
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return int(self.document["status"]["exit_code"])

    @property
    def certified_bits(self) -> int:
        return int(self.document["extraction"]["certified_bits"])

    @property
    def warnings(self) -> List[str]:
        return list(self.document["warnings"])

    def to_dict(self) -> Dict[str, Any]:
        return {**self.document, "timings": dict(self.timings)}
