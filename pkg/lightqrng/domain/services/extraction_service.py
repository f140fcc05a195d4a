"""
提取服务：样本序列化和按预算的 Toeplitz 流式提取
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..exceptions import DomainError
from ..extractors.toeplitz import ToeplitzOperator
from ..models.acquisition import SampleBlock
from ..models.extraction import BitBlock, ToeplitzSpec
from .entropy_service import extractable_length

logger = logging.getLogger(__name__)

# 参考运行：约 1 Mb 原始数据得到约 19.5 Kb 认证输出
REFERENCE_RAW_BITS = 1_000_000
REFERENCE_CERTIFIED_BITS = 19_500
REFERENCE_RATIO = REFERENCE_CERTIFIED_BITS / REFERENCE_RAW_BITS


def serialize_codes(codes: np.ndarray, bits: int) -> np.ndarray:
    """
    把码值按高位在前展开为比特

    Args:
        codes: 码值数组
        bits: 每个码的位数

    Returns:
        长度为 len(codes)·bits 的 0/1 数组
    """
    codes = np.asarray(codes, dtype=np.uint32).ravel()
    shifts = np.arange(bits - 1, -1, -1, dtype=np.uint32)
    return ((codes[:, None] >> shifts) & 1).astype(np.uint8).ravel()


@dataclass
class ExtractionResult:
    """流式提取的结果与统计"""

    bits: BitBlock
    raw_bits: int  # 序列化后的输入比特数 l·b
    blocks: int  # 处理的完整输入块数
    discarded_bits: int  # 不足一块而丢弃的尾部比特
    block_output_bits: int  # 块对齐的提取输出长度
    budget: int  # 可提取长度 k
    warnings: List[str] = field(default_factory=list)

    @property
    def certified_bits(self) -> int:
        return self.bits.length

    @property
    def realized_ratio(self) -> float:
        """认证输出 / 原始输入"""
        return self.certified_bits / self.raw_bits if self.raw_bits else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "raw_bits": self.raw_bits,
            "blocks": self.blocks,
            "discarded_bits": self.discarded_bits,
            "block_output_bits": self.block_output_bits,
            "budget": self.budget,
            "certified_bits": self.certified_bits,
            "realized_ratio": self.realized_ratio,
            "warnings": list(self.warnings),
        }


def extract_stream(
    spec: ToeplitzSpec,
    samples: SampleBlock,
    h_min: float,
    epsilon_hash: float,
    budget: Optional[int] = None,
    batch_size: int = 4096,
) -> ExtractionResult:
    """
    序列化样本、按 n_in 分块哈希并拼接，总输出不超过可提取长度

    Args:
        spec: Toeplitz 规格
        samples: 样本块
        h_min: 每个样本的条件最小熵（比特）
        epsilon_hash: 哈希安全参数
        budget: 已知的预算 k；None 时按 extractable_length(l, h_min, ε_hash) 计算
        batch_size: 每批处理的块数

    Returns:
        提取结果
    """
    bits = serialize_codes(samples.codes, samples.quantizer.bits)
    n_blocks = bits.size // spec.input_len
    if n_blocks == 0:
        raise DomainError(
            f"need at least {spec.input_len} input bits for one block, got {bits.size}"
        )
    if budget is None:
        budget = extractable_length(len(samples), max(h_min, 0.0), epsilon_hash)

    warnings: List[str] = []
    discarded = bits.size - n_blocks * spec.input_len
    block_output = n_blocks * spec.output_len
    if budget <= 0:
        warnings.append("extraction budget is 0; no bits certified")
        logger.warning("提取预算为 0，输出为空")
        return ExtractionResult(
            bits=BitBlock.empty(),
            raw_bits=int(bits.size),
            blocks=0,
            discarded_bits=int(discarded),
            block_output_bits=block_output,
            budget=0,
            warnings=warnings,
        )

    # 只处理预算需要的块
    needed = min(n_blocks, -(-budget // spec.output_len))
    op = ToeplitzOperator(spec)
    matrix = bits[: needed * spec.input_len].reshape(needed, spec.input_len)
    outputs = [
        op.apply_bits(matrix[start : start + batch_size]).ravel()
        for start in range(0, needed, batch_size)
    ]
    out = np.concatenate(outputs)[: min(budget, block_output)]
    if budget < block_output:
        warnings.append(f"output truncated to the budget of {budget} bits")
    if discarded:
        logger.info(f"丢弃不足一块的尾部 {discarded} 比特")
    if spec.input_len % samples.quantizer.bits:
        logger.info(
            f"块长 {spec.input_len} 不是码位数 {samples.quantizer.bits} 的整数倍，"
            f"块边界跨越样本"
        )

    result = ExtractionResult(
        bits=BitBlock.from_bits(out),
        raw_bits=int(bits.size),
        blocks=needed,
        discarded_bits=int(discarded),
        block_output_bits=block_output,
        budget=int(budget),
        warnings=warnings,
    )
    logger.info(
        f"提取完成: 输入 {result.raw_bits} 比特, 块 {needed}, 输出 {result.certified_bits} "
        f"比特, 比率 {result.realized_ratio:.4f}"
    )
    return result

