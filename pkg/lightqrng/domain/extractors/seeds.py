"""
Toeplitz 种子来源

提取器从不静默自取种子：来源必须显式给出，所用种子以十六进制回显到报告中
"""

import logging
import secrets
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from ..exceptions import ConfigError
from ..models.extraction import ToeplitzSpec

logger = logging.getLogger(__name__)

# derived 种子在主种子的 SeedSequence 中使用的 spawn key
DERIVED_SEED_KEY = 0x5EED


class SeedSource(Enum):
    """种子来源枚举"""

    HEX = "hex"  # 配置中的十六进制字符串
    FILE = "file"  # 二进制文件
    OS = "os"  # 操作系统熵源，不可复现
    DERIVED = "derived"  # 由主仿真种子派生，可复现


def seed_bytes_needed(input_len: int, output_len: int) -> int:
    return (input_len + output_len - 1 + 7) // 8


def seed_from_hex(text: str) -> bytes:
    try:
        return bytes.fromhex(text.strip())
    except ValueError as e:
        raise ConfigError(f"extractor seed is not valid hex: {e}") from e


def seed_from_file(path: Path) -> bytes:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"extractor seed file not found: {path}")
    return path.read_bytes()


def seed_from_os(n_bytes: int) -> bytes:
    logger.warning("提取器种子取自操作系统熵源，本次运行不可复现")
    return secrets.token_bytes(n_bytes)


def derived_seed(master_seed: int, n_bytes: int) -> bytes:
    """
    由主种子派生种子字节

    使用 SeedSequence(master_seed, spawn_key=(DERIVED_SEED_KEY,)) 生成的 uint32 状态，
    按小端序拼接后取前 n_bytes 字节

    Args:
        master_seed: 主仿真种子
        n_bytes: 需要的字节数

    Returns:
        种子字节
    """
    words = (n_bytes + 3) // 4
    state = np.random.SeedSequence(
        int(master_seed), spawn_key=(DERIVED_SEED_KEY,)
    ).generate_state(words, dtype=np.uint32)
    return state.astype("<u4").tobytes()[:n_bytes]


def resolve_seed(
    source: SeedSource,
    input_len: int,
    output_len: int,
    value: Optional[str] = None,
    master_seed: Optional[int] = None,
) -> ToeplitzSpec:
    """
    按来源获取种子并构造 Toeplitz 规格

    Args:
        source: 种子来源
        input_len: 输入比特数 n_in
        output_len: 输出比特数 m_out
        value: hex 来源时为十六进制串，file 来源时为文件路径
        master_seed: derived 来源需要的主种子

    Returns:
        Toeplitz 规格
    """
    source = SeedSource(source)
    n_bytes = seed_bytes_needed(input_len, output_len)
    if source == SeedSource.HEX:
        if not value:
            raise ConfigError("seed_source 'hex' requires extractor.seed_hex")
        raw = seed_from_hex(value)
    elif source == SeedSource.FILE:
        if not value:
            raise ConfigError("seed_source 'file' requires extractor.seed_file")
        raw = seed_from_file(Path(value))
    elif source == SeedSource.OS:
        raw = seed_from_os(n_bytes)
    else:
        if master_seed is None:
            raise ConfigError("seed_source 'derived' requires a master seed")
        raw = derived_seed(master_seed, n_bytes)
    spec = ToeplitzSpec.from_seed_bytes(input_len, output_len, raw)
    logger.info(f"提取器种子来源 {source.value}, {spec.seed_length} 比特")
    return spec


__all__ = [
    "SeedSource",
    "seed_bytes_needed",
    "seed_from_hex",
    "seed_from_file",
    "seed_from_os",
    "derived_seed",
    "resolve_seed",
]
