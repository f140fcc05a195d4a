"""
原始样本文件格式

小端序定长文件头，后接 u16 码值：

    magic   4s   b"QRNG"
    version u8   1
    bits    u8   ADC 位数
    range   f64  量程 R
    tag     u8   配置标签（1 LO_ON，2 LO_OFF，3 LO_SWEEP）
    count   u64  样本数
    codes   count × u16
"""

import logging
import math
import struct
from pathlib import Path
from typing import Union

import numpy as np

from ...domain.exceptions import (
    CodeOutOfRangeError,
    EmptyBlockError,
    MalformedHeaderError,
    MalformedPayloadError,
    TruncatedPayloadError,
)
from ...domain.models.acquisition import ConfigurationTag, SampleBlock
from ...domain.models.noise_model import MAX_ADC_BITS, QuantizerSpec
from ...domain.repositories.sample_repository import SampleRepository
from .atomic import atomic_write_bytes

logger = logging.getLogger(__name__)

MAGIC = b"QRNG"
VERSION = 1
HEADER = struct.Struct("<4sBBdBQ")
CODE_DTYPE = np.dtype("<u2")


def encode_raw(block: SampleBlock) -> bytes:
    """把样本块编码为文件内容"""
    if len(block) == 0:
        raise EmptyBlockError("cannot store an empty sample block")
    header = HEADER.pack(
        MAGIC,
        VERSION,
        block.quantizer.bits,
        float(block.quantizer.range),
        block.tag.wire_code,
        len(block),
    )
    return header + block.codes.astype(CODE_DTYPE).tobytes()


def decode_raw(data: bytes, source: str = "<bytes>") -> SampleBlock:
    """
    解析文件内容

    Args:
        data: 文件内容
        source: 用于错误信息的来源名称

    Returns:
        样本块
    """
    if len(data) < HEADER.size:
        raise MalformedHeaderError(
            f"{source}: header needs {HEADER.size} bytes, file has {len(data)}"
        )
    magic, version, bits, value_range, tag_code, count = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise MalformedHeaderError(f"{source}: bad magic {magic!r}")
    if version != VERSION:
        raise MalformedHeaderError(f"{source}: unsupported version {version}")
    if not 2 <= bits <= MAX_ADC_BITS:
        raise MalformedHeaderError(f"{source}: ADC bits {bits} outside [2, {MAX_ADC_BITS}]")
    if not math.isfinite(value_range) or value_range <= 0:
        raise MalformedHeaderError(f"{source}: invalid range {value_range}")
    try:
        tag = ConfigurationTag.from_wire_code(tag_code)
    except ValueError as e:
        raise MalformedHeaderError(f"{source}: {e}") from e
    if count == 0:
        raise EmptyBlockError(f"{source}: sample count is 0")

    payload = len(data) - HEADER.size
    expected = count * CODE_DTYPE.itemsize
    if payload < expected:
        raise TruncatedPayloadError(
            f"{source}: header declares {count} samples ({expected} bytes), "
            f"payload has {payload} bytes"
        )
    if payload > expected:
        raise MalformedPayloadError(
            f"{source}: {payload - expected} trailing bytes after {count} samples"
        )

    codes = np.frombuffer(data, dtype=CODE_DTYPE, count=count, offset=HEADER.size)
    cardinality = 1 << bits
    if codes.size and int(codes.max()) >= cardinality:
        position = int(np.argmax(codes >= cardinality))
        raise CodeOutOfRangeError(
            f"{source}: code {int(codes[position])} at index {position} "
            f"exceeds {cardinality - 1} for a {bits}-bit ADC"
        )
    quantizer = QuantizerSpec(range=value_range, bits=bits)
    return SampleBlock(codes=codes, quantizer=quantizer, tag=tag)


def store_raw(block: SampleBlock, path: Union[str, Path]) -> Path:
    """
    原子地写入原始样本文件

    Args:
        block: 样本块
        path: 目标路径

    Returns:
        目标路径
    """
    path = atomic_write_bytes(path, encode_raw(block))
    logger.info(f"写入原始样本 {path} ({len(block)} 个样本)")
    return path


def load_raw(path: Union[str, Path]) -> SampleBlock:
    """读取原始样本文件"""
    path = Path(path)
    block = decode_raw(path.read_bytes(), source=str(path))
    logger.info(f"读取原始样本 {path} ({len(block)} 个样本, {block.tag.value})")
    return block


class RawSampleFileRepository(SampleRepository):
    """原始样本文件仓库"""

    def save(self, block: SampleBlock, path: Path) -> Path:
        return store_raw(block, path)

    def load(self, path: Path) -> SampleBlock:
        return load_raw(path)
