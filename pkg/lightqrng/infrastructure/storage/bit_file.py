"""
提取比特文件格式：magic b"QBIT"，version u8，比特长度 u64（小端），后接高位在前打包的字节
"""

import logging
import struct
from pathlib import Path
from typing import Union

from ...domain.exceptions import (
    MalformedHeaderError,
    MalformedPayloadError,
    TruncatedPayloadError,
)
from ...domain.models.extraction import BitBlock
from ...domain.repositories.bit_repository import BitRepository
from .atomic import atomic_write_bytes, atomic_write_text

logger = logging.getLogger(__name__)

MAGIC = b"QBIT"
VERSION = 1
HEADER = struct.Struct("<4sBQ")


def encode_bits(bits: BitBlock) -> bytes:
    return HEADER.pack(MAGIC, VERSION, bits.length) + bits.data


def decode_bits(data: bytes, source: str = "<bytes>") -> BitBlock:
    if len(data) < HEADER.size:
        raise MalformedHeaderError(f"{source}: header needs {HEADER.size} bytes")
    magic, version, length = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise MalformedHeaderError(f"{source}: bad magic {magic!r}")
    if version != VERSION:
        raise MalformedHeaderError(f"{source}: unsupported version {version}")
    payload = data[HEADER.size :]
    expected = (length + 7) // 8
    if len(payload) < expected:
        raise TruncatedPayloadError(
            f"{source}: {length} bits need {expected} bytes, payload has {len(payload)}"
        )
    if len(payload) > expected:
        raise MalformedPayloadError(f"{source}: {len(payload) - expected} trailing bytes")
    try:
        return BitBlock(data=payload, length=length)
    except ValueError as e:
        raise MalformedPayloadError(f"{source}: {e}") from e


def store_bits(bits: BitBlock, path: Union[str, Path], hex_copy: bool = False) -> Path:
    """
    写入比特文件，可选同时写一份十六进制文本（同名 .hex）

    Args:
        bits: 比特块
        path: 目标路径
        hex_copy: 是否写十六进制文本

    Returns:
        目标路径
    """
    path = atomic_write_bytes(path, encode_bits(bits))
    if hex_copy:
        atomic_write_text(path.with_suffix(".hex"), bits.to_hex() + "\n")
    logger.info(f"写入提取比特 {path} ({bits.length} 比特)")
    return path


def load_bits(path: Union[str, Path]) -> BitBlock:
    path = Path(path)
    return decode_bits(path.read_bytes(), source=str(path))


class BitFileRepository(BitRepository):
    """提取比特文件仓库"""

    def __init__(self, hex_copy: bool = False):
        self.hex_copy = hex_copy

    def save(self, bits: BitBlock, path: Path) -> Path:
        return store_bits(bits, path, self.hex_copy)

    def load(self, path: Path) -> BitBlock:
        return load_bits(path)
