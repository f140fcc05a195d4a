"""
提取比特仓库接口
"""

from abc import ABC, abstractmethod
from pathlib import Path

from ..models.extraction import BitBlock


class BitRepository(ABC):
    """提取比特仓库接口"""

    @abstractmethod
    def save(self, bits: BitBlock, path: Path) -> Path:
        """保存比特块"""
        pass

    @abstractmethod
    def load(self, path: Path) -> BitBlock:
        """读取比特块"""
        pass
