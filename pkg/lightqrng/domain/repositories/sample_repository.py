"""
原始样本仓库接口
"""

from abc import ABC, abstractmethod
from pathlib import Path

from ..models.acquisition import SampleBlock


class SampleRepository(ABC):
    """原始样本仓库接口"""

    @abstractmethod
    def save(self, block: SampleBlock, path: Path) -> Path:
        """
        保存样本块

        Args:
            block: 样本块
            path: 目标路径

        Returns:
            实际写入的路径
        """
        pass

    @abstractmethod
    def load(self, path: Path) -> SampleBlock:
        """
        读取样本块

        Args:
            path: 文件路径

        Returns:
            样本块
        """
        pass
