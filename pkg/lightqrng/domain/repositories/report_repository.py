"""
阶段报告仓库接口
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Iterable


class ReportRepository(ABC):
    """阶段产物（JSON 文档）仓库接口"""

    @abstractmethod
    def save(self, document: Dict[str, Any], path: Path) -> Path:
        """
        保存文档

        Args:
            document: 可 JSON 序列化的字典
            path: 目标路径

        Returns:
            实际写入的路径
        """
        pass

    @abstractmethod
    def load(self, path: Path, required: Iterable[str] = ()) -> Dict[str, Any]:
        """
        读取文档并检查必需字段

        Args:
            path: 文件路径
            required: 必需字段，支持 "a.b" 形式的嵌套路径

        Returns:
            文档字典
        """
        pass
