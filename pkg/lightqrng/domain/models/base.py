"""
基础领域模型类：值对象
"""

import math
from dataclasses import dataclass, fields
from enum import Enum
from typing import Any, Dict

import numpy as np

from ..exceptions import DomainError


@dataclass(frozen=True)
class ValueObject:
    """
    值对象基类

    值对象不可变，按字段值比较相等。numpy 数组字段按内容比较。
    """

    def __eq__(self, other):
        if not isinstance(other, self.__class__):
            return False
        for f in fields(self):
            mine = getattr(self, f.name)
            theirs = getattr(other, f.name)
            if isinstance(mine, np.ndarray) or isinstance(theirs, np.ndarray):
                if not np.array_equal(mine, theirs):
                    return False
            elif mine != theirs:
                return False
        return True

    def __hash__(self):
        items = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, np.ndarray):
                value = value.tobytes()
            elif isinstance(value, list):
                value = tuple(value)
            items.append((f.name, value))
        return hash(tuple(items))

    def to_dict(self) -> Dict[str, Any]:
        """将值对象转换为字典"""
        return {f.name: _plain(getattr(self, f.name)) for f in fields(self)}


def _plain(value: Any) -> Any:
    """把枚举、numpy 标量和数组转换为 JSON 友好的类型"""
    if isinstance(value, ValueObject):
        return value.to_dict()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value


def require_finite(name: str, value: float) -> float:
    """检查参数为有限实数"""
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}")
    if not math.isfinite(number):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return number
