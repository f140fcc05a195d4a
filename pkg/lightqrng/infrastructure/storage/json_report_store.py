"""
JSON 阶段产物存储

输出按键排序、缩进 2，保证相同内容字节一致
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Union

from ...domain.exceptions import ReportFormatError
from ...domain.repositories.report_repository import ReportRepository
from .atomic import atomic_write_text

logger = logging.getLogger(__name__)


def dumps(document: Dict[str, Any]) -> str:
    """确定性的 JSON 文本"""
    return json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _lookup(document: Dict[str, Any], dotted: str) -> Any:
    node: Any = document
    for part in dotted.split("."):
        if not isinstance(node, dict) or part not in node:
            raise KeyError(dotted)
        node = node[part]
    return node


class JsonReportStore(ReportRepository):
    """JSON 文档仓库"""

    def save(self, document: Dict[str, Any], path: Union[str, Path]) -> Path:
        path = atomic_write_text(path, dumps(document))
        logger.debug(f"写入 {path}")
        return path

    def load(self, path: Union[str, Path], required: Iterable[str] = ()) -> Dict[str, Any]:
        path = Path(path)
        if not path.is_file():
            raise ReportFormatError(str(path), "<file>", "does not exist")
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ReportFormatError(str(path), "<document>", f"is not valid JSON ({e})") from e
        if not isinstance(document, dict):
            raise ReportFormatError(str(path), "<document>", "is not a JSON object")
        for field in required:
            try:
                _lookup(document, field)
            except KeyError:
                raise ReportFormatError(str(path), field) from None
        return document
