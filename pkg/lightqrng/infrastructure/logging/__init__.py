"""
日志配置

库代码只使用 logging.getLogger(__name__)；命令行入口调用 setup_logging 一次，
把标准库日志记录转交给 loguru 输出
"""

import logging
import sys
from pathlib import Path
from typing import Optional, Union

from loguru import logger

DEFAULT_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | "
    "<cyan>{extra[logger_name]}</cyan> - <level>{message}</level>"
)


class InterceptHandler(logging.Handler):
    """把标准库 logging 记录转发给 loguru"""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level: Union[str, int] = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno
        logger.bind(logger_name=record.name).opt(exception=record.exc_info).log(
            level, record.getMessage()
        )


def setup_logging(
    level: str = "INFO", log_file: Optional[Union[str, Path]] = None, json: bool = False
) -> None:
    """
    配置 loguru 输出并接管标准库日志

    Args:
        level: 日志级别
        log_file: 可选的日志文件
        json: 是否以 JSON 行格式输出
    """
    level = level.upper()
    logger.remove()
    logger.configure(extra={"logger_name": "lightqrng"})
    logger.add(sys.stderr, level=level, format=DEFAULT_FORMAT, serialize=json)
    if log_file is not None:
        logger.add(str(log_file), level=level, serialize=json, enqueue=True)
    logging.basicConfig(handlers=[InterceptHandler()], level=0, force=True)
    logging.getLogger("matplotlib").setLevel(logging.WARNING)


__all__ = ["setup_logging", "InterceptHandler"]
