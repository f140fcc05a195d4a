"""
领域异常，按流水线阶段区分错误类型
"""

from typing import Optional


class QrngError(Exception):
    """所有 lightqrng 错误的基类"""


class DomainError(QrngError, ValueError):
    """参数超出定义域或违反值对象不变量"""


class ConfigError(QrngError, ValueError):
    """配置无效"""


class AcquisitionError(QrngError):
    """采集（仿真或读取）阶段失败"""


class QuantizerMismatchError(DomainError):
    """两个直方图或文件使用了不同的量化器"""


class InsufficientInputError(DomainError):
    """输入比特数不足以运行某个检验或提取一个块"""

    def __init__(self, test_id: str, required: int, actual: int):
        self.test_id = test_id
        self.required = required
        self.actual = actual
        super().__init__(
            f"{test_id} requires at least {required} bits, got {actual}"
        )


class RawFileError(QrngError, ValueError):
    """原始样本文件解析错误的基类"""


class MalformedHeaderError(RawFileError):
    """文件头无效（魔数、版本、位数、量程或配置标签）"""


class TruncatedPayloadError(RawFileError):
    """数据区长度小于文件头声明的数量"""


class MalformedPayloadError(RawFileError):
    """数据区包含多余字节"""


class CodeOutOfRangeError(RawFileError):
    """码值超出 [0, M-1]"""


class EmptyBlockError(RawFileError):
    """文件声明的样本数为0"""


class ReportFormatError(QrngError, ValueError):
    """阶段产物（JSON）缺少字段或字段类型错误"""

    def __init__(self, path: str, field: str, reason: str = "missing"):
        self.path = path
        self.field = field
        super().__init__(f"{path}: field '{field}' {reason}")


class PipelineStageError(QrngError):
    """
    带阶段标签的流水线错误

    exit_code 遵循命令行约定：2 配置，3 采集，4 认证失败，5 统计检验失败，1 其他
    """

    EXIT_CODES = {
        "config": 2,
        "acquisition": 3,
        "certification": 4,
        "battery": 5,
    }

    def __init__(self, stage: str, cause: Optional[BaseException] = None, message: str = ""):
        self.stage = stage
        self.cause = cause
        text = message or (str(cause) if cause is not None else "stage failed")
        super().__init__(f"[{stage}] {text}")

    @property
    def exit_code(self) -> int:
        return self.EXIT_CODES.get(self.stage, 1)
