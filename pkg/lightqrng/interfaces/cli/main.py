"""
命令行入口

    qrng run --config <path>
    qrng simulate|certify|extract|test|report|plot --config <path>
    qrng schema

退出码：0 成功，2 配置错误，3 采集错误，4 认证失败（H_q ≤ 0），5 统计检验失败，1 其他错误
"""

import argparse
import logging
import sys
from importlib import resources
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from ...application.services.pipeline_service import PipelineService
from ...config.settings import PipelineConfig, load_config
from ...domain.exceptions import ConfigError, PipelineStageError
from ...infrastructure.logging import setup_logging
from ...infrastructure.storage.json_report_store import dumps

logger = logging.getLogger(__name__)

SCHEMA_RESOURCE = "report_v1.schema.json"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", "-c", help="TOML 配置文件")
    parser.add_argument("--seed", type=int, help="主仿真种子，覆盖 sessions.seed")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="覆盖配置键，例如 --set entropy.epsilon=1e-12，可重复",
    )
    parser.add_argument("--run-dir", help="运行目录，覆盖 output.run_dir")
    parser.add_argument("--json", action="store_true", help="把结果 JSON 打印到标准输出")
    parser.add_argument("--log-level", help="日志级别，覆盖 logging.level")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrng", description="真空涨落量子随机数后处理：仿真、熵认证、Toeplitz 提取和统计检验"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "run": "执行完整流水线",
        "simulate": "仿真 LO_OFF / LO_ON（及可选 LO_SWEEP）会话，写入原始样本文件",
        "certify": "由原始样本文件计算熵报告",
        "extract": "按认证预算做 Toeplitz 提取",
        "test": "对提取比特运行统计检验组",
        "report": "汇总运行目录中的阶段产物为 report.json",
        "plot": "生成结果图",
    }
    for name, help_text in commands.items():
        _add_common(sub.add_parser(name, help=help_text))
    sub.add_parser("schema", help="打印 report_v1 JSON schema")
    return parser


def read_schema() -> str:
    """随包发布的报告 schema 文本"""
    return resources.files("lightqrng.schemas").joinpath(SCHEMA_RESOURCE).read_text(
        encoding="utf-8"
    )


def _emit(document: Any, as_json: bool) -> None:
    if as_json:
        sys.stdout.write(dumps(document))


def _run_command(service: PipelineService, command: str, as_json: bool) -> int:
    if command == "run":
        report = service.run()
        _emit(report.document, as_json)
        _summarize(report.document)
        return report.exit_code
    if command == "simulate":
        _emit(service.simulate(), as_json)
    elif command == "certify":
        _emit(service.certify().to_dict(), as_json)
    elif command == "extract":
        _emit(service.extract(), as_json)
    elif command == "test":
        _emit(service.test(), as_json)
    elif command == "report":
        document = service.report()
        _emit(document, as_json)
        _summarize(document)
        return int(document["status"]["exit_code"])
    elif command == "plot":
        paths = service.plot()
        _emit([str(p) for p in paths], as_json)
    return 0


def _summarize(document: Dict[str, Any]) -> None:
    entropy = document["entropy"]
    extraction = document["extraction"]
    logger.info(
        f"H_q={entropy['shannon_quantum']:.4f} 比特, "
        f"H_min(X|E)={entropy['conditional_min_entropy_final']:.4f} 比特/样本, "
        f"认证输出 {extraction['certified_bits']} 比特, "
        f"实际比率 {extraction['realized_ratio']:.4f}（参考 {extraction['reference_ratio']:.4f}）"
    )
    for warning in document["warnings"]:
        logger.warning(warning)


def main(argv: Optional[List[str]] = None) -> int:
    """
    命令行主函数

    Args:
        argv: 参数列表，None 时使用 sys.argv

    Returns:
        退出码
    """
    args = build_parser().parse_args(argv)
    if args.command == "schema":
        sys.stdout.write(read_schema())
        return 0

    load_dotenv()
    try:
        config: PipelineConfig = load_config(args.config, args.overrides, args.seed)
    except ConfigError as e:
        setup_logging(args.log_level or "INFO")
        logger.error(f"[config] {e}")
        return PipelineStageError.EXIT_CODES["config"]

    setup_logging(
        args.log_level or config.logging.level,
        config.logging.file,
        config.logging.json_format,
    )
    service = PipelineService(config, args.run_dir)
    try:
        return _run_command(service, args.command, args.json)
    except PipelineStageError as e:
        logger.error(str(e))
        return e.exit_code
    except Exception as e:  # noqa: BLE001
        logger.exception(f"[{args.command}] unexpected error: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
