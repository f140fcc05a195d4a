"""
流水线服务：仿真 → 认证 → 提取 → 检验 → 报告

每个阶段只读写运行目录中的文件，run 依次调用这些阶段，因此分阶段执行与一次性执行的产物完全一致
"""

import hashlib
import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Union

from ...config.settings import PipelineConfig
from ...domain.exceptions import (
    AcquisitionError,
    ConfigError,
    PipelineStageError,
    QrngError,
    QuantizerMismatchError,
    RawFileError,
    ReportFormatError,
)
from ...domain.extractors.seeds import resolve_seed
from ...domain.models.acquisition import ConfigurationTag, SampleBlock
from ...domain.models.battery import BatteryReport
from ...domain.models.entropy import EntropyReport
from ...domain.models.noise_model import GaussianSpec, NoiseModel
from ...domain.repositories.bit_repository import BitRepository
from ...domain.repositories.report_repository import ReportRepository
from ...domain.repositories.sample_repository import SampleRepository
from ...domain.services.acquisition_service import histogram, simulate_session, simulate_sweep
from ...domain.services.calibration_service import characterize_sweep
from ...domain.services.entropy_service import (
    adc_penalty_curve,
    certify,
    min_entropy_curve,
    resolve_effective_width,
)
from ...domain.services.extraction_service import REFERENCE_RATIO, extract_stream
from ...domain.services.gaussian_model import bin_probabilities
from ...domain.stat_tests.battery import run_battery
from ...infrastructure.plotting.figures import (
    plot_adc_penalty,
    plot_distributions,
    plot_min_entropy_curve,
    plot_p_values,
)
from ...infrastructure.storage.atomic import atomic_write_text
from ...infrastructure.storage.bit_file import BitFileRepository
from ...infrastructure.storage.json_report_store import JsonReportStore
from ...infrastructure.storage.raw_sample_file import RawSampleFileRepository
from ..dto.run_report import SCHEMA_VERSION, RunReport, validate_report

logger = logging.getLogger(__name__)

STAGES = ("simulate", "certify", "extract", "test", "report")

# 各阶段未分类错误的阶段标签
_ERROR_STAGE = {"simulate": "acquisition"}

_ENTROPY_FIELDS = (
    "shannon_quantum",
    "extractable_length",
    "conditional_min_entropy_final",
    "parameters.epsilon_hash",
    "parameters.sample_count",
)
_EXTRACTION_FIELDS = ("certified_bits", "realized_ratio", "seed_hex", "warnings")


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class PipelineService:
    """
    流水线服务

    负责按阶段执行仿真、认证、提取、检验和报告，并把产物写入运行目录
    """

    def __init__(
        self,
        config: PipelineConfig,
        run_dir: Optional[Union[str, Path]] = None,
        sample_repository: Optional[SampleRepository] = None,
        bit_repository: Optional[BitRepository] = None,
        report_repository: Optional[ReportRepository] = None,
    ):
        self.config = config
        self.run_dir = Path(run_dir or config.output.run_dir)
        self._samples = sample_repository or RawSampleFileRepository()
        self._bits = bit_repository or BitFileRepository(config.extractor.hex_output)
        self._reports = report_repository or JsonReportStore()
        self.timings: Dict[str, float] = {}
        self._noise_model: Optional[NoiseModel] = None

    def path(self, name: str) -> Path:
        return self.config.output.path(name, self.run_dir)

    @property
    def noise_model(self) -> NoiseModel:
        """配置中的噪声模型（标定结果缓存）"""
        if self._noise_model is None:
            self._noise_model = self.config.build_noise_model()
        return self._noise_model

    @contextmanager
    def _stage(self, name: str) -> Iterator[None]:
        """计时并把错误包装为带阶段标签的 PipelineStageError"""
        logger.info(f"阶段 {name} 开始")
        start = time.perf_counter()
        try:
            yield
        except PipelineStageError:
            raise
        except (ConfigError, QuantizerMismatchError) as e:
            raise PipelineStageError("config", e) from e
        except (RawFileError, AcquisitionError) as e:
            raise PipelineStageError("acquisition", e) from e
        except (QrngError, ValueError, OSError) as e:
            raise PipelineStageError(_ERROR_STAGE.get(name, name), e) from e
        elapsed = time.perf_counter() - start
        self.timings[name] = elapsed
        self._record_timing(name, elapsed)
        logger.info(f"阶段 {name} 完成，用时 {elapsed:.3f} s")

    def _record_timing(self, name: str, seconds: float) -> None:
        path = self.path("timings_file")
        timings: Dict[str, Any] = {}
        if path.is_file():
            try:
                timings = self._reports.load(path)
            except ReportFormatError:
                timings = {}
        timings[name] = round(seconds, 6)
        self._reports.save(timings, path)

    def _load_block(self, name: str, expected: ConfigurationTag) -> SampleBlock:
        path = self.path(name)
        if not path.is_file():
            raise AcquisitionError(f"raw sample file not found: {path}")
        block = self._samples.load(path)
        if block.tag != expected:
            raise ReportFormatError(
                str(path), "tag", f"is {block.tag.value}, expected {expected.value}"
            )
        quantizer = self.config.quantizer.to_spec()
        if block.quantizer != quantizer:
            raise QuantizerMismatchError(
                f"{path}: file quantizer {block.quantizer.to_dict()} differs from the "
                f"configured quantizer {quantizer.to_dict()}"
            )
        return block

    def _session_entry(self, block_path: Path, tag: ConfigurationTag) -> Dict[str, Any]:
        cfg = self.config.session_config(tag, self.noise_model)
        return {
            "tag": tag.value,
            "file": block_path.name,
            "sha256": _sha256(block_path.read_bytes()),
            "sample_count": cfg.sample_count,
            "rng_seed": cfg.rng_seed,
            "sample_rate": cfg.sample_rate,
            "duration_seconds": cfg.duration_seconds,
            "raw_bits": cfg.raw_bits,
            "variance": cfg.source_variance(),
            "adc_collapse": cfg.adc_collapse,
        }

    def simulate(self) -> Dict[str, Any]:
        """
        仿真 LO_OFF 和 LO_ON 会话（以及可选的 LO_SWEEP），写入原始样本文件

        Returns:
            simulation.json 的内容
        """
        with self._stage("simulate"):
            model = self.noise_model
            workers = self.config.sessions.workers
            sessions: Dict[str, Any] = {}
            for tag, name in (
                (ConfigurationTag.LO_OFF, "lo_off_file"),
                (ConfigurationTag.LO_ON, "lo_on_file"),
            ):
                block = simulate_session(self.config.session_config(tag, model), workers)
                path = self._samples.save(block, self.path(name))
                sessions[tag.value] = self._session_entry(path, tag)

            sweep = None
            warnings: List[str] = []
            if self.config.sessions.sweep.enabled:
                cfg = self.config.session_config(ConfigurationTag.LO_SWEEP, model)
                characterization = characterize_sweep(
                    simulate_sweep(cfg, workers), cfg.sweep_gains
                )
                atomic_write_text(
                    self.path("sweep_file"),
                    characterization.to_frame().to_csv(index=False, float_format="%.12g"),
                )
                sweep = characterization.to_dict()
                warnings.extend(characterization.warnings)

            document = {
                "noise_model": {
                    "gain": model.gain,
                    "mean_photon_number": model.mean_photon_number,
                    "electronic_variance": model.electronic_variance,
                    "output_variance": model.output_variance(),
                    "calibrated": self.config.noise.calibrated,
                },
                "sessions": sessions,
                "sweep": sweep,
                "warnings": warnings,
            }
            self._reports.save(document, self.path("simulation_file"))
        return document

    def certify(self) -> EntropyReport:
        """
        由原始样本文件计算熵报告，写入 entropy.json

        Returns:
            熵报告
        """
        with self._stage("certify"):
            lo_off = self._load_block("lo_off_file", ConfigurationTag.LO_OFF)
            lo_on = self._load_block("lo_on_file", ConfigurationTag.LO_ON)
            params = self.config.entropy_params(self.noise_model)
            report = certify(histogram(lo_on), histogram(lo_off), params)
            self._reports.save(report.to_dict(), self.path("entropy_file"))
        return report

    def _load_entropy(self) -> EntropyReport:
        path = self.path("entropy_file")
        data = self._reports.load(path, _ENTROPY_FIELDS)
        try:
            return EntropyReport.from_dict(data)
        except KeyError as e:
            raise ReportFormatError(str(path), str(e.args[0])) from e

    def extract(self) -> Dict[str, Any]:
        """
        按认证预算对 LO_ON 样本做 Toeplitz 提取，写入比特文件和 extraction.json

        Returns:
            extraction.json 的内容
        """
        with self._stage("extract"):
            entropy = self._load_entropy()
            lo_on = self._load_block("lo_on_file", ConfigurationTag.LO_ON)
            if len(lo_on) != entropy.sample_count:
                raise ReportFormatError(
                    str(self.path("entropy_file")),
                    "parameters.sample_count",
                    f"is {entropy.sample_count} but the LO_ON file has {len(lo_on)} samples",
                )
            settings = self.config.extractor
            spec = resolve_seed(
                settings.seed_source,
                settings.input_len,
                settings.output_len,
                value=settings.seed_value,
                master_seed=self.config.sessions.seed,
            )
            result = extract_stream(
                spec,
                lo_on,
                entropy.conditional_min_entropy_final,
                entropy.epsilon_hash,
                budget=entropy.extractable_length,
            )
            self._bits.save(result.bits, self.path("bits_file"))
            document = {
                **result.to_dict(),
                "raw_samples": len(lo_on),
                "reference_ratio": REFERENCE_RATIO,
                "input_len": spec.input_len,
                "output_len": spec.output_len,
                "seed_source": settings.seed_source,
                "seed_hex": spec.seed_hex(),
                "bits_sha256": _sha256(result.bits.data),
            }
            self._reports.save(document, self.path("extraction_file"))
            logger.info(
                f"实际比率 {result.realized_ratio:.4f}（参考比率 {REFERENCE_RATIO:.4f}）"
            )
        return document

    def test(self) -> Dict[str, Any]:
        """
        对提取比特运行统计检验组，写入 battery.json

        Returns:
            battery.json 的内容
        """
        with self._stage("test"):
            settings = self.config.battery
            warnings: List[str] = []
            battery = None
            bits = self._bits.load(self.path("bits_file"))
            if not settings.enabled:
                warnings.append("statistical battery disabled")
            elif bits.length == 0:
                warnings.append("no certified bits; statistical battery not run")
                logger.warning("没有认证比特，跳过统计检验")
            else:
                battery = run_battery(
                    bits,
                    alpha=settings.alpha,
                    params=settings.params,
                    disabled=settings.disabled,
                    workers=settings.workers,
                ).to_dict()
            document = {"battery": battery, "warnings": warnings}
            self._reports.save(document, self.path("battery_file"))
        return document

    def report(self) -> Dict[str, Any]:
        """
        汇总各阶段产物为 report.json（report_v1）

        Returns:
            报告字典
        """
        with self._stage("report"):
            simulation = self._reports.load(
                self.path("simulation_file"), ("noise_model", "sessions")
            )
            entropy = self._load_entropy().to_dict()
            extraction = self._reports.load(self.path("extraction_file"), _EXTRACTION_FIELDS)
            tested = self._reports.load(self.path("battery_file"), ("battery", "warnings"))
            battery = tested["battery"]

            if entropy["shannon_quantum"] <= 0:
                exit_code = PipelineStageError.EXIT_CODES["certification"]
            elif battery is not None and not battery["passed"]:
                exit_code = PipelineStageError.EXIT_CODES["battery"]
            else:
                exit_code = 0
            warnings = (
                list(simulation.get("warnings", []))
                + list(entropy["warnings"])
                + list(extraction["warnings"])
                + list(tested["warnings"])
            )
            document = {
                "schema_version": SCHEMA_VERSION,
                "config": self.config.echo(),
                "simulation": simulation,
                "entropy": entropy,
                "extraction": extraction,
                "battery": battery,
                "status": {
                    "certified": entropy["shannon_quantum"] > 0
                    and extraction["certified_bits"] > 0,
                    "battery_passed": None if battery is None else battery["passed"],
                    "exit_code": exit_code,
                },
                "warnings": warnings,
            }
            report_path = self.path("report_file")
            validate_report(document, str(report_path))
            self._reports.save(document, report_path)
        return document

    def plot(self) -> List[Path]:
        """在运行目录的 plots 子目录下生成结果图"""
        outputs: List[Path] = []
        with self._stage("plot"):
            directory = self.run_dir / self.config.plots.directory
            lo_off = histogram(self._load_block("lo_off_file", ConfigurationTag.LO_OFF))
            lo_on = histogram(self._load_block("lo_on_file", ConfigurationTag.LO_ON))
            variance = self.config.session_config(
                ConfigurationTag.LO_ON, self.noise_model
            ).source_variance()
            model = bin_probabilities(GaussianSpec(0.0, variance), lo_on.quantizer)
            outputs.append(
                plot_distributions(lo_on, lo_off, directory / "distributions.png", model)
            )

            params = self.config.entropy_params(self.noise_model)
            width = resolve_effective_width(params, lo_on, lo_off)
            if width is not None:
                curve = min_entropy_curve(
                    self.config.plots.photon_numbers, lo_on.quantizer.bin_width, width
                )
                outputs.append(plot_min_entropy_curve(curve, directory / "min_entropy_vs_n.png"))
            outputs.append(
                plot_adc_penalty(
                    adc_penalty_curve(self.config.plots.cardinalities),
                    directory / "adc_penalty.png",
                )
            )

            battery_path = self.path("battery_file")
            if battery_path.is_file():
                battery = self._reports.load(battery_path, ("battery",))["battery"]
                if battery is not None:
                    outputs.append(
                        plot_p_values(
                            BatteryReport.from_dict(battery), directory / "p_values.png"
                        )
                    )
        return outputs

    def run(self) -> RunReport:
        """依次执行全部阶段"""
        self.timings = {}
        timings_path = self.path("timings_file")
        if timings_path.is_file():
            timings_path.unlink()
        self.simulate()
        self.certify()
        self.extract()
        self.test()
        document = self.report()
        if self.config.plots.enabled:
            self.plot()
        return RunReport(document=document, timings=dict(self.timings))


def run_pipeline(
    config: PipelineConfig, run_dir: Optional[Union[str, Path]] = None
) -> RunReport:
    """
    端到端执行流水线

    Args:
        config: 流水线配置
        run_dir: 运行目录，None 时使用配置中的 output.run_dir

    Returns:
        运行报告；status.exit_code 给出认证失败(4)或检验失败(5)
    """
    return PipelineService(config, run_dir).run()


def load_run_report(config: PipelineConfig, run_dir: Optional[Union[str, Path]] = None) -> RunReport:
    """读取已完成运行目录中的报告和耗时"""
    service = PipelineService(config, run_dir)
    store = JsonReportStore()
    document = store.load(service.path("report_file"), ("schema_version", "status"))
    validate_report(document, str(service.path("report_file")))
    timings_path = service.path("timings_file")
    timings = store.load(timings_path) if timings_path.is_file() else {}
    return RunReport(document=document, timings=timings)
