"""
流水线配置

TOML 文件经 pydantic 校验后得到 PipelineConfig；未在文件中给出的键可由
QRNG_ 前缀的环境变量提供（嵌套分隔符 "__"），命令行 --set 覆盖任意键
"""

import logging
import tomllib
from pathlib import Path
from typing import Any, ClassVar, Dict, Iterable, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..domain.exceptions import ConfigError
from ..domain.models.acquisition import DEFAULT_SAMPLE_RATE, ConfigurationTag, SessionConfig
from ..domain.models.entropy import DEFAULT_EPSILON, DEFAULT_EPSILON_HASH, EntropyParams
from ..domain.models.extraction import DEFAULT_INPUT_LEN, DEFAULT_OUTPUT_LEN
from ..domain.models.noise_model import MAX_ADC_BITS, NoiseModel, QuantizerSpec
from ..domain.services.calibration_service import calibrate_noise_model

logger = logging.getLogger(__name__)

# 主种子派生出的会话子种子顺序
SESSION_SEED_ORDER = (ConfigurationTag.LO_OFF, ConfigurationTag.LO_ON, ConfigurationTag.LO_SWEEP)


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class QuantizerSettings(_Section):
    range: float = Field(4.0, gt=0)
    bits: int = Field(12, ge=2, le=MAX_ADC_BITS)

    def to_spec(self) -> QuantizerSpec:
        return QuantizerSpec(range=self.range, bits=self.bits)


class NoiseSettings(_Section):
    """直接给出噪声参数，或给出两个目标香农熵由标定求得"""

    gain: float = Field(1.0, gt=0)
    mean_photon_number: float = Field(0.0, ge=0)
    electronic_variance: float = Field(0.0, ge=0)
    calibrate_lo_on_shannon: Optional[float] = Field(None, gt=0)
    calibrate_lo_off_shannon: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def _calibration_pair(self) -> "NoiseSettings":
        on, off = self.calibrate_lo_on_shannon, self.calibrate_lo_off_shannon
        if (on is None) != (off is None):
            raise ValueError("calibrate_lo_on_shannon and calibrate_lo_off_shannon go together")
        return self

    @property
    def calibrated(self) -> bool:
        return self.calibrate_lo_on_shannon is not None


class SweepSettings(_Section):
    enabled: bool = False
    gains: List[float] = Field(default_factory=lambda: [0.25, 0.5, 0.75, 1.0])

    @field_validator("gains")
    @classmethod
    def _positive(cls, value: List[float]) -> List[float]:
        if len(value) < 2 or any(g <= 0 for g in value):
            raise ValueError("sweep needs at least 2 positive gains")
        return value


class SessionSettings(_Section):
    seed: int = Field(20240101, ge=0, lt=2**64)  # 主仿真种子
    sample_count: int = Field(1_000_000, gt=0)
    sample_rate: float = Field(DEFAULT_SAMPLE_RATE, gt=0)
    adc_collapse: int = Field(1, ge=1)
    workers: Optional[int] = Field(None, ge=1)
    sweep: SweepSettings = Field(default_factory=SweepSettings)


class EntropySettings(_Section):
    epsilon: float = Field(DEFAULT_EPSILON, gt=0, le=1)
    epsilon_hash: float = Field(DEFAULT_EPSILON_HASH, gt=0, lt=1)
    effective_width: Optional[float] = Field(None, gt=0)
    width_from: Literal["model", "histogram"] = "model"
    sup_jf: Optional[int] = Field(None, ge=1)
    imbalance_entropy: float = Field(0.0, ge=0)


class ExtractorSettings(_Section):
    input_len: int = Field(DEFAULT_INPUT_LEN, ge=1)
    output_len: int = Field(DEFAULT_OUTPUT_LEN, ge=1)
    seed_source: Literal["hex", "file", "os", "derived"]
    seed_hex: Optional[str] = None
    seed_file: Optional[str] = None
    hex_output: bool = False

    @model_validator(mode="after")
    def _check(self) -> "ExtractorSettings":
        if self.output_len > self.input_len:
            raise ValueError("output_len must not exceed input_len")
        if self.seed_source == "hex" and not self.seed_hex:
            raise ValueError("seed_source 'hex' requires seed_hex")
        if self.seed_source == "file" and not self.seed_file:
            raise ValueError("seed_source 'file' requires seed_file")
        return self

    @property
    def seed_value(self) -> Optional[str]:
        return {"hex": self.seed_hex, "file": self.seed_file}.get(self.seed_source)


class BatterySettings(_Section):
    enabled: bool = True
    alpha: float = Field(0.01, gt=0, lt=1)
    disabled: List[str] = Field(default_factory=list)
    params: Dict[str, Dict[str, Any]] = Field(default_factory=dict)
    workers: int = Field(1, ge=1)


class OutputSettings(_Section):
    run_dir: str = "runs/default"
    lo_off_file: str = "lo_off.raw"
    lo_on_file: str = "lo_on.raw"
    sweep_file: str = "sweep.csv"
    simulation_file: str = "simulation.json"
    entropy_file: str = "entropy.json"
    bits_file: str = "extracted.bin"
    extraction_file: str = "extraction.json"
    battery_file: str = "battery.json"
    report_file: str = "report.json"
    timings_file: str = "timings.json"

    FILE_FIELDS: ClassVar[Tuple[str, ...]] = (
        "lo_off_file",
        "lo_on_file",
        "sweep_file",
        "simulation_file",
        "entropy_file",
        "bits_file",
        "extraction_file",
        "battery_file",
        "report_file",
        "timings_file",
    )

    @model_validator(mode="after")
    def _distinct(self) -> "OutputSettings":
        names = [getattr(self, f) for f in self.FILE_FIELDS]
        resolved = [str(Path(n)) for n in names]
        if len(set(resolved)) != len(resolved):
            duplicates = sorted({n for n in resolved if resolved.count(n) > 1})
            raise ValueError(f"output paths must be distinct, duplicated: {duplicates}")
        return self

    def path(self, name: str, run_dir: Optional[Union[str, Path]] = None) -> Path:
        """run_dir 下的某个产物路径"""
        return Path(run_dir or self.run_dir) / getattr(self, name)


class PlotSettings(_Section):
    enabled: bool = False
    directory: str = "plots"
    photon_numbers: List[float] = Field(default_factory=lambda: [float(n) for n in range(11)])
    cardinalities: List[int] = Field(default_factory=lambda: [1, 2, 4, 8, 16, 32, 64])


class LoggingSettings(_Section):
    level: str = "INFO"
    file: Optional[str] = None
    json_format: bool = False


class PipelineConfig(BaseSettings):
    """完整的流水线配置"""

    model_config = SettingsConfigDict(
        env_prefix="QRNG_", env_nested_delimiter="__", extra="forbid"
    )

    quantizer: QuantizerSettings = Field(default_factory=QuantizerSettings)
    noise: NoiseSettings = Field(default_factory=NoiseSettings)
    sessions: SessionSettings = Field(default_factory=SessionSettings)
    entropy: EntropySettings = Field(default_factory=EntropySettings)
    extractor: ExtractorSettings
    battery: BatterySettings = Field(default_factory=BatterySettings)
    output: OutputSettings = Field(default_factory=OutputSettings)
    plots: PlotSettings = Field(default_factory=PlotSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)

    def echo(self) -> Dict[str, Any]:
        """写入报告的配置回显，不含运行目录，使不同目录下的相同运行得到相同报告"""
        echo = self.model_dump(mode="json")
        echo["output"].pop("run_dir", None)
        return echo

    def session_seeds(self) -> Dict[ConfigurationTag, int]:
        """由主种子派生各会话的子种子"""
        state = np.random.SeedSequence(self.sessions.seed).generate_state(
            len(SESSION_SEED_ORDER), dtype=np.uint64
        )
        return {tag: int(s) for tag, s in zip(SESSION_SEED_ORDER, state)}

    def build_noise_model(self) -> NoiseModel:
        """直接构造噪声模型，或按目标香农熵标定"""
        noise = self.noise
        if noise.calibrated:
            return calibrate_noise_model(
                noise.calibrate_lo_on_shannon,
                noise.calibrate_lo_off_shannon,
                self.quantizer.to_spec(),
                noise.mean_photon_number,
            )
        return NoiseModel(
            gain=noise.gain,
            mean_photon_number=noise.mean_photon_number,
            electronic_variance=noise.electronic_variance,
        )

    def session_config(
        self, tag: ConfigurationTag, noise_model: Optional[NoiseModel] = None
    ) -> SessionConfig:
        """
        构造某个采集配置的会话

        Args:
            tag: 采集配置
            noise_model: 已构造（或标定）的噪声模型，None 时重新构造

        Returns:
            会话配置
        """
        sessions = self.sessions
        return SessionConfig(
            tag=tag,
            noise_model=noise_model or self.build_noise_model(),
            quantizer=self.quantizer.to_spec(),
            sample_count=sessions.sample_count,
            rng_seed=self.session_seeds()[tag],
            sample_rate=sessions.sample_rate,
            sweep_gains=tuple(sessions.sweep.gains) if tag == ConfigurationTag.LO_SWEEP else (),
            adc_collapse=sessions.adc_collapse,
        )

    def entropy_params(self, noise_model: NoiseModel) -> EntropyParams:
        entropy = self.entropy
        use_model = entropy.width_from == "model"
        return EntropyParams(
            epsilon=entropy.epsilon,
            epsilon_hash=entropy.epsilon_hash,
            mean_photon_number=noise_model.mean_photon_number,
            gain=noise_model.gain if use_model else None,
            effective_width=entropy.effective_width,
            sup_jf=entropy.sup_jf,
            imbalance_entropy=entropy.imbalance_entropy,
        )


def parse_override(item: str) -> Tuple[List[str], Any]:
    """
    解析 "section.key=value"，value 按 TOML 字面量解析，失败时作为字符串

    Args:
        item: 覆盖项

    Returns:
        (键路径, 值)
    """
    if "=" not in item:
        raise ConfigError(f"override '{item}' is not of the form key.path=value")
    key, raw = item.split("=", 1)
    path = [p.strip() for p in key.strip().split(".")]
    if not all(path):
        raise ConfigError(f"override '{item}' has an empty key")
    try:
        value = tomllib.loads(f"v = {raw.strip()}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw.strip()
    return path, value


def apply_overrides(data: Dict[str, Any], overrides: Iterable[str]) -> Dict[str, Any]:
    """把 --set 覆盖项写入配置字典（原地修改并返回）"""
    for item in overrides:
        path, value = parse_override(item)
        node = data
        for part in path[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(f"override '{item}': '{part}' is not a section")
            node = child
        node[path[-1]] = value
        logger.debug(f"配置覆盖 {'.'.join(path)} = {value!r}")
    return data


def _format_validation_error(error: ValidationError) -> str:
    parts = []
    for e in error.errors():
        location = ".".join(str(p) for p in e["loc"])
        parts.append(f"{location}: {e['msg']}")
    return "; ".join(parts)


def build_config(data: Dict[str, Any]) -> PipelineConfig:
    """由字典构造并校验配置"""
    try:
        return PipelineConfig(**data)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {_format_validation_error(e)}") from e


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Iterable[str] = (),
    seed: Optional[int] = None,
) -> PipelineConfig:
    """
    读取 TOML 配置并应用覆盖

    Args:
        path: 配置文件，None 时只使用默认值、环境变量和覆盖项
        overrides: "section.key=value" 形式的覆盖项
        seed: 主仿真种子覆盖

    Returns:
        校验后的配置
    """
    data: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            data = tomllib.loads(path.read_text(encoding="utf-8"))
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"{path}: {e}") from e
    apply_overrides(data, overrides)
    if seed is not None:
        data.setdefault("sessions", {})["seed"] = seed
    config = build_config(data)
    logger.info(f"加载配置 {path or '<defaults>'}")
    return config
