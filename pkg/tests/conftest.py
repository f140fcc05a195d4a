"""
公共测试夹具
"""

from typing import Any, Dict

import numpy as np
import pytest

from lightqrng.config.settings import PipelineConfig, build_config
from lightqrng.domain.models.noise_model import QuantizerSpec

# 标准参考比特串（100 比特和 128 比特）
NIST_100 = (
    "1100100100001111110110101010001000100001011010001100"
    "001000110100110001001100011001100010100010111000"
)
NIST_128 = "".join(
    [
        "11001100", "00010101", "01101100", "01001100",
        "11100000", "00000010", "01001101", "01010001",
        "00010011", "11010110", "10000000", "11010111",
        "11001100", "11100110", "11011000", "10110010",
    ]
)


def bits_of(text: str) -> np.ndarray:
    return np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")


@pytest.fixture
def quantizer12() -> QuantizerSpec:
    return QuantizerSpec(range=4.0, bits=12)


@pytest.fixture
def nist_100() -> np.ndarray:
    return bits_of(NIST_100)


@pytest.fixture
def nist_128() -> np.ndarray:
    return bits_of(NIST_128)


def small_config_data(**sections: Dict[str, Any]) -> Dict[str, Any]:
    """8 位 ADC、两万个样本的小规模流水线配置"""
    data: Dict[str, Any] = {
        "quantizer": {"range": 4.0, "bits": 8},
        "noise": {"gain": 1.0, "mean_photon_number": 0.0, "electronic_variance": 0.1},
        "sessions": {"seed": 1234, "sample_count": 20_000, "workers": 1},
        "entropy": {"epsilon": 1e-10, "epsilon_hash": 1e-20},
        "extractor": {"input_len": 900, "output_len": 200, "seed_source": "derived"},
        "battery": {"alpha": 0.01},
    }
    for name, values in sections.items():
        data.setdefault(name, {}).update(values)
    return data


@pytest.fixture
def small_config(tmp_path) -> PipelineConfig:
    data = small_config_data(output={"run_dir": str(tmp_path / "run")})
    return build_config(data)
