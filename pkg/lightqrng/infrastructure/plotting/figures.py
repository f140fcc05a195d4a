"""
结果图：概率分布、检验 p 值、条件最小熵曲线和 ADC 惩罚曲线
"""

import io
import logging
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ...domain.models.acquisition import SampleHistogram  # noqa: E402
from ...domain.models.battery import BatteryReport  # noqa: E402
from ..storage.atomic import atomic_write_bytes  # noqa: E402

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _save(fig, path: PathLike) -> Path:
    buffer = io.BytesIO()
    fig.savefig(buffer, format="png", dpi=120, metadata={"Software": None})
    plt.close(fig)
    path = atomic_write_bytes(path, buffer.getvalue())
    logger.info(f"保存图像 {path}")
    return path


def plot_distributions(
    lo_on: SampleHistogram,
    lo_off: SampleHistogram,
    path: PathLike,
    model_on: Optional[np.ndarray] = None,
) -> Path:
    """
    LO_ON 与 LO_OFF 的概率分布

    Args:
        lo_on: 本振打开时的直方图
        lo_off: 本振关闭时的直方图
        path: 输出 PNG
        model_on: 可选的解析模型概率，叠加为曲线
    """
    centers = lo_on.quantizer.bin_centers()
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(centers, lo_off.probabilities, ".", ms=2, label="LO off (electronic noise)")
    ax.plot(centers, lo_on.probabilities, ".", ms=2, label="LO on (shot + electronic)")
    if model_on is not None:
        ax.plot(centers, model_on, "-", lw=1, label="Gaussian model")
    ax.set_xlabel("homodyne output (ADC units)")
    ax.set_ylabel("probability")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def plot_p_values(report: BatteryReport, path: PathLike) -> Path:
    """各检验的 p 值，α 画为红色虚线"""
    results = [r for r in report.results if not r.skipped]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.bar(range(len(results)), [r.p_value for r in results])
    ax.axhline(report.alpha, color="red", ls="--", label=f"alpha = {report.alpha}")
    ax.set_xticks(range(len(results)))
    ax.set_xticklabels([r.test_id for r in results], rotation=30, ha="right")
    ax.set_ylim(0, 1)
    ax.set_ylabel("p-value")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def plot_min_entropy_curve(curve: Sequence[Tuple[float, float]], path: PathLike) -> Path:
    """条件最小熵随平均光子数的变化"""
    n, h = zip(*curve)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(n, h, "o-")
    ax.axhline(0.0, color="grey", lw=0.8)
    ax.set_xlabel("mean photon number n")
    ax.set_ylabel("H_min(X|E) (bits)")
    fig.tight_layout()
    return _save(fig, path)


def plot_adc_penalty(curve: Sequence[Tuple[int, float]], path: PathLike) -> Path:
    """ADC 惩罚随码合并基数的变化"""
    cardinality, penalty = zip(*curve)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.step(cardinality, penalty, where="post")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("sup |J_f|")
    ax.set_ylabel("ADC penalty (bits)")
    fig.tight_layout()
    return _save(fig, path)
