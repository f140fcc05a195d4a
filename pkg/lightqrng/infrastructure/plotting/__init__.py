"""
Matplotlib 图像输出
"""

from .figures import plot_adc_penalty, plot_distributions, plot_min_entropy_curve, plot_p_values

__all__ = [
    "plot_distributions",
    "plot_p_values",
    "plot_min_entropy_curve",
    "plot_adc_penalty",
]
