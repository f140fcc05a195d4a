"""
配置模块
"""

from .settings import PipelineConfig, apply_overrides, build_config, load_config, parse_override

__all__ = [
    "PipelineConfig",
    "load_config",
    "build_config",
    "apply_overrides",
    "parse_override",
]
