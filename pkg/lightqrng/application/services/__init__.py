"""
应用服务
"""

from .pipeline_service import STAGES, PipelineService, load_run_report, run_pipeline

__all__ = ["PipelineService", "run_pipeline", "load_run_report", "STAGES"]
