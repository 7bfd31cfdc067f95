"""
评估与报告工具
"""

from .evaluation import MetricsReport, evaluate_bundle, prf
from .report import render_metrics, render_stats

__all__ = ["MetricsReport", "evaluate_bundle", "prf", "render_metrics", "render_stats"]
