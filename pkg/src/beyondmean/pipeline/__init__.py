"""Dataset ingestion, end-to-end analysis and report rendering."""

from .analysis import AnalysisReport, NormalityCheck, analyze
from .dataset import BETWEEN, WITHIN, ExperimentDataset, dataset_to_csv, parse_dataset
from .report import (
    SCHEMA_VERSION,
    power_report_to_dict,
    render_power_report,
    render_report,
    report_to_dict,
)

__all__ = [
    "AnalysisReport",
    "BETWEEN",
    "ExperimentDataset",
    "NormalityCheck",
    "SCHEMA_VERSION",
    "WITHIN",
    "analyze",
    "dataset_to_csv",
    "parse_dataset",
    "power_report_to_dict",
    "render_power_report",
    "render_report",
    "report_to_dict",
]
