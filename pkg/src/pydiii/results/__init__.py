from .sample_file import SampleFile, read_sample_file, write_sample_file
from .report import InvariantReport, ReportOptions, compute_report, report_for_file
from .series import save_series


__all__ = [
    "SampleFile",
    "read_sample_file",
    "write_sample_file",
    "InvariantReport",
    "ReportOptions",
    "compute_report",
    "report_for_file",
    "save_series",
]
