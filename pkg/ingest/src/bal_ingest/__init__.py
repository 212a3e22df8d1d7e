"""Format bridge: array dumps to FMAT files, run directories to CSV tables."""

from .convert import IngestError, to_fmat, write_fmat
from .summarize import SummaryError, summarize_run

__all__ = ["IngestError", "to_fmat", "write_fmat", "SummaryError",
           "summarize_run"]
