"""Model files in, tables and reports out."""

from .loader import ModelFile, load_model, parse_model, parse_ph, parse_scaler
from .output import FORMATS, format_value, read_rows, write_document, write_rows

__all__ = [
    'FORMATS', 'ModelFile', 'format_value', 'load_model', 'parse_model', 'parse_ph', 'parse_scaler',
    'read_rows', 'write_document', 'write_rows',
]
