from .logging import configure_logging
from .serialization import read_csv, render_csv, render_json, write_output

__all__ = ["configure_logging", "read_csv", "render_csv", "render_json", "write_output"]
