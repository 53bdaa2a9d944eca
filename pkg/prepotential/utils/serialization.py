"""
CSV and JSON output for the command line.

Floats are written with 17 significant digits so that re-reading a file
gives back the same doubles. Non-finite values are written as the strings
``inf``, ``-inf`` and ``nan`` in both formats.
"""

import csv
import io
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
from loguru import logger

try:
    from pydantic.v1 import BaseModel
except ImportError:
    from pydantic import BaseModel

from .. import __version__

Record = Mapping[str, Any]


def format_float(value: float) -> str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def to_jsonable(value: Any) -> Any:
    """Plain JSON types; enums become their values, arrays become lists."""
    if isinstance(value, Enum):
        return to_jsonable(value.value)
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else format_float(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, np.ndarray):
        return [to_jsonable(item) for item in value.tolist()]
    if isinstance(value, Mapping):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, BaseModel):
        return to_jsonable(value.dict())
    return str(value)


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    if value is None:
        return ""
    return str(to_jsonable(value))


def render_csv(records: Sequence[Record], columns: Optional[List[str]] = None) -> str:
    """Header row plus one row per record, LF line endings."""
    if columns is None:
        columns = list(records[0].keys()) if records else []
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for record in records:
        writer.writerow([_cell(record.get(column)) for column in columns])
    return buffer.getvalue()


def render_json(
    model: Optional[str],
    params: Optional[Dict[str, Any]],
    results: Any,
    meta: Optional[Dict[str, Any]] = None,
) -> str:
    """One top-level object: model, params, results, meta (with version)."""
    document = {
        "model": model,
        "params": params,
        "results": results,
        "meta": {"version": __version__, **(meta or {})},
    }
    return json.dumps(to_jsonable(document), indent=2, ensure_ascii=False) + "\n"


def read_csv(source: Union[str, Path]) -> List[Dict[str, str]]:
    """Rows of a CSV file written by ``render_csv``, as strings."""
    with open(source, newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


def write_output(text: str, path: Optional[Union[str, Path]]) -> Optional[Path]:
    """Write to ``path`` (parents created) or return ``None`` for stdout."""
    if path is None:
        return None
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.info(f"wrote {target}")
    return target
