#!/usr/bin/env python3
"""
Result Writers
确定性的CSV/JSON结果输出
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd

from config.settings import OutputFormat, settings
from core.exceptions import ConfigurationError
from core.logger import logger

def _float_format() -> str:
    return f"%.{settings.output.significant_digits}g"

def to_jsonable(value: Any) -> Any:
    """numpy scalars and NaN -> JSON-safe Python values."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value

def render_frame(frame: pd.DataFrame, fmt: Union[OutputFormat, str] = OutputFormat.CSV,
                 metadata: Optional[Dict[str, Any]] = None) -> str:
    """
    Serialize a result table.

    CSV carries the table only, floats at the configured significant
    digits. JSON wraps the records with the metadata block; keys are sorted
    so identical runs give identical bytes.
    """
    fmt = OutputFormat(fmt)
    if fmt == OutputFormat.CSV:
        return frame.to_csv(index=False, float_format=_float_format(), lineterminator="\n")
    payload = {
        "metadata": to_jsonable(metadata or {}),
        "columns": list(frame.columns),
        "records": to_jsonable(frame.to_dict(orient="records")),
    }
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

def write_frame(frame: pd.DataFrame, path: Union[str, Path], fmt: Union[OutputFormat, str, None] = None,
                metadata: Optional[Dict[str, Any]] = None) -> Path:
    """写出结果文件; CSV 的元数据写到同名 .meta.json"""
    path = Path(path)
    fmt = OutputFormat(fmt) if fmt else _format_for(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(render_frame(frame, fmt, metadata), encoding="utf-8")
        if fmt == OutputFormat.CSV and metadata is not None:
            write_metadata(metadata, path.with_suffix(".meta.json"))
    except OSError as e:
        raise ConfigurationError(f"cannot write {path}: {e}", field="out") from e
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path

def write_metadata(metadata: Dict[str, Any], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(json.dumps(to_jsonable(metadata), indent=2, sort_keys=True, ensure_ascii=False) + "\n",
                    encoding="utf-8")
    return path

def _format_for(path: Path) -> OutputFormat:
    if path.suffix.lower() == ".json":
        return OutputFormat.JSON
    if path.suffix.lower() == ".csv":
        return OutputFormat.CSV
    return settings.output.format
