"""
Output helpers for the command line: parameter lookup across flags and the
JSON config file, CSV tables and the run manifest.
"""

import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

import config
from utils.arrow_utils import write_table
from utils.exceptions import ConfigFileError


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    """
    Read a flat JSON parameter object.

    Args:
        path: file path, or None for no config file

    Returns:
        The parsed mapping ({} when path is None)
    """
    if not path:
        return {}
    try:
        payload = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigFileError(f"Config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigFileError(f"Config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigFileError(f"Config file {path} must hold a JSON object")
    return payload


def get_param(name, flags, file_values, default=None):
    """
    Get a single parameter value from the command-line flags or the config file.
    An explicit flag wins over the file, the file wins over the default.
    """
    value = getattr(flags, name, None)
    if value is not None:
        return value
    if name in file_values:
        return file_values[name]
    return default


def parse_float_list(raw_value) -> List[float]:
    """
    Parse a list of numbers given either as a JSON list or a comma-separated string
    (e.g., --mus 0.2,0.5,1.0).
    """
    if raw_value is None:
        return []
    if isinstance(raw_value, (list, tuple)):
        return [float(v) for v in raw_value]
    if isinstance(raw_value, (int, float)):
        return [float(raw_value)]
    return [float(v.strip()) for v in str(raw_value).split(',') if v.strip()]


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    """Header row, no index, round-trippable floats; same frame gives the same bytes."""
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=config.CSV_FLOAT_FORMAT, lineterminator='\n')
    return path


def write_result(frame: pd.DataFrame, out_dir: Path, name: str, fmt: str) -> List[Path]:
    """CSV always, plus Arrow IPC or Parquet when requested."""
    csv_path = write_csv(frame, out_dir / f"{name}.csv")
    written = [csv_path]
    extra = write_table(frame, name, csv_path, fmt)
    if extra is not None:
        written.append(extra)
    return written


def write_json(payload: Any, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + '\n')
    return path


@dataclass
class RunManifest:
    command: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    outputs: List[str] = field(default_factory=list)
    tool_version: str = config.TOOL_VERSION
    wall_time: float = 0.0
    status: str = 'running'
    started: float = field(default_factory=time.perf_counter, repr=False)

    def add_outputs(self, paths: List[Path]) -> None:
        self.outputs.extend(str(path) for path in paths)

    def finish(self, status: str) -> None:
        self.status = status
        self.wall_time = time.perf_counter() - self.started

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload.pop('started')
        return payload

    def write(self, out_dir: Path) -> Path:
        return write_json(self.to_dict(), out_dir / config.MANIFEST_NAME)
