"""
Result Store
Append-only JSON-lines rows plus a summary file per experiment directory
"""

import json
import math
import threading
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np

from utils.logger import get_logger

ROWS_FILE = 'rows.jsonl'
SUMMARY_FILE = 'summary.json'


def _to_builtin(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def _finite(value: Any) -> Any:
    """JSON has no inf/nan; those become strings"""
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {key: _finite(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(item) for item in value]
    return value


def encode_row(row: Dict[str, Any]) -> str:
    """Canonical single-line encoding; equal rows give equal bytes"""
    plain = json.loads(json.dumps(row, default=_to_builtin))
    return json.dumps(_finite(plain), sort_keys=True, allow_nan=False)


class ResultStore:
    """Thread-safe writer for ``<output_dir>/rows.jsonl`` and ``summary.json``"""

    def __init__(self, output_dir: Union[str, Path]):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.rows_path = self.output_dir / ROWS_FILE
        self.summary_path = self.output_dir / SUMMARY_FILE
        self.logger = get_logger('result_store')
        self._lock = threading.Lock()

    def append(self, row: Dict[str, Any]) -> None:
        line = encode_row(row)
        with self._lock:
            with open(self.rows_path, 'a') as handle:
                handle.write(line + '\n')

    def load_rows(self) -> List[Dict[str, Any]]:
        if not self.rows_path.exists():
            return []
        rows = []
        with open(self.rows_path, 'r') as handle:
            for number, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    rows.append(json.loads(line))
                except json.JSONDecodeError as e:
                    self.logger.error(f"Skipping malformed row {number} in {self.rows_path}: {e}")
        return rows

    def write_summary(self, summary: Dict[str, Any]) -> Path:
        plain = json.loads(json.dumps(summary, default=_to_builtin))
        with self._lock:
            with open(self.summary_path, 'w') as handle:
                json.dump(_finite(plain), handle, indent=2, sort_keys=True)
        self.logger.info(f"Summary written to {self.summary_path}")
        return self.summary_path
