"""JSON and CSV persistence for benchmark records."""

from __future__ import annotations

import json
from pathlib import Path

from ..problems import atomic_write
from .run import BenchmarkRecord

CSV_COLUMNS = ("p", "r", "r_eff", "regime", "n_two_qubit", "two_qubit_depth")


def dumps_record(record: BenchmarkRecord) -> str:
    return json.dumps(record.to_dict(), indent=1, sort_keys=False) + "\n"


def loads_record(text: str) -> BenchmarkRecord:
    return BenchmarkRecord.from_dict(json.loads(text))


def _cell(value) -> str:
    return "" if value is None else repr(value) if isinstance(value, float) else str(value)


def record_csv(record: BenchmarkRecord) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in record.results:
        n2 = r.counts.n_two_qubit if r.counts else None
        depth = r.counts.two_qubit_depth if r.counts else None
        lines.append(",".join(_cell(v) for v in (r.p, r.r, r.r_eff, r.regime, n2, depth)))
    return "\n".join(lines) + "\n"


def save_record(record: BenchmarkRecord, path: str | Path) -> tuple[Path, Path]:
    """Write ``<path>`` (JSON) and a sibling ``.csv``; both writes are atomic."""
    path = Path(path)
    json_path = path if path.suffix == ".json" else path.with_suffix(".json")
    csv_path = json_path.with_suffix(".csv")
    atomic_write(json_path, dumps_record(record))
    atomic_write(csv_path, record_csv(record))
    return json_path, csv_path


def load_record(path: str | Path) -> BenchmarkRecord:
    return loads_record(Path(path).read_text(encoding="utf-8"))
