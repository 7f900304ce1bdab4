"""Column-oriented numeric series used for every plot-ready output."""
import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import RepodistError


@dataclass
class AnalysisSeries:
    """A labelled table of equal-length, finite numeric columns.

    ``meta`` carries scalar annotations (trend slope, excluded counts,
    bin edges...) that travel with the series into JSON and into the
    ``#`` header lines of the CSV form.
    """

    label: str
    columns: dict
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        cols = {}
        length = None
        for name, values in self.columns.items():
            arr = np.asarray(values, dtype=np.float64).reshape(-1)
            if length is None:
                length = arr.size
            elif arr.size != length:
                raise RepodistError(
                    f"series {self.label!r}: column {name!r} has {arr.size} values, expected {length}")
            if not np.all(np.isfinite(arr)):
                raise RepodistError(f"series {self.label!r}: column {name!r} has non-finite values")
            cols[name] = arr
        self.columns = cols

    def __len__(self):
        for arr in self.columns.values():
            return arr.size
        return 0

    def __getitem__(self, name):
        return self.columns[name]

    @property
    def names(self):
        return list(self.columns)

    def to_dict(self):
        return {
            "label": self.label,
            "columns": {k: v.tolist() for k, v in self.columns.items()},
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, record):
        return cls(record["label"], record["columns"], dict(record.get("meta", {})))

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_csv(self):
        buf = io.StringIO()
        buf.write(f"# label: {self.label}\n")
        for key, value in self.meta.items():
            buf.write(f"# {key}: {json.dumps(value)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.names)
        for row in zip(*self.columns.values()):
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        label = ""
        meta = {}
        lines = []
        for line in text.splitlines():
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                if key == "label":
                    label = value
                else:
                    meta[key] = json.loads(value)
            elif line:
                lines.append(line)
        reader = csv.reader(lines)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
        cols = {name: [r[i] for r in rows] for i, name in enumerate(header)}
        return cls(label, cols, meta)


def _fmt(value):
    if float(value).is_integer() and abs(value) < 2 ** 53:
        return str(int(value))
    return repr(float(value))
