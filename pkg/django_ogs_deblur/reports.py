"""
Run records and their CSV serialization.

The header is fixed, fields are comma separated, floats use ``.`` as the
decimal separator regardless of locale, and an infinite PSNR is written as
``inf``.
"""

import csv
import io
import math
import os
import threading

FIELDS = [
    "image_id",
    "kernel_spec",
    "noise_level",
    "seed",
    "method",
    "p",
    "mu",
    "K",
    "iterations",
    "psnr_db",
    "ssim",
    "re",
    "wall_time_s",
    "error",
]


def format_value(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".10g")
    return str(value)


class RunRecord:
    def __init__(self, **fields):
        unknown = set(fields) - set(FIELDS)
        if unknown:
            raise TypeError("unknown run record fields: %s" % ", ".join(sorted(unknown)))
        for name in FIELDS:
            setattr(self, name, fields.get(name))

    def sort_key(self):
        return (
            self.image_id or "",
            self.noise_level or 0.0,
            self.mu or 0.0,
            self.p or 0.0,
            self.K or 0,
            self.seed or 0,
        )

    def as_row(self):
        return [format_value(getattr(self, name)) for name in FIELDS]


def render_csv(records):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for record in sorted(records, key=RunRecord.sort_key):
        writer.writerow(record.as_row())
    return buf.getvalue()


class RecordWriter:
    """
    Appends records to a CSV file, writing the header when the file is new.

    Writes are serialized so that worker threads can share one writer.
    """

    def __init__(self, path):
        self.path = path
        self._lock = threading.Lock()

    def write(self, record):
        with self._lock:
            new = not os.path.exists(self.path) or os.path.getsize(self.path) == 0
            with open(self.path, "a", newline="", encoding="ascii") as f:
                writer = csv.writer(f, lineterminator="\n")
                if new:
                    writer.writerow(FIELDS)
                writer.writerow(record.as_row())
