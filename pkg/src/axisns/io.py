"""Diagnostics CSV and binary snapshots.

Snapshot layout: one line of JSON header terminated by a newline, then one
little-endian float64 array per field in header order, r index varying
fastest.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .diagnostics import COLUMNS, DiagnosticsRow
from .errors import SnapshotError, SnapshotGridMismatch, SnapshotPayloadError, SnapshotVersionError
from .fields import FlowState
from .grid import Grid, build_grid
from .solver import state_from_arrays
from .elliptic import velocity_arrays

SNAPSHOT_SCHEMA = "axisns-snapshot"
SNAPSHOT_VERSION = 1
SNAPSHOT_FIELDS = ("gamma", "omega_theta", "psi_theta")


def format_float(x: float) -> str:
    return f"{x:.17g}"


def write_csv(rows: Iterable[DiagnosticsRow], path, columns: Sequence[str] = COLUMNS) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([format_float(v) for v in row.values()])


class CsvAppender:
    """Single-writer CSV stream: header on open, one flushed line per row."""

    def __init__(self, path, columns: Sequence[str] = COLUMNS, append: bool = False):
        self.path = Path(path)
        self._fh = self.path.open("a" if append else "w", newline="")
        self._w = csv.writer(self._fh, lineterminator="\n")
        if not append:
            self._w.writerow(columns)
            self._fh.flush()

    def write(self, row: DiagnosticsRow) -> None:
        self._w.writerow([format_float(v) for v in row.values()])
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_csv(path) -> tuple[list[str], list[tuple[float, ...]]]:
    with Path(path).open(newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        return header, [tuple(float(v) for v in line) for line in r]


def save_snapshot(state: FlowState, path, extra: Optional[dict] = None) -> None:
    """Write the prognostic pair and stream function; ``extra`` rides in the header."""
    g = state.grid
    header = {
        "schema": SNAPSHOT_SCHEMA,
        "version": SNAPSHOT_VERSION,
        "grid": g.to_dict(),
        "time": state.time,
        "fields": list(SNAPSHOT_FIELDS),
        "dtype": "float64",
        "byte_order": "little",
        "layout": "r_fastest",
        "extra": extra or {},
    }
    arrays = (state.gamma.values, state.omega_theta.values, state.psi_theta.values)
    tmp = Path(str(path) + ".tmp")
    with tmp.open("wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        for a in arrays:
            fh.write(np.asarray(a, dtype="<f8").tobytes(order="F"))
    tmp.replace(path)


def read_snapshot(path) -> tuple[dict, dict[str, np.ndarray]]:
    data = Path(path).read_bytes()
    nl = data.find(b"\n")
    if nl < 0:
        raise SnapshotPayloadError(f"{path}: missing header terminator")
    try:
        header = json.loads(data[:nl])
    except json.JSONDecodeError as exc:
        raise SnapshotError(f"{path}: unreadable header: {exc}") from exc
    if header.get("schema") != SNAPSHOT_SCHEMA or header.get("version") != SNAPSHOT_VERSION:
        raise SnapshotVersionError(
            f"{path}: schema {header.get('schema')!r} version {header.get('version')!r}, "
            f"expected {SNAPSHOT_SCHEMA!r} version {SNAPSHOT_VERSION}")
    gd = header["grid"]
    nr, nz = int(gd["nr"]), int(gd["nz"])
    size = nr * nz * 8
    payload = data[nl + 1:]
    out = {}
    for i, name in enumerate(header["fields"]):
        chunk = payload[i * size:(i + 1) * size]
        if len(chunk) < size:
            raise SnapshotPayloadError(f"{path}: payload truncated in field {name!r} "
                                       f"({len(chunk)} of {size} bytes)")
        out[name] = np.frombuffer(chunk, dtype="<f8").reshape((nr, nz), order="F").astype(float)
    if len(payload) > size * len(header["fields"]):
        raise SnapshotPayloadError(f"{path}: trailing bytes after the last field")
    return header, out


def load_snapshot(path, expected_grid: Optional[Grid] = None) -> tuple[FlowState, dict]:
    """Restore a FlowState (velocities recomputed from the stored stream function)."""
    header, arrays = read_snapshot(path)
    gd = header["grid"]
    g = build_grid(int(gd["nr"]), int(gd["nz"]), float(gd["r_max"]), float(gd["z_len"]))
    if expected_grid is not None and g != expected_grid:
        raise SnapshotGridMismatch(f"{path}: snapshot grid {g.to_dict()} != run grid {expected_grid.to_dict()}")
    missing = [f for f in SNAPSHOT_FIELDS if f not in arrays]
    if missing:
        raise SnapshotPayloadError(f"{path}: missing field(s) {missing}")
    psi = arrays["psi_theta"]
    state = state_from_arrays(g, arrays["gamma"], arrays["omega_theta"], header["time"],
                              psi=psi, velocity=velocity_arrays(psi, g))
    return state, header.get("extra", {})
