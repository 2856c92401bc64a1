"""
Run artifacts on disk.

Each run directory holds::

    config.ini        the config echo
    summary.json      RunSummary, schema_version 1, sorted keys
    timing.json       wall-clock seconds (kept out of summary.json)
    series.csv/.dat   diagnostic time series, Morawetz columns appended
    snapshots/        snapshot_NNNN.csv profiles (r, abs_u)
    mora_R*.dat       Morawetz tables per radius
    cutoffs_R*.csv    the cutoff profiles used
    trajectory.bin    snapshots for ``diagnose``

Trajectory files start with an 8-byte tag naming the codec, so
:func:`load_trajectory` never has to be told how a file was written.
"""

import csv
import logging
import os
from typing import Optional

import numpy as np

from ..exceptions import NLSSerializationError
from ..radial_dynamics import SERIES_COLUMNS, Trajectory, write_series_csv
from ..serialize import deserialize, dump_json, serialize
from ..utils import ensure_dir

logger = logging.getLogger("nlskato.experiments.artifacts")

SCHEMA_VERSION: int = 1
DICHOTOMY_HEADER: tuple = ("beta", "energy_margin", "grad_margin", "verdict", "outcome", "proxy")

_TRAJ_TAGS = {"pickle": b"NLSTRJ:P", "msgpack": b"NLSTRJ:M"}
_TAG_METHODS = {tag: method for method, tag in _TRAJ_TAGS.items()}


# ── Trajectories ─────────────────────────────────────────────────────────────

def save_trajectory(traj: Trajectory, path: str, method: str = "pickle") -> str:
    """Write *traj* with the ``pickle`` or ``msgpack`` codec.

    Raises:
        NLSSerializationError: Unknown method or encoding failure.
    """
    if method not in _TRAJ_TAGS:
        raise NLSSerializationError(f"Unknown serialization method: {method!r}")
    payload = serialize(traj.to_dict(), method=method)
    with open(path, "wb") as fh:
        fh.write(_TRAJ_TAGS[method])
        fh.write(payload)
    logger.info("Saved trajectory (%d snapshots, %s) to '%s'", len(traj.snapshots), method, path)
    return path


def load_trajectory(path: str) -> Trajectory:
    """Inverse of :func:`save_trajectory`.

    Raises:
        NLSSerializationError: Missing tag or undecodable payload.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    method = _TAG_METHODS.get(raw[:8])
    if method is None:
        raise NLSSerializationError(f"'{path}' is not a saved trajectory")
    try:
        return Trajectory.from_dict(deserialize(raw[8:], method=method))
    except (KeyError, TypeError, ValueError) as exc:
        raise NLSSerializationError(f"'{path}' holds a malformed trajectory: {exc}") from exc


# ── Tables ───────────────────────────────────────────────────────────────────

def write_dat(path: str, columns: dict) -> str:
    """Whitespace-separated columns with a ``#`` header line (gnuplot style)."""
    names = list(columns)
    data = np.column_stack([np.asarray(columns[n], dtype=float) for n in names])
    np.savetxt(path, data, fmt="%.17g", header=" ".join(names), comments="# ")
    return path


def align_to_series(traj: Trajectory, tables: dict) -> dict:
    """Spread diagnostic tables over the series rows.

    Each table has a ``t`` column plus value columns; a value lands on the
    series row with the same time and every other row gets NaN.
    """
    times = traj.times
    out = {}
    for columns in tables.values():
        t = np.asarray(columns["t"], dtype=float)
        idx = np.clip(np.searchsorted(times, t), 0, times.size - 1)
        lower = np.clip(idx - 1, 0, times.size - 1)
        idx = np.where(np.abs(times[lower] - t) < np.abs(times[idx] - t), lower, idx)
        hit = np.isclose(times[idx], t, rtol=0.0, atol=1e-9 * max(1.0, float(times[-1])))
        for name, values in columns.items():
            if name == "t":
                continue
            col = np.full(times.size, np.nan)
            col[idx[hit]] = np.asarray(values, dtype=float)[hit]
            out[name] = col
    return out


def write_series(traj: Trajectory, directory: str, tables: Optional[dict] = None) -> list:
    """series.csv plus its gnuplot twin series.dat.

    Columns from *tables* (see :func:`align_to_series`) follow the
    standard ones in both files.
    """
    ensure_dir(directory)
    csv_path = os.path.join(directory, "series.csv")
    dat_path = os.path.join(directory, "series.dat")
    extra = align_to_series(traj, tables or {})
    write_series_csv(traj, csv_path, extra)
    write_dat(dat_path, {**{name: traj.column(name) for name in SERIES_COLUMNS}, **extra})
    return [csv_path, dat_path]


def _cell(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_dichotomy_csv(rows: list, path: str) -> str:
    """One row per beta, header fixed to :data:`DICHOTOMY_HEADER`."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(DICHOTOMY_HEADER)
        for row in rows:
            writer.writerow([_cell(row[k]) for k in DICHOTOMY_HEADER])
    logger.info("Wrote %d sweep rows to '%s'", len(rows), path)
    return path


def read_dichotomy_csv(path: str) -> list:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            for key in ("beta", "energy_margin", "grad_margin"):
                rec[key] = float(rec[key])
            rows.append(rec)
    return rows


# ── Summaries ────────────────────────────────────────────────────────────────

def write_summary(summary, directory: str) -> list:
    """summary.json (deterministic) and timing.json (wall clock)."""
    ensure_dir(directory)
    payload = {"schema_version": SCHEMA_VERSION, **summary.to_dict()}
    summary_path = os.path.join(directory, "summary.json")
    timing_path = os.path.join(directory, "timing.json")
    dump_json(payload, summary_path)
    dump_json({"schema_version": SCHEMA_VERSION, "wall_clock_s": summary.wall_clock}, timing_path)
    return [summary_path, timing_path]


def write_json(obj, directory: str, name: str) -> str:
    ensure_dir(directory)
    path = os.path.join(directory, name)
    payload = {"schema_version": SCHEMA_VERSION}
    payload.update(obj if isinstance(obj, dict) else obj.to_dict())
    dump_json(payload, path)
    return path
