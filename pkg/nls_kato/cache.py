"""
On-disk cache of ground-state profiles.

A shooting solve takes seconds; sweeps and repeated CLI calls reuse the
result through a small binary file per (alpha, r_max, n_points, tol).

File layout (little-endian):

    Offset  Size     Field
    0       8        MAGIC     int64  ("NLSKATO1")
    8       8        VERSION   int64
    16      8        N_POINTS  int64
    24      8        ALPHA     float64
    32      8        R_MAX     float64
    40      8        TOL       float64
    48      8        Q0        float64
    56-127           RESERVED (zeros)
    128     8*n      Q(r_j)    float64
    128+8n  8*n      Q'(r_j)   float64

Writes go to a temporary file that replaces the target atomically, under a
:class:`~nls_kato.sync.EntryLock` in the cache directory.
"""

import os
import logging
import tempfile
from dataclasses import dataclass

import numpy as np

from .exceptions import NLSCacheError
from .sync import locked_entry
from .utils import cache_file_name, ensure_dir, lock_name

logger = logging.getLogger("nlskato.cache")

# ── Constants ────────────────────────────────────────────────────────────────

MAGIC: int = int.from_bytes(b"NLSKATO1", "little")
VERSION: int = 1
HEADER_SIZE: int = 128

_IDX_MAGIC = 0
_IDX_VERSION = 1
_IDX_N_POINTS = 2
_IDX_ALPHA = 3
_IDX_R_MAX = 4
_IDX_TOL = 5
_IDX_Q0 = 6

LOCK_TIMEOUT: float = 600.0


@dataclass(frozen=True)
class CacheKey:
    """Everything a cached profile depends on."""

    alpha: float
    r_max: float
    n_points: int
    tol: float

    @property
    def file_name(self) -> str:
        return cache_file_name(self.alpha, self.r_max, self.n_points, self.tol)


# ── Header helpers ───────────────────────────────────────────────────────────

def _encode_header(key: CacheKey, q0: float) -> bytes:
    buf = bytearray(HEADER_SIZE)
    ints = np.ndarray((16,), dtype="<i8", buffer=buf)
    floats = np.ndarray((16,), dtype="<f8", buffer=buf)
    ints[_IDX_MAGIC] = MAGIC
    ints[_IDX_VERSION] = VERSION
    ints[_IDX_N_POINTS] = key.n_points
    floats[_IDX_ALPHA] = key.alpha
    floats[_IDX_R_MAX] = key.r_max
    floats[_IDX_TOL] = key.tol
    floats[_IDX_Q0] = q0
    return bytes(buf)


def _validate_header(raw: bytes, key: CacheKey, path: str) -> float:
    """Check magic, version and key; return the stored Q(0)."""
    if len(raw) < HEADER_SIZE:
        raise NLSCacheError(f"Cache file '{path}' is truncated ({len(raw)} bytes)")
    ints = np.frombuffer(raw, dtype="<i8", count=16)
    floats = np.frombuffer(raw, dtype="<f8", count=16)
    if int(ints[_IDX_MAGIC]) != MAGIC:
        raise NLSCacheError(
            f"Cache file '{path}' has invalid magic 0x{int(ints[_IDX_MAGIC]) & (2**64 - 1):016X}"
        )
    if int(ints[_IDX_VERSION]) != VERSION:
        raise NLSCacheError(
            f"Cache file '{path}' has version {int(ints[_IDX_VERSION])}, expected {VERSION}"
        )
    stored = CacheKey(
        alpha=float(floats[_IDX_ALPHA]),
        r_max=float(floats[_IDX_R_MAX]),
        n_points=int(ints[_IDX_N_POINTS]),
        tol=float(floats[_IDX_TOL]),
    )
    if stored != key:
        raise NLSCacheError(f"Cache file '{path}' holds {stored}, requested {key}")
    expected = HEADER_SIZE + 16 * key.n_points
    if len(raw) != expected:
        raise NLSCacheError(
            f"Cache file '{path}' has {len(raw)} bytes, expected {expected}"
        )
    return float(floats[_IDX_Q0])


# ── Public API ───────────────────────────────────────────────────────────────

def write_profile(path: str, key: CacheKey, q0: float,
                  q_values: np.ndarray, dq_values: np.ndarray) -> None:
    """Atomically write a profile to *path*.

    Raises:
        NLSCacheError: Array lengths disagree with the key.
    """
    q_values = np.ascontiguousarray(q_values, dtype="<f8")
    dq_values = np.ascontiguousarray(dq_values, dtype="<f8")
    if q_values.shape != (key.n_points,) or dq_values.shape != (key.n_points,):
        raise NLSCacheError(
            f"profile arrays must have shape ({key.n_points},), got "
            f"{q_values.shape} and {dq_values.shape}"
        )
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".gs_", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(_encode_header(key, q0))
            fh.write(q_values.tobytes())
            fh.write(dq_values.tobytes())
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise NLSCacheError(f"Failed to write cache file '{path}': {exc}") from exc
    logger.info("Cached ground state %s at '%s'", key, path)


def read_profile(path: str, key: CacheKey):
    """Read a profile written by :func:`write_profile`.

    Returns:
        ``(q0, q_values, dq_values)``.

    Raises:
        NLSCacheError: Missing, corrupt or mismatched file.

    Example::

        q0, q, dq = read_profile(path, CacheKey(2.0, 20.0, 4096, 1e-8))
    """
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise NLSCacheError(f"Cannot read cache file '{path}': {exc}") from exc
    q0 = _validate_header(raw, key, path)
    n = key.n_points
    q_values = np.frombuffer(raw, dtype="<f8", count=n, offset=HEADER_SIZE).copy()
    dq_values = np.frombuffer(raw, dtype="<f8", count=n, offset=HEADER_SIZE + 8 * n).copy()
    return q0, q_values, dq_values


def cached_profile(cache_dir: str, key: CacheKey, compute):
    """Return the profile for *key*, computing and storing it on a miss.

    *compute* is called with no arguments and must return
    ``(q0, q_values, dq_values)``.  Concurrent callers serialize on a lock
    in *cache_dir*; whoever gets it second finds the file already written.
    """
    ensure_dir(cache_dir)
    path = os.path.join(cache_dir, key.file_name)
    with locked_entry(lock_name(path), directory=cache_dir, timeout=LOCK_TIMEOUT):
        if os.path.exists(path):
            try:
                return read_profile(path, key)
            except NLSCacheError as exc:
                logger.warning("Rejecting cache entry: %s", exc)
        q0, q_values, dq_values = compute()
        write_profile(path, key, q0, q_values, dq_values)
        return q0, q_values, dq_values
