"""
Miscellaneous utilities for nls_kato: file and directory naming.
"""

import os
import logging

logger = logging.getLogger("nlskato.utils")


# ── Name helpers ─────────────────────────────────────────────────────────────

def _fmt(x: float) -> str:
    """Compact, filesystem-safe rendering of a float."""
    return repr(float(x)).replace("-", "m").replace("+", "").replace(".", "p")


def cache_file_name(alpha: float, r_max: float, n_points: int, tol: float) -> str:
    """Return the cache file name for a ground-state solve.

    Example::

        cache_file_name(2.0, 20.0, 4096, 1e-8)
        # 'gs_a2p0_r20p0_n4096_t1em08.bin'
    """
    return f"gs_a{_fmt(alpha)}_r{_fmt(r_max)}_n{int(n_points)}_t{_fmt(tol)}.bin"


def run_dir_name(index: int, beta: float) -> str:
    """Return the per-run subdirectory name used by sweeps."""
    return f"run_{int(index):03d}_beta{_fmt(beta)}"


def lock_name(key: str) -> str:
    """Return the lock name guarding writes of cache entry *key*."""
    stem = os.path.splitext(os.path.basename(key))[0]
    return f"nlskato_{stem}"


def ensure_dir(path: str) -> str:
    """Create *path* (and parents) if missing; return it."""
    os.makedirs(path, exist_ok=True)
    return path
