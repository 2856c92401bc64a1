"""
Tests for nls_kato.cache — binary profile files and the locked cache.
"""

import os

import numpy as np
import pytest

from nls_kato.cache import (
    HEADER_SIZE,
    MAGIC,
    CacheKey,
    cached_profile,
    read_profile,
    write_profile,
)
from nls_kato.exceptions import NLSCacheError


# ── Helpers ───────────────────────────────────────────────────────────────────

_KEY = CacheKey(2.0, 20.0, 64, 1e-8)


def _profile(n=64):
    r = np.linspace(0.1, 20.0, n)
    return 4.3373877, np.exp(-r), -np.exp(-r)


# ── Tests ─────────────────────────────────────────────────────────────────────

def test_file_name_encodes_key():
    assert CacheKey(2.0, 20.0, 4096, 1e-8).file_name == "gs_a2p0_r20p0_n4096_t1em08.bin"


def test_write_then_read(tmp_path):
    path = str(tmp_path / _KEY.file_name)
    q0, q, dq = _profile()
    write_profile(path, _KEY, q0, q, dq)
    assert os.path.getsize(path) == HEADER_SIZE + 16 * _KEY.n_points
    with open(path, "rb") as fh:
        assert int.from_bytes(fh.read(8), "little") == MAGIC

    q0_back, q_back, dq_back = read_profile(path, _KEY)
    assert q0_back == q0
    assert np.array_equal(q_back, q)
    assert np.array_equal(dq_back, dq)
    assert q_back.flags.writeable


def test_no_temp_files_left(tmp_path):
    q0, q, dq = _profile()
    write_profile(str(tmp_path / _KEY.file_name), _KEY, q0, q, dq)
    assert os.listdir(tmp_path) == [_KEY.file_name]


def test_wrong_length_rejected(tmp_path):
    q0, q, dq = _profile(32)
    with pytest.raises(NLSCacheError):
        write_profile(str(tmp_path / "x.bin"), _KEY, q0, q, dq)


@pytest.mark.parametrize("other", [
    CacheKey(3.0, 20.0, 64, 1e-8),
    CacheKey(2.0, 30.0, 64, 1e-8),
    CacheKey(2.0, 20.0, 128, 1e-8),
    CacheKey(2.0, 20.0, 64, 1e-10),
])
def test_key_mismatch_rejected(tmp_path, other):
    path = str(tmp_path / "gs.bin")
    write_profile(path, _KEY, *_profile())
    with pytest.raises(NLSCacheError):
        read_profile(path, other)


def test_corrupt_file_rejected(tmp_path):
    path = tmp_path / "gs.bin"
    path.write_bytes(b"not a profile" * 20)
    with pytest.raises(NLSCacheError):
        read_profile(str(path), _KEY)


def test_truncated_file_rejected(tmp_path):
    path = str(tmp_path / "gs.bin")
    write_profile(path, _KEY, *_profile())
    with open(path, "r+b") as fh:
        fh.truncate(HEADER_SIZE + 100)
    with pytest.raises(NLSCacheError):
        read_profile(path, _KEY)


def test_missing_file_rejected(tmp_path):
    with pytest.raises(NLSCacheError):
        read_profile(str(tmp_path / "absent.bin"), _KEY)


def test_cached_profile_computes_once(tmp_path):
    calls = []

    def compute():
        calls.append(1)
        return _profile()

    first = cached_profile(str(tmp_path / "cache"), _KEY, compute)
    second = cached_profile(str(tmp_path / "cache"), _KEY, compute)
    assert len(calls) == 1
    assert first[0] == second[0]
    assert np.array_equal(first[1], second[1])


def test_cached_profile_replaces_bad_entry(tmp_path):
    cache_dir = tmp_path / "cache"
    cache_dir.mkdir()
    (cache_dir / _KEY.file_name).write_bytes(b"\x00" * 10)
    q0, q, _ = cached_profile(str(cache_dir), _KEY, _profile)
    assert q0 == _profile()[0]
    assert read_profile(str(cache_dir / _KEY.file_name), _KEY)[0] == q0
