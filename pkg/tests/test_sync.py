"""
Tests for nls_kato.sync — the cache-entry lock.
"""

import multiprocessing as mp
import os

import pytest

from nls_kato.exceptions import NLSCacheError
from nls_kato.sync import EntryLock, lock_file, locked_entry


# ── Tests ─────────────────────────────────────────────────────────────────────

def test_lock_file_location(tmp_path):
    lock = EntryLock("nlskato/test", directory=str(tmp_path))
    assert lock.path == os.path.join(str(tmp_path), "nlskato_test.lock")
    assert lock.path == lock_file("nlskato/test", str(tmp_path))
    assert os.path.exists(lock.path)


def test_acquire_release(tmp_path):
    lock = EntryLock("nlskato_test", directory=str(tmp_path))
    assert not lock.locked
    lock.acquire()
    assert lock.locked
    lock.release()
    assert not lock.locked
    lock.release()


def test_context_manager_records_holder(tmp_path):
    with EntryLock("nlskato_test", directory=str(tmp_path)) as lock:
        assert lock.locked
        assert lock.holder() == os.getpid()
    assert not lock.locked


def test_reacquire_while_held_is_noop(tmp_path):
    lock = EntryLock("nlskato_test", directory=str(tmp_path), timeout=0.2)
    lock.acquire()
    lock.acquire()
    assert lock.locked
    lock.release()
    assert not lock.locked
    with locked_entry("nlskato_test", directory=str(tmp_path), timeout=0.5) as other:
        assert other.locked


def test_second_holder_times_out(tmp_path):
    with locked_entry("nlskato_test", directory=str(tmp_path)):
        other = EntryLock("nlskato_test", directory=str(tmp_path), timeout=0.05)
        with pytest.raises(NLSCacheError, match=str(os.getpid())):
            other.acquire()
        assert not other.locked


def test_lock_reusable_after_release(tmp_path):
    with locked_entry("nlskato_test", directory=str(tmp_path)):
        pass
    with locked_entry("nlskato_test", directory=str(tmp_path), timeout=0.5) as lock:
        assert lock.locked


# ── Multi-process helpers (module level for spawn) ────────────────────────────

def _try_lock(directory, timeout, result_q):
    try:
        with locked_entry("nlskato_test", directory=directory, timeout=timeout):
            result_q.put("acquired")
    except NLSCacheError:
        result_q.put("timeout")


@pytest.mark.multiprocess
def test_lock_excludes_other_process(tmp_path):
    ctx = mp.get_context("spawn")
    result_q = ctx.Queue()

    with locked_entry("nlskato_test", directory=str(tmp_path)):
        p = ctx.Process(target=_try_lock, args=(str(tmp_path), 0.2, result_q), daemon=True)
        p.start()
        p.join(timeout=20.0)
        assert not p.is_alive(), "Locking process timed out"
        assert result_q.get(timeout=2.0) == "timeout"

    p = ctx.Process(target=_try_lock, args=(str(tmp_path), 5.0, result_q), daemon=True)
    p.start()
    p.join(timeout=20.0)
    assert not p.is_alive(), "Locking process timed out"
    assert result_q.get(timeout=2.0) == "acquired"
