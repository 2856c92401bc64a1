"""
Advisory lock on a single ground-state cache entry.

Sweep workers asking for the same ground state race to fill the cache.
Whoever locks the entry first solves and writes; the rest block in
:meth:`EntryLock.acquire` and then find the file on disk.  The lock is
``fcntl.flock`` on POSIX and ``msvcrt.locking`` on Windows, taken without
blocking and polled with a growing back-off so a long solve is not a busy
loop.  The holder writes its pid into the lock file for the waiting log.
"""

import logging
import os
import sys
import tempfile
import time
from contextlib import contextmanager
from typing import Optional

from .exceptions import NLSCacheError

logger = logging.getLogger("nlskato.sync")

if sys.platform == "win32":
    import msvcrt

    def _try_lock(fd: int) -> None:
        os.lseek(fd, 0, os.SEEK_SET)
        msvcrt.locking(fd, msvcrt.LK_NBLCK, 1)

    def _unlock(fd: int) -> None:
        os.lseek(fd, 0, os.SEEK_SET)
        msvcrt.locking(fd, msvcrt.LK_UNLCK, 1)
else:
    import fcntl

    def _try_lock(fd: int) -> None:
        fcntl.flock(fd, fcntl.LOCK_EX | fcntl.LOCK_NB)

    def _unlock(fd: int) -> None:
        fcntl.flock(fd, fcntl.LOCK_UN)

FIRST_DELAY: float = 0.001
MAX_DELAY: float = 0.05


def lock_file(name: str, directory: Optional[str] = None) -> str:
    """Path of the lock file for *name*; separators in *name* become ``_``."""
    flat = name.replace("/", "_").replace("\\", "_")
    return os.path.join(directory or tempfile.gettempdir(), flat + ".lock")


class EntryLock:
    """Exclusive lock on ``<directory>/<name>.lock``.

    Acquiring a lock this object already holds is a no-op, and one
    :meth:`release` drops it.

    Args:
        name:      Lock name, usually from :func:`nls_kato.utils.lock_name`.
        directory: Directory of the lock file (system temp dir by default).
        timeout:   Default seconds to wait; ``None`` waits forever.

    Example::

        with EntryLock(lock_name(path), directory=cache_dir, timeout=60.0):
            if not os.path.exists(path):
                write_profile(path, key, q0, q, dq)
    """

    def __init__(self, name: str, directory: Optional[str] = None,
                 timeout: Optional[float] = None):
        self.path = lock_file(name, directory)
        self.timeout = timeout
        self._fd: Optional[int] = None
        open(self.path, "a").close()

    @property
    def locked(self) -> bool:
        return self._fd is not None

    def holder(self) -> Optional[int]:
        """Pid recorded by the current (or last) holder, if readable."""
        try:
            with open(self.path, encoding="ascii") as fh:
                return int(fh.read().strip() or 0) or None
        except (OSError, ValueError):
            return None

    def acquire(self, timeout: Optional[float] = None) -> None:
        """Take the lock, waiting up to *timeout* (or the default) seconds.

        Raises:
            NLSCacheError: Still held elsewhere when the wait ran out.
        """
        if self._fd is not None:
            return
        wait = self.timeout if timeout is None else timeout
        deadline = None if wait is None else time.monotonic() + wait
        fd = os.open(self.path, os.O_RDWR | os.O_CREAT)
        delay = FIRST_DELAY
        logged = False
        while True:
            try:
                _try_lock(fd)
                break
            except OSError:
                pass
            if deadline is not None and time.monotonic() >= deadline:
                os.close(fd)
                raise NLSCacheError(
                    f"Lock '{self.path}' still held by pid {self.holder()} after {wait:.3f}s"
                )
            if not logged:
                logger.info("Waiting for '%s' (held by pid %s)", self.path, self.holder())
                logged = True
            time.sleep(delay)
            delay = min(2.0 * delay, MAX_DELAY)
        self._fd = fd
        self._stamp()

    def _stamp(self) -> None:
        if sys.platform == "win32":
            return
        os.ftruncate(self._fd, 0)
        os.pwrite(self._fd, str(os.getpid()).encode("ascii"), 0)

    def release(self) -> None:
        """Drop the lock; does nothing when it is not held."""
        fd, self._fd = self._fd, None
        if fd is None:
            return
        try:
            _unlock(fd)
        finally:
            os.close(fd)

    def __enter__(self) -> "EntryLock":
        self.acquire()
        return self

    def __exit__(self, *_) -> None:
        self.release()


@contextmanager
def locked_entry(name: str, directory: Optional[str] = None, timeout: Optional[float] = None):
    """Hold an :class:`EntryLock` on *name* for the duration of the block."""
    lock = EntryLock(name, directory, timeout)
    lock.acquire()
    try:
        yield lock
    finally:
        lock.release()
