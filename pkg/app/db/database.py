import json
import logging
import threading
from bisect import bisect_right
from pathlib import Path
from typing import Any, Dict, List, Optional

from app.core.config import settings

logger = logging.getLogger(__name__)


class PrimeSieve:
    """Eratosthenes sieve that grows on demand.

    Growth happens under a lock; once a limit is reached the prime list is only
    ever replaced wholesale, so readers never see a half-built list.
    """

    def __init__(self, limit: int):
        self._lock = threading.Lock()
        self.limit = 1
        self.primes: List[int] = []
        self._build(limit)

    def _build(self, limit: int) -> None:
        flags = bytearray([1]) * (limit + 1)
        flags[0:2] = b"\x00\x00"
        for p in range(2, int(limit ** 0.5) + 1):
            if flags[p]:
                flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
        self.primes = [i for i in range(limit + 1) if flags[i]]
        self.limit = limit
        logger.debug(f"[Sieve] Built primes up to {limit} ({len(self.primes)} primes)")

    def primes_upto(self, n: int) -> List[int]:
        if n > self.limit:
            with self._lock:
                if n > self.limit:
                    self._build(max(n, 2 * self.limit))
        primes = self.primes
        return primes[: bisect_right(primes, n)]


class Database:
    sieve: Optional[PrimeSieve] = None
    recurrence_table: Optional[Dict[str, Any]] = None
    lock = threading.Lock()


db = Database()


# Lazy init for the shared prime sieve
def get_prime_sieve() -> PrimeSieve:
    if db.sieve is None:
        with db.lock:
            if db.sieve is None:
                logger.info(f"[Sieve] Initializing sieve up to {settings.SIEVE_INITIAL_LIMIT}")
                db.sieve = PrimeSieve(settings.SIEVE_INITIAL_LIMIT)
    return db.sieve


def read_recurrence_table(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Failed to read recurrence table {path}: {e}")
        raise


# Lazy init for the recurrence transcriptions
def get_recurrence_table() -> Dict[str, Any]:
    if db.recurrence_table is None:
        with db.lock:
            if db.recurrence_table is None:
                logger.info(f"[Tables] Loading recurrence table from {settings.RECURRENCE_TABLE}")
                db.recurrence_table = read_recurrence_table(Path(settings.RECURRENCE_TABLE))
    return db.recurrence_table
