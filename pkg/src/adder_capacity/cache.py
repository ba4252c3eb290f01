"""Cache management for adder-capacity.

Holds values that are expensive to compute and identical for every caller:
the (gamma*, c*) pair found by golden-section search and parsed configuration
files. Initialization of a key is race-free and idempotent: concurrent
callers asking for the same missing key run the factory once and all
receive the same value.
"""

import logging
from threading import Lock
from typing import Any, Callable, Dict, Hashable, Optional, Tuple


_MISSING = object()


class CacheManager:
    """Thread-safe named in-memory caches with single-flight initialization."""

    def __init__(self):
        self._caches: Dict[str, Dict[Hashable, Any]] = {}
        self._lock = Lock()
        self._init_locks: Dict[Tuple[str, Hashable], Lock] = {}

    def get(self, cache_name: str, key: Hashable, default: Any = None) -> Any:
        """Get a value from a named cache.

        Args:
            cache_name: Name of the cache (e.g., 'gamma_star', 'config')
            key: Cache key
            default: Value returned when the key is absent

        Returns:
            Cached value or default
        """
        with self._lock:
            return self._caches.get(cache_name, {}).get(key, default)

    def set(self, cache_name: str, key: Hashable, value: Any) -> None:
        """Store a value in a named cache."""
        with self._lock:
            self._caches.setdefault(cache_name, {})[key] = value

    def clear(self, cache_name: Optional[str] = None) -> None:
        """Clear one named cache, or every cache when cache_name is None."""
        with self._lock:
            if cache_name is None:
                self._caches.clear()
                self._init_locks.clear()
            else:
                self._caches.pop(cache_name, None)
                for lock_key in [k for k in self._init_locks if k[0] == cache_name]:
                    del self._init_locks[lock_key]

    def _key_lock(self, cache_name: str, key: Hashable) -> Lock:
        with self._lock:
            return self._init_locks.setdefault((cache_name, key), Lock())

    def get_or_set(self, cache_name: str, key: Hashable, factory: Callable[[], Any]) -> Any:
        """Return the cached value, computing it with factory exactly once.

        The factory runs under a per-key lock, so two threads racing on the
        same missing key never both compute it. A factory that raises leaves
        the cache untouched and the exception propagates.

        Args:
            cache_name: Name of the cache
            key: Cache key
            factory: Zero-argument callable producing the value

        Returns:
            Cached or newly computed value
        """
        value = self.get(cache_name, key, _MISSING)
        if value is not _MISSING:
            return value

        with self._key_lock(cache_name, key):
            value = self.get(cache_name, key, _MISSING)
            if value is _MISSING:
                try:
                    value = factory()
                except Exception as e:
                    logging.warning(f"Error computing cache value for {cache_name}.{key}: {e}")
                    raise
                self.set(cache_name, key, value)
        return value


# Global cache manager instance
_cache_manager = CacheManager()


def get_cache_manager() -> CacheManager:
    """Get the global cache manager instance."""
    return _cache_manager
