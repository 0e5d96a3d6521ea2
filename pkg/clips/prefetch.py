"""Bounded producer/consumer hand-off between batch assembly and the trainer."""
import logging
import queue
import threading
from typing import Iterable, Iterator

logger = logging.getLogger(__name__)

_DONE = object()


class _Failure:
    def __init__(self, exc: BaseException):
        self.exc = exc


class BatchPrefetcher:
    """Run ``batches`` on a background thread, holding at most ``capacity`` ready items.

    Items come out in production order. An exception raised by the producer is
    re-raised in the consumer at the point it occurred. ``close()`` (or leaving
    the ``with`` block) stops the producer early.
    """

    def __init__(self, batches: Iterable, capacity: int = 2):
        if capacity < 1:
            raise ValueError(f"prefetch capacity must be >= 1, got {capacity}")
        self._source = iter(batches)
        self._queue = queue.Queue(maxsize=capacity)
        self._stop = threading.Event()
        self._thread = threading.Thread(target=self._produce, name='batch-prefetch', daemon=True)
        self._thread.start()

    def _put(self, item) -> bool:
        while not self._stop.is_set():
            try:
                self._queue.put(item, timeout=0.1)
                return True
            except queue.Full:
                continue
        return False

    def _produce(self):
        try:
            for item in self._source:
                if not self._put(item):
                    return
        except BaseException as exc:  # handed to the consumer
            self._put(_Failure(exc))
            return
        self._put(_DONE)

    def __iter__(self) -> Iterator:
        while True:
            item = self._queue.get()
            if item is _DONE:
                return
            if isinstance(item, _Failure):
                raise item.exc
            yield item

    def close(self):
        self._stop.set()
        while True:
            try:
                self._queue.get_nowait()
            except queue.Empty:
                break
        self._thread.join(timeout=5)

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()
        return False
