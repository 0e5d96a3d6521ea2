import time

import pytest

from clips.prefetch import BatchPrefetcher


def test_items_arrive_in_order():
    with BatchPrefetcher(range(20), capacity=3) as prefetcher:
        assert list(prefetcher) == list(range(20))


def test_producer_stays_within_capacity():
    produced = []

    def source():
        for i in range(50):
            produced.append(i)
            yield i

    with BatchPrefetcher(source(), capacity=2) as prefetcher:
        time.sleep(0.3)
        # two queued plus one waiting to be put
        assert len(produced) <= 3
        assert next(iter(prefetcher)) == 0


def test_producer_errors_reach_the_consumer():
    def source():
        yield 1
        raise RuntimeError('decode failed')

    with BatchPrefetcher(source()) as prefetcher:
        items = iter(prefetcher)
        assert next(items) == 1
        with pytest.raises(RuntimeError, match='decode failed'):
            next(items)


def test_close_stops_the_producer():
    prefetcher = BatchPrefetcher(iter(range(10_000)), capacity=1)
    prefetcher.close()
    assert not prefetcher._thread.is_alive()


def test_capacity_must_be_positive():
    with pytest.raises(ValueError):
        BatchPrefetcher([], capacity=0)
