import logging
import time
from contextlib import contextmanager
from typing import Iterator


class Clock:
    """Millisecond stopwatch that keeps the duration of each named lap."""

    def __init__(self):
        self.__start = time.perf_counter_ns()
        self.__mark = self.__start
        self.laps: dict[str, float] = {}

    def lap(self, name: str) -> float:
        now = time.perf_counter_ns()
        elapsed = (now - self.__mark) / 1e6
        self.__mark = now
        self.laps[name] = self.laps.get(name, 0.0) + elapsed
        return elapsed

    def since_start(self) -> float:
        return (time.perf_counter_ns() - self.__start) / 1e6


@contextmanager
def timed(label: str) -> Iterator[Clock]:
    clock = Clock()
    try:
        yield clock
    finally:
        laps = ', '.join(f'{name} {ms:.1f}ms' for name, ms in clock.laps.items())
        logging.info(f'{label}: {clock.since_start():.1f}ms' + (f' ({laps})' if laps else ''))
