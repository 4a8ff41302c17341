# SPDX-License-Identifier: Apache-2.0

"""
Chunked execution of Monte-Carlo trials on worker threads.

Trials are split into chunks of a fixed size. The chunk index, not the
thread that runs it, selects the random stream, so the merged result is the
same for any number of workers.
"""

from threading import Thread
from typing import Callable, List, TypeVar

from logger import configure_logger

LOGGER = configure_logger(__name__)
CHUNK_SIZE = 1 << 16

T = TypeVar("T")


class PropagatingThread(Thread):
    """
    Thread that keeps the return value of its target and re-raises the
    target's exception when joined.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.exc = None
        self.ret = None

    def run(self):
        try:
            if self._target is not None:
                self.ret = self._target(*self._args, **self._kwargs)
        except BaseException as error:  # pylint: disable=broad-except
            self.exc = error

    def join(self, timeout=None):
        super().join(timeout)
        if self.exc:
            raise self.exc
        return self.ret


def chunk_sizes(trials: int, chunk_size: int = CHUNK_SIZE) -> List[int]:
    full, remainder = divmod(trials, chunk_size)
    return [chunk_size] * full + ([remainder] if remainder else [])


def map_chunks(
    task: Callable[[int, int], T],
    trials: int,
    workers: int = 1,
) -> List[T]:
    """
    Run task(chunk_index, chunk_trials) for every chunk of the trials.

    Args:
        task (Callable[[int, int], T]): The chunk worker.

        trials (int): Total number of trials to split.

        workers (int): Maximum number of threads running at once.

    Returns:
        List[T]: The task results, ordered by chunk index.
    """
    sizes = chunk_sizes(trials)
    workers = max(1, min(int(workers), len(sizes) or 1))
    LOGGER.debug(
        "Running %d trials in %d chunks on %d worker(s)",
        trials,
        len(sizes),
        workers,
    )
    if workers == 1:
        return [task(index, size) for index, size in enumerate(sizes)]

    results = [None] * len(sizes)
    for start in range(0, len(sizes), workers):
        threads = {
            index: PropagatingThread(target=task, args=(index, sizes[index]))
            for index in range(start, min(start + workers, len(sizes)))
        }
        for thread in threads.values():
            thread.start()
        for index, thread in threads.items():
            results[index] = thread.join()
    return results
