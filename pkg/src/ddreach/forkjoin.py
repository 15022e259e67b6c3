"""Minimal fork-join task pool.

``spawn`` queues a task for the worker threads; ``sync`` either claims the
task and runs it inline (if no worker picked it up yet) or waits for it.
Because a waiting thread only ever waits on a task that some other thread is
actively running, nested spawn/sync never deadlocks, whatever the pool size.
"""
from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor

_PENDING, _RUNNING, _DONE = range(3)


class Task:
    __slots__ = ("fn", "args", "state", "result", "error", "done", "_lock")

    def __init__(self, fn, args):
        self.fn = fn
        self.args = args
        self.state = _PENDING
        self.result = None
        self.error = None
        self.done = threading.Event()
        self._lock = threading.Lock()

    def claim(self) -> bool:
        with self._lock:
            if self.state != _PENDING:
                return False
            self.state = _RUNNING
            return True

    def run(self) -> None:
        try:
            self.result = self.fn(*self.args)
        except BaseException as exc:  # re-raised at sync
            self.error = exc
        finally:
            self.state = _DONE
            self.done.set()

    def run_if_unclaimed(self) -> None:
        if self.claim():
            self.run()


class ForkJoinPool:
    def __init__(self, workers: int):
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self.workers = workers
        self._executor = ThreadPoolExecutor(workers - 1) if workers > 1 else None

    def spawn(self, fn, *args) -> Task:
        task = Task(fn, args)
        if self._executor is not None:
            self._executor.submit(task.run_if_unclaimed)
        return task

    def sync(self, task: Task):
        if task.claim():
            task.run()
        else:
            task.done.wait()
        if task.error is not None:
            raise task.error
        return task.result

    def close(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True, cancel_futures=True)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
