import csv
import logging
from queue import Full, Queue
from threading import Thread
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .config import CSV_FLOAT_FORMAT
from .errors import OutputError

logger = logging.getLogger(__name__)

PUT_TIMEOUT = 0.1


def format_cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return CSV_FLOAT_FORMAT % value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if value is None:
        return ""
    return str(value)


class CsvWriter:
    """Single background writer for result rows; workers only submit.

    A failure inside the writer thread is kept and raised as OutputError
    from the next submit() or from close().
    """

    def __init__(self, path: str, header: Sequence[str], batch_size: int = 500, queue_max: int = 20000):
        self.path = path
        self.header = list(header)
        self.batch_size = batch_size
        self.rows_written = 0
        self.q: "Queue[Any]" = Queue(maxsize=queue_max)
        self._stop = object()
        self._error: Optional[BaseException] = None
        self._closed = False
        self._th = Thread(target=self._run, daemon=True)
        self._th.start()

    def _run(self):
        try:
            self._write()
        except Exception as exc:
            logger.error("Writer for %s failed: %s", self.path, exc)
            self._error = exc

    def _write(self):
        with open(self.path, "w", newline="", encoding="utf-8") as fh:
            out = csv.writer(fh)
            out.writerow(self.header)
            batch = []
            while True:
                item = self.q.get()
                if item is self._stop:
                    break
                batch.append(item)
                if len(batch) >= self.batch_size:
                    self._flush(out, batch); batch.clear()
            if batch:
                self._flush(out, batch)

    def _flush(self, out, batch: Iterable[Sequence[Any]]):
        for row in batch:
            out.writerow([format_cell(v) for v in row])
            self.rows_written += 1

    def _raise_failure(self):
        if self._error is not None:
            raise OutputError(f"cannot write {self.path}: {self._error}",
                              {"path": self.path}) from self._error

    def _put(self, item: Any):
        while True:
            self._raise_failure()
            if not self._th.is_alive():
                self._raise_failure()
                raise OutputError(f"writer for {self.path} has stopped", {"path": self.path})
            try:
                self.q.put(item, timeout=PUT_TIMEOUT)
                return
            except Full:
                continue

    def submit(self, row: Sequence[Any]):
        if self._closed:
            raise OutputError(f"writer for {self.path} is closed", {"path": self.path})
        if len(row) != len(self.header):
            raise OutputError(f"row has {len(row)} cells, header has {len(self.header)}",
                              {"path": self.path, "row": list(row)})
        self._put(tuple(row))

    def submit_many(self, rows: Iterable[Sequence[Any]]):
        for row in rows:
            self.submit(row)

    def close(self):
        if not self._closed:
            self._closed = True
            while self._th.is_alive():
                try:
                    self.q.put(self._stop, timeout=PUT_TIMEOUT)
                    break
                except Full:
                    continue
            self._th.join()
        self._raise_failure()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        try:
            self.close()
        except OutputError:
            if exc_type is None:
                raise
        return False


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
    """Write all rows through one CsvWriter and return the count."""
    with CsvWriter(path, header) as writer:
        writer.submit_many(rows)
    return writer.rows_written
