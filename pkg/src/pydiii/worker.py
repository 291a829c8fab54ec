"""
Define the worker initialisation function and the per file run function for
multiprocess invariant batches. Report options are stored in worker globals by the
initialiser so that each task only carries its file path.

Results are consumed in input order, so batch output does not depend on scheduling.
"""

import os
import logging
import multiprocessing as mp
from typing import Optional, Sequence

from tqdm import tqdm

from .config import cap_workers
from .exceptions import DIIIError
from .results.report import InvariantReport, ReportOptions, report_for_file

logger = logging.getLogger(__name__)

# globals to be reused between files by the worker.
worker_options: Optional[ReportOptions] = None

FileResult = tuple[str, Optional[InvariantReport], Optional[DIIIError]]


def worker_init(options: ReportOptions):
    """Initialise a worker with the options of the run."""
    global worker_options

    # stdout carries the reports.
    logger.debug("Initialising worker with pid: %d", os.getpid())

    worker_options = options
    return None


def worker_run_file(path: str) -> FileResult:
    """Compute the report of one file with the worker.

    Library errors are returned instead of raised so that one bad file does not stop
    the batch.
    """
    global worker_options
    if worker_options is None:
        raise RuntimeError("Worker globals have not been initialised yet.")

    try:
        return path, report_for_file(path, worker_options), None
    except DIIIError as err:
        return path, None, err


def run_invariants_parallel(
    paths: Sequence[str],
    options: ReportOptions,
    n_workers: Optional[int] = None,
    show_progress: bool = True,
) -> list[FileResult]:
    """Compute reports for a batch of sample files.

    Args:
        paths (Sequence[str]): Sample files.
        options (ReportOptions): Flags shared by every file.
        n_workers (Optional[int]): Requested pool size, capped by ``DIII_THREADS``.
        show_progress (bool): Show a progress bar.

    Returns:
        One ``(path, report, error)`` tuple per input, in input order.
    """
    paths = [str(p) for p in paths]
    n_workers = min(cap_workers(n_workers), max(1, len(paths)))

    if n_workers == 1:
        worker_init(options)
        iterator = map(worker_run_file, paths)
        return list(tqdm(iterator, total=len(paths), disable=not show_progress))

    results = []
    with mp.Pool(
        processes=n_workers, initializer=worker_init, initargs=(options,)
    ) as pool:
        for res in tqdm(
            pool.imap(worker_run_file, paths),
            total=len(paths),
            disable=not show_progress,
        ):
            results.append(res)
    return results
