"""
Running a partitioned count on a pool of worker processes.
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor, as_completed

logger = logging.getLogger(__name__)


def default_threads():
    """
    The worker count when none is given: ``SUBRINGS_THREADS``, or the number of CPUs.
    """
    from subrings import appsettings

    return appsettings.SUBRINGS_THREADS or os.cpu_count() or 1


def partitioned_sum(func, args, parts, threads=1):
    """
    Return ``sum(func(*args, part, parts) for part in range(parts))``.

    With more than one thread, the parts run on a :class:`~concurrent.futures.ProcessPoolExecutor`.
    ``func`` must be a module-level function so it can be sent to the workers.
    When interrupted, the pending parts are cancelled and the interrupt propagates,
    so a partial sum is never returned.
    """
    if parts < 1:
        raise ValueError("At least one partition is required")
    if threads <= 1 or parts == 1:
        return sum(func(*args, part, parts) for part in range(parts))

    workers = min(threads, parts)
    logger.debug("Running %s on %d partitions with %d workers", func.__name__, parts, workers)
    executor = ProcessPoolExecutor(max_workers=workers)
    try:
        futures = [executor.submit(func, *args, part, parts) for part in range(parts)]
        total = 0
        for future in as_completed(futures):
            total += future.result()
    except BaseException:
        executor.shutdown(wait=False, cancel_futures=True)
        raise
    executor.shutdown(wait=True)
    return total
