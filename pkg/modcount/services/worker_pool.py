"""
(worker_pool.py) Fans independent partitions of a search out to worker processes
and reduces the results in submission order, so parallel runs stay deterministic.
"""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Any, Callable, List, Optional, Sequence

from tqdm import tqdm

logger = logging.getLogger(__name__)


def run_partitioned(
    func: Callable[..., Any],
    tasks: Sequence[tuple],
    jobs: int = 1,
    description: Optional[str] = None,
) -> List[Any]:
    """
    Applies func to every argument tuple in tasks.

    Args:
        func: a module-level function (it must be picklable for worker processes).
        tasks: argument tuples, one per partition.
        jobs: worker count; 1 runs everything in-process.
        description: label for the progress bar.

    Returns:
        Results in the same order as tasks.
    """
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [func(*task) for task in tqdm(tasks, desc=description, disable=None, leave=False)]

    logger.info(f"{description or func.__name__} | dispatching {len(tasks)} partitions to {jobs} workers")
    results: List[Any] = [None] * len(tasks)
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as executor:
        future_to_index = {executor.submit(func, *task): index for index, task in enumerate(tasks)}
        for future in tqdm(as_completed(future_to_index), total=len(tasks), desc=description, disable=None, leave=False):
            index = future_to_index[future]
            try:
                results[index] = future.result()
            except Exception as e:
                logger.error(f"Partition {tasks[index]} of {description or func.__name__} failed: {e}")
                raise
    return results
