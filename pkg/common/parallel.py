"""
Parallel
Deterministic chunked evaluation over point arrays
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from common.settings import get_settings

logger = logging.getLogger(__name__)

MIN_CHUNK = 4096


def chunked_map(func, points, threads=None):
    """
    Apply func to row chunks of points and concatenate results in order

    Args:
        func: Callable taking an (M, ...) array and returning an (M, ...) array
        points: Input array, split along the first axis
        threads: Worker count (defaults to MAGANISO_THREADS)

    Returns:
        Concatenated result array
    """
    if threads is None:
        threads = get_settings().threads

    count = len(points)
    workers = min(threads, max(1, count // MIN_CHUNK))

    if workers <= 1:
        return func(points)

    chunks = np.array_split(points, workers)
    logger.debug(f"Evaluating {count} points in {workers} chunks")

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(func, chunks))

    return np.concatenate(results)
