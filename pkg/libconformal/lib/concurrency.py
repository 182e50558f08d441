"""
Set of utilities for parallel execution of libconformal checks
"""

import functools
import logging
import signal
from typing import Any, Callable, Dict, Generator, Optional, Sequence

import numpy as np

from libconformal.lib.checks import Check, build_checks
from libconformal.lib.constants import CONFORMAL_PROGRESS_STEP
from libconformal.models import RunConfig

logger = logging.getLogger(__name__)

# Checks of the current process, keyed by tag value
_CHECKS: Dict[str, Check] = {}


def register_checks(checks: Sequence[Check]) -> None:
    _CHECKS.clear()
    _CHECKS.update({check.tag.value: check for check in checks})


def registered_check(tag: str) -> Check:
    return _CHECKS[tag]


def worker_init(document: Optional[Dict[str, Any]] = None):
    """
    Initializer for worker processes that makes them ignore interrupt signals
    and rebuilds the run's checks from its configuration document

    https://docs.python.org/3/library/signal.html#signal.signal
    https://docs.python.org/3/library/signal.html#signal.SIG_IGN
    """

    signal.signal(signal.SIGINT, signal.SIG_IGN)

    if document is not None:
        _, checks = build_checks(RunConfig.from_document(document))
        register_checks(checks)


def get_point_jobs(
    checks: Sequence[Check],
    points: np.ndarray,
    progress_callback: Callable,
) -> Generator[Dict, None, None]:
    """
    Job generator over (check, point) pairs, in check order then point index
    """

    job_count = 0

    for check in checks:
        for index, x in enumerate(points):
            yield {"tag": check.tag.value, "index": index, "x": x}

            job_count += 1

            # Update progress every N jobs
            if not job_count % CONFORMAL_PROGRESS_STEP:
                progress_callback(CONFORMAL_PROGRESS_STEP)

    # Update progress with remaining job count
    progress_callback(job_count % CONFORMAL_PROGRESS_STEP)


def imap_job(func):
    """
    Decorator that lets us write imap job functions with unpacked keyword arguments
    """

    @functools.wraps(func)
    def wrapper(kwargs):
        return func(**kwargs)

    return wrapper
