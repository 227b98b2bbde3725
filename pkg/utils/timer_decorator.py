"""
Timer decorator for measuring command execution time
"""

import functools
import logging
import time

logger = logging.getLogger(__name__)


def timer_decorator(func):
    """Decorator to log how long a command took

    Args:
        func: The function to be decorated

    Returns:
        wrapper: The wrapped function, logging its duration at DEBUG
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        try:
            return func(*args, **kwargs)
        finally:
            execution_time = time.perf_counter() - start_time
            logger.debug("Function '%s' took %.3f seconds to execute", func.__name__, execution_time)
    return wrapper
