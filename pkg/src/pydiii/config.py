import os
from warnings import warn

DEFAULT_TOLERANCES = {
    "validation": 1e-8,  # residual checks on sample files
    "kernel": 1e-8,  # singular value cut for kernel dimensions
    "sign": 1e-6,  # rounding of Z2 values to +1/-1
    "snap": 1e-6,  # snapping of branch values at fixed points
    "field": 1e-12,  # construction check of the model zoo
    "fit": 1e-10,  # band truncation residual accepted for a Toeplitz symbol
}

DEFAULT_GRID = {
    "circle": 256,
    "torus": (64, 64),
}

# Fourier bandwidth used for the Toeplitz side when none is given.
DEFAULT_BANDWIDTH = 8

THREADS_ENV_VAR = "DIII_THREADS"


def get_thread_count() -> int:
    """Number of worker processes allowed for batch runs.

    Reads the ``DIII_THREADS`` environment variable. Falls back to the number of CPUs,
    with a warning, when the variable is not set.

    Raises:
        ValueError: The environment variable is not a positive integer.
    """
    value = os.getenv(THREADS_ENV_VAR)
    if value is None:
        n_cpus = os.cpu_count()
        if n_cpus is None:
            raise RuntimeError("Failed to get number of cpus for default workers.")
        warn(f"{THREADS_ENV_VAR} not set, using default {n_cpus}")
        return n_cpus

    try:
        n_threads = int(value)
    except ValueError:
        raise ValueError(f"{THREADS_ENV_VAR} must be an integer, received {value!r}.")

    if n_threads < 1:
        raise ValueError(f"{THREADS_ENV_VAR} must be positive, received {n_threads}.")
    return n_threads


def cap_workers(requested: int | None) -> int:
    """Cap a requested worker count by the ``DIII_THREADS`` limit."""
    if requested is None:
        return get_thread_count()
    if os.getenv(THREADS_ENV_VAR) is None:
        return max(1, requested)
    return max(1, min(requested, get_thread_count()))
