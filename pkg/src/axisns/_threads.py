"""Apply the optional thread-count variable before numerical libraries load."""
import os

THREADS_ENV = "AXISNS_THREADS"
_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


def apply_thread_env(environ=os.environ) -> None:
    n = environ.get(THREADS_ENV)
    if n is None:
        return
    if not n.isdigit() or int(n) < 1:
        raise SystemExit(f"{THREADS_ENV} must be a positive integer, got {n!r}")
    for var in _VARS:
        environ[var] = n


apply_thread_env()
