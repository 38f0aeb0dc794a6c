import os

DEFAULT_PRECISION = 32
PRECISION_ENV = "LLADIC_PRECISION"


def default_precision() -> int:
    """Working precision in l-adic digits; ``LLADIC_PRECISION`` overrides it."""
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    value = int(raw)
    if value < 4:
        raise ValueError(f"{PRECISION_ENV} must be at least 4, got {value}")
    return value
