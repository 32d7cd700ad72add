"""Precision plumbing shared by the numeric modules.

Everything runs on mpmath mpf/mpc values under an explicit decimal-digit
context.  mpmath numbers keep the precision they were created with, so the
context has to be wide enough at the moment the arithmetic happens.  The
helpers here keep those contexts explicit instead of scattering mp.dps
mutations around the code base.
"""

from contextlib import nullcontext

from mpmath import mp, mpf

DEFAULT_DIGITS = 60

# Linear solves for an order-n approximant start at base + slope * n digits.
# On a failed residual certificate the slope is doubled, at most twice.
SOLVER_BASE_DIGITS = 60
SOLVER_DIGITS_PER_ORDER = 12
MAX_PRECISION_RETRIES = 2


def maybe_working(digits):
    """Like :func:`working`, but a no-op when ``digits`` is None."""
    if digits is None:
        return nullcontext()
    return working(digits)


def working(digits):
    """Context manager: run the enclosed arithmetic at `digits` decimal digits."""
    return mp.workdps(int(digits))


def solver_digits(n, base=SOLVER_BASE_DIGITS, slope=SOLVER_DIGITS_PER_ORDER):
    """Starting working precision for an order-n approximant solve."""
    return int(base + slope * int(n))


def tiny(digits=None, offset=10):
    """Threshold 10**(-digits + offset) used for pivot and residual tests."""
    if digits is None:
        digits = mp.dps
    return mpf(10) ** (-int(digits) + offset)


class PrecisionExhausted(RuntimeError):
    """Raised when the precision escalation policy runs out of retries."""

    def __init__(self, message, residual=None, digits=None):
        super().__init__(message)
        self.residual = residual
        self.digits = digits
